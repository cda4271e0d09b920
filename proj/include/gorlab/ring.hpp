#pragma once
// Short Gorenstein local rings R = k ⊕ m/m² ⊕ m² presented by a
// nondegenerate symmetric bilinear form B: x_i x_j = B[i][j] w.

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gorlab/error.hpp"
#include "gorlab/linalg.hpp"

namespace gorlab {

class ShortGorensteinRing;
using RingPtr = std::shared_ptr<const ShortGorensteinRing>;

class ShortGorensteinRing {
 public:
  const PrimeField& field() const noexcept { return field_; }
  std::uint32_t p() const noexcept { return field_.p(); }
  /// Embedding dimension.
  std::size_t e() const noexcept { return e_; }
  /// k-dimension of R; basis order (1, x_1..x_e, w).
  std::size_t dim() const noexcept { return e_ + 2; }
  std::size_t w_index() const noexcept { return e_ + 1; }
  const FMatrix& form() const noexcept { return form_; }
  Residue form(std::size_t i, std::size_t j) const { return form_(i, j); }

  /// A pair (i, j) with B[i][j] != 0, used to express w = B[i][j]^{-1} x_i x_j.
  std::pair<std::size_t, std::size_t> w_witness() const noexcept { return w_witness_; }
  Residue w_witness_inverse() const noexcept { return w_witness_inv_; }

  bool operator==(const ShortGorensteinRing& o) const { return e_ == o.e_ && form_ == o.form_; }

  friend RingPtr make_ring(std::uint32_t p, std::size_t e, const FMatrix& form);

 private:
  ShortGorensteinRing(PrimeField f, std::size_t e, FMatrix form) : field_(f), e_(e), form_(std::move(form)) {}

  PrimeField field_;
  std::size_t e_;
  FMatrix form_;
  std::pair<std::size_t, std::size_t> w_witness_{0, 0};
  Residue w_witness_inv_ = 1;
};

inline RingPtr make_ring(std::uint32_t p, std::size_t e, const FMatrix& form) {
  PrimeField f(p);
  if (e < 2) fail(ErrorKind::EmbeddingDimTooSmall, "e = " + std::to_string(e));
  if (form.rows() != e || form.cols() != e) fail(ErrorKind::ShapeMismatch, "form must be e x e");
  FMatrix b(f, e, e);
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = 0; j < e; ++j) b(i, j) = form(i, j) % p;
  for (std::size_t i = 0; i < e; ++i)
    for (std::size_t j = i + 1; j < e; ++j)
      if (b(i, j) != b(j, i)) fail(ErrorKind::NotSymmetric, "B[" + std::to_string(i) + "][" + std::to_string(j) + "] != B[" + std::to_string(j) + "][" + std::to_string(i) + "]");
  if (rank(b) != e) fail(ErrorKind::Degenerate, "det(B) = 0 mod " + std::to_string(p));
  auto* r = new ShortGorensteinRing(f, e, b);
  bool found = false;
  for (std::size_t i = 0; i < e && !found; ++i)
    for (std::size_t j = i; j < e && !found; ++j)
      if (b(i, j) != 0) {
        r->w_witness_ = {i, j};
        r->w_witness_inv_ = f.inv(b(i, j));
        found = true;
      }
  return RingPtr(r);
}

inline RingPtr make_ring(std::uint32_t p, std::size_t e, const std::vector<std::vector<std::int64_t>>& form) {
  PrimeField f(p);
  if (e < 2) fail(ErrorKind::EmbeddingDimTooSmall, "e = " + std::to_string(e));
  if (form.size() != e) fail(ErrorKind::ShapeMismatch, "form must be e x e");
  return make_ring(p, e, FMatrix::from_rows(f, form));
}

/// Diagonal form: x_i^2 = w, x_i x_j = 0 otherwise.
inline RingPtr identity_form_ring(std::uint32_t p, std::size_t e) {
  PrimeField f(p);
  return make_ring(p, e, FMatrix::identity(f, e));
}

/// Hyperbolic form, blocks [[0,1],[1,0]] (plus a trailing 1 when e is odd).
/// For e = 2 this is k[x,y]/(x^2, y^2).
inline RingPtr hyperbolic_form_ring(std::uint32_t p, std::size_t e) {
  PrimeField f(p);
  FMatrix b(f, e, e);
  std::size_t i = 0;
  for (; i + 1 < e; i += 2) b(i, i + 1) = b(i + 1, i) = 1;
  if (i < e) b(i, i) = 1;
  return make_ring(p, e, b);
}

inline bool same_ring(const RingPtr& a, const RingPtr& b) { return a == b || (a && b && *a == *b); }

inline void require_same_ring(const RingPtr& a, const RingPtr& b) {
  if (!same_ring(a, b)) fail(ErrorKind::RingMismatch);
}

/// Element of R in the basis (1, x_1..x_e, w).
struct RingElement {
  RingPtr ring;
  Vec coeffs;

  static RingElement zero(const RingPtr& r) { return {r, Vec(r->dim(), 0)}; }
  static RingElement one(const RingPtr& r) {
    auto z = zero(r);
    z.coeffs[0] = 1;
    return z;
  }
  static RingElement basis(const RingPtr& r, std::size_t b) {
    auto z = zero(r);
    z.coeffs[b] = 1;
    return z;
  }
  static RingElement x(const RingPtr& r, std::size_t l) { return basis(r, 1 + l); }
  static RingElement w(const RingPtr& r) { return basis(r, r->w_index()); }
  static RingElement from(const RingPtr& r, const std::vector<std::int64_t>& c) {
    if (c.size() != r->dim()) fail(ErrorKind::ShapeMismatch, "element needs e+2 coefficients");
    auto z = zero(r);
    for (std::size_t i = 0; i < c.size(); ++i) z.coeffs[i] = r->field().reduce(c[i]);
    return z;
  }

  bool is_zero() const {
    for (auto c : coeffs)
      if (c) return false;
    return true;
  }
  bool is_unit() const { return coeffs[0] != 0; }
  bool in_maximal_ideal() const { return coeffs[0] == 0; }

  bool operator==(const RingElement& o) const { return same_ring(ring, o.ring) && coeffs == o.coeffs; }
};

/// Product of raw coefficient vectors: (a0 + a_l x_l + aw w)(b0 + ...).
inline void mul_coeffs(const ShortGorensteinRing& r, const Residue* a, const Residue* b, Residue* out) {
  const auto& f = r.field();
  const std::size_t e = r.e(), w = r.w_index();
  const auto p = f.p();
  out[0] = f.mul(a[0], b[0]);
  for (std::size_t l = 1; l <= e; ++l) out[l] = static_cast<Residue>((std::uint64_t(a[0]) * b[l] + std::uint64_t(a[l]) * b[0]) % p);
  std::uint64_t s = std::uint64_t(a[0]) * b[w] + std::uint64_t(a[w]) * b[0];
  for (std::size_t i = 0; i < e; ++i) {
    if (!a[1 + i]) continue;
    std::uint64_t t = 0;
    for (std::size_t j = 0; j < e; ++j) t += std::uint64_t(r.form(i, j)) * b[1 + j];
    s += (t % p) * a[1 + i];
  }
  out[w] = static_cast<Residue>(s % p);
}

inline RingElement mul(const RingElement& a, const RingElement& b) {
  require_same_ring(a.ring, b.ring);
  auto out = RingElement::zero(a.ring);
  mul_coeffs(*a.ring, a.coeffs.data(), b.coeffs.data(), out.coeffs.data());
  return out;
}

inline RingElement operator*(const RingElement& a, const RingElement& b) { return mul(a, b); }

inline RingElement operator+(const RingElement& a, const RingElement& b) {
  require_same_ring(a.ring, b.ring);
  auto out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = a.ring->field().add(a.coeffs[i], b.coeffs[i]);
  return out;
}

inline RingElement operator-(const RingElement& a, const RingElement& b) {
  require_same_ring(a.ring, b.ring);
  auto out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] = a.ring->field().sub(a.coeffs[i], b.coeffs[i]);
  return out;
}

inline RingElement scalar_times(Residue c, const RingElement& a) {
  auto out = a;
  for (auto& x : out.coeffs) x = a.ring->field().mul(x, c);
  return out;
}

/// Matrix of r ↦ a·r in the basis (1, x_1..x_e, w).
inline FMatrix regular_representation(const RingElement& a) {
  const auto& r = *a.ring;
  FMatrix m(r.field(), r.dim(), r.dim());
  Vec basis(r.dim()), col(r.dim());
  for (std::size_t b = 0; b < r.dim(); ++b) {
    std::fill(basis.begin(), basis.end(), 0);
    basis[b] = 1;
    mul_coeffs(r, a.coeffs.data(), basis.data(), col.data());
    for (std::size_t i = 0; i < r.dim(); ++i) m(i, b) = col[i];
  }
  return m;
}

/// Outcome of checking an arbitrary structure-constant table against the
/// short Gorenstein hypotheses on the basis (1, x_1..x_e, w).
struct AlgebraReport {
  std::size_t dim = 0;
  bool unital = false;
  bool commutative = false;
  bool associative = false;
  bool cube_zero = false;
  std::size_t socle_rank = 0;
  bool socle_is_square = false;
  bool graded = false;
  std::optional<ErrorKind> rejection;
  std::string detail;
  RingPtr ring;  // set when accepted

  bool accepted() const { return !rejection.has_value(); }
};

/// table[a][b] is the coefficient vector of basis_a * basis_b.
inline AlgebraReport validate_general_algebra(std::uint32_t p, const std::vector<std::vector<Vec>>& table) {
  PrimeField f(p);
  AlgebraReport rep;
  const std::size_t n = table.size();
  rep.dim = n;
  auto reject = [&](ErrorKind k, std::string why) {
    if (!rep.rejection) {
      rep.rejection = k;
      rep.detail = std::move(why);
    }
  };
  for (auto& row : table) {
    if (row.size() != n) fail(ErrorKind::ShapeMismatch, "structure table must be n x n x n");
    for (auto& v : row)
      if (v.size() != n) fail(ErrorKind::ShapeMismatch, "structure table must be n x n x n");
  }
  if (n == 0) fail(ErrorKind::ShapeMismatch, "empty table");
  auto prod = [&](const Vec& a, const Vec& b) {
    std::vector<std::uint64_t> acc(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (!a[i]) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (!b[j]) continue;
        const std::uint64_t c = f.mul(a[i], b[j]);
        for (std::size_t k = 0; k < n; ++k) acc[k] += c * table[i][j][k];
      }
    }
    Vec out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = static_cast<Residue>(acc[k] % p);
    return out;
  };
  auto unit = [&](std::size_t i) {
    Vec v(n, 0);
    v[i] = 1;
    return v;
  };

  rep.unital = true;
  for (std::size_t b = 0; b < n; ++b)
    if (table[0][b] != unit(b) || table[b][0] != unit(b)) rep.unital = false;

  rep.commutative = true;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (table[a][b] != table[b][a]) rep.commutative = false;
  if (!rep.commutative) reject(ErrorKind::NotCommutative, "basis products differ under swap");

  rep.associative = true;
  for (std::size_t a = 0; a < n && rep.associative; ++a)
    for (std::size_t b = 0; b < n && rep.associative; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (prod(table[a][b], unit(c)) != prod(unit(a), table[b][c])) {
          rep.associative = false;
          break;
        }
  if (!rep.associative) reject(ErrorKind::NotAssociative, "basis triple violates associativity");
  if (!rep.unital) reject(ErrorKind::NotShortGorenstein, "basis element 0 is not a unit element");

  // m = span(basis_1..basis_{n-1}); m must be closed and nilpotent of order 3.
  bool m_closed = true;
  for (std::size_t a = 1; a < n; ++a)
    for (std::size_t b = 1; b < n; ++b)
      if (table[a][b][0] != 0) m_closed = false;
  if (!m_closed) reject(ErrorKind::NotShortGorenstein, "span of non-unit basis vectors is not an ideal");

  rep.cube_zero = true;
  for (std::size_t a = 1; a < n && rep.cube_zero; ++a)
    for (std::size_t b = 1; b < n && rep.cube_zero; ++b)
      for (std::size_t c = 1; c < n; ++c) {
        auto v = prod(table[a][b], unit(c));
        if (std::any_of(v.begin(), v.end(), [](Residue x) { return x != 0; })) {
          rep.cube_zero = false;
          break;
        }
      }
  if (!rep.cube_zero) reject(ErrorKind::CubeNotZero, "some product of three radical basis elements is nonzero");

  // socle = {z : m z = 0} restricted to R (ring is local, so socle lies in m when m != 0)
  FMatrix sys(f, (n - 1) * n, n);
  for (std::size_t a = 1; a < n; ++a)
    for (std::size_t z = 0; z < n; ++z)
      for (std::size_t k = 0; k < n; ++k) sys((a - 1) * n + k, z) = table[a][z][k];
  auto soc = kernel_basis(sys);
  rep.socle_rank = soc.rows();
  EchelonForm sq(f, n);
  for (std::size_t a = 1; a < n; ++a)
    for (std::size_t b = 1; b < n; ++b) sq.insert(table[a][b]);
  if (sq.rank() == 0) reject(ErrorKind::NotShortGorenstein, "m^2 = 0");
  if (rep.socle_rank != 1) reject(ErrorKind::SocleRankNot1, "socle rank " + std::to_string(rep.socle_rank));
  if (rep.socle_rank == 1 && sq.rank() == 1) rep.socle_is_square = sq.contains(soc.row(0));
  if (!rep.socle_is_square) reject(ErrorKind::SocleRankNot1, "socle differs from m^2");

  if (n < 4) reject(ErrorKind::EmbeddingDimTooSmall, "e = " + std::to_string(n >= 2 ? n - 2 : 0));

  // Graded normal form: x_i x_j in span(w), w annihilated by m.
  rep.graded = n >= 3;
  const std::size_t w = n - 1;
  for (std::size_t a = 1; a < n && rep.graded; ++a)
    for (std::size_t b = 1; b < n; ++b) {
      const auto& v = table[a][b];
      for (std::size_t k = 0; k < w; ++k)
        if (v[k]) rep.graded = false;
      if ((a == w || b == w) && v[w]) rep.graded = false;
    }
  if (!rep.graded) reject(ErrorKind::NotShortGorenstein, "table is not in graded form (x_i x_j must be a multiple of w)");

  if (!rep.rejection) {
    const std::size_t e = n - 2;
    FMatrix b(f, e, e);
    for (std::size_t i = 0; i < e; ++i)
      for (std::size_t j = 0; j < e; ++j) b(i, j) = table[1 + i][1 + j][w];
    rep.ring = make_ring(p, e, b);
  }
  return rep;
}

/// Structure constants of a form-presented ring (inverse of validate_general_algebra).
inline std::vector<std::vector<Vec>> structure_constants(const RingPtr& r) {
  const std::size_t n = r->dim();
  std::vector<std::vector<Vec>> t(n, std::vector<Vec>(n, Vec(n, 0)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      t[a][b] = mul(RingElement::basis(r, a), RingElement::basis(r, b)).coeffs;
  return t;
}

}  // namespace gorlab
