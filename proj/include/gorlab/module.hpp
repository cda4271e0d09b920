#pragma once
// Finite R-modules as k-spaces with commuting action operators.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gorlab/error.hpp"
#include "gorlab/linalg.hpp"
#include "gorlab/ring.hpp"

namespace gorlab {

/// Matrix over R, entries stored as consecutive (e+2)-coefficient blocks.
class RingMatrix {
 public:
  RingMatrix(RingPtr ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), data_(rows * cols * ring_->dim(), 0) {}

  const RingPtr& ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t width() const noexcept { return ring_->dim(); }

  std::span<Residue> entry(std::size_t i, std::size_t j) { return {data_.data() + (i * cols_ + j) * width(), width()}; }
  std::span<const Residue> entry(std::size_t i, std::size_t j) const {
    return {data_.data() + (i * cols_ + j) * width(), width()};
  }

  RingElement element(std::size_t i, std::size_t j) const {
    auto s = entry(i, j);
    return {ring_, Vec(s.begin(), s.end())};
  }
  void set(std::size_t i, std::size_t j, const RingElement& r) {
    require_same_ring(ring_, r.ring);
    std::copy(r.coeffs.begin(), r.coeffs.end(), entry(i, j).begin());
  }

  /// Every entry lies in the maximal ideal.
  bool entries_in_maximal_ideal() const {
    for (std::size_t k = 0; k < rows_ * cols_; ++k)
      if (data_[k * width()] != 0) return false;
    return true;
  }

  bool is_zero() const {
    for (auto x : data_)
      if (x) return false;
    return true;
  }

  RingMatrix transpose() const {
    RingMatrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) {
        auto s = entry(i, j);
        std::copy(s.begin(), s.end(), t.entry(j, i).begin());
      }
    return t;
  }

  /// Column j as a vector of the free module R^rows (k-coordinates).
  Vec column_vector(std::size_t j) const {
    Vec v(rows_ * width());
    for (std::size_t i = 0; i < rows_; ++i) {
      auto s = entry(i, j);
      std::copy(s.begin(), s.end(), v.begin() + i * width());
    }
    return v;
  }

  bool operator==(const RingMatrix& o) const {
    return same_ring(ring_, o.ring_) && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  RingPtr ring_;
  std::size_t rows_, cols_;
  Vec data_;
};

inline RingMatrix operator*(const RingMatrix& a, const RingMatrix& b) {
  require_same_ring(a.ring(), b.ring());
  if (a.cols() != b.rows()) fail(ErrorKind::ShapeMismatch, "ring matrix product shape");
  const auto& r = *a.ring();
  const auto p = r.p();
  RingMatrix c(a.ring(), a.rows(), b.cols());
  Vec tmp(r.dim());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      auto out = c.entry(i, j);
      for (std::size_t k = 0; k < a.cols(); ++k) {
        mul_coeffs(r, a.entry(i, k).data(), b.entry(k, j).data(), tmp.data());
        for (std::size_t t = 0; t < r.dim(); ++t) out[t] = (out[t] + tmp[t]) % p;
      }
    }
  return c;
}

/// k-linear matrix of the R-linear map R^cols → R^rows given by m.
inline FMatrix k_matrix(const RingMatrix& m) {
  const auto& r = *m.ring();
  const std::size_t w = r.dim();
  FMatrix out(r.field(), m.rows() * w, m.cols() * w);
  Vec basis(w), col(w);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto a = m.entry(i, j);
      bool zero = true;
      for (auto x : a) zero = zero && x == 0;
      if (zero) continue;
      for (std::size_t b = 0; b < w; ++b) {
        std::fill(basis.begin(), basis.end(), 0);
        basis[b] = 1;
        mul_coeffs(r, a.data(), basis.data(), col.data());
        for (std::size_t t = 0; t < w; ++t) out(i * w + t, j * w + b) = col[t];
      }
    }
  return out;
}

class FiniteModule {
 public:
  /// Validates the ring relations A_i A_j = B[i][j] A_w, m·A_w = 0.
  static FiniteModule create(RingPtr ring, std::size_t dim, std::vector<FMatrix> actions) {
    if (actions.size() != ring->e()) fail(ErrorKind::InvalidModule, "need one action matrix per x_i");
    for (auto& a : actions)
      if (a.rows() != dim || a.cols() != dim || !(a.field() == ring->field()))
        fail(ErrorKind::InvalidModule, "action matrices must be dim x dim over the ring's field");
    auto [i, j] = ring->w_witness();
    FMatrix w = scale(actions[i] * actions[j], ring->w_witness_inverse());
    FiniteModule m(std::move(ring), dim, std::move(actions), std::move(w));
    m.validate();
    return m;
  }

  /// Caller guarantees the relations (used for internally derived modules).
  static FiniteModule create_trusted(RingPtr ring, std::size_t dim, std::vector<FMatrix> actions, FMatrix w_action) {
    return FiniteModule(std::move(ring), dim, std::move(actions), std::move(w_action));
  }

  static FiniteModule zero(const RingPtr& ring) {
    std::vector<FMatrix> acts(ring->e(), FMatrix(ring->field(), 0, 0));
    return FiniteModule(ring, 0, std::move(acts), FMatrix(ring->field(), 0, 0));
  }

  /// Direct sum of copies of the residue field.
  static FiniteModule residue_field(const RingPtr& ring, std::size_t copies = 1) {
    std::vector<FMatrix> acts(ring->e(), FMatrix(ring->field(), copies, copies));
    return FiniteModule(ring, copies, std::move(acts), FMatrix(ring->field(), copies, copies));
  }

  /// R^rank with basis index gen*(e+2) + ring basis index.
  static FiniteModule free(const RingPtr& ring, std::size_t rank) {
    const std::size_t w = ring->dim();
    std::vector<FMatrix> acts;
    for (std::size_t l = 0; l < ring->e(); ++l) acts.push_back(block_diagonal(regular_representation(RingElement::x(ring, l)), rank));
    auto wa = block_diagonal(regular_representation(RingElement::w(ring)), rank);
    return FiniteModule(ring, rank * w, std::move(acts), std::move(wa));
  }

  const RingPtr& ring() const noexcept { return ring_; }
  const PrimeField& field() const noexcept { return ring_->field(); }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t e() const noexcept { return ring_->e(); }
  const std::vector<FMatrix>& actions() const noexcept { return actions_; }
  const FMatrix& action(std::size_t l) const { return actions_.at(l); }
  const FMatrix& w_action() const noexcept { return w_; }

  /// Matrix of v ↦ r·v.
  FMatrix act(const RingElement& r) const {
    require_same_ring(ring_, r.ring);
    FMatrix out = scale(FMatrix::identity(field(), dim_), r.coeffs[0]);
    for (std::size_t l = 0; l < e(); ++l)
      if (r.coeffs[1 + l]) out = out + scale(actions_[l], r.coeffs[1 + l]);
    if (r.coeffs[ring_->w_index()]) out = out + scale(w_, r.coeffs[ring_->w_index()]);
    return out;
  }

  /// r·v for raw coefficients r.
  Vec act_on(std::span<const Residue> r, std::span<const Residue> v) const {
    const auto p = field().p();
    std::vector<std::uint64_t> acc(dim_, 0);
    for (std::size_t i = 0; i < dim_; ++i) acc[i] = std::uint64_t(r[0]) * v[i];
    auto add = [&](const FMatrix& a, Residue c) {
      if (!c) return;
      for (std::size_t i = 0; i < dim_; ++i) {
        std::uint64_t s = 0;
        auto row = a.row(i);
        for (std::size_t j = 0; j < dim_; ++j) s += std::uint64_t(row[j]) * v[j];
        acc[i] += (s % p) * c;
      }
    };
    for (std::size_t l = 0; l < e(); ++l) add(actions_[l], r[1 + l]);
    add(w_, r[ring_->w_index()]);
    Vec out(dim_);
    for (std::size_t i = 0; i < dim_; ++i) out[i] = static_cast<Residue>(acc[i] % p);
    return out;
  }

  /// True when m^2 M = 0, i.e. w acts as zero.
  bool radical_square_zero() const { return w_.is_zero(); }

  /// Checks the defining relations; throws InvalidModule on violation.
  void validate() const {
    const auto& r = *ring_;
    for (std::size_t i = 0; i < e(); ++i)
      for (std::size_t j = 0; j < e(); ++j) {
        FMatrix lhs = actions_[i] * actions_[j];
        if (!(lhs == scale(w_, r.form(i, j))))
          fail(ErrorKind::InvalidModule, "x_" + std::to_string(i + 1) + " x_" + std::to_string(j + 1) + " relation fails");
      }
    for (std::size_t i = 0; i < e(); ++i)
      if (!(actions_[i] * w_).is_zero() || !(w_ * actions_[i]).is_zero()) fail(ErrorKind::InvalidModule, "m^3 M != 0");
    if (!(w_ * w_).is_zero()) fail(ErrorKind::InvalidModule, "w^2 M != 0");
  }

  bool operator==(const FiniteModule& o) const {
    return same_ring(ring_, o.ring_) && dim_ == o.dim_ && actions_ == o.actions_;
  }

  static FMatrix block_diagonal(const FMatrix& block, std::size_t copies) {
    const std::size_t r = block.rows(), k = block.cols();
    FMatrix out(block.field(), r * copies, k * copies);
    for (std::size_t c = 0; c < copies; ++c)
      for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < k; ++j) out(c * r + i, c * k + j) = block(i, j);
    return out;
  }

 private:
  FiniteModule(RingPtr ring, std::size_t dim, std::vector<FMatrix> actions, FMatrix w)
      : ring_(std::move(ring)), dim_(dim), actions_(std::move(actions)), w_(std::move(w)) {}

  RingPtr ring_;
  std::size_t dim_;
  std::vector<FMatrix> actions_;
  FMatrix w_;
};

/// R-linear map; matrix is (target.dim x source.dim).
struct ModuleMap {
  FiniteModule source;
  FiniteModule target;
  FMatrix matrix;

  static ModuleMap create(FiniteModule source, FiniteModule target, FMatrix matrix) {
    require_same_ring(source.ring(), target.ring());
    if (matrix.rows() != target.dim() || matrix.cols() != source.dim())
      fail(ErrorKind::ShapeMismatch, "map matrix must be target.dim x source.dim");
    for (std::size_t l = 0; l < source.e(); ++l)
      if (!(matrix * source.action(l) == target.action(l) * matrix))
        fail(ErrorKind::InvalidModule, "map does not commute with x_" + std::to_string(l + 1));
    return {std::move(source), std::move(target), std::move(matrix)};
  }

  static ModuleMap identity(const FiniteModule& m) { return {m, m, FMatrix::identity(m.field(), m.dim())}; }
  static ModuleMap zero(const FiniteModule& s, const FiniteModule& t) { return {s, t, FMatrix(s.field(), t.dim(), s.dim())}; }

  bool is_zero() const { return matrix.is_zero(); }
};

inline ModuleMap compose(const ModuleMap& g, const ModuleMap& f) {
  if (!(f.target.dim() == g.source.dim())) fail(ErrorKind::ShapeMismatch, "composition shape");
  return {f.source, g.target, g.matrix * f.matrix};
}

/// Free presentation: M = coker(R^relations → R^generators).
struct Presentation {
  RingMatrix matrix;  // generators x relations

  std::size_t generators() const { return matrix.rows(); }
  std::size_t relations() const { return matrix.cols(); }
};

// ---------------------------------------------------------------------------
// Subspace plumbing

/// Span of {v, x_l v, w v : v in vs}: the submodule generated by vs (m^3 = 0).
inline EchelonForm generated_submodule_span(const FiniteModule& m, const std::vector<Vec>& vs) {
  EchelonForm e(m.field(), m.dim());
  for (auto& v : vs) {
    if (!e.insert(v)) continue;
    for (std::size_t l = 0; l < m.e(); ++l) e.insert(matvec(m.action(l), v));
    e.insert(matvec(m.w_action(), v));
  }
  e.make_reduced();
  return e;
}

struct Inclusion {
  FiniteModule sub;
  ModuleMap map;  // sub → ambient
};

/// Submodule on an action-stable subspace given in reduced echelon form.
inline Inclusion submodule(const FiniteModule& m, EchelonForm& span) {
  span.make_reduced();
  const std::size_t s = span.rank();
  const auto& f = m.field();
  auto coords = [&](const Vec& v) {
    Vec c(s);
    for (std::size_t k = 0; k < s; ++k) c[k] = v[span.pivots()[k]];
    return c;
  };
  auto restrict = [&](const FMatrix& a) {
    FMatrix out(f, s, s);
    for (std::size_t k = 0; k < s; ++k) {
      Vec img = matvec(a, span.row(k));
      Vec c = coords(img);
      for (std::size_t t = 0; t < s; ++t) out(t, k) = c[t];
    }
    return out;
  };
  std::vector<FMatrix> acts;
  for (std::size_t l = 0; l < m.e(); ++l) acts.push_back(restrict(m.action(l)));
  auto sub = FiniteModule::create_trusted(m.ring(), s, std::move(acts), restrict(m.w_action()));
  FMatrix inc(f, m.dim(), s);
  for (std::size_t k = 0; k < s; ++k)
    for (std::size_t i = 0; i < m.dim(); ++i) inc(i, k) = span.row(k)[i];
  ModuleMap map{sub, m, std::move(inc)};
  return {std::move(sub), std::move(map)};
}

struct Projection {
  FiniteModule quotient;
  ModuleMap map;  // ambient → quotient
};

/// Quotient by an action-stable subspace; the quotient basis is the images of
/// the standard vectors at the non-pivot columns.
inline Projection quotient(const FiniteModule& m, EchelonForm& span) {
  span.make_reduced();
  const auto free_cols = span.free_columns();
  const std::size_t q = free_cols.size();
  const auto& f = m.field();
  auto proj = [&](std::span<const Residue> v) {
    Vec r = span.reduce(v);
    Vec c(q);
    for (std::size_t k = 0; k < q; ++k) c[k] = r[free_cols[k]];
    return c;
  };
  auto induced = [&](const FMatrix& a) {
    FMatrix out(f, q, q);
    for (std::size_t k = 0; k < q; ++k) {
      Vec c = proj(a.column(free_cols[k]));
      for (std::size_t t = 0; t < q; ++t) out(t, k) = c[t];
    }
    return out;
  };
  std::vector<FMatrix> acts;
  for (std::size_t l = 0; l < m.e(); ++l) acts.push_back(induced(m.action(l)));
  auto qm = FiniteModule::create_trusted(m.ring(), q, std::move(acts), induced(m.w_action()));
  FMatrix pm(f, q, m.dim());
  Vec unit(m.dim(), 0);
  for (std::size_t j = 0; j < m.dim(); ++j) {
    unit[j] = 1;
    Vec c = proj(unit);
    unit[j] = 0;
    for (std::size_t t = 0; t < q; ++t) pm(t, j) = c[t];
  }
  ModuleMap map{m, qm, std::move(pm)};
  return {std::move(qm), std::move(map)};
}

/// Column space of a matrix as an echelon basis.
inline EchelonForm column_space(const FMatrix& a) {
  EchelonForm e(a.field(), a.rows());
  for (std::size_t j = 0; j < a.cols(); ++j) e.insert(a.column(j));
  e.make_reduced();
  return e;
}

/// Span of mM = Σ_l image(A_l) (image(A_w) lies inside it).
inline EchelonForm radical_span(const FiniteModule& m) {
  EchelonForm e(m.field(), m.dim());
  for (std::size_t l = 0; l < m.e(); ++l)
    for (std::size_t j = 0; j < m.dim(); ++j) e.insert(m.action(l).column(j));
  e.make_reduced();
  return e;
}

// ---------------------------------------------------------------------------
// Constructions

/// Free module on the presentation's generators and the cokernel realized
/// as a quotient of it.
struct PresentedModule {
  FiniteModule module;
  ModuleMap cover;  // R^g → M
};

inline PresentedModule from_presentation(const Presentation& pres) {
  const auto& ring = pres.matrix.ring();
  auto free = FiniteModule::free(ring, pres.generators());
  std::vector<Vec> rels;
  for (std::size_t c = 0; c < pres.relations(); ++c) rels.push_back(pres.matrix.column_vector(c));
  auto span = generated_submodule_span(free, rels);
  auto q = quotient(free, span);
  return {q.quotient, q.map};
}

inline Inclusion radical_submodule(const FiniteModule& m) {
  auto span = radical_span(m);
  return submodule(m, span);
}

struct MinimalGenerators {
  std::size_t nu;
  Projection top;            // π_M : M → M/mM
  std::vector<Vec> vectors;  // representatives completing mM to M
};

inline MinimalGenerators minimal_generators(const FiniteModule& m) {
  auto span = radical_span(m);
  auto gens = complement_basis(span);
  auto top = quotient(m, span);
  return {gens.size(), std::move(top), std::move(gens)};
}

inline std::size_t nu(const FiniteModule& m) { return m.dim() - radical_span(m).rank(); }

/// Dimensions of M/mM, mM/m^2M, m^2M with trailing zeros dropped.
inline std::vector<std::size_t> hilbert_layers(const FiniteModule& m) {
  const std::size_t rad = radical_span(m).rank();
  const std::size_t sq = rank(m.w_action());
  std::vector<std::size_t> h{m.dim() - rad, rad - sq, sq};
  while (!h.empty() && h.back() == 0) h.pop_back();
  return h;
}

/// soc(M) = {z : m z = 0}.
inline Inclusion socle(const FiniteModule& m) {
  std::vector<const FMatrix*> parts;
  for (auto& a : m.actions()) parts.push_back(&a);
  parts.push_back(&m.w_action());
  auto stacked = vstack(parts, m.field(), m.dim());
  auto ker = row_echelon(kernel_basis(stacked));
  return submodule(m, ker);
}

/// k-linear dual with transposed actions; over a Gorenstein artinian ring
/// this is Hom_R(M, R).
inline FiniteModule matlis_dual(const FiniteModule& m) {
  std::vector<FMatrix> acts;
  for (auto& a : m.actions()) acts.push_back(a.transpose());
  return FiniteModule::create_trusted(m.ring(), m.dim(), std::move(acts), m.w_action().transpose());
}

inline ModuleMap matlis_dual(const ModuleMap& f) {
  return {matlis_dual(f.target), matlis_dual(f.source), f.matrix.transpose()};
}

/// k-basis of Hom_R(M, N), each as a ModuleMap.
inline std::vector<ModuleMap> hom_space(const FiniteModule& m, const FiniteModule& n) {
  require_same_ring(m.ring(), n.ring());
  const std::size_t dm = m.dim(), dn = n.dim(), e = m.e();
  const auto& f = m.field();
  // unknown f(a, b) at index a*dm + b; equation (l, a, c): (f A^M_l - A^N_l f)(a, c) = 0
  FMatrix sys(f, e * dn * dm, dn * dm);
  for (std::size_t l = 0; l < e; ++l) {
    const auto& am = m.action(l);
    const auto& an = n.action(l);
    for (std::size_t a = 0; a < dn; ++a)
      for (std::size_t c = 0; c < dm; ++c) {
        const std::size_t row = (l * dn + a) * dm + c;
        for (std::size_t b = 0; b < dm; ++b) sys(row, a * dm + b) = f.add(sys(row, a * dm + b), am(b, c));
        for (std::size_t d = 0; d < dn; ++d) sys(row, d * dm + c) = f.sub(sys(row, d * dm + c), an(a, d));
      }
  }
  auto ker = kernel_basis(sys);
  std::vector<ModuleMap> out;
  for (std::size_t k = 0; k < ker.rows(); ++k) {
    FMatrix mat(f, dn, dm, Vec(ker.row(k).begin(), ker.row(k).end()));
    out.push_back({m, n, std::move(mat)});
  }
  return out;
}

inline FiniteModule direct_sum(const FiniteModule& a, const FiniteModule& b) {
  require_same_ring(a.ring(), b.ring());
  const std::size_t n = a.dim() + b.dim();
  auto blocks = [&](const FMatrix& x, const FMatrix& y) {
    FMatrix out(a.field(), n, n);
    for (std::size_t i = 0; i < a.dim(); ++i)
      for (std::size_t j = 0; j < a.dim(); ++j) out(i, j) = x(i, j);
    for (std::size_t i = 0; i < b.dim(); ++i)
      for (std::size_t j = 0; j < b.dim(); ++j) out(a.dim() + i, a.dim() + j) = y(i, j);
    return out;
  };
  std::vector<FMatrix> acts;
  for (std::size_t l = 0; l < a.e(); ++l) acts.push_back(blocks(a.action(l), b.action(l)));
  return FiniteModule::create_trusted(a.ring(), n, std::move(acts), blocks(a.w_action(), b.w_action()));
}

struct CyclicModule {
  FiniteModule module;
  Presentation presentation;
  std::vector<std::size_t> hilbert;
};

/// R/I for I generated by the given elements.
inline CyclicModule cyclic_module(const RingPtr& ring, const std::vector<RingElement>& ideal_generators) {
  RingMatrix pm(ring, 1, ideal_generators.size());
  for (std::size_t c = 0; c < ideal_generators.size(); ++c) {
    if (ideal_generators[c].is_unit()) fail(ErrorKind::UnitIdeal, "generator " + std::to_string(c) + " is a unit");
    pm.set(0, c, ideal_generators[c]);
  }
  Presentation pres{pm};
  auto m = from_presentation(pres).module;
  auto h = hilbert_layers(m);
  return {std::move(m), std::move(pres), std::move(h)};
}

struct SplitExtension {
  FiniteModule sub;        // A = R x
  FiniteModule quotient;   // B = M / A
  ModuleMap phi;           // A → M
  ModuleMap psi;           // M → B
  std::vector<RingElement> annihilator;  // k-basis of ann(x)
};

/// The short exact sequence 0 → Rx → M → M/Rx → 0 for x outside mM.
inline SplitExtension split_extension(const FiniteModule& m, const Vec& x) {
  if (x.size() != m.dim()) fail(ErrorKind::ShapeMismatch, "element length");
  auto rad = radical_span(m);
  if (rad.contains(x)) fail(ErrorKind::GeneratorInRadical, "x lies in mM");
  auto span = generated_submodule_span(m, {x});
  auto inc = submodule(m, span);
  auto q = quotient(m, span);
  // ann(x): kernel of r ↦ r·x
  const auto& ring = m.ring();
  FMatrix evalm(m.field(), m.dim(), ring->dim());
  for (std::size_t b = 0; b < ring->dim(); ++b) {
    Vec img = m.act_on(RingElement::basis(ring, b).coeffs, x);
    for (std::size_t i = 0; i < m.dim(); ++i) evalm(i, b) = img[i];
  }
  auto ker = kernel_basis(evalm);
  std::vector<RingElement> ann;
  for (std::size_t k = 0; k < ker.rows(); ++k) ann.push_back({ring, Vec(ker.row(k).begin(), ker.row(k).end())});
  return {inc.sub, q.quotient, inc.map, q.map, std::move(ann)};
}

/// mt19937_64 with uniform residues by rejection sampling.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  std::uint64_t below(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x;
    do x = gen_();
    while (x >= limit);
    return x % bound;
  }

  Residue residue(std::uint32_t p) { return static_cast<Residue>(below(p)); }

 private:
  std::mt19937_64 gen_;
};

/// Uniform element of m: linear and w coefficients uniform in GF(p).
inline RingElement random_radical_element(const RingPtr& ring, SeededRng& rng) {
  auto r = RingElement::zero(ring);
  for (std::size_t i = 1; i < ring->dim(); ++i) r.coeffs[i] = rng.residue(ring->p());
  return r;
}

inline Presentation random_presentation(const RingPtr& ring, std::size_t g, std::size_t r, std::uint64_t seed) {
  if (g < 1) fail(ErrorKind::ConfigError, "random module needs at least one generator");
  SeededRng rng(seed);
  RingMatrix pm(ring, g, r);
  for (std::size_t i = 0; i < g; ++i)
    for (std::size_t j = 0; j < r; ++j) pm.set(i, j, random_radical_element(ring, rng));
  return {pm};
}

/// Cokernel of a random g x r matrix with entries in m.
inline FiniteModule random_module(const RingPtr& ring, std::size_t g, std::size_t r, std::uint64_t seed) {
  return from_presentation(random_presentation(ring, g, r, seed)).module;
}

/// Stable 64-bit FNV-1a fingerprint of a module's defining data.
inline std::string fingerprint(const FiniteModule& m) {
  std::uint64_t h = 1469598103934665603ull;
  auto mix = [&](std::uint64_t x) {
    for (int k = 0; k < 8; ++k) {
      h ^= (x >> (8 * k)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  mix(m.field().p());
  mix(m.e());
  for (auto x : m.ring()->form().data()) mix(x);
  mix(m.dim());
  for (auto& a : m.actions())
    for (auto x : a.data()) mix(x);
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int k = 15; k >= 0; --k, h >>= 4) s[k] = digits[h & 0xf];
  return s;
}

}  // namespace gorlab
