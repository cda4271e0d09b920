#pragma once
// Tor and Ext of module pairs, induced maps on them, and length bookkeeping.

#include <cstddef>
#include <optional>
#include <vector>

#include "gorlab/error.hpp"
#include "gorlab/linalg.hpp"
#include "gorlab/module.hpp"
#include "gorlab/resolution.hpp"

namespace gorlab {

struct HomologyDegree {
  std::size_t degree = 0;
  std::size_t length = 0;        // l = dim_k
  std::size_t nu = 0;            // minimal generators
  bool m_annihilated = true;     // m·H = 0, equivalently nu == length
  std::optional<FiniteModule> module;
};

struct TorTable {
  std::vector<HomologyDegree> degrees;  // 0..n

  std::size_t size() const { return degrees.size(); }
  const HomologyDegree& operator[](std::size_t i) const { return degrees.at(i); }
};

using ExtTable = TorTable;

struct InducedMapResult {
  std::size_t degree = 0;
  std::size_t rank = 0;
  std::size_t source_length = 0;
  std::size_t target_length = 0;
};

namespace detail {

/// Matrix of d ⊗ N : N^{cols} → N^{rows} (or of d^T ⊗ N when transposed).
inline FMatrix tensor_matrix(const RingMatrix& d, const FiniteModule& n, bool transposed, const ResolutionLimits& lim) {
  const std::size_t nd = n.dim(), e = n.e();
  const std::size_t rows = transposed ? d.cols() : d.rows();
  const std::size_t cols = transposed ? d.rows() : d.cols();
  check_budget(rows * nd, cols * nd, lim, "tensor complex");
  const auto& f = n.field();
  const auto p = f.p();
  FMatrix out(f, rows * nd, cols * nd);
  std::vector<const FMatrix*> ops;
  for (std::size_t l = 0; l < e; ++l) ops.push_back(&n.action(l));
  ops.push_back(&n.w_action());
  std::vector<std::uint64_t> block(nd * nd);
  for (std::size_t i = 0; i < d.rows(); ++i)
    for (std::size_t j = 0; j < d.cols(); ++j) {
      auto a = d.entry(i, j);
      bool any = false;
      for (auto c : a) any = any || c;
      if (!any) continue;
      std::fill(block.begin(), block.end(), 0);
      for (std::size_t t = 0; t < nd; ++t) block[t * nd + t] = a[0];
      for (std::size_t k = 0; k <= e; ++k) {
        const Residue c = a[1 + k];
        if (!c) continue;
        const auto& data = ops[k]->data();
        for (std::size_t t = 0; t < nd * nd; ++t) block[t] += std::uint64_t(c) * data[t];
      }
      const std::size_t br = transposed ? j : i, bc = transposed ? i : j;
      for (std::size_t s = 0; s < nd; ++s)
        for (std::size_t t = 0; t < nd; ++t) out(br * nd + s, bc * nd + t) = static_cast<Residue>(block[s * nd + t] % p);
    }
  return out;
}

/// x_l acting diagonally on N^c.
inline Vec act_diagonal(const FiniteModule& n, std::size_t l, std::span<const Residue> v) {
  const std::size_t nd = n.dim(), c = nd ? v.size() / nd : 0;
  Vec out(v.size());
  const auto& a = n.action(l);
  for (std::size_t b = 0; b < c; ++b) {
    auto img = matvec(a, v.subspan(b * nd, nd));
    std::copy(img.begin(), img.end(), out.begin() + b * nd);
  }
  return out;
}

struct Cycles {
  EchelonForm z;
  EchelonForm bd;
};

// Z = ker(out) (everything when out is absent), Bd = image(in) inside N^copies.
inline Cycles cycles_and_boundaries(const FiniteModule& n, std::size_t copies, const FMatrix* out, const FMatrix* in) {
  const std::size_t dim = n.dim() * copies;
  const auto& f = n.field();
  Cycles c{EchelonForm(f, dim), EchelonForm(f, dim)};
  if (out) {
    c.z = row_echelon(kernel_basis(*out));
  } else {
    Vec unit(dim, 0);
    for (std::size_t i = 0; i < dim; ++i) {
      unit[i] = 1;
      c.z.insert(unit);
      unit[i] = 0;
    }
  }
  if (in) c.bd = column_space(*in);
  c.z.make_reduced();
  c.bd.make_reduced();
  return c;
}

inline HomologyDegree homology(const FiniteModule& n, std::size_t copies, std::size_t degree, const FMatrix* out,
                               const FMatrix* in, bool realize) {
  auto c = cycles_and_boundaries(n, copies, out, in);
  HomologyDegree h;
  h.degree = degree;
  h.length = c.z.rank() - c.bd.rank();
  EchelonForm mz = c.bd;
  for (std::size_t k = 0; k < c.z.rank(); ++k)
    for (std::size_t l = 0; l < n.e(); ++l) mz.insert(act_diagonal(n, l, c.z.row(k)));
  h.nu = c.z.rank() - mz.rank();
  h.m_annihilated = mz.rank() == c.bd.rank();
  if (realize) {
    std::vector<FMatrix> acts;
    for (std::size_t l = 0; l < n.e(); ++l) acts.push_back(FiniteModule::block_diagonal(n.action(l), copies));
    auto big = FiniteModule::create_trusted(n.ring(), n.dim() * copies, std::move(acts),
                                            FiniteModule::block_diagonal(n.w_action(), copies));
    auto zsub = submodule(big, c.z);
    EchelonForm bd_in_z(n.field(), c.z.rank());
    for (std::size_t k = 0; k < c.bd.rank(); ++k) bd_in_z.insert(*c.z.coordinates(c.bd.row(k)));
    h.module = quotient(zsub.sub, bd_in_z).quotient;
  }
  return h;
}

// rank of the map on homology induced by a chain-level map g : (source copies) → (target copies)
inline std::size_t induced_rank(const Cycles& src, const Cycles& dst, const FMatrix& g) {
  EchelonForm img = dst.bd;
  for (std::size_t k = 0; k < src.z.rank(); ++k) img.insert(matvec(g, src.z.row(k)));
  return img.rank() - dst.bd.rank();
}

inline void require_length(const MinimalFreeResolution& r, std::size_t n) {
  if (r.length() < n || !r.has_differentials())
    fail(ErrorKind::ShapeMismatch, "resolution of length " + std::to_string(n) + " with differentials required");
}

}  // namespace detail

/// Tor_i(M, N) for 0 <= i <= n as H_i(F ⊗ N), F a minimal resolution of M of length >= n+1.
inline TorTable tor_from_resolution(const MinimalFreeResolution& f, const FiniteModule& n, std::size_t top, bool realize = false,
                                    ResolutionLimits lim = {}) {
  require_same_ring(f.module.ring(), n.ring());
  detail::require_length(f, top + 1);
  TorTable t;
  std::optional<FMatrix> out;
  for (std::size_t i = 0; i <= top; ++i) {
    FMatrix in = detail::tensor_matrix(f.d(i + 1), n, false, lim);
    t.degrees.push_back(detail::homology(n, f.betti[i], i, out ? &*out : nullptr, &in, realize));
    out = std::move(in);
  }
  return t;
}

inline TorTable tor(const FiniteModule& m, const FiniteModule& n, std::size_t top, bool realize = false, ResolutionLimits lim = {}) {
  require_same_ring(m.ring(), n.ring());
  return tor_from_resolution(resolve(m, top + 1, {true, lim}), n, top, realize, lim);
}

/// Tor_i(M, N) computed as H_i(M ⊗ G) with G a minimal resolution of N.
inline TorTable tor_by_second(const FiniteModule& m, const FiniteModule& n, std::size_t top, bool realize = false,
                              ResolutionLimits lim = {}) {
  require_same_ring(m.ring(), n.ring());
  return tor_from_resolution(resolve(n, top + 1, {true, lim}), m, top, realize, lim);
}

/// Ext^i(M, N) for 0 <= i <= n as H^i(Hom(F, N)).
inline ExtTable ext_from_resolution(const MinimalFreeResolution& f, const FiniteModule& n, std::size_t top, bool realize = false,
                                    ResolutionLimits lim = {}) {
  require_same_ring(f.module.ring(), n.ring());
  detail::require_length(f, top + 1);
  ExtTable t;
  std::optional<FMatrix> in;
  for (std::size_t i = 0; i <= top; ++i) {
    FMatrix out = detail::tensor_matrix(f.d(i + 1), n, true, lim);
    t.degrees.push_back(detail::homology(n, f.betti[i], i, &out, in ? &*in : nullptr, realize));
    in = std::move(out);
  }
  return t;
}

inline ExtTable ext(const FiniteModule& m, const FiniteModule& n, std::size_t top, bool realize = false, ResolutionLimits lim = {}) {
  require_same_ring(m.ring(), n.ring());
  return ext_from_resolution(resolve(m, top + 1, {true, lim}), n, top, realize, lim);
}

/// Ranks of Tor_i(φ, N) for lo <= i <= hi from a chain-map lift of φ.
inline std::vector<InducedMapResult> tor_induced(const ModuleMap& phi, const FiniteModule& n, std::size_t lo, std::size_t hi,
                                                 ResolutionLimits lim = {}) {
  require_same_ring(phi.source.ring(), n.ring());
  auto ra = resolve(phi.source, hi + 1, {true, lim});
  auto rb = resolve(phi.target, hi + 1, {true, lim});
  auto lift = lift_chain_map(phi, ra, rb, hi, lim);
  std::vector<InducedMapResult> out;
  for (std::size_t i = lo; i <= hi; ++i) {
    auto ina = detail::tensor_matrix(ra.d(i + 1), n, false, lim);
    auto inb = detail::tensor_matrix(rb.d(i + 1), n, false, lim);
    std::optional<FMatrix> outa, outb;
    if (i > 0) {
      outa = detail::tensor_matrix(ra.d(i), n, false, lim);
      outb = detail::tensor_matrix(rb.d(i), n, false, lim);
    }
    auto ca = detail::cycles_and_boundaries(n, ra.betti[i], outa ? &*outa : nullptr, &ina);
    auto cb = detail::cycles_and_boundaries(n, rb.betti[i], outb ? &*outb : nullptr, &inb);
    auto g = detail::tensor_matrix(lift.at(i), n, false, lim);
    out.push_back({i, detail::induced_rank(ca, cb, g), ca.z.rank() - ca.bd.rank(), cb.z.rank() - cb.bd.rank()});
  }
  return out;
}

/// Same ranks computed as H_i(φ ⊗ G) with G a minimal resolution of N.
inline std::vector<InducedMapResult> tor_induced_by_second(const ModuleMap& phi, const MinimalFreeResolution& g, std::size_t lo,
                                                           std::size_t hi, ResolutionLimits lim = {}) {
  require_same_ring(phi.source.ring(), g.module.ring());
  detail::require_length(g, hi + 1);
  const auto& a = phi.source;
  const auto& b = phi.target;
  std::vector<InducedMapResult> out;
  for (std::size_t i = lo; i <= hi; ++i) {
    auto ina = detail::tensor_matrix(g.d(i + 1), a, false, lim);
    auto inb = detail::tensor_matrix(g.d(i + 1), b, false, lim);
    std::optional<FMatrix> outa, outb;
    if (i > 0) {
      outa = detail::tensor_matrix(g.d(i), a, false, lim);
      outb = detail::tensor_matrix(g.d(i), b, false, lim);
    }
    auto ca = detail::cycles_and_boundaries(a, g.betti[i], outa ? &*outa : nullptr, &ina);
    auto cb = detail::cycles_and_boundaries(b, g.betti[i], outb ? &*outb : nullptr, &inb);
    auto map = FiniteModule::block_diagonal(phi.matrix, g.betti[i]);
    out.push_back({i, detail::induced_rank(ca, cb, map), ca.z.rank() - ca.bd.rank(), cb.z.rank() - cb.bd.rank()});
  }
  return out;
}

inline std::vector<InducedMapResult> tor_induced_by_second(const ModuleMap& phi, const FiniteModule& n, std::size_t lo,
                                                           std::size_t hi, ResolutionLimits lim = {}) {
  return tor_induced_by_second(phi, resolve(n, hi + 1, {true, lim}), lo, hi, lim);
}

/// Ranks of Ext^i(φ, N) : Ext^i(B, N) → Ext^i(A, N) from a chain-map lift.
inline std::vector<InducedMapResult> ext_induced(const ModuleMap& phi, const FiniteModule& n, std::size_t lo, std::size_t hi,
                                                 ResolutionLimits lim = {}) {
  require_same_ring(phi.source.ring(), n.ring());
  auto ra = resolve(phi.source, hi + 1, {true, lim});
  auto rb = resolve(phi.target, hi + 1, {true, lim});
  auto lift = lift_chain_map(phi, ra, rb, hi, lim);
  std::vector<InducedMapResult> out;
  for (std::size_t i = lo; i <= hi; ++i) {
    auto outa = detail::tensor_matrix(ra.d(i + 1), n, true, lim);
    auto outb = detail::tensor_matrix(rb.d(i + 1), n, true, lim);
    std::optional<FMatrix> ina, inb;
    if (i > 0) {
      ina = detail::tensor_matrix(ra.d(i), n, true, lim);
      inb = detail::tensor_matrix(rb.d(i), n, true, lim);
    }
    auto ca = detail::cycles_and_boundaries(n, ra.betti[i], &outa, ina ? &*ina : nullptr);
    auto cb = detail::cycles_and_boundaries(n, rb.betti[i], &outb, inb ? &*inb : nullptr);
    auto g = detail::tensor_matrix(lift.at(i), n, true, lim);
    out.push_back({i, detail::induced_rank(cb, ca, g), cb.z.rank() - cb.bd.rank(), ca.z.rank() - ca.bd.rank()});
  }
  return out;
}

/// Degreewise check of l(Tor_i(M,N)) = ν(M)β_i(N) − ν(mM)β_{i−1}(N) + l(L_i) + l(L_{i−1}).
struct LengthCountRow {
  std::size_t degree = 0;
  std::size_t length = 0;
  long long lower_bound = 0;  // ν(M)β_i(N) − ν(mM)β_{i−1}(N)
  std::size_t image = 0;      // l(L_i) = rank Tor_i(ι_M, N)
  std::size_t image_prev = 0;
  bool identity_holds = false;
  bool equality = false;      // l(Tor_i) equals the lower bound
};

struct LengthCountReport {
  std::vector<LengthCountRow> rows;  // degrees 1..n
  bool all_identities() const {
    for (auto& r : rows)
      if (!r.identity_holds) return false;
    return true;
  }
};

/// Same, with N given by a resolution of length at least top + 1.
inline LengthCountReport length_count_audit(const FiniteModule& m, const MinimalFreeResolution& g, std::size_t top,
                                            ResolutionLimits lim = {}) {
  require_radical_square_zero(m);
  auto inc = radical_submodule(m);
  auto ranks = tor_induced_by_second(inc.map, g, 0, top, lim);
  auto lengths = tor_from_resolution(g, m, top, false, lim);
  const long long nu_m = static_cast<long long>(nu(m));
  const long long nu_mm = static_cast<long long>(inc.sub.dim());
  LengthCountReport rep;
  for (std::size_t i = 1; i <= top; ++i) {
    LengthCountRow row;
    row.degree = i;
    row.length = lengths[i].length;
    row.lower_bound = nu_m * static_cast<long long>(g.betti[i]) - nu_mm * static_cast<long long>(g.betti[i - 1]);
    row.image = ranks[i].rank;
    row.image_prev = ranks[i - 1].rank;
    row.identity_holds = static_cast<long long>(row.length) == row.lower_bound + static_cast<long long>(row.image + row.image_prev);
    row.equality = static_cast<long long>(row.length) == row.lower_bound;
    rep.rows.push_back(row);
  }
  return rep;
}

inline LengthCountReport length_count_audit(const FiniteModule& m, const FiniteModule& n, std::size_t top, ResolutionLimits lim = {}) {
  require_radical_square_zero(m);
  return length_count_audit(m, resolve(n, top + 1, {true, lim}), top, lim);
}

}  // namespace gorlab
