#pragma once
// Minimal free resolutions, syzygies, complete resolutions and chain-map lifts.

#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <tuple>
#include <vector>

#include "gorlab/error.hpp"
#include "gorlab/linalg.hpp"
#include "gorlab/module.hpp"
#include "gorlab/ring.hpp"

namespace gorlab {

/// Caps dense matrix sizes; exceeding one throws ResourceLimit.
struct ResolutionLimits {
  std::size_t max_entries = 64'000'000;
};

namespace detail {

inline void check_budget(std::size_t rows, std::size_t cols, const ResolutionLimits& lim, const char* what) {
  if (rows != 0 && cols > lim.max_entries / rows)
    fail(ErrorKind::ResourceLimit, std::string(what) + " would need " + std::to_string(rows) + " x " + std::to_string(cols) +
                                       " entries (limit " + std::to_string(lim.max_entries) + ")");
}

// A module X with m^2 X = 0 written as k^gens ⊕ k^lower: x_l sends generator j
// to column j*e + l of phi and annihilates k^lower.
struct SquareZeroForm {
  std::size_t gens = 0;
  std::size_t lower = 0;
  FMatrix phi;
};

struct SquareZeroStep {
  std::size_t rank = 0;                // dim mX
  std::vector<std::size_t> extra;      // rows of k^lower completing mX's generators
  std::optional<FMatrix> kernel;       // rows over (j, l), j < gens
};

inline SquareZeroStep analyze(const SquareZeroForm& x, std::size_t e, bool want_kernel, const ResolutionLimits& lim) {
  const auto& f = x.phi.field();
  SquareZeroStep out;
  EchelonForm ech(f, x.gens * e);
  for (std::size_t r = 0; r < x.lower; ++r)
    if (!ech.insert(x.phi.row(r))) out.extra.push_back(r);
  out.rank = ech.rank();
  if (want_kernel) {
    ech.make_reduced();
    const auto free_cols = ech.free_columns();
    check_budget(free_cols.size(), x.gens * e, lim, "syzygy generators");
    FMatrix k(f, free_cols.size(), x.gens * e);
    for (std::size_t q = 0; q < free_cols.size(); ++q) {
      auto row = k.row(q);
      row[free_cols[q]] = 1;
      for (std::size_t h = 0; h < ech.rank(); ++h) row[ech.pivots()[h]] = f.neg(ech.row(h)[free_cols[q]]);
    }
    out.kernel = std::move(k);
  }
  return out;
}

// The first syzygy of x, given its analysis.
inline SquareZeroForm next_form(const SquareZeroForm& x, const SquareZeroStep& s, const ShortGorensteinRing& r,
                                const ResolutionLimits& lim) {
  const std::size_t e = r.e();
  const auto& f = r.field();
  const std::size_t kdim = s.kernel->rows();
  SquareZeroForm y;
  y.gens = kdim + s.extra.size() * e;
  y.lower = x.gens + s.extra.size();
  check_budget(y.lower, y.gens * e, lim, "syzygy action matrix");
  y.phi = FMatrix(f, y.lower, y.gens * e);
  const auto p = f.p();
  const auto& kern = *s.kernel;
  for (std::size_t q = 0; q < kdim; ++q) {
    auto u = kern.row(q);
    for (std::size_t j = 0; j < x.gens; ++j) {
      const Residue* uj = u.data() + j * e;
      bool any = false;
      for (std::size_t l = 0; l < e; ++l) any = any || uj[l];
      if (!any) continue;
      auto out = y.phi.row(j);
      for (std::size_t lp = 0; lp < e; ++lp) {
        std::uint64_t acc = 0;
        for (std::size_t l = 0; l < e; ++l) acc += std::uint64_t(r.form(lp, l)) * uj[l];
        out[q * e + lp] = static_cast<Residue>(acc % p);
      }
    }
  }
  for (std::size_t c = 0; c < s.extra.size(); ++c)
    for (std::size_t l = 0; l < e; ++l) {
      const std::size_t col = kdim + c * e + l;
      auto out = y.phi.row(x.gens + c);
      for (std::size_t lp = 0; lp < e; ++lp) out[col * e + lp] = r.form(lp, l);
    }
  return y;
}

inline FiniteModule realize(const SquareZeroForm& x, const RingPtr& ring) {
  const std::size_t e = ring->e(), n = x.gens + x.lower;
  const auto& f = ring->field();
  std::vector<FMatrix> acts(e, FMatrix(f, n, n));
  for (std::size_t l = 0; l < e; ++l)
    for (std::size_t j = 0; j < x.gens; ++j)
      for (std::size_t t = 0; t < x.lower; ++t) acts[l](x.gens + t, j) = x.phi(t, j * e + l);
  return FiniteModule::create_trusted(ring, n, std::move(acts), FMatrix(f, n, n));
}

// Minimal cover of a general module and its first syzygy in square-zero form.
struct FirstStep {
  std::vector<Vec> generators;  // in M
  FMatrix cover;                // dim M x g(e+2)
  std::vector<Vec> syzygy_gens; // in F_0 = R^g
  SquareZeroForm syzygy;
};

inline FirstStep first_step(const FiniteModule& m, const ResolutionLimits& lim) {
  const auto& ring = *m.ring();
  const auto& f = m.field();
  const std::size_t w = ring.dim(), e = ring.e();
  FirstStep out;
  auto rad = radical_span(m);
  out.generators = complement_basis(rad);
  const std::size_t g = out.generators.size();
  check_budget(m.dim(), g * w, lim, "cover matrix");
  out.cover = FMatrix(f, m.dim(), g * w);
  for (std::size_t j = 0; j < g; ++j)
    for (std::size_t b = 0; b < w; ++b) {
      Vec img = b == 0 ? out.generators[j] : b == ring.w_index() ? matvec(m.w_action(), out.generators[j]) : matvec(m.action(b - 1), out.generators[j]);
      for (std::size_t i = 0; i < m.dim(); ++i) out.cover(i, j * w + b) = img[i];
    }
  auto ker = kernel_basis(out.cover);
  // x_l * y for y in F_0
  auto times_x = [&](std::span<const Residue> y, std::size_t l) {
    Vec z(g * w, 0);
    const auto x = RingElement::x(m.ring(), l);
    for (std::size_t j = 0; j < g; ++j) mul_coeffs(ring, x.coeffs.data(), y.data() + j * w, z.data() + j * w);
    return z;
  };
  EchelonForm rad_k(f, g * w);
  for (std::size_t q = 0; q < ker.rows(); ++q)
    for (std::size_t l = 0; l < e; ++l) rad_k.insert(times_x(ker.row(q), l));
  rad_k.make_reduced();
  EchelonForm span = rad_k;
  for (std::size_t q = 0; q < ker.rows(); ++q)
    if (span.insert(ker.row(q))) out.syzygy_gens.emplace_back(ker.row(q).begin(), ker.row(q).end());
  auto& y = out.syzygy;
  y.gens = out.syzygy_gens.size();
  y.lower = rad_k.rank();
  y.phi = FMatrix(f, y.lower, y.gens * e);
  for (std::size_t j = 0; j < y.gens; ++j)
    for (std::size_t l = 0; l < e; ++l) {
      auto c = rad_k.coordinates(times_x(out.syzygy_gens[j], l));
      for (std::size_t t = 0; t < y.lower; ++t) y.phi(t, j * e + l) = (*c)[t];
    }
  return out;
}

}  // namespace detail

struct ResolveOptions {
  bool keep_differentials = true;
  ResolutionLimits limits{};
  std::vector<std::size_t>* progress = nullptr;  // receives each β_i as soon as it is known
};

/// F_n → … → F_0 → M with all differential entries in m.
struct MinimalFreeResolution {
  FiniteModule module;
  std::vector<std::size_t> betti;         // β_0..β_n
  std::vector<RingMatrix> differentials;  // ∂_1..∂_n; empty in Betti-only mode
  std::vector<Vec> generators;            // images in M of the basis of F_0
  FMatrix cover;                          // F_0 → M on k-coordinates

  std::size_t length() const { return betti.size() - 1; }
  bool has_differentials() const { return differentials.size() == length(); }
  const RingMatrix& d(std::size_t i) const {
    if (i == 0 || i > differentials.size()) fail(ErrorKind::ShapeMismatch, "differential index " + std::to_string(i) + " not computed");
    return differentials[i - 1];
  }
  std::size_t rank(std::size_t i) const { return betti.at(i); }
};

namespace detail {

inline RingMatrix square_zero_differential(const RingPtr& ring, const SquareZeroForm& x, const SquareZeroStep& s,
                                           const SquareZeroForm& y, const SquareZeroStep& sy, const ResolutionLimits& lim) {
  const std::size_t e = ring->e();
  const std::size_t rows = x.gens + s.extra.size();
  const std::size_t cols = y.gens + sy.extra.size();
  check_budget(rows, cols * ring->dim(), lim, "differential");
  RingMatrix d(ring, rows, cols);
  const auto& kern = *s.kernel;
  for (std::size_t q = 0; q < kern.rows(); ++q) {
    auto u = kern.row(q);
    for (std::size_t j = 0; j < x.gens; ++j) {
      auto ent = d.entry(j, q);
      for (std::size_t l = 0; l < e; ++l) ent[1 + l] = u[j * e + l];
    }
  }
  for (std::size_t c = 0; c < s.extra.size(); ++c)
    for (std::size_t l = 0; l < e; ++l) d.entry(x.gens + c, kern.rows() + c * e + l)[1 + l] = 1;
  for (std::size_t k = 0; k < sy.extra.size(); ++k) d.entry(sy.extra[k], y.gens + k)[ring->w_index()] = 1;
  return d;
}

// Runs the syzygy recursion; visit(i, form) is called for every M_i with i >= 1
// before M_{i+1} is built.
template <class Visit>
MinimalFreeResolution run_resolution(const FiniteModule& m, std::size_t n, const ResolveOptions& opt, Visit&& visit) {
  const auto& ring = m.ring();
  const auto& lim = opt.limits;
  auto fs = first_step(m, lim);
  MinimalFreeResolution res{m, {fs.generators.size()}, {}, fs.generators, fs.cover};
  auto report = [&] {
    if (opt.progress) opt.progress->push_back(res.betti.back());
  };
  report();
  if (n == 0) return res;
  SquareZeroForm x = std::move(fs.syzygy);
  SquareZeroStep s = analyze(x, ring->e(), n >= 2, lim);
  res.betti.push_back(x.gens + s.extra.size());
  report();
  if (opt.keep_differentials) {
    const std::size_t w = ring->dim();
    RingMatrix d1(ring, res.betti[0], res.betti[1]);
    for (std::size_t j = 0; j < fs.syzygy_gens.size(); ++j)
      for (std::size_t g = 0; g < res.betti[0]; ++g)
        std::copy_n(fs.syzygy_gens[j].begin() + g * w, w, d1.entry(g, j).begin());
    res.differentials.push_back(std::move(d1));
  }
  visit(std::size_t{1}, x);
  for (std::size_t i = 1; i < n; ++i) {
    SquareZeroForm y = next_form(x, s, *ring, lim);
    SquareZeroStep sy = analyze(y, ring->e(), i + 1 < n, lim);
    res.betti.push_back(y.gens + sy.extra.size());
    report();
    if (opt.keep_differentials) res.differentials.push_back(square_zero_differential(ring, x, s, y, sy, lim));
    visit(i + 1, y);
    x = std::move(y);
    s = std::move(sy);
  }
  return res;
}

}  // namespace detail

inline MinimalFreeResolution resolve(const FiniteModule& m, std::size_t n, const ResolveOptions& opt = {}) {
  return detail::run_resolution(m, n, opt, [](std::size_t, const detail::SquareZeroForm&) {});
}

/// β_0..β_n without materializing differentials.
inline std::vector<std::size_t> betti_numbers(const FiniteModule& m, std::size_t n, ResolutionLimits lim = {}) {
  return resolve(m, n, {false, lim}).betti;
}

struct BettiProgress {
  std::vector<std::size_t> betti;      // β_0..β_r, r <= n
  std::optional<std::string> stopped;  // ResourceLimit message when r < n
  bool complete(std::size_t n) const { return betti.size() == n + 1; }
};

/// Betti numbers up to n, or as far as the budget allows.
inline BettiProgress betti_progress(const FiniteModule& m, std::size_t n, ResolutionLimits lim = {}) {
  BettiProgress out;
  try {
    resolve(m, n, {false, lim, &out.betti});
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::ResourceLimit) throw;
    out.stopped = e.what();
  }
  return out;
}

/// M_i; for i >= 1 realized on a basis of generators followed by mM_i.
inline FiniteModule syzygy(const FiniteModule& m, std::size_t i, ResolutionLimits lim = {}) {
  if (i == 0) return m;
  std::optional<FiniteModule> out;
  detail::run_resolution(m, i, {false, lim}, [&](std::size_t k, const detail::SquareZeroForm& f) {
    if (k == i) out = detail::realize(f, m.ring());
  });
  return *out;
}

/// All of M_1..M_n in one pass.
inline std::vector<FiniteModule> syzygies(const FiniteModule& m, std::size_t n, ResolutionLimits lim = {}) {
  std::vector<FiniteModule> out;
  detail::run_resolution(m, n, {false, lim}, [&](std::size_t, const detail::SquareZeroForm& f) {
    out.push_back(detail::realize(f, m.ring()));
  });
  return out;
}

inline void require_radical_square_zero(const FiniteModule& m) {
  if (!m.radical_square_zero()) fail(ErrorKind::RadicalSquareNonzero, "m^2 M != 0");
}

/// M_{-i} = ((M*)_i)*.
inline FiniteModule negative_syzygy(const FiniteModule& m, std::size_t i, ResolutionLimits lim = {}) {
  if (i == 0) fail(ErrorKind::ShapeMismatch, "negative syzygy index must be positive");
  require_radical_square_zero(m);
  return matlis_dual(syzygy(matlis_dual(m), i, lim));
}

/// Minimal cover plus first syzygy matrix; from_presentation of it recovers M.
inline Presentation canonical_presentation(const FiniteModule& m) {
  auto res = resolve(m, 1);
  return {res.d(1)};
}

/// Exactness and minimality audit over the computed range.
struct ResolutionAudit {
  bool minimal = true;
  bool complex = true;
  bool exact = true;
  std::optional<std::size_t> first_bad;
};

inline ResolutionAudit audit(const MinimalFreeResolution& res) {
  ResolutionAudit a;
  auto mark = [&](bool& flag, std::size_t i) {
    flag = false;
    if (!a.first_bad || *a.first_bad > i) a.first_bad = i;
  };
  const auto& m = res.module;
  const std::size_t w = m.ring()->dim();
  std::vector<FMatrix> km;
  for (std::size_t i = 1; i <= res.length(); ++i) {
    if (!res.d(i).entries_in_maximal_ideal()) mark(a.minimal, i);
    km.push_back(k_matrix(res.d(i)));
  }
  if (res.length() >= 1 && !(res.cover * km[0]).is_zero()) mark(a.complex, 1);
  if (gorlab::rank(res.cover) != m.dim()) mark(a.exact, 0);
  for (std::size_t i = 1; i < res.length(); ++i)
    if (!(km[i - 1] * km[i]).is_zero()) mark(a.complex, i + 1);
  // dim ker(F_i → F_{i-1}) = rank(F_{i+1} → F_i)
  for (std::size_t i = 0; i < res.length(); ++i) {
    const std::size_t out_rank = i == 0 ? gorlab::rank(res.cover) : gorlab::rank(km[i - 1]);
    if (res.betti[i] * w - out_rank != gorlab::rank(km[i])) mark(a.exact, i);
  }
  return a;
}

/// Degreewise lifts f_i : F^A_i → F^B_i of a module map A → B.
struct ChainMapLift {
  std::vector<RingMatrix> maps;  // f_0..f_n, each β^B_i x β^A_i

  const RingMatrix& at(std::size_t i) const { return maps.at(i); }
  std::size_t length() const { return maps.size() - 1; }
};

/// Solves ∂^B f_i = f_{i-1} ∂^A degree by degree; particular solutions put
/// free variables at zero.
inline ChainMapLift lift_chain_map(const ModuleMap& phi, const MinimalFreeResolution& a, const MinimalFreeResolution& b,
                                   std::size_t n, ResolutionLimits lim = {}) {
  require_same_ring(phi.source.ring(), phi.target.ring());
  if (a.length() < n || b.length() < n || (n > 0 && (!a.has_differentials() || !b.has_differentials())))
    fail(ErrorKind::ShapeMismatch, "resolutions too short for the requested lift");
  if (!(phi.source == a.module) || !(phi.target == b.module))
    fail(ErrorKind::ShapeMismatch, "resolutions do not match the map's source and target");
  const auto& ring = phi.source.ring();
  const std::size_t w = ring->dim();
  auto solve_columns = [&](const FMatrix& system, const RingMatrix& rhs, std::size_t rows_b) {
    LinearSolver solver(system);
    RingMatrix out(ring, rows_b, rhs.cols());
    for (std::size_t j = 0; j < rhs.cols(); ++j) {
      auto x = solver.solve(rhs.column_vector(j));
      if (!x) fail(ErrorKind::InvalidModule, "chain map lift has no solution (input is not a resolution)");
      for (std::size_t g = 0; g < rows_b; ++g) std::copy_n(x->begin() + g * w, w, out.entry(g, j).begin());
    }
    return out;
  };
  ChainMapLift lift;
  // f_0: φ∘π_A through π_B
  {
    detail::check_budget(b.cover.rows(), b.cover.cols() * 2, lim, "lift system");
    LinearSolver solver(b.cover);
    RingMatrix f0(ring, b.betti[0], a.betti[0]);
    for (std::size_t j = 0; j < a.betti[0]; ++j) {
      auto x = solver.solve(matvec(phi.matrix, a.generators[j]));
      if (!x) fail(ErrorKind::InvalidModule, "cover is not surjective");
      for (std::size_t g = 0; g < b.betti[0]; ++g) std::copy_n(x->begin() + g * w, w, f0.entry(g, j).begin());
    }
    lift.maps.push_back(std::move(f0));
  }
  for (std::size_t i = 1; i <= n; ++i) {
    RingMatrix rhs = lift.maps[i - 1] * a.d(i);
    detail::check_budget(b.betti[i - 1] * w, b.betti[i] * w * 2, lim, "lift system");
    lift.maps.push_back(solve_columns(k_matrix(b.d(i)), rhs, b.betti[i]));
  }
  return lift;
}

inline bool commutes(const ChainMapLift& f, const MinimalFreeResolution& a, const MinimalFreeResolution& b) {
  for (std::size_t i = 1; i <= f.length(); ++i)
    if (!(b.d(i) * f.at(i) == f.at(i - 1) * a.d(i))) return false;
  return true;
}

namespace detail {

// Pairing (r, s) ↦ w-coefficient of r s on the ring basis; identifies R^h with its k-dual.
inline FMatrix pairing_matrix(const ShortGorensteinRing& r) {
  FMatrix p(r.field(), r.dim(), r.dim());
  p(0, r.w_index()) = 1;
  p(r.w_index(), 0) = 1;
  for (std::size_t i = 0; i < r.e(); ++i)
    for (std::size_t j = 0; j < r.e(); ++j) p(1 + i, 1 + j) = r.form(i, j);
  return p;
}

inline FMatrix inverse(const FMatrix& a) {
  LinearSolver s(a);
  FMatrix out(a.field(), a.cols(), a.rows());
  Vec unit(a.rows(), 0);
  for (std::size_t j = 0; j < a.rows(); ++j) {
    unit[j] = 1;
    auto x = s.solve(unit);
    unit[j] = 0;
    if (!x) fail(ErrorKind::Degenerate, "matrix is singular");
    for (std::size_t i = 0; i < a.cols(); ++i) out(i, j) = (*x)[i];
  }
  return out;
}

}  // namespace detail

/// F_n → … → F_0 → F_{-1} → … → F_{-n}; the negative part is the dual of a
/// minimal resolution of M*.
struct CompleteResolutionWindow {
  MinimalFreeResolution positive;
  MinimalFreeResolution dual;  // of M*
  RingMatrix glue;             // ∂_0 : F_0 → F_{-1}

  std::size_t length() const { return positive.length(); }
  /// ∂_{-i} : F_{-i} → F_{-i-1}
  RingMatrix negative(std::size_t i) const { return dual.d(i).transpose(); }
  std::size_t negative_betti(std::size_t i) const { return dual.betti.at(i - 1); }
  bool glue_minimal() const { return glue.entries_in_maximal_ideal(); }

  /// Homology vanishes at every interior spot of the window.
  bool acyclic() const {
    // degrees n..-n; maps[k] goes from spot k to spot k+1 in the list
    std::vector<FMatrix> maps;
    for (std::size_t i = length(); i >= 1; --i) maps.push_back(k_matrix(positive.d(i)));
    maps.push_back(k_matrix(glue));
    for (std::size_t i = 1; i < dual.length(); ++i) maps.push_back(k_matrix(negative(i)));
    for (std::size_t k = 0; k + 1 < maps.size(); ++k) {
      if (!(maps[k + 1] * maps[k]).is_zero()) return false;
      const std::size_t dim = maps[k].rows();
      if (dim != maps[k + 1].cols()) return false;
      if (dim - gorlab::rank(maps[k + 1]) != gorlab::rank(maps[k])) return false;
    }
    return true;
  }
};

inline CompleteResolutionWindow complete_resolution(const FiniteModule& m, std::size_t n, ResolutionLimits lim = {}) {
  require_radical_square_zero(m);
  const auto& ring = *m.ring();
  const std::size_t w = ring.dim();
  auto pos = resolve(m, n, {true, lim});
  auto dual = resolve(matlis_dual(m), n + 1, {true, lim});
  // ∂_0 = Λ^{-1} ∘ (cover of M*)^T ∘ cover of M, with Λ the pairing identification
  const std::size_t h = dual.betti[0];
  auto lam_inv = FiniteModule::block_diagonal(detail::inverse(detail::pairing_matrix(ring)), h);
  FMatrix glue_k = lam_inv * (dual.cover.transpose() * pos.cover);
  RingMatrix glue(m.ring(), h, pos.betti[0]);
  for (std::size_t j = 0; j < pos.betti[0]; ++j)
    for (std::size_t g = 0; g < h; ++g)
      for (std::size_t b = 0; b < w; ++b) glue.entry(g, j)[b] = glue_k(g * w + b, j * w);
  return {std::move(pos), std::move(dual), std::move(glue)};
}

/// Thread-safe memo of resolutions keyed by module fingerprint and length.
class ResolutionCache {
 public:
  std::shared_ptr<const MinimalFreeResolution> get(const FiniteModule& m, std::size_t n, const ResolveOptions& opt = {}) {
    const Key key{fingerprint(m), n, opt.keep_differentials};
    {
      std::shared_lock lock(mu_);
      if (auto hit = find(key, m)) return hit;
    }
    auto res = std::make_shared<const MinimalFreeResolution>(resolve(m, n, opt));
    std::unique_lock lock(mu_);
    if (auto hit = find(key, m)) return hit;
    entries_[key].push_back(res);
    return res;
  }

  std::size_t size() const {
    std::shared_lock lock(mu_);
    std::size_t s = 0;
    for (auto& [k, v] : entries_) s += v.size();
    return s;
  }

 private:
  using Key = std::tuple<std::string, std::size_t, bool>;

  std::shared_ptr<const MinimalFreeResolution> find(const Key& key, const FiniteModule& m) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) return nullptr;
    for (auto& r : it->second)
      if (r->module == m) return r;
    return nullptr;
  }

  mutable std::shared_mutex mu_;
  std::map<Key, std::vector<std::shared_ptr<const MinimalFreeResolution>>> entries_;
};

}  // namespace gorlab
