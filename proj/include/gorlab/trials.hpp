#pragma once
// Seeded trial plumbing: configuration, instance generators, and an ordered
// parallel map over trial indices.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gorlab/error.hpp"
#include "gorlab/module.hpp"
#include "gorlab/resolution.hpp"
#include "gorlab/ring.hpp"

namespace gorlab {

using json = nlohmann::json;

enum class FormChoice { Identity, Hyperbolic, Random };

inline const char* to_string(FormChoice f) {
  switch (f) {
    case FormChoice::Identity: return "identity";
    case FormChoice::Hyperbolic: return "hyperbolic";
    case FormChoice::Random: return "random-nondegenerate";
  }
  return "?";
}

inline FormChoice form_choice_from_string(const std::string& s) {
  for (auto f : {FormChoice::Identity, FormChoice::Hyperbolic, FormChoice::Random})
    if (s == to_string(f)) return f;
  fail(ErrorKind::ConfigError, "unknown form '" + s + "' (identity | hyperbolic | random-nondegenerate)");
}

struct TrialConfig {
  std::uint64_t seed = 1;
  std::size_t trials = 25;
  std::uint32_t p = 101;
  std::size_t e = 3;
  FormChoice form = FormChoice::Identity;
  std::size_t max_generators = 3;
  std::size_t max_relations = 4;
  std::size_t max_dim = 10;
  std::size_t cutoff = 10;
  std::size_t margin = 5;
  ResolutionLimits limits{};
  std::size_t threads = 0;  // 0: GORLAB_THREADS, unset means sequential
  bool timing = false;

  void validate() const {
    if (cutoff < 10) fail(ErrorKind::ConfigError, "cutoff must be at least 10");
    if (trials == 0 || max_generators == 0 || max_dim == 0) fail(ErrorKind::ConfigError, "trial counts and size caps must be positive");
    if (margin == 0 || margin > cutoff) fail(ErrorKind::ConfigError, "margin must lie in [1, cutoff]");
    if (e < 2) fail(ErrorKind::EmbeddingDimTooSmall, "e must be at least 2");
  }

  json to_json() const {
    return json{{"seed", seed},
                {"trials", trials},
                {"p", p},
                {"e", e},
                {"form", to_string(form)},
                {"max_generators", max_generators},
                {"max_relations", max_relations},
                {"max_dim", max_dim},
                {"cutoff", cutoff},
                {"margin", margin},
                {"max_entries", limits.max_entries}};
  }
};

/// splitmix64 step.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Independent seed for trial `index` of the check named `tag`.
inline std::uint64_t trial_seed(std::uint64_t base, std::string_view tag, std::size_t index) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return mix64(mix64(base ^ h) + index);
}

/// Symmetric form with nonzero determinant, entries uniform in GF(p).
inline FMatrix random_nondegenerate_form(std::uint32_t p, std::size_t e, std::uint64_t seed) {
  PrimeField f(p);
  SeededRng rng(seed);
  for (;;) {
    FMatrix b(f, e, e);
    for (std::size_t i = 0; i < e; ++i)
      for (std::size_t j = i; j < e; ++j) b(i, j) = b(j, i) = rng.residue(p);
    if (rank(b) == e) return b;
  }
}

inline RingPtr config_ring(const TrialConfig& c) {
  switch (c.form) {
    case FormChoice::Identity: return identity_form_ring(c.p, c.e);
    case FormChoice::Hyperbolic: return hyperbolic_form_ring(c.p, c.e);
    case FormChoice::Random: return make_ring(c.p, c.e, random_nondegenerate_form(c.p, c.e, trial_seed(c.seed, "form", 0)));
  }
  fail(ErrorKind::ConfigError, "unknown form choice");
}

/// Random module within the configured caps; the draw is a pure function of the seed.
inline FiniteModule sample_module(const RingPtr& ring, const TrialConfig& c, std::uint64_t seed) {
  SeededRng rng(seed);
  for (int attempt = 0; attempt < 256; ++attempt) {
    const std::size_t g = 1 + rng.below(c.max_generators);
    const std::size_t r = rng.below(c.max_relations + 1);
    auto m = random_module(ring, g, r, rng.next());
    if (m.dim() > 0 && m.dim() <= c.max_dim) return m;
  }
  return FiniteModule::residue_field(ring);
}

/// Module with m^2 M = 0 within the caps: a first syzygy, or M/m^2 M when that is too large.
inline FiniteModule sample_square_zero_module(const RingPtr& ring, const TrialConfig& c, std::uint64_t seed) {
  SeededRng rng(seed);
  for (int attempt = 0; attempt < 256; ++attempt) {
    auto m = sample_module(ring, c, rng.next());
    if (m.radical_square_zero() && m.dim() > 1) return m;
    auto s = syzygy(m, 1, c.limits);
    if (s.dim() > 0 && s.dim() <= c.max_dim) return s;
    EchelonForm w(m.field(), m.dim());
    for (std::size_t j = 0; j < m.dim(); ++j) w.insert(m.w_action().column(j));
    auto q = quotient(m, w).quotient;
    if (q.dim() > 1) return q;
  }
  return FiniteModule::residue_field(ring);
}

/// Generators of a random proper nonzero ideal: 1-3 elements mixing linear and w parts.
inline std::vector<RingElement> random_ideal(const RingPtr& ring, std::uint64_t seed) {
  SeededRng rng(seed);
  const std::size_t count = 1 + rng.below(3);
  std::vector<RingElement> gens;
  for (std::size_t k = 0; k < count; ++k) {
    auto a = RingElement::zero(ring);
    const bool quadratic_only = rng.below(4) == 0;
    if (!quadratic_only)
      for (std::size_t l = 0; l < ring->e(); ++l) a.coeffs[1 + l] = rng.residue(ring->p());
    a.coeffs[ring->w_index()] = rng.residue(ring->p());
    if (!a.is_zero()) gens.push_back(a);
  }
  if (gens.empty()) gens.push_back(RingElement::w(ring));
  return gens;
}

inline std::vector<RingElement> maximal_ideal_generators(const RingPtr& ring) {
  std::vector<RingElement> g;
  for (std::size_t l = 0; l < ring->e(); ++l) g.push_back(RingElement::x(ring, l));
  return g;
}

/// Ideal for trial `index` of a batch: index 0 is m^2, index 1 is m, then random.
inline std::vector<RingElement> batch_ideal(const RingPtr& ring, std::uint64_t seed, std::size_t index) {
  if (index == 0) return {RingElement::w(ring)};
  if (index == 1) return maximal_ideal_generators(ring);
  return random_ideal(ring, seed);
}

inline std::size_t thread_count(const TrialConfig& c) {
  if (c.threads) return c.threads;
  if (const char* s = std::getenv("GORLAB_THREADS")) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return v;
  }
  return 1;
}

inline json error_json(const std::exception& ex) {
  if (auto* g = dynamic_cast<const Error*>(&ex)) return json{{"error", to_string(g->kind())}, {"message", g->what()}};
  return json{{"error", "Internal"}, {"message", ex.what()}};
}

/// Runs f(i) for i in [0, n) on up to `threads` workers; results keep index order.
template <class F>
std::vector<json> ordered_map(std::size_t n, std::size_t threads, F&& f) {
  std::vector<json> out(n);
  auto work = [&](std::size_t i) {
    try {
      out[i] = f(i);
    } catch (const std::exception& ex) {
      out[i] = json{{"index", i}, {"pass", false}, {"failure", error_json(ex)}};
    }
  };
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) work(i);
    });
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace gorlab
