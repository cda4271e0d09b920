#pragma once
// Property checks over seeded random instances, one report per check.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <limits>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gorlab/error.hpp"
#include "gorlab/homology.hpp"
#include "gorlab/io.hpp"
#include "gorlab/koszul.hpp"
#include "gorlab/module.hpp"
#include "gorlab/resolution.hpp"
#include "gorlab/series.hpp"
#include "gorlab/trials.hpp"

namespace gorlab {

struct VerificationReport {
  std::string check;
  json config;
  bool pass = false;
  json trials = json::array();
  json failures = json::array();
  json summary = json::object();
  std::optional<std::int64_t> elapsed_ms;  // set only when timing is requested

  json to_json() const {
    json j{{"check", check}, {"config", config}, {"pass", pass}, {"trials", trials}, {"failures", failures}, {"summary", summary}};
    j["elapsed_ms"] = elapsed_ms ? json(*elapsed_ms) : json(nullptr);
    return j;
  }
};

/// Smallest s with ok[i] for all s <= i < ok.size(); empty when the last entry fails.
inline std::optional<std::size_t> tail_start(const std::vector<bool>& ok) {
  std::size_t s = ok.size();
  while (s > 0 && ok[s - 1]) --s;
  if (s == ok.size()) return std::nullopt;
  return s;
}

inline json opt_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

inline json certificate_json(const CertifyOutcome& c) {
  json j{{"ok", c.ok()}, {"first_violation", opt_json(c.first_violation)}, {"last_violation", opt_json(c.last_violation)}};
  if (c.certificate) {
    j["s"] = c.certificate->tail_start;
    j["numerator"] = integer_array(c.certificate->numerator);
  } else {
    j["s"] = nullptr;
    j["numerator"] = nullptr;
  }
  return j;
}

namespace detail {

class Stopwatch {
 public:
  Stopwatch() : t0_(std::chrono::steady_clock::now()) {}
  std::int64_t ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - t0_).count();
  }

 private:
  std::chrono::steady_clock::time_point t0_;
};

inline VerificationReport start(std::string check, const TrialConfig& cfg) {
  VerificationReport r;
  r.check = std::move(check);
  r.config = cfg.to_json();
  return r;
}

// Moves failing trials into the failure list with a reproducer.
inline void assemble(VerificationReport& r, std::vector<json> results, const TrialConfig& cfg, const Stopwatch& clock) {
  r.pass = true;
  for (auto& t : results) {
    if (!t.value("pass", false)) {
      r.pass = false;
      json f{{"trial", t.value("index", std::size_t{0})}, {"reproducer", {{"seed", cfg.seed}, {"trial", t.value("index", std::size_t{0})}}}};
      if (t.contains("seed")) f["trial_seed"] = t["seed"];
      if (t.contains("failure")) f["reason"] = t["failure"];
      r.failures.push_back(std::move(f));
    }
    r.trials.push_back(std::move(t));
  }
  if (cfg.timing) r.elapsed_ms = clock.ms();
}

inline json module_summary(const FiniteModule& m) {
  return json{{"fingerprint", fingerprint(m)}, {"dim", m.dim()}, {"nu", nu(m)}};
}

// Runs a trial body, turning library errors into a recorded failure.
template <class F>
json guarded_trial(std::size_t index, std::uint64_t seed, F&& body) {
  json t{{"index", index}, {"seed", seed}};
  try {
    body(t);
  } catch (const std::exception& ex) {
    t["pass"] = false;
    t["failure"] = error_json(ex);
  }
  return t;
}

inline void require_e_above_two(const TrialConfig& cfg, const char* check) {
  if (cfg.e <= 2)
    fail(ErrorKind::ConfigError, std::string(check) + " needs e > 2; use the counterexample check for e = 2");
}

}  // namespace detail

/// β_i(k) = coefficients of 1/(1 - e t + t^2) for i <= cutoff.
inline VerificationReport verify_lofwall(const TrialConfig& cfg) {
  detail::Stopwatch clock;
  auto rep = detail::start("lofwall", cfg);
  const std::size_t n = cfg.cutoff;
  const std::size_t forms = cfg.form == FormChoice::Random ? cfg.trials : 1;
  auto results = ordered_map(forms, thread_count(cfg), [&](std::size_t i) {
    TrialConfig c = cfg;
    c.seed = cfg.form == FormChoice::Random ? trial_seed(cfg.seed, "lofwall", i) : cfg.seed;
    return detail::guarded_trial(i, c.seed, [&](json& t) {
      auto ring = config_ring(c);
      t["form"] = json(ring->form().data());
      auto expected = expand_rational({BigInt(1)}, cfg.e, n);
      auto got = betti_progress(FiniteModule::residue_field(ring), n, cfg.limits);
      const std::size_t reached = got.betti.size() - 1;
      bool match = true, recurrence = got.betti[0] == 1 && (reached < 1 || got.betti[1] == cfg.e);
      for (std::size_t k = 0; k <= reached; ++k) match = match && BigInt(got.betti[k]) == expected[k];
      for (std::size_t k = 1; k + 1 <= reached; ++k)
        recurrence = recurrence && BigInt(got.betti[k + 1]) == BigInt(cfg.e) * got.betti[k] - got.betti[k - 1];
      t["betti"] = got.betti;
      t["reached"] = reached;
      t["expected_at_cutoff"] = integer_json(expected[n]);
      t["matches_expansion"] = match;
      t["recurrence"] = recurrence;
      t["pass"] = match && recurrence && got.complete(n);
      if (got.stopped) t["failure"] = json{{"error", "ResourceLimit"}, {"message", *got.stopped}, {"reached", reached}};
      else if (!match || !recurrence) t["failure"] = json{{"error", "Mismatch"}};
    });
  });
  detail::assemble(rep, std::move(results), cfg, clock);
  return rep;
}

/// Per random pair: eventual m-annihilation of Tor and Ext and rationality of the four series.
inline VerificationReport verify_main_theorem(const TrialConfig& cfg) {
  detail::require_e_above_two(cfg, "main theorem");
  detail::Stopwatch clock;
  auto rep = detail::start("main-theorem", cfg);
  auto ring = config_ring(cfg);
  const std::size_t n = cfg.cutoff;
  auto results = ordered_map(cfg.trials, thread_count(cfg), [&](std::size_t i) {
    const auto seed = trial_seed(cfg.seed, "main-theorem", i);
    return detail::guarded_trial(i, seed, [&](json& t) {
      auto m = sample_module(ring, cfg, mix64(seed));
      auto nm = sample_module(ring, cfg, mix64(seed + 1));
      t["M"] = detail::module_summary(m);
      t["N"] = detail::module_summary(nm);
      auto f = resolve(m, n + 1, {true, cfg.limits});
      auto tor_t = tor_from_resolution(f, nm, n, false, cfg.limits);
      auto ext_t = ext_from_resolution(f, nm, n, false, cfg.limits);
      std::vector<bool> flags(n + 1);
      for (std::size_t i2 = 0; i2 <= n; ++i2) flags[i2] = tor_t[i2].m_annihilated && ext_t[i2].m_annihilated;
      auto s_flag = tail_start(flags);
      const bool a = s_flag && *s_flag + cfg.margin <= n;
      json certs = json::object();
      bool all_certified = true;
      auto certify = [&](const char* name, const TruncatedIntegerSeries& s) {
        auto c = try_certify_rational(s, cfg.e, cfg.margin);
        all_certified = all_certified && c.ok();
        certs[name] = certificate_json(c);
        certs[name]["coefficients"] = integer_array(s.coefficients);
      };
      certify("tor_nu", series_of(tor_t, SeriesKind::TorNu, SeriesMode::Nu));
      certify("ext_nu", series_of(ext_t, SeriesKind::ExtNu, SeriesMode::Nu));
      certify("tor_length", series_of(tor_t, SeriesKind::TorLength, SeriesMode::Length));
      certify("ext_length", series_of(ext_t, SeriesKind::ExtLength, SeriesMode::Length));
      bool length_is_nu = s_flag.has_value();
      for (std::size_t i2 = s_flag.value_or(n + 1); i2 <= n; ++i2)
        length_is_nu = length_is_nu && tor_t[i2].length == tor_t[i2].nu && ext_t[i2].length == ext_t[i2].nu;
      t["flag_tail_start"] = opt_json(s_flag);
      t["certificates"] = std::move(certs);
      t["annihilated"] = a;
      t["length_equals_nu"] = length_is_nu;
      t["pass"] = a && all_certified && length_is_nu;
      if (!a) t["failure"] = json{{"error", "NoAnnihilatedTail"}, {"tail_start", opt_json(s_flag)}};
      else if (!all_certified) t["failure"] = json{{"error", "NotCertified"}};
      else if (!length_is_nu) t["failure"] = json{{"error", "LengthDiffersFromNu"}};
    });
  });
  detail::assemble(rep, std::move(results), cfg, clock);
  return rep;
}

/// Ranks of Tor_i(ι_M, N) on [0, n] with N resolved once.
inline std::vector<std::size_t> iota_ranks(const FiniteModule& m, const MinimalFreeResolution& g, std::size_t n,
                                           const ResolutionLimits& lim) {
  auto inc = radical_submodule(m);
  std::vector<std::size_t> out;
  for (auto& r : tor_induced_by_second(inc.map, g, 0, n, lim)) out.push_back(r.rank);
  return out;
}

inline std::optional<std::size_t> vanishing_tail(const std::vector<std::size_t>& ranks) {
  std::vector<bool> ok;
  for (auto r : ranks) ok.push_back(r == 0);
  return tail_start(ok);
}

/// Koszul M: Tor_i(ι_M, N) = 0 on a tail; for cyclic M, for every i > ν(N*).
inline VerificationReport verify_vanishing_proposition(const TrialConfig& cfg) {
  detail::require_e_above_two(cfg, "vanishing proposition");
  detail::Stopwatch clock;
  auto rep = detail::start("vanishing-proposition", cfg);
  auto ring = config_ring(cfg);
  const std::size_t n = cfg.cutoff;
  auto results = ordered_map(cfg.trials, thread_count(cfg), [&](std::size_t i) {
    const auto seed = trial_seed(cfg.seed, "vanishing", i);
    return detail::guarded_trial(i, seed, [&](json& t) {
      const bool cyclic = i % 2 == 0;
      auto m = cyclic ? cyclic_module(ring, batch_ideal(ring, mix64(seed), i / 2)).module : sample_module(ring, cfg, mix64(seed));
      auto nm = sample_module(ring, cfg, mix64(seed + 1));
      t["M"] = detail::module_summary(m);
      t["N"] = detail::module_summary(nm);
      t["cyclic"] = cyclic;
      auto verdict = is_koszul(m, cfg.limits);
      if (!verdict.koszul) {
        t["skipped"] = "M is not Koszul";
        t["witness_j"] = verdict.witness->j;
        t["pass"] = true;
        return;
      }
      t["skipped"] = nullptr;
      auto g = resolve(nm, n + 1, {true, cfg.limits});
      auto ranks = iota_ranks(m, g, n, cfg.limits);
      auto s = vanishing_tail(ranks);
      bool pass = s && *s + cfg.margin <= n;
      t["ranks"] = ranks;
      t["tail_start"] = opt_json(s);
      if (cyclic) {
        const std::size_t bound = nu(matlis_dual(nm));
        bool effective = true;
        for (std::size_t k = bound + 1; k <= n; ++k) effective = effective && ranks[k] == 0;
        t["nu_dual_N"] = bound;
        t["cyclic_bound_holds"] = effective;
        pass = pass && effective;
      }
      t["pass"] = pass;
      if (!pass) t["failure"] = json{{"error", "NoVanishingTail"}, {"tail_start", opt_json(s)}};
    });
  });
  std::size_t applicable = 0;
  for (auto& t : results)
    if (t.contains("skipped") && t["skipped"].is_null()) ++applicable;
  detail::assemble(rep, std::move(results), cfg, clock);
  rep.summary["applicable"] = applicable;
  return rep;
}

/// An isotropic vector of the form, i.e. x = Σ v_l x_l with x^2 = 0.
inline std::optional<RingElement> isotropic_element(const RingPtr& ring) {
  const auto& f = ring->field();
  const std::size_t e = ring->e();
  auto q = [&](const Vec& v) {
    std::uint64_t s = 0;
    for (std::size_t i = 0; i < e; ++i)
      for (std::size_t j = 0; j < e; ++j) s = (s + std::uint64_t(ring->form(i, j)) * v[i] % f.p() * v[j]) % f.p();
    return s;
  };
  auto lift = [&](const Vec& v) {
    std::vector<std::int64_t> c(ring->dim(), 0);
    for (std::size_t l = 0; l < e; ++l) c[1 + l] = v[l];
    return RingElement::from(ring, c);
  };
  Vec v(e, 0);
  for (std::size_t i = 0; i < e; ++i) {
    std::fill(v.begin(), v.end(), 0);
    v[i] = 1;
    if (q(v) == 0) return lift(v);
    for (std::size_t j = i + 1; j < e; ++j) {
      for (std::uint32_t c = 1; c < f.p(); ++c) {
        v[j] = c;
        if (q(v) == 0) return lift(v);
      }
      v[j] = 0;
    }
  }
  return std::nullopt;
}

/// e = 2, M = N = R/(x) with x^2 = 0: Tor_i ≅ M and Tor_i(ι_M, N) has rank 1.
inline VerificationReport verify_counterexample_e2(const TrialConfig& cfg) {
  if (cfg.e != 2) fail(ErrorKind::ConfigError, "the counterexample check needs e = 2");
  detail::Stopwatch clock;
  auto rep = detail::start("counterexample-e2", cfg);
  const std::size_t n = cfg.cutoff;
  auto results = ordered_map(1, 1, [&](std::size_t i) {
    return detail::guarded_trial(i, cfg.seed, [&](json& t) {
      auto ring = config_ring(cfg);
      auto x = isotropic_element(ring);
      if (!x) fail(ErrorKind::ConfigError, "the form has no isotropic vector over GF(p)");
      t["x"] = x->coeffs;
      auto m = cyclic_module(ring, {*x}).module;
      auto betti = betti_numbers(m, n, cfg.limits);
      auto tor_t = tor(m, m, n, false, cfg.limits);
      auto inc = radical_submodule(m);
      auto lifted = tor_induced(inc.map, m, 1, n, cfg.limits);
      auto balanced = tor_induced_by_second(inc.map, m, 1, n, cfg.limits);
      bool ok = true;
      json rows = json::array();
      for (std::size_t k = 1; k <= n; ++k) {
        const auto& d = tor_t[k];
        const bool row_ok = betti[k] == 1 && d.length == 2 && d.nu == 1 && !d.m_annihilated && lifted[k - 1].rank == 1 &&
                            balanced[k - 1].rank == 1;
        ok = ok && row_ok;
        rows.push_back({{"i", k},
                        {"beta", betti[k]},
                        {"length", d.length},
                        {"nu", d.nu},
                        {"m_annihilated", d.m_annihilated},
                        {"induced_rank", lifted[k - 1].rank},
                        {"ok", row_ok}});
      }
      t["degrees"] = std::move(rows);
      auto cert = try_certify_rational(series_of(tor_t, SeriesKind::TorNu, SeriesMode::Nu), 2, cfg.margin);
      t["tor_nu_certificate"] = certificate_json(cert);
      t["note"] = "the nu-Tor series satisfies the e = 2 recurrence although m Tor_i != 0";
      t["pass"] = ok;
      if (!ok) t["failure"] = json{{"error", "Mismatch"}};
    });
  });
  detail::assemble(rep, std::move(results), cfg, clock);
  return rep;
}

}  // namespace gorlab
