// gorlab: command-line front end for the short Gorenstein ring toolkit.
//
//   gorlab ring new|check          rings as JSON files
//   gorlab module new|random|info  modules by presentation
//   gorlab resolve                 minimal free resolutions
//   gorlab tor|ext                 homology tables, optionally with ι-induced ranks
//   gorlab series <kind>           truncated series with rationality certificates
//   gorlab koszul                  Koszul verdict with witness
//   gorlab verify <check>          seeded property checks
//
// Exit status: 0 success, 1 a verification failed, 2 usage, IO or validation error.

#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gorlab/homology.hpp"
#include "gorlab/io.hpp"
#include "gorlab/koszul.hpp"
#include "gorlab/lemmas.hpp"
#include "gorlab/series.hpp"
#include "gorlab/trials.hpp"
#include "gorlab/verify.hpp"

using namespace gorlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;

struct Output {
  std::string path;
  bool pretty = false;
};

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

bool is_table(const json& v) {
  if (!v.is_array() || v.empty()) return false;
  return std::all_of(v.begin(), v.end(), [](const json& r) { return r.is_object(); });
}

void render_table(std::ostream& out, const json& rows, int indent) {
  std::vector<std::string> cols;
  for (auto& r : rows)
    for (auto it = r.begin(); it != r.end(); ++it)
      if (it.value().is_primitive() && std::find(cols.begin(), cols.end(), it.key()) == cols.end()) cols.push_back(it.key());
  std::vector<std::size_t> width;
  for (auto& c : cols) {
    std::size_t w = c.size();
    for (auto& r : rows)
      if (r.contains(c)) w = std::max(w, scalar_text(r[c]).size());
    width.push_back(w);
  }
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  out << pad;
  for (std::size_t k = 0; k < cols.size(); ++k) out << std::left << std::setw(static_cast<int>(width[k] + 2)) << cols[k];
  out << "\n";
  for (auto& r : rows) {
    out << pad;
    for (std::size_t k = 0; k < cols.size(); ++k)
      out << std::left << std::setw(static_cast<int>(width[k] + 2)) << (r.contains(cols[k]) ? scalar_text(r[cols[k]]) : "-");
    out << "\n";
  }
}

// A view of the JSON document: scalars as "key: value", arrays of records as tables.
void render_pretty(std::ostream& out, const json& j, int indent = 0) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (is_table(j)) {
    render_table(out, j, indent);
    return;
  }
  if (!j.is_object()) {
    out << pad << j.dump() << "\n";
    return;
  }
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    if (v.is_primitive() || (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); }))) {
      out << pad << it.key() << ": " << (v.is_array() ? v.dump() : scalar_text(v)) << "\n";
    } else {
      out << pad << it.key() << ":\n";
      render_pretty(out, v, indent + 2);
    }
  }
}

void emit(const Output& o, const json& doc) {
  std::string text;
  if (o.pretty) {
    std::ostringstream s;
    render_pretty(s, doc);
    text = s.str();
  } else {
    text = canonical_dump(doc);
  }
  if (o.path.empty())
    std::cout << text;
  else
    write_text_file(o.path, text);
}

std::pair<std::size_t, std::size_t> parse_range(const std::string& s) {
  const auto dots = s.find("..");
  if (dots == std::string::npos) fail(ErrorKind::ConfigError, "range must look like a..b, got '" + s + "'");
  try {
    std::size_t used = 0;
    const auto a = std::stoul(s.substr(0, dots), &used);
    if (used != dots) throw std::invalid_argument(s);
    const auto rest = s.substr(dots + 2);
    const auto b = std::stoul(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(s);
    if (a > b) fail(ErrorKind::ConfigError, "empty range " + s);
    return {a, b};
  } catch (const std::logic_error&) {
    fail(ErrorKind::ConfigError, "range must look like a..b, got '" + s + "'");
  }
}

json slice_rows(const json& rows, std::size_t lo) {
  json out = json::array();
  for (auto& r : rows)
    if (r["i"].get<std::size_t>() >= lo) out.push_back(r);
  return out;
}

RingPtr ring_for_new(std::uint32_t p, std::size_t e, const std::string& form, std::uint64_t seed) {
  TrialConfig c;
  c.p = p;
  c.e = e;
  c.seed = seed;
  c.form = form_choice_from_string(form);
  return config_ring(c);
}

std::vector<RingElement> parse_elements(const RingPtr& ring, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& ex) {
    fail(ErrorKind::SchemaError, std::string("--ideal: ") + ex.what());
  }
  if (!j.is_array()) fail(ErrorKind::SchemaError, "/: --ideal expects an array of elements");
  std::vector<RingElement> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(element_from_json(ring, j[i], "/" + std::to_string(i)));
  return out;
}

json module_file_from(const RingPtr& ring, const std::string& ring_path, const Presentation& pres) {
  return json{{"ring", ring_path.empty() ? ring_to_json(ring) : json(ring_path)}, {"presentation", ring_matrix_to_json(pres.matrix)}};
}

json module_info(const FiniteModule& m) {
  auto soc = socle(m);
  return json{{"dim", m.dim()},
              {"nu", nu(m)},
              {"hilbert", hilbert_layers(m)},
              {"radical_square_zero", m.radical_square_zero()},
              {"socle_dim", soc.sub.dim()},
              {"free_rank", rank(m.w_action())},
              {"dual_nu", nu(matlis_dual(m))},
              {"fingerprint", fingerprint(m)}};
}

struct VerifyArgs {
  std::string check;
  TrialConfig cfg;
  std::string form = "identity";
  std::size_t max_entries = ResolutionLimits{}.max_entries;
};

VerificationReport run_check(const VerifyArgs& a) {
  if (a.check == "lofwall") return verify_lofwall(a.cfg);
  if (a.check == "main-theorem") return verify_main_theorem(a.cfg);
  if (a.check == "vanishing-proposition") return verify_vanishing_proposition(a.cfg);
  if (a.check == "counterexample-e2") return verify_counterexample_e2(a.cfg);
  if (a.check == "lemma-suite") return verify_lemma_suite(a.cfg);
  fail(ErrorKind::ConfigError, "unknown check '" + a.check + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Computations and property checks over short Gorenstein rings", "gorlab"};
  app.require_subcommand(1);
  app.fallthrough();
  Output out;
  bool timing = false;
  app.add_option("--out", out.path, "Write output to this file instead of standard output");
  app.add_flag("--pretty", out.pretty, "Human-readable view instead of JSON");
  app.add_flag("--timing", timing, "Record elapsed_ms in verification reports");

  // ring
  auto* ring_cmd = app.add_subcommand("ring", "Create or validate a ring file");
  ring_cmd->require_subcommand(1);
  std::uint32_t p = 101;
  std::size_t e = 3;
  std::string form = "identity";
  std::uint64_t seed = 1;
  auto* ring_new = ring_cmd->add_subcommand("new", "Print a ring file");
  ring_new->add_option("--p", p, "Prime below 65536");
  ring_new->add_option("--e", e, "Embedding dimension");
  ring_new->add_option("--form", form, "identity | hyperbolic | random-nondegenerate");
  ring_new->add_option("--seed", seed, "Seed for the random form");
  std::string ring_file;
  auto* ring_check = ring_cmd->add_subcommand("check", "Validate a ring file");
  ring_check->add_option("file", ring_file, "Ring file")->required();

  // module
  auto* module_cmd = app.add_subcommand("module", "Create or inspect a module file");
  module_cmd->require_subcommand(1);
  std::string module_ring, ideal_text;
  bool residue = false;
  std::size_t free_rank = 0, gens = 2, rels = 2;
  auto* module_new = module_cmd->add_subcommand("new", "R/I, k or R^n over a ring file");
  module_new->add_option("--ring", module_ring, "Ring file")->required();
  auto* ideal_opt = module_new->add_option("--ideal", ideal_text, "JSON array of ideal generators, each e+2 integers");
  auto* residue_opt = module_new->add_flag("--residue-field", residue, "The residue field k");
  auto* free_opt = module_new->add_option("--free", free_rank, "The free module of this rank");
  ideal_opt->excludes(residue_opt)->excludes(free_opt);
  residue_opt->excludes(free_opt);
  auto* module_random = module_cmd->add_subcommand("random", "Random cokernel presentation with entries in m");
  module_random->add_option("--ring", module_ring, "Ring file")->required();
  module_random->add_option("--generators", gens, "Number of generators");
  module_random->add_option("--relations", rels, "Number of relations");
  module_random->add_option("--seed", seed, "Seed");
  std::string module_file;
  auto* module_info_cmd = module_cmd->add_subcommand("info", "Dimension, ν, Hilbert layers and socle");
  module_info_cmd->add_option("file", module_file, "Module file")->required();

  // resolve
  std::size_t steps = 5;
  bool betti_only = false;
  auto* resolve_cmd = app.add_subcommand("resolve", "Minimal free resolution");
  resolve_cmd->add_option("file", module_file, "Module file")->required();
  resolve_cmd->add_option("--steps", steps, "Highest homological degree");
  resolve_cmd->add_flag("--betti-only", betti_only, "Omit the differentials");

  // tor / ext
  std::string m_file, n_file, range = "0..5";
  bool induced = false;
  auto* tor_cmd = app.add_subcommand("tor", "Tor_i(M, N) with length, ν and the m-flag");
  auto* ext_cmd = app.add_subcommand("ext", "Ext^i(M, N) with length, ν and the m-flag");
  for (auto* c : {tor_cmd, ext_cmd}) {
    c->add_option("--m", m_file, "Module file for M")->required();
    c->add_option("--n-mod", n_file, "Module file for N")->required();
    c->add_option("--range", range, "Degrees a..b");
    c->add_flag("--induced", induced, "Add the rank of the map induced by mM -> M");
  }

  // series
  std::string kind;
  bool certify = false;
  std::size_t margin = 5;
  auto* series_cmd = app.add_subcommand("series", "Truncated Hilbert, Poincaré, Tor or Ext series");
  series_cmd->add_option("kind", kind, "poincare | hilbert | tor-nu | tor-len | ext-nu | ext-len")
      ->required()
      ->check(CLI::IsMember({"poincare", "hilbert", "tor-nu", "tor-len", "ext-nu", "ext-len"}));
  series_cmd->add_option("--module,--m", m_file, "Module file (M)")->required();
  series_cmd->add_option("--n-mod", n_file, "Second module for Tor and Ext series");
  series_cmd->add_option("--steps", steps, "Truncation degree");
  series_cmd->add_flag("--certify", certify, "Certify denominator 1 - e t + t^2");
  series_cmd->add_option("--margin", margin, "Minimum length of the certified tail");

  // koszul
  auto* koszul_cmd = app.add_subcommand("koszul", "Koszul verdict with witness");
  koszul_cmd->add_option("file", module_file, "Module file")->required();

  // verify
  VerifyArgs va;
  auto* verify_cmd = app.add_subcommand("verify", "Seeded property check");
  verify_cmd->add_option("check", va.check, "lofwall | main-theorem | vanishing-proposition | counterexample-e2 | lemma-suite")
      ->required()
      ->check(CLI::IsMember({"lofwall", "main-theorem", "vanishing-proposition", "counterexample-e2", "lemma-suite"}));
  verify_cmd->add_option("--trials", va.cfg.trials, "Trials per check");
  verify_cmd->add_option("--seed", va.cfg.seed, "Base seed");
  verify_cmd->add_option("--cutoff", va.cfg.cutoff, "Degree cutoff (at least 10)");
  verify_cmd->add_option("--e", va.cfg.e, "Embedding dimension");
  verify_cmd->add_option("--p", va.cfg.p, "Prime");
  verify_cmd->add_option("--form", va.form, "identity | hyperbolic | random-nondegenerate");
  verify_cmd->add_option("--margin", va.cfg.margin, "Certificate margin");
  verify_cmd->add_option("--max-dim", va.cfg.max_dim, "Largest module dimension");
  verify_cmd->add_option("--max-generators", va.cfg.max_generators, "Largest number of generators");
  verify_cmd->add_option("--max-relations", va.cfg.max_relations, "Largest number of relations");
  verify_cmd->add_option("--max-entries", va.max_entries, "Dense matrix budget per step");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*ring_new) {
      emit(out, ring_to_json(ring_for_new(p, e, form, seed)));
    } else if (*ring_check) {
      auto r = load_ring(ring_file);
      emit(out, json{{"ok", true}, {"p", r->p()}, {"e", r->e()}, {"dim", r->dim()}});
    } else if (*module_new) {
      auto r = load_ring(module_ring);
      Presentation pres{RingMatrix(r, 0, 0)};
      if (!ideal_text.empty()) {
        pres = cyclic_module(r, parse_elements(r, ideal_text)).presentation;
      } else if (residue) {
        pres = cyclic_module(r, maximal_ideal_generators(r)).presentation;
      } else if (free_rank > 0) {
        pres = Presentation{RingMatrix(r, free_rank, 0)};
      } else {
        fail(ErrorKind::ConfigError, "give one of --ideal, --residue-field, --free");
      }
      emit(out, module_file_from(r, module_ring, pres));
    } else if (*module_random) {
      auto r = load_ring(module_ring);
      emit(out, module_file_from(r, module_ring, random_presentation(r, gens, rels, seed)));
    } else if (*module_info_cmd) {
      emit(out, module_info(load_module(module_file).module));
    } else if (*resolve_cmd) {
      auto m = load_module(module_file).module;
      emit(out, resolution_to_json(resolve(m, steps, {!betti_only, {}})));
    } else if (*tor_cmd || *ext_cmd) {
      const bool is_tor = tor_cmd->parsed();
      const auto [lo, hi] = parse_range(range);
      auto m = load_module(m_file).module;
      auto n = load_module(n_file).module;
      auto table = is_tor ? tor(m, n, hi) : ext(m, n, hi);
      std::optional<std::vector<InducedMapResult>> ranks;
      if (induced) {
        auto inc = radical_submodule(m);
        ranks = is_tor ? tor_induced(inc.map, n, lo, hi) : ext_induced(inc.map, n, lo, hi);
      }
      auto rows = slice_rows(homology_table_to_json(table, ranks ? &*ranks : nullptr), lo);
      emit(out, json{{"functor", is_tor ? "tor" : "ext"}, {"degrees", std::move(rows)}});
    } else if (*series_cmd) {
      auto mf = load_module(m_file);
      const auto& m = mf.module;
      const bool two_modules = kind.rfind("tor", 0) == 0 || kind.rfind("ext", 0) == 0;
      if (two_modules && n_file.empty()) fail(ErrorKind::ConfigError, kind + " needs --n-mod");
      TruncatedIntegerSeries s;
      if (kind == "poincare") {
        s = poincare_series(m, steps);
      } else if (kind == "hilbert") {
        s = hilbert_series(m);
      } else {
        auto n = load_module(n_file).module;
        const auto mode = kind.ends_with("-nu") ? SeriesMode::Nu : SeriesMode::Length;
        s = kind.rfind("tor", 0) == 0 ? tor_series(m, n, steps, mode) : ext_series(m, n, steps, mode);
      }
      std::optional<RationalityCertificate> cert;
      std::optional<std::string> why;
      if (certify) {
        auto c = try_certify_rational(s, m.e(), margin);
        if (c.ok())
          cert = *c.certificate;
        else
          why = "no certified tail of length " + std::to_string(margin) +
                (c.last_violation ? "; last violation at index " + std::to_string(*c.last_violation) : "");
      }
      auto doc = series_to_json(s, cert);
      if (why) doc["certify_failure"] = *why;
      emit(out, doc);
      if (why) {
        std::cerr << "certification failed: " << *why << "\n";
        return kExitCheckFailed;
      }
    } else if (*koszul_cmd) {
      emit(out, verdict_to_json(is_koszul(load_module(module_file).module)));
    } else if (*verify_cmd) {
      va.cfg.form = form_choice_from_string(va.form);
      va.cfg.limits.max_entries = va.max_entries;
      va.cfg.timing = timing;
      va.cfg.validate();
      auto rep = run_check(va);
      emit(out, rep.to_json());
      if (!rep.pass) {
        for (auto& f : rep.failures) std::cerr << "reproducer: " << f["reproducer"].dump() << "\n";
        return kExitCheckFailed;
      }
    }
  } catch (const Error& ex) {
    std::cerr << ex.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}
