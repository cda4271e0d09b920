#pragma once
// JSON files for rings and modules, and dumps of computed objects. Output is
// canonical: sorted keys, scalar arrays on one line, two-space indentation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gorlab/error.hpp"
#include "gorlab/homology.hpp"
#include "gorlab/koszul.hpp"
#include "gorlab/module.hpp"
#include "gorlab/resolution.hpp"
#include "gorlab/ring.hpp"
#include "gorlab/series.hpp"

namespace gorlab {

using json = nlohmann::json;

namespace detail {

inline void canonical_write(std::ostringstream& out, const json& j, int depth) {
  auto pad = [&](int d) { out << std::string(static_cast<std::size_t>(2 * d), ' '); };
  if (j.is_object()) {
    if (j.empty()) {
      out << "{}";
      return;
    }
    out << "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out << ",\n";
      first = false;
      pad(depth + 1);
      out << json(it.key()).dump() << ": ";
      canonical_write(out, it.value(), depth + 1);
    }
    out << "\n";
    pad(depth);
    out << "}";
  } else if (j.is_array()) {
    bool flat = true;
    for (auto& x : j) flat = flat && x.is_primitive();
    if (flat) {
      out << "[";
      for (std::size_t i = 0; i < j.size(); ++i) out << (i ? ", " : "") << j[i].dump();
      out << "]";
      return;
    }
    out << "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out << ",\n";
      pad(depth + 1);
      canonical_write(out, j[i], depth + 1);
    }
    out << "\n";
    pad(depth);
    out << "]";
  } else {
    out << j.dump();
  }
}

[[noreturn]] inline void schema_fail(const std::string& pointer, const std::string& what) {
  fail(ErrorKind::SchemaError, (pointer.empty() ? "/" : pointer) + ": " + what);
}

inline const json& member(const json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) schema_fail(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_fail(at + "/" + key, "missing");
  return *it;
}

inline std::int64_t integer(const json& j, const std::string& at) {
  if (!j.is_number_integer()) schema_fail(at, "expected an integer");
  return j.get<std::int64_t>();
}

inline const json& array(const json& j, const std::string& at) {
  if (!j.is_array()) schema_fail(at, "expected an array");
  return j;
}

}  // namespace detail

/// The canonical text of a JSON value, newline-terminated.
inline std::string canonical_dump(const json& j) {
  std::ostringstream out;
  detail::canonical_write(out, j, 0);
  out << "\n";
  return out.str();
}

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return json::parse(buf.str());
  } catch (const json::parse_error& ex) {
    fail(ErrorKind::SchemaError, path.string() + ": " + ex.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) fail(ErrorKind::IoError, "write failed for " + path.string());
}

// ---------------------------------------------------------------------------
// Rings and elements

inline json ring_to_json(const RingPtr& ring) {
  json form = json::array();
  for (std::size_t i = 0; i < ring->e(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < ring->e(); ++j) row.push_back(ring->form(i, j));
    form.push_back(std::move(row));
  }
  return json{{"p", ring->p()}, {"e", ring->e()}, {"form", std::move(form)}};
}

inline RingPtr ring_from_json(const json& j, const std::string& at = "") {
  const auto p = detail::integer(detail::member(j, "p", at), at + "/p");
  const auto e = detail::integer(detail::member(j, "e", at), at + "/e");
  if (p < 2 || p >= (1 << 16))
    fail(ErrorKind::NotPrime, "p = " + std::to_string(p) + " outside [2, 65536)");
  if (e < 2) fail(ErrorKind::EmbeddingDimTooSmall, "e = " + std::to_string(e));
  const auto& form = detail::array(detail::member(j, "form", at), at + "/form");
  if (form.size() != static_cast<std::size_t>(e)) detail::schema_fail(at + "/form", "expected " + std::to_string(e) + " rows");
  std::vector<std::vector<std::int64_t>> rows;
  for (std::size_t i = 0; i < form.size(); ++i) {
    const std::string ai = at + "/form/" + std::to_string(i);
    const auto& row = detail::array(form[i], ai);
    if (row.size() != static_cast<std::size_t>(e)) detail::schema_fail(ai, "expected " + std::to_string(e) + " entries");
    std::vector<std::int64_t> r;
    for (std::size_t c = 0; c < row.size(); ++c) r.push_back(detail::integer(row[c], ai + "/" + std::to_string(c)));
    rows.push_back(std::move(r));
  }
  return make_ring(static_cast<std::uint32_t>(p), static_cast<std::size_t>(e), rows);
}

inline json element_to_json(const RingElement& a) { return json(a.coeffs); }

inline RingElement element_from_json(const RingPtr& ring, const json& j, const std::string& at) {
  const auto& arr = detail::array(j, at);
  if (arr.size() != ring->dim())
    detail::schema_fail(at, "element needs " + std::to_string(ring->dim()) + " coefficients, got " + std::to_string(arr.size()));
  std::vector<std::int64_t> c;
  for (std::size_t i = 0; i < arr.size(); ++i) c.push_back(detail::integer(arr[i], at + "/" + std::to_string(i)));
  return RingElement::from(ring, c);
}

inline json ring_matrix_to_json(const RingMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(element_to_json(m.element(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Rows are generators, columns relations; every row must have the same length.
inline RingMatrix ring_matrix_from_json(const RingPtr& ring, const json& j, const std::string& at) {
  const auto& rows = detail::array(j, at);
  const std::size_t cols = rows.empty() ? 0 : detail::array(rows[0], at + "/0").size();
  RingMatrix m(ring, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ai = at + "/" + std::to_string(i);
    const auto& row = detail::array(rows[i], ai);
    if (row.size() != cols) detail::schema_fail(ai, "expected " + std::to_string(cols) + " entries like row 0");
    for (std::size_t c = 0; c < cols; ++c) m.set(i, c, element_from_json(ring, row[c], ai + "/" + std::to_string(c)));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Module files

struct ModuleFile {
  json ring_ref;  // ring object, or the path string as written
  RingPtr ring;
  Presentation presentation;
  FiniteModule module;
};

inline ModuleFile module_from_json(const json& j, const std::filesystem::path& base_dir = {}) {
  const auto& ref = detail::member(j, "ring", "");
  RingPtr ring;
  if (ref.is_string()) {
    const std::filesystem::path rp = base_dir / ref.get<std::string>();
    ring = ring_from_json(read_json_file(rp));
  } else {
    ring = ring_from_json(ref, "/ring");
  }
  Presentation pres{ring_matrix_from_json(ring, detail::member(j, "presentation", ""), "/presentation")};
  auto m = from_presentation(pres).module;
  return {ref.is_string() ? ref : ring_to_json(ring), ring, std::move(pres), std::move(m)};
}

inline json module_file_to_json(const ModuleFile& f) {
  return json{{"ring", f.ring_ref}, {"presentation", ring_matrix_to_json(f.presentation.matrix)}};
}

/// A module built in memory, stored through its canonical presentation.
inline json module_to_json(const FiniteModule& m) {
  return json{{"ring", ring_to_json(m.ring())}, {"presentation", ring_matrix_to_json(canonical_presentation(m).matrix)}};
}

inline RingPtr load_ring(const std::filesystem::path& path) { return ring_from_json(read_json_file(path)); }

inline ModuleFile load_module(const std::filesystem::path& path) {
  return module_from_json(read_json_file(path), path.parent_path());
}

// ---------------------------------------------------------------------------
// Dumps

inline json resolution_to_json(const MinimalFreeResolution& r) {
  json d = json::array();
  for (auto& m : r.differentials) d.push_back(ring_matrix_to_json(m));
  return json{{"betti", r.betti}, {"differentials", std::move(d)}};
}

inline json homology_table_to_json(const TorTable& t, const std::vector<InducedMapResult>* induced = nullptr) {
  json rows = json::array();
  for (const auto& d : t.degrees) {
    json row{{"i", d.degree}, {"length", d.length}, {"nu", d.nu}, {"m_annihilated", d.m_annihilated}};
    if (induced)
      for (auto& r : *induced)
        if (r.degree == d.degree) row["induced_rank"] = r.rank;
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Integers beyond 64 bits are written as decimal strings.
inline json integer_json(const BigInt& x) {
  if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max())
    return json(static_cast<std::int64_t>(x));
  return json(x.str());
}

inline json integer_array(const std::vector<BigInt>& v) {
  json a = json::array();
  for (auto& x : v) a.push_back(integer_json(x));
  return a;
}

inline json series_to_json(const TruncatedIntegerSeries& s, const std::optional<RationalityCertificate>& cert = std::nullopt) {
  json j{{"kind", to_string(s.kind)}, {"coefficients", integer_array(s.coefficients)}, {"certificate", nullptr}};
  if (cert) j["certificate"] = json{{"s", cert->tail_start}, {"numerator", integer_array(cert->numerator)}, {"e", cert->e}};
  return j;
}

inline json verdict_to_json(const KoszulVerdict& v) {
  json j{{"verdict", v.koszul ? "koszul" : "not_koszul"}, {"witness", nullptr}, {"i_max", v.i_max}};
  if (v.witness) j["witness"] = json{{"j", v.witness->j}, {"element", v.witness->element}};
  return j;
}

}  // namespace gorlab
