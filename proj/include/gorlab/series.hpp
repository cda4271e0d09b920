#pragma once
// Truncated integer generating series and rationality certificates for the
// denominator 1 - e t + t^2.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "gorlab/error.hpp"
#include "gorlab/homology.hpp"
#include "gorlab/module.hpp"
#include "gorlab/resolution.hpp"

namespace gorlab {

using BigInt = boost::multiprecision::cpp_int;

enum class SeriesKind { Hilbert, Poincare, TorNu, TorLength, ExtNu, ExtLength };

inline const char* to_string(SeriesKind k) {
  switch (k) {
    case SeriesKind::Hilbert: return "hilbert";
    case SeriesKind::Poincare: return "poincare";
    case SeriesKind::TorNu: return "tor_nu";
    case SeriesKind::TorLength: return "tor_length";
    case SeriesKind::ExtNu: return "ext_nu";
    case SeriesKind::ExtLength: return "ext_length";
  }
  return "?";
}

inline SeriesKind series_kind_from_string(const std::string& s) {
  for (auto k : {SeriesKind::Hilbert, SeriesKind::Poincare, SeriesKind::TorNu, SeriesKind::TorLength, SeriesKind::ExtNu,
                 SeriesKind::ExtLength})
    if (s == to_string(k)) return k;
  fail(ErrorKind::SchemaError, "unknown series kind '" + s + "'");
}

struct TruncatedIntegerSeries {
  SeriesKind kind = SeriesKind::Poincare;
  std::vector<BigInt> coefficients;  // c_0..c_n

  std::size_t truncation() const { return coefficients.empty() ? 0 : coefficients.size() - 1; }
  const BigInt& operator[](std::size_t i) const { return coefficients.at(i); }
  bool operator==(const TruncatedIntegerSeries&) const = default;

  template <class Seq>
  static TruncatedIntegerSeries from(SeriesKind kind, const Seq& values) {
    TruncatedIntegerSeries s{kind, {}};
    for (const auto& v : values) s.coefficients.emplace_back(v);
    return s;
  }
};

struct RationalityCertificate {
  std::size_t e = 0;
  std::size_t tail_start = 0;      // s
  std::vector<BigInt> numerator;   // q(t), degree <= s
  std::size_t truncation = 0;      // n
  std::size_t margin = 0;          // n - s
};

struct CertifyOutcome {
  std::optional<RationalityCertificate> certificate;
  std::size_t tail_start = 0;
  std::optional<std::size_t> first_violation;  // smallest i >= 1 with c_{i+1} != e c_i - c_{i-1}
  std::optional<std::size_t> last_violation;   // largest such i >= 0 (c_{-1} = 0)

  bool ok() const { return certificate.has_value(); }
};

/// (1 - e t + t^2) · c, truncated at the length of c.
inline std::vector<BigInt> times_denominator(const std::vector<BigInt>& c, std::size_t e) {
  std::vector<BigInt> d(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    d[k] = c[k];
    if (k >= 1) d[k] -= BigInt(e) * c[k - 1];
    if (k >= 2) d[k] += c[k - 2];
  }
  return d;
}

/// Coefficients of num / den through degree n; den[0] must be ±1.
inline std::vector<BigInt> divide_truncated(const std::vector<BigInt>& num, const std::vector<BigInt>& den, std::size_t n) {
  if (den.empty() || (den[0] != 1 && den[0] != -1)) fail(ErrorKind::ShapeMismatch, "denominator must have unit constant term");
  std::vector<BigInt> q(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    BigInt v = k < num.size() ? num[k] : BigInt(0);
    for (std::size_t j = 1; j < den.size() && j <= k; ++j) v -= den[j] * q[k - j];
    q[k] = den[0] == 1 ? v : BigInt(-v);
  }
  return q;
}

/// q(t) / (1 - e t + t^2) through degree n.
inline std::vector<BigInt> expand_rational(const std::vector<BigInt>& q, std::size_t e, std::size_t n) {
  return divide_truncated(q, {BigInt(1), -BigInt(e), BigInt(1)}, n);
}

inline CertifyOutcome try_certify_rational(const TruncatedIntegerSeries& s, std::size_t e, std::size_t min_margin = 5) {
  const std::size_t n = s.truncation();
  if (s.coefficients.size() < 6) fail(ErrorKind::InsufficientDegree, "certification needs truncation n >= 5");
  auto d = times_denominator(s.coefficients, e);
  CertifyOutcome out;
  // the recurrence at index i is d_{i+1} = 0
  for (std::size_t i = 0; i + 1 <= n; ++i) {
    if (d[i + 1] == 0) continue;
    if (i >= 1 && !out.first_violation) out.first_violation = i;
    out.last_violation = i;
  }
  out.tail_start = out.last_violation ? *out.last_violation + 1 : 0;
  if (out.tail_start <= n && n - out.tail_start >= min_margin) {
    RationalityCertificate c;
    c.e = e;
    c.tail_start = out.tail_start;
    c.truncation = n;
    c.margin = n - out.tail_start;
    c.numerator.assign(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(out.tail_start + 1));
    while (c.numerator.size() > 1 && c.numerator.back() == 0) c.numerator.pop_back();
    out.certificate = std::move(c);
  }
  return out;
}

inline RationalityCertificate certify_rational(const TruncatedIntegerSeries& s, std::size_t e, std::size_t min_margin = 5) {
  auto out = try_certify_rational(s, e, min_margin);
  if (!out.ok()) {
    std::string msg = std::string(to_string(s.kind)) + " series: recurrence holds only from index " +
                      std::to_string(out.tail_start) + " through " + std::to_string(s.truncation() - 1) + " (margin " +
                      std::to_string(min_margin) + " required)";
    if (out.first_violation) msg += "; first violation at index " + std::to_string(*out.first_violation);
    if (out.last_violation) msg += "; largest violation at index " + std::to_string(*out.last_violation);
    fail(ErrorKind::InsufficientDegree, msg);
  }
  return *out.certificate;
}

/// Reconstructs the certified series and compares it with the input.
inline bool certificate_reproduces(const RationalityCertificate& c, const TruncatedIntegerSeries& s) {
  return expand_rational(c.numerator, c.e, s.truncation()) == s.coefficients;
}

inline TruncatedIntegerSeries hilbert_series(const FiniteModule& m) {
  return TruncatedIntegerSeries::from(SeriesKind::Hilbert, hilbert_layers(m));
}

inline TruncatedIntegerSeries poincare_series(const FiniteModule& m, std::size_t n, ResolutionLimits lim = {}) {
  return TruncatedIntegerSeries::from(SeriesKind::Poincare, betti_numbers(m, n, lim));
}

enum class SeriesMode { Nu, Length };

inline TruncatedIntegerSeries series_of(const TorTable& t, SeriesKind kind, SeriesMode mode) {
  TruncatedIntegerSeries s{kind, {}};
  for (auto& d : t.degrees) s.coefficients.emplace_back(mode == SeriesMode::Nu ? d.nu : d.length);
  return s;
}

inline TruncatedIntegerSeries tor_series(const FiniteModule& m, const FiniteModule& n, std::size_t top, SeriesMode mode,
                                         ResolutionLimits lim = {}) {
  return series_of(tor(m, n, top, false, lim), mode == SeriesMode::Nu ? SeriesKind::TorNu : SeriesKind::TorLength, mode);
}

inline TruncatedIntegerSeries ext_series(const FiniteModule& m, const FiniteModule& n, std::size_t top, SeriesMode mode,
                                         ResolutionLimits lim = {}) {
  return series_of(ext(m, n, top, false, lim), mode == SeriesMode::Nu ? SeriesKind::ExtNu : SeriesKind::ExtLength, mode);
}

/// H_M(-t) · P_N(t) through degree n.
inline std::vector<BigInt> alternating_product(const std::vector<std::size_t>& hilbert, const std::vector<std::size_t>& betti) {
  std::vector<BigInt> out(betti.size());
  for (std::size_t i = 0; i < betti.size(); ++i)
    for (std::size_t j = 0; j < hilbert.size() && j <= i; ++j) {
      BigInt term = BigInt(hilbert[j]) * betti[i - j];
      if (j % 2) out[i] -= term;
      else out[i] += term;
    }
  return out;
}

struct SeriesIdentityRow {
  std::size_t degree = 0;
  BigInt expected;        // coefficient of H_M(-t) P_N(t)
  std::size_t length = 0;
  std::size_t nu = 0;
  std::size_t induced_rank = 0;  // rank Tor_i(ι_M, N)
  bool length_equal = false;
  bool nu_equal = false;
};

struct SeriesIdentityReport {
  std::vector<SeriesIdentityRow> rows;  // degrees 0..n
  bool vanishing = false;       // (1) every induced rank is 0
  bool length_identity = false; // (2)
  bool nu_identity = false;     // (3)
  std::optional<std::size_t> first_length_failure;

  bool consistent() const { return vanishing == length_identity && (!vanishing || nu_identity); }
};

/// Same, with N given by a resolution of length at least top + 1.
inline SeriesIdentityReport series_identity_check(const FiniteModule& m, const MinimalFreeResolution& g, std::size_t top,
                                                  ResolutionLimits lim = {}) {
  require_radical_square_zero(m);
  auto t = tor_from_resolution(g, m, top, false, lim);
  auto inc = radical_submodule(m);
  auto ranks = tor_induced_by_second(inc.map, g, 0, top, lim);
  std::vector<std::size_t> betti(g.betti.begin(), g.betti.begin() + static_cast<std::ptrdiff_t>(top + 1));
  auto expected = alternating_product(hilbert_layers(m), betti);
  SeriesIdentityReport rep;
  rep.vanishing = rep.length_identity = rep.nu_identity = true;
  for (std::size_t i = 0; i <= top; ++i) {
    SeriesIdentityRow row;
    row.degree = i;
    row.expected = expected[i];
    row.length = t[i].length;
    row.nu = t[i].nu;
    row.induced_rank = ranks[i].rank;
    row.length_equal = BigInt(row.length) == row.expected;
    row.nu_equal = BigInt(row.nu) == row.expected;
    rep.vanishing = rep.vanishing && row.induced_rank == 0;
    rep.length_identity = rep.length_identity && row.length_equal;
    rep.nu_identity = rep.nu_identity && row.nu_equal;
    if (!row.length_equal && !rep.first_length_failure) rep.first_length_failure = i;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

inline SeriesIdentityReport series_identity_check(const FiniteModule& m, const FiniteModule& n, std::size_t top,
                                                  ResolutionLimits lim = {}) {
  require_radical_square_zero(m);
  return series_identity_check(m, resolve(n, top + 1, {true, lim}), top, lim);
}

/// H_M(-t) / H_R(-t) through degree n.
inline std::vector<BigInt> koszul_prediction(const FiniteModule& m, std::size_t n) {
  std::vector<BigInt> num;
  auto h = hilbert_layers(m);
  for (std::size_t j = 0; j < h.size(); ++j) num.push_back(j % 2 ? -BigInt(h[j]) : BigInt(h[j]));
  auto hr = hilbert_layers(FiniteModule::free(m.ring(), 1));
  std::vector<BigInt> den;
  for (std::size_t j = 0; j < hr.size(); ++j) den.push_back(j % 2 ? -BigInt(hr[j]) : BigInt(hr[j]));
  return divide_truncated(num, den, n);
}

}  // namespace gorlab
