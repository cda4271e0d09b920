#pragma once
// Dense exact linear algebra over prime fields GF(p), p < 2^16.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gorlab/error.hpp"

namespace gorlab {

using Residue = std::uint32_t;
using Vec = std::vector<Residue>;

class PrimeField {
 public:
  explicit PrimeField(std::uint32_t p) : p_(p) {
    if (p < 2 || p >= (1u << 16)) fail(ErrorKind::NotPrime, "modulus " + std::to_string(p) + " outside [2, 65536)");
    for (std::uint32_t d = 2; d * d <= p; ++d)
      if (p % d == 0) fail(ErrorKind::NotPrime, std::to_string(p) + " is divisible by " + std::to_string(d));
  }

  std::uint32_t p() const noexcept { return p_; }

  Residue reduce(std::int64_t a) const noexcept {
    auto r = a % static_cast<std::int64_t>(p_);
    return static_cast<Residue>(r < 0 ? r + p_ : r);
  }
  Residue add(Residue a, Residue b) const noexcept { return (a + b) % p_; }
  Residue sub(Residue a, Residue b) const noexcept { return (a + p_ - b) % p_; }
  Residue neg(Residue a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const noexcept { return (a * b) % p_; }
  Residue inv(Residue a) const {
    if (a % p_ == 0) fail(ErrorKind::ShapeMismatch, "inverse of zero");
    // Fermat: a^(p-2)
    Residue result = 1, base = a % p_;
    for (std::uint32_t k = p_ - 2; k; k >>= 1) {
      if (k & 1) result = mul(result, base);
      base = mul(base, base);
    }
    return result;
  }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint32_t p_;
};

/// Row-major dense matrix with entries in [0, p).
class FMatrix {
 public:
  FMatrix() : FMatrix(PrimeField(2), 0, 0) {}
  FMatrix(PrimeField f, std::size_t rows, std::size_t cols)
      : field_(f), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  FMatrix(PrimeField f, std::size_t rows, std::size_t cols, Vec entries)
      : field_(f), rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows * cols) fail(ErrorKind::ShapeMismatch, "entry count does not match shape");
    for (auto& x : data_) x %= f.p();
  }

  static FMatrix from_rows(PrimeField f, const std::vector<std::vector<std::int64_t>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r ? rows.front().size() : 0;
    FMatrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) fail(ErrorKind::ShapeMismatch, "ragged rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = f.reduce(rows[i][j]);
    }
    return m;
  }

  static FMatrix identity(PrimeField f, std::size_t n) {
    FMatrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  const PrimeField& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const Vec& data() const noexcept { return data_; }

  Residue& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Residue operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<Residue> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const Residue> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Vec column(std::size_t j) const {
    Vec v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Residue x) { return x == 0; });
  }

  FMatrix transpose() const {
    FMatrix t(field_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const FMatrix& o) const {
    return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  PrimeField field_;
  std::size_t rows_, cols_;
  Vec data_;
};

namespace detail {

inline void check_same_field(const PrimeField& a, const PrimeField& b) {
  if (!(a == b)) fail(ErrorKind::ShapeMismatch, "matrices over different fields");
}

// acc[j] += m * src[j]; caller guarantees no 64-bit overflow.
inline void axpy_acc(std::uint64_t* acc, const Residue* src, std::size_t n, std::uint64_t m) {
  for (std::size_t j = 0; j < n; ++j) acc[j] += m * src[j];
}

}  // namespace detail

inline FMatrix operator*(const FMatrix& a, const FMatrix& b) {
  detail::check_same_field(a.field(), b.field());
  if (a.cols() != b.rows()) fail(ErrorKind::ShapeMismatch, "product shape");
  const auto p = a.field().p();
  FMatrix c(a.field(), a.rows(), b.cols());
  std::vector<std::uint64_t> acc(b.cols());
  // Each term < 2^32; flush every 2^31 terms is far beyond any shape used here.
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::fill(acc.begin(), acc.end(), 0);
    for (std::size_t k = 0; k < a.cols(); ++k)
      if (auto x = a(i, k)) detail::axpy_acc(acc.data(), b.row(k).data(), b.cols(), x);
    for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) = static_cast<Residue>(acc[j] % p);
  }
  return c;
}

inline FMatrix operator+(const FMatrix& a, const FMatrix& b) {
  detail::check_same_field(a.field(), b.field());
  if (a.rows() != b.rows() || a.cols() != b.cols()) fail(ErrorKind::ShapeMismatch, "sum shape");
  FMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field().add(a(i, j), b(i, j));
  return c;
}

inline FMatrix scale(const FMatrix& a, Residue s) {
  FMatrix c = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) c(i, j) = a.field().mul(a(i, j), s);
  return c;
}

inline Vec matvec(const FMatrix& a, std::span<const Residue> v) {
  if (v.size() != a.cols()) fail(ErrorKind::ShapeMismatch, "matrix-vector shape");
  const auto p = a.field().p();
  Vec out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::uint64_t s = 0;
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s += static_cast<std::uint64_t>(r[j]) * v[j];
    out[i] = static_cast<Residue>(s % p);
  }
  return out;
}

/// Stack matrices with equal column counts on top of each other.
inline FMatrix vstack(const std::vector<const FMatrix*>& parts, PrimeField f, std::size_t cols) {
  std::size_t rows = 0;
  for (auto* m : parts) {
    if (m->cols() != cols) fail(ErrorKind::ShapeMismatch, "vstack column mismatch");
    rows += m->rows();
  }
  FMatrix out(f, rows, cols);
  std::size_t r0 = 0;
  for (auto* m : parts) {
    std::copy(m->data().begin(), m->data().end(), out.row(r0).data());
    r0 += m->rows();
  }
  return out;
}

inline FMatrix matrix_from_columns(PrimeField f, std::size_t rows, const std::vector<Vec>& cols) {
  FMatrix m(f, rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) fail(ErrorKind::ShapeMismatch, "column length");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

inline FMatrix matrix_from_rows(PrimeField f, std::size_t cols, const std::vector<Vec>& rows) {
  FMatrix m(f, rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail(ErrorKind::ShapeMismatch, "row length");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).data());
  }
  return m;
}

/// Incrementally maintained row echelon basis of a subspace of GF(p)^n.
///
/// Rows are kept sorted by pivot column, normalized (pivot entry 1) and
/// zero left of their pivot. Reduction against the basis accumulates in
/// 64-bit lanes and reduces once per pivot, which keeps the hot loop a
/// plain multiply-add.
class EchelonForm {
 public:
  EchelonForm(PrimeField f, std::size_t n) : field_(f), n_(n), row_of_col_(n, -1), acc_(n) {}

  std::size_t dim() const noexcept { return n_; }
  std::size_t rank() const noexcept { return rows_.size(); }
  const PrimeField& field() const noexcept { return field_; }

  /// Residual of v modulo the span (zero at every pivot column).
  Vec reduce(std::span<const Residue> v) const {
    Vec out(n_);
    reduce_into(v, out);
    return out;
  }

  bool contains(std::span<const Residue> v) const {
    Vec r = reduce(v);
    return std::all_of(r.begin(), r.end(), [](Residue x) { return x == 0; });
  }

  /// Adds v to the span; returns false if v was already in it.
  bool insert(std::span<const Residue> v) {
    Vec w(n_);
    reduce_into(v, w);
    std::size_t c = 0;
    while (c < n_ && w[c] == 0) ++c;
    if (c == n_) return false;
    const Residue s = field_.inv(w[c]);
    const auto p = field_.p();
    for (std::size_t j = c; j < n_; ++j) w[j] = (w[j] * s) % p;
    auto pos = std::lower_bound(pivots_.begin(), pivots_.end(), c) - pivots_.begin();
    pivots_.insert(pivots_.begin() + pos, c);
    rows_.insert(rows_.begin() + pos, std::move(w));
    reduced_ = false;
    for (std::size_t k = 0; k < pivots_.size(); ++k) row_of_col_[pivots_[k]] = static_cast<std::int64_t>(k);
    return true;
  }

  const std::vector<std::size_t>& pivots() const noexcept { return pivots_; }

  /// Brings the stored rows to reduced row echelon form (idempotent).
  void make_reduced() {
    if (reduced_) return;
    const auto p = field_.p();
    for (std::size_t h = rows_.size(); h-- > 0;) {
      auto& row = rows_[h];
      bool touched = false;
      std::fill(acc_.begin(), acc_.end(), 0);
      for (std::size_t j = pivots_[h]; j < n_; ++j) acc_[j] = row[j];
      for (std::size_t k = h + 1; k < rows_.size(); ++k) {
        const Residue c = row[pivots_[k]];  // lower rows are already reduced
        if (c == 0) continue;
        touched = true;
        detail::axpy_acc(acc_.data() + pivots_[k], rows_[k].data() + pivots_[k], n_ - pivots_[k], p - c);
      }
      if (touched)
        for (std::size_t j = pivots_[h]; j < n_; ++j) row[j] = static_cast<Residue>(acc_[j] % p);
    }
    reduced_ = true;
  }

  std::span<const Residue> row(std::size_t k) const { return rows_[k]; }

  /// Basis rows as a matrix (RREF after make_reduced()).
  FMatrix basis_matrix() const {
    FMatrix m(field_, rows_.size(), n_);
    for (std::size_t k = 0; k < rows_.size(); ++k) std::copy(rows_[k].begin(), rows_[k].end(), m.row(k).data());
    return m;
  }

  /// Coordinates of v with respect to the stored rows, if v lies in the span.
  /// Requires reduced form.
  std::optional<Vec> coordinates(std::span<const Residue> v) {
    make_reduced();
    if (!contains(v)) return std::nullopt;
    Vec c(rows_.size());
    for (std::size_t k = 0; k < rows_.size(); ++k) c[k] = v[pivots_[k]];
    return c;
  }

  std::vector<std::size_t> free_columns() const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < n_; ++j)
      if (row_of_col_[j] < 0) out.push_back(j);
    return out;
  }

 private:
  void reduce_into(std::span<const Residue> v, Vec& out) const {
    if (v.size() != n_) fail(ErrorKind::ShapeMismatch, "vector length does not match echelon dimension");
    const auto p = field_.p();
    for (std::size_t j = 0; j < n_; ++j) acc_[j] = v[j];
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::size_t c0 = pivots_[k];
      const Residue c = static_cast<Residue>(acc_[c0] % p);
      if (c == 0) {
        acc_[c0] = 0;
        continue;
      }
      detail::axpy_acc(acc_.data() + c0, rows_[k].data() + c0, n_ - c0, p - c);
    }
    for (std::size_t j = 0; j < n_; ++j) out[j] = static_cast<Residue>(acc_[j] % p);
  }

  PrimeField field_;
  std::size_t n_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<std::int64_t> row_of_col_;
  mutable std::vector<std::uint64_t> acc_;
  bool reduced_ = true;
};

struct RrefResult {
  FMatrix reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank;
};

inline EchelonForm row_echelon(const FMatrix& a) {
  EchelonForm e(a.field(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) e.insert(a.row(i));
  e.make_reduced();
  return e;
}

/// Reduced row echelon form; zero rows are kept at the bottom so the shape is preserved.
inline RrefResult rref(const FMatrix& a) {
  auto e = row_echelon(a);
  FMatrix r(a.field(), a.rows(), a.cols());
  for (std::size_t k = 0; k < e.rank(); ++k) {
    auto src = e.row(k);
    std::copy(src.begin(), src.end(), r.row(k).data());
  }
  return {std::move(r), e.pivots(), e.rank()};
}

inline std::size_t rank(const FMatrix& a) {
  // Eliminate along the shorter side.
  if (a.rows() > a.cols()) return row_echelon(a.transpose()).rank();
  EchelonForm e(a.field(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) e.insert(a.row(i));
  return e.rank();
}

/// Kernel basis from a reduced echelon form: one vector per free column in
/// increasing order, with that free variable set to 1 and the others 0.
inline std::vector<Vec> kernel_vectors(EchelonForm& e) {
  e.make_reduced();
  const auto& f = e.field();
  std::vector<Vec> out;
  for (std::size_t fc : e.free_columns()) {
    Vec v(e.dim(), 0);
    v[fc] = 1;
    for (std::size_t k = 0; k < e.rank(); ++k) v[e.pivots()[k]] = f.neg(e.row(k)[fc]);
    out.push_back(std::move(v));
  }
  return out;
}

/// Rows of the result form a basis of {v : A v = 0}.
inline FMatrix kernel_basis(const FMatrix& a) {
  auto e = row_echelon(a);
  return matrix_from_rows(a.field(), a.cols(), kernel_vectors(e));
}

/// Some x with A x = b (free variables zero), or nullopt when inconsistent.
inline std::optional<Vec> solve(const FMatrix& a, std::span<const Residue> b) {
  if (b.size() != a.rows()) fail(ErrorKind::ShapeMismatch, "right-hand side length");
  FMatrix aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    std::copy(a.row(i).begin(), a.row(i).end(), aug.row(i).data());
    aug(i, a.cols()) = b[i] % a.field().p();
  }
  auto r = rref(aug);
  Vec x(a.cols(), 0);
  for (std::size_t k = 0; k < r.rank; ++k) {
    if (r.pivots[k] == a.cols()) return std::nullopt;
    x[r.pivots[k]] = r.reduced(k, a.cols());
  }
  return x;
}

/// Factorization P A = R reused across many right-hand sides.
class LinearSolver {
 public:
  explicit LinearSolver(const FMatrix& a) : field_(a.field()), m_(a.rows()), n_(a.cols()), e_(a.field(), a.cols() + a.rows()) {
    Vec row(n_ + m_);
    for (std::size_t i = 0; i < m_; ++i) {
      std::fill(row.begin(), row.end(), 0);
      std::copy(a.row(i).begin(), a.row(i).end(), row.begin());
      row[n_ + i] = 1;
      e_.insert(row);
    }
    e_.make_reduced();
    for (std::size_t k = 0; k < e_.rank(); ++k)
      if (e_.pivots()[k] < n_) ++rank_;
  }

  std::size_t rank() const noexcept { return rank_; }

  std::optional<Vec> solve(std::span<const Residue> b) const {
    if (b.size() != m_) fail(ErrorKind::ShapeMismatch, "right-hand side length");
    const auto p = field_.p();
    // y = P b, where P is the identity block of the reduced augmented matrix.
    Vec x(n_, 0);
    for (std::size_t k = 0; k < e_.rank(); ++k) {
      auto row = e_.row(k);
      std::uint64_t s = 0;
      for (std::size_t i = 0; i < m_; ++i) s += static_cast<std::uint64_t>(row[n_ + i]) * b[i];
      const auto y = static_cast<Residue>(s % p);
      if (k < rank_) {
        x[e_.pivots()[k]] = y;
      } else if (y != 0) {
        return std::nullopt;
      }
    }
    return x;
  }

 private:
  PrimeField field_;
  std::size_t m_, n_;
  EchelonForm e_;
  std::size_t rank_ = 0;
};

/// Basis vectors e_j completing the span held in e to the whole space
/// (the free columns, in increasing order).
inline std::vector<Vec> complement_basis(EchelonForm& e) {
  std::vector<Vec> out;
  for (std::size_t fc : e.free_columns()) {
    Vec v(e.dim(), 0);
    v[fc] = 1;
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace gorlab
