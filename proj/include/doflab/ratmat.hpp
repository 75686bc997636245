// Copyright 2026 The doflab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace doflab {

/// Arbitrary-precision rational, always kept in canonical form
/// (positive denominator, gcd(|num|, den) = 1).
using Rational = mpq_class;
using RowVector = std::vector<Rational>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class BoundsError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Formats as "p/q", including "/1" for integers.
inline std::string toString(const Rational& q) {
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "p/q" or "p" (base 10). Throws std::invalid_argument on malformed
/// input or a zero denominator.
inline Rational parseRational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string num_text(text.substr(0, slash));
  const std::string den_text =
      slash == std::string_view::npos ? std::string("1") : std::string(text.substr(slash + 1));
  auto valid = [](const std::string& s, bool allow_sign) {
    std::size_t i = 0;
    if (allow_sign && !s.empty() && s[0] == '-') i = 1;
    if (i >= s.size()) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
  };
  if (!valid(num_text, true) || !valid(den_text, false)) {
    throw std::invalid_argument("malformed rational: '" + std::string(text) + "'");
  }
  mpz_class num(num_text, 10);
  mpz_class den(den_text, 10);
  if (den == 0) throw std::invalid_argument("zero denominator: '" + std::string(text) + "'");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

/// Dense row-major matrix over Q. Zero-row and zero-column shapes are legal.
class RationalMatrix {
 public:
  RationalMatrix() = default;

  RationalMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols) {}

  RationalMatrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
      throw DimensionError("entry count does not match rows x cols");
    }
  }

  static RationalMatrix fromRows(std::initializer_list<std::initializer_list<Rational>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    std::vector<Rational> entries;
    entries.reserve(r * c);
    for (const auto& row : rows) {
      if (row.size() != c) throw DimensionError("ragged row list");
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return RationalMatrix(r, c, std::move(entries));
  }

  static RationalMatrix fromRowVectors(std::span<const RowVector> rows, std::size_t cols) {
    RationalMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) throw DimensionError("row length does not match column count");
      std::copy(rows[i].begin(), rows[i].end(), m.entries_.begin() + static_cast<std::ptrdiff_t>(i * cols));
    }
    return m;
  }

  static RationalMatrix identity(std::size_t n) {
    RationalMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RationalMatrix diagonal(std::span<const Rational> diag) {
    RationalMatrix m(diag.size(), diag.size());
    for (std::size_t i = 0; i < diag.size(); ++i) m(i, i) = diag[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return entries_.empty(); }

  Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const Rational& at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) throw BoundsError("matrix index out of range");
    return (*this)(i, j);
  }

  RowVector row(std::size_t i) const {
    if (i >= rows_) throw BoundsError("row index out of range");
    const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(i * cols_);
    return RowVector(first, first + static_cast<std::ptrdiff_t>(cols_));
  }

  std::span<const Rational> entries() const { return entries_; }

  bool isZero() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Rational& q) { return q == 0; });
  }

  friend bool operator==(const RationalMatrix& a, const RationalMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> entries_;
};

// ---------------------------------------------------------------------------
// Shape operations

inline RationalMatrix hconcat(std::span<const RationalMatrix> blocks) {
  if (blocks.empty()) return {};
  const std::size_t rows = blocks.front().rows();
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw DimensionError("hconcat: blocks have different row counts");
    cols += b.cols();
  }
  RationalMatrix out(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    std::size_t offset = 0;
    for (const auto& b : blocks) {
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, offset + j) = b(i, j);
      offset += b.cols();
    }
  }
  return out;
}

inline RationalMatrix hconcat(std::initializer_list<RationalMatrix> blocks) {
  return hconcat(std::span<const RationalMatrix>(blocks.begin(), blocks.size()));
}

inline RationalMatrix vconcat(std::span<const RationalMatrix> blocks) {
  if (blocks.empty()) return {};
  const std::size_t cols = blocks.front().cols();
  std::size_t rows = 0;
  for (const auto& b : blocks) {
    if (b.cols() != cols) throw DimensionError("vconcat: blocks have different column counts");
    rows += b.rows();
  }
  std::vector<Rational> entries;
  entries.reserve(rows * cols);
  for (const auto& b : blocks) entries.insert(entries.end(), b.entries().begin(), b.entries().end());
  return RationalMatrix(rows, cols, std::move(entries));
}

inline RationalMatrix vconcat(std::initializer_list<RationalMatrix> blocks) {
  return vconcat(std::span<const RationalMatrix>(blocks.begin(), blocks.size()));
}

inline RationalMatrix appendRow(const RationalMatrix& m, std::span<const Rational> v) {
  if (v.size() != m.cols()) throw DimensionError("appendRow: vector length does not match column count");
  std::vector<Rational> entries(m.entries().begin(), m.entries().end());
  entries.insert(entries.end(), v.begin(), v.end());
  return RationalMatrix(m.rows() + 1, m.cols(), std::move(entries));
}

/// Rows at the given 0-based indices, taken in ascending order.
inline RationalMatrix rowSubmatrix(const RationalMatrix& m, std::span<const std::size_t> indices) {
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  RationalMatrix out(sorted.size(), m.cols());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (sorted[i] >= m.rows()) throw BoundsError("rowSubmatrix: row index out of range");
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(sorted[i], j);
  }
  return out;
}

/// Columns at the given 0-based indices, taken in ascending order.
inline RationalMatrix columnSubmatrix(const RationalMatrix& m, std::span<const std::size_t> indices) {
  std::vector<std::size_t> sorted(indices.begin(), indices.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  RationalMatrix out(m.rows(), sorted.size());
  for (std::size_t j = 0; j < sorted.size(); ++j) {
    if (sorted[j] >= m.cols()) throw BoundsError("columnSubmatrix: column index out of range");
    for (std::size_t i = 0; i < m.rows(); ++i) out(i, j) = m(i, sorted[j]);
  }
  return out;
}

inline RationalMatrix transpose(const RationalMatrix& m) {
  RationalMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = m(i, j);
  return out;
}

inline RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("multiply: inner dimensions differ");
  RationalMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Rational& aik = a(i, k);
      if (aik == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

/// Row i of `m` scaled by diag[i]; equivalent to diagonal(diag) * m.
inline RationalMatrix scaleRows(std::span<const Rational> diag, const RationalMatrix& m) {
  if (diag.size() != m.rows()) throw DimensionError("scaleRows: diagonal length does not match rows");
  RationalMatrix out = m;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) *= diag[i];
  return out;
}

// ---------------------------------------------------------------------------
// Elimination

namespace detail {

/// Integer matrix with each row of `m` multiplied by the lcm of its
/// denominators. Row scaling by nonzero factors preserves rank.
inline std::vector<mpz_class> clearDenominators(const RationalMatrix& m) {
  std::vector<mpz_class> out(m.rows() * m.cols());
  mpz_class scale;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    scale = 1;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), m(i, j).get_den_mpz_t());
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Rational& q = m(i, j);
      mpz_class& dst = out[i * m.cols() + j];
      mpz_divexact(dst.get_mpz_t(), scale.get_mpz_t(), q.get_den_mpz_t());
      dst *= q.get_num();
    }
  }
  return out;
}

}  // namespace detail

/// Exact rank over Q by fraction-free (Bareiss) elimination with column
/// skipping. After k pivots every trailing entry is a (k+1)-minor of the
/// cleared integer matrix, so each division by the previous pivot is exact.
inline std::size_t rank(const RationalMatrix& m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  if (rows == 0 || cols == 0) return 0;
  std::vector<mpz_class> a = detail::clearDenominators(m);
  auto at = [&](std::size_t i, std::size_t j) -> mpz_class& { return a[i * cols + j]; };

  mpz_class prev = 1;
  mpz_class tmp;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && at(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r) {
      for (std::size_t j = c; j < cols; ++j) std::swap(at(pivot, j), at(r, j));
    }
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        mpz_mul(tmp.get_mpz_t(), at(r, c).get_mpz_t(), at(i, j).get_mpz_t());
        mpz_submul(tmp.get_mpz_t(), at(i, c).get_mpz_t(), at(r, j).get_mpz_t());
        mpz_divexact(at(i, j).get_mpz_t(), tmp.get_mpz_t(), prev.get_mpz_t());
      }
      at(i, c) = 0;
    }
    prev = at(r, c);
    ++r;
  }
  return r;
}

struct RowEchelon {
  RationalMatrix reduced;             // reduced row echelon form, same shape as input
  std::vector<std::size_t> pivots;    // pivot column of each nonzero row
};

/// Gauss-Jordan elimination over Q.
inline RowEchelon reducedRowEchelon(RationalMatrix m) {
  const std::size_t rows = m.rows();
  const std::size_t cols = m.cols();
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && m(pivot, c) == 0) ++pivot;
    if (pivot == rows) continue;
    if (pivot != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(pivot, j), m(r, j));
    }
    const Rational inv = 1 / m(r, c);
    for (std::size_t j = c; j < cols; ++j) m(r, j) *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || m(i, c) == 0) continue;
      const Rational f = m(i, c);
      for (std::size_t j = c; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

/// True iff v is a rational combination of the rows of m. The zero vector
/// lies in every row span, including that of a 0-row matrix.
inline bool rowspanContains(const RationalMatrix& m, std::span<const Rational> v) {
  if (v.size() != m.cols()) throw DimensionError("rowspanContains: vector length does not match column count");
  if (std::all_of(v.begin(), v.end(), [](const Rational& q) { return q == 0; })) return true;
  return rank(appendRow(m, v)) == rank(m);
}

/// Rows form a basis of {l : l^T m = 0}; the row count is m.rows() - rank(m).
inline RationalMatrix leftNullspaceBasis(const RationalMatrix& m) {
  // Right nullspace of m^T, read off the free columns of its RREF.
  const RowEchelon echelon = reducedRowEchelon(transpose(m));
  const std::size_t n = m.rows();
  std::vector<bool> is_pivot(n, false);
  for (std::size_t p : echelon.pivots) is_pivot[p] = true;

  std::vector<RowVector> basis;
  for (std::size_t free = 0; free < n; ++free) {
    if (is_pivot[free]) continue;
    RowVector l(n);
    l[free] = 1;
    for (std::size_t i = 0; i < echelon.pivots.size(); ++i) {
      l[echelon.pivots[i]] = -echelon.reduced(i, free);
    }
    basis.push_back(std::move(l));
  }
  return RationalMatrix::fromRowVectors(basis, n);
}

/// dim(Proj_{colspan(b)^perp} colspan(a)) computed as rank[a b] - rank[b];
/// no orthogonalization is performed.
inline std::size_t projDim(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("projDim: row counts differ");
  return rank(hconcat({a, b})) - rank(b);
}

}  // namespace doflab
