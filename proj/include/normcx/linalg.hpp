// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "normcx/error.hpp"
#include "normcx/rational.hpp"

namespace normcx {

using RatVector = std::vector<Rational>;

inline RatVector zeros(std::size_t n) { return RatVector(n, Rational(0)); }

inline Rational dot(std::span<const Rational> a, std::span<const Rational> b) {
  Rational s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline RatVector operator+(const RatVector& a, const RatVector& b) {
  RatVector out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

inline RatVector operator-(const RatVector& a, const RatVector& b) {
  RatVector out(a);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

inline RatVector operator*(const Rational& s, const RatVector& v) {
  RatVector out(v);
  for (auto& x : out) x *= s;
  return out;
}

inline bool is_zero(const RatVector& v) {
  return std::all_of(v.begin(), v.end(),
                     [](const Rational& x) { return x.is_zero(); });
}

/// Dense row-major rational matrix.
class RatMatrix {
 public:
  RatMatrix() = default;
  RatMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  RatMatrix(std::initializer_list<std::initializer_list<Rational>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) {
        throw Error(ErrorKind::kInput, "ragged matrix literal");
      }
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static RatMatrix identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  static RatMatrix from_rows(const std::vector<RatVector>& rows) {
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    RatMatrix m(rows.size(), c);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) {
        throw Error(ErrorKind::kInput, "ragged matrix rows");
      }
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Rational& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  const Rational& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<const Rational> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  RatVector column(std::size_t j) const {
    RatVector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  /// Copy with column j replaced by v.
  RatMatrix with_column(std::size_t j, std::span<const Rational> v) const {
    RatMatrix out(*this);
    for (std::size_t i = 0; i < rows_; ++i) out(i, j) = v[i];
    return out;
  }

  RatMatrix transpose() const {
    RatMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    }
    return t;
  }

  bool symmetric() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = i + 1; j < cols_; ++j) {
        if ((*this)(i, j) != (*this)(j, i)) return false;
      }
    }
    return true;
  }

  friend bool operator==(const RatMatrix&, const RatMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

inline RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorKind::kBadDimension, "matrix product shape mismatch");
  }
  RatMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k).is_zero()) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  }
  return c;
}

inline RatVector operator*(const RatMatrix& a, std::span<const Rational> x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorKind::kBadDimension, "matrix-vector shape mismatch");
  }
  RatVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
  return y;
}

inline RatVector operator*(const RatMatrix& a, const RatVector& x) {
  return a * std::span<const Rational>(x);
}

/// Exact determinant. Rows are scaled to integers, then reduced with
/// Bareiss fraction-free elimination; every intermediate division is exact.
inline Rational det(const RatMatrix& m) {
  if (!m.square()) {
    throw Error(ErrorKind::kNonSquare,
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const std::size_t n = m.rows();
  if (n == 0) return Rational(1);

  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  BigInt scale = 1;
  for (std::size_t i = 0; i < n; ++i) {
    BigInt l = 1;
    for (std::size_t j = 0; j < n; ++j) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).den().get_mpz_t());
    }
    scale *= l;
    for (std::size_t j = 0; j < n; ++j) {
      a[i][j] = m(i, j).num() * (l / m(i, j).den());
    }
  }

  int sign = 1;
  BigInt prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return Rational(0);
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        BigInt t = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
    }
    prev = a[k][k];
  }
  BigInt d = a[n - 1][n - 1];
  if (sign < 0) d = -d;
  return Rational(d, scale);
}

/// Row-reduces a copy of m; returns the rank.
inline std::size_t rank(const RatMatrix& m) {
  RatMatrix a(m);
  std::size_t r = 0;
  for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
    std::size_t p = r;
    while (p < a.rows() && a(p, c).is_zero()) ++p;
    if (p == a.rows()) continue;
    if (p != r) {
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(r, j));
    }
    for (std::size_t i = r + 1; i < a.rows(); ++i) {
      if (a(i, c).is_zero()) continue;
      const Rational f = a(i, c) / a(r, c);
      for (std::size_t j = c; j < a.cols(); ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

/// Rank of a family of vectors (as rows).
inline std::size_t rank(const std::vector<RatVector>& vectors) {
  if (vectors.empty()) return 0;
  return rank(RatMatrix::from_rows(vectors));
}

/// Exact solution of m x = rhs by Gauss-Jordan elimination.
inline RatVector solve(const RatMatrix& m, std::span<const Rational> rhs) {
  if (!m.square()) {
    throw Error(ErrorKind::kNonSquare,
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const std::size_t n = m.rows();
  if (rhs.size() != n) {
    throw Error(ErrorKind::kBadDimension, "right-hand side length mismatch");
  }
  RatMatrix a(n, n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m(i, j);
    a(i, n) = rhs[i];
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a(p, c).is_zero()) ++p;
    if (p == n) throw Error(ErrorKind::kSingular, "matrix is singular");
    if (p != c) {
      for (std::size_t j = 0; j <= n; ++j) std::swap(a(p, j), a(c, j));
    }
    const Rational inv = Rational(1) / a(c, c);
    for (std::size_t j = c; j <= n; ++j) a(c, j) *= inv;
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c || a(i, c).is_zero()) continue;
      const Rational f = a(i, c);
      for (std::size_t j = c; j <= n; ++j) a(i, j) -= f * a(c, j);
    }
  }
  RatVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = a(i, n);
  return x;
}

inline RatVector solve(const RatMatrix& m, const RatVector& rhs) {
  return solve(m, std::span<const Rational>(rhs));
}

/// Cramer quotient det(m with column i replaced by rhs) / det(m).
inline Rational cramer_quotient(const RatMatrix& m,
                                std::span<const Rational> rhs,
                                std::size_t i) {
  const Rational d = det(m);
  if (d.is_zero()) throw Error(ErrorKind::kSingular, "matrix is singular");
  return det(m.with_column(i, rhs)) / d;
}

/// Coefficients c with det(m with column i replaced by x) = sum_r c[r] x[r].
/// These are the cofactors of column i (cofactor expansion along it).
inline RatVector column_cofactors(const RatMatrix& m, std::size_t i) {
  if (!m.square()) {
    throw Error(ErrorKind::kNonSquare,
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  const std::size_t n = m.rows();
  RatVector c(n);
  for (std::size_t r = 0; r < n; ++r) {
    RatMatrix minor(n - 1, n - 1);
    for (std::size_t a = 0, mi = 0; a < n; ++a) {
      if (a == r) continue;
      for (std::size_t b = 0, mj = 0; b < n; ++b) {
        if (b == i) continue;
        minor(mi, mj++) = m(a, b);
      }
      ++mi;
    }
    c[r] = det(minor);
    if ((r + i) % 2 == 1) c[r] = -c[r];
  }
  return c;
}

/// Sylvester's criterion, exact.
inline bool is_positive_definite(const RatMatrix& m) {
  if (!m.square()) {
    throw Error(ErrorKind::kNonSquare,
                std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  if (!m.symmetric()) return false;
  for (std::size_t k = 1; k <= m.rows(); ++k) {
    RatMatrix lead(k, k);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) lead(i, j) = m(i, j);
    }
    if (det(lead).sign() <= 0) return false;
  }
  return true;
}

/// Decides whether {x >= 0 : a x = b} is nonempty, exactly, with a phase-one
/// simplex under Bland's rule. Returns a witness when feasible.
inline std::optional<RatVector> nonnegative_solution(const RatMatrix& a,
                                                     const RatVector& b) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  if (b.size() != m) {
    throw Error(ErrorKind::kBadDimension, "right-hand side length mismatch");
  }
  // Tableau columns: n structural, m artificial, rhs.
  const std::size_t width = n + m + 1;
  RatMatrix t(m + 1, width);
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    const bool flip = b[i].sign() < 0;
    for (std::size_t j = 0; j < n; ++j) t(i, j) = flip ? -a(i, j) : a(i, j);
    t(i, n + i) = 1;
    t(i, n + m) = flip ? -b[i] : b[i];
    basis[i] = n + i;
  }
  // Objective row holds reduced costs of minimizing the artificial sum.
  for (std::size_t j = 0; j < width; ++j) {
    if (j >= n && j < n + m) continue;
    Rational s;
    for (std::size_t i = 0; i < m; ++i) s -= t(i, j);
    t(m, j) = s;
  }

  while (true) {
    std::size_t enter = width;
    for (std::size_t j = 0; j + 1 < width; ++j) {
      if (t(m, j).sign() < 0) {
        enter = j;
        break;
      }
    }
    if (enter == width) break;
    std::size_t leave = m;
    Rational best;
    for (std::size_t i = 0; i < m; ++i) {
      if (t(i, enter).sign() <= 0) continue;
      const Rational ratio = t(i, width - 1) / t(i, enter);
      if (leave == m || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    if (leave == m) break;  // unbounded direction; cannot happen in phase one
    const Rational inv = Rational(1) / t(leave, enter);
    for (std::size_t j = 0; j < width; ++j) t(leave, j) *= inv;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave || t(i, enter).is_zero()) continue;
      const Rational f = t(i, enter);
      for (std::size_t j = 0; j < width; ++j) t(i, j) -= f * t(leave, j);
    }
    basis[leave] = enter;
  }

  if (!t(m, width - 1).is_zero()) return std::nullopt;
  RatVector x = zeros(n);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) x[basis[i]] = t(i, width - 1);
  }
  return x;
}

}  // namespace normcx
