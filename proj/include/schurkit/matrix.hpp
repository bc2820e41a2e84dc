// Copyright 2026 The schurkit Authors
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

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace schurkit {

using cplx = std::complex<double>;

/// Thrown on precondition violations and numeric failures throughout the
/// library.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

namespace defaults {
inline constexpr double herm_tol = 1e-10;    // relative Hermitian-symmetry band
inline constexpr double solver_tol = 1e-8;   // absolute-plus-relative solver target
inline constexpr double lambda_support_rel = 1e-9;   // lambda_j <= rel*Tr counts as zero
inline constexpr double column_support_rel = 1e-7;   // matching column mass bound
}  // namespace defaults

/// Dense row-major complex matrix. The universal value type of the library;
/// immutable in spirit (operations return fresh matrices).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), entries_(rows * cols, cplx{0.0, 0.0}) {
    if (rows == 0 || cols == 0) throw Error("Matrix: dimensions must be positive");
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Matrix diag(const std::vector<double>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  static Matrix diag(const std::vector<cplx>& d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  /// Row-wise construction, mostly for tests and fixtures.
  static Matrix from_rows(std::initializer_list<std::initializer_list<cplx>> rows) {
    if (rows.size() == 0) throw Error("Matrix::from_rows: empty");
    const std::size_t nc = rows.begin()->size();
    Matrix m(rows.size(), nc);
    std::size_t i = 0;
    for (const auto& row : rows) {
      if (row.size() != nc) throw Error("Matrix::from_rows: ragged rows");
      std::size_t j = 0;
      for (const cplx& v : row) m(i, j++) = v;
      ++i;
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

  const std::vector<cplx>& entries() const { return entries_; }

  bool same_shape(const Matrix& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

  Matrix adjoint() const {
    Matrix a(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) a(j, i) = std::conj((*this)(i, j));
    return a;
  }

  cplx trace() const {
    if (!square()) throw Error("trace: matrix must be square");
    cplx t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  double frobenius_norm() const {
    double s = 0.0;
    for (const cplx& v : entries_) s += std::norm(v);
    return std::sqrt(s);
  }

  double max_abs() const {
    double m = 0.0;
    for (const cplx& v : entries_) m = std::max(m, std::abs(v));
    return m;
  }

  bool is_zero() const {
    for (const cplx& v : entries_)
      if (v != cplx{0.0, 0.0}) return false;
    return true;
  }

  /// Structural test: every off-diagonal entry is exactly zero.
  bool is_diagonal() const {
    if (!square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j)
        if (i != j && (*this)(i, j) != cplx{0.0, 0.0}) return false;
    return true;
  }

  bool has_finite_entries() const {
    for (const cplx& v : entries_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
  }

  std::vector<cplx> col(std::size_t j) const {
    std::vector<cplx> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  std::vector<double> real_diag() const {
    if (!square()) throw Error("real_diag: matrix must be square");
    std::vector<double> d(rows_);
    for (std::size_t i = 0; i < rows_; ++i) d[i] = (*this)(i, i).real();
    return d;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> entries_;
};

inline Matrix operator+(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw Error("operator+: shape mismatch");
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) + b(i, j);
  return r;
}

inline Matrix operator-(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw Error("operator-: shape mismatch");
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j) - b(i, j);
  return r;
}

inline Matrix operator-(const Matrix& a) {
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = -a(i, j);
  return r;
}

inline Matrix operator*(const cplx& s, const Matrix& a) {
  Matrix r(a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = s * a(i, j);
  return r;
}

inline Matrix operator*(const Matrix& a, const cplx& s) { return s * a; }

inline Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error("operator*: inner dimension mismatch");
  Matrix r(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const cplx aik = a(i, k);
      if (aik == cplx{0.0, 0.0}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
    }
  return r;
}

/// (M + M*)/2, roundoff cleanup for values already Hermitian in exact
/// arithmetic. Callers that require Hermitian inputs still validate first.
inline Matrix hermitize(const Matrix& m) {
  if (!m.square()) throw Error("hermitize: matrix must be square");
  Matrix h(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    h(i, i) = m(i, i).real();
    for (std::size_t j = i + 1; j < m.cols(); ++j) {
      const cplx v = 0.5 * (m(i, j) + std::conj(m(j, i)));
      h(i, j) = v;
      h(j, i) = std::conj(v);
    }
  }
  return h;
}

/// Hermitian within the relative band max|M_ij - conj(M_ji)| <= tol*(1+max|entry|).
inline bool is_hermitian(const Matrix& m, double tol = defaults::herm_tol) {
  if (!m.square()) return false;
  double dev = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j)
      dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
  return dev <= tol * (1.0 + m.max_abs());
}

/// Entrywise (Schur/Hadamard) product.
inline Matrix schur_product(const Matrix& x, const Matrix& y) {
  if (!x.same_shape(y)) throw Error("schur_product: shape mismatch");
  Matrix r(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) r(i, j) = x(i, j) * y(i, j);
  return r;
}

/// Self-adjoint embedding [[0, X], [X*, 0]] of an m x n matrix.
inline Matrix block_embed(const Matrix& x) {
  const std::size_t m = x.rows(), n = x.cols();
  Matrix y(m + n, m + n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      y(i, m + j) = x(i, j);
      y(m + j, i) = std::conj(x(i, j));
    }
  return y;
}

/// Keeps the two off-diagonal blocks of the first-m/rest split, zeroes the
/// diagonal blocks.
inline Matrix offdiag_compress(const Matrix& z, std::size_t m) {
  if (!z.square()) throw Error("offdiag_compress: matrix must be square");
  if (m < 1 || m >= z.rows()) throw Error("offdiag_compress: split index out of range");
  Matrix r(z.rows(), z.cols());
  for (std::size_t i = 0; i < z.rows(); ++i)
    for (std::size_t j = 0; j < z.cols(); ++j)
      if ((i < m) != (j < m)) r(i, j) = z(i, j);
  return r;
}

/// Maximum l2 norm over columns.
inline double column_norm(const Matrix& x) {
  double best = 0.0;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.rows(); ++i) s += std::norm(x(i, j));
    best = std::max(best, s);
  }
  return std::sqrt(best);
}

struct EntryNorms {
  double max_abs = 0.0;
  double l1 = 0.0;
};

inline EntryNorms entry_norms(const Matrix& x) {
  EntryNorms e;
  for (const cplx& v : x.entries()) {
    const double a = std::abs(v);
    e.max_abs = std::max(e.max_abs, a);
    e.l1 += a;
  }
  return e;
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw Error("vstack: column count mismatch");
  Matrix r(a.rows() + b.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r(i, j) = a(i, j);
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r(a.rows() + i, j) = b(i, j);
  return r;
}

/// u v* as a matrix.
inline Matrix outer_product(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  Matrix r(u.size(), v.size());
  for (std::size_t i = 0; i < u.size(); ++i)
    for (std::size_t j = 0; j < v.size(); ++j) r(i, j) = u[i] * std::conj(v[j]);
  return r;
}

inline std::vector<cplx> matvec(const Matrix& a, const std::vector<cplx>& x) {
  if (a.cols() != x.size()) throw Error("matvec: dimension mismatch");
  std::vector<cplx> y(a.rows(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) y[i] += a(i, j) * x[j];
  return y;
}

/// <a, b> = sum conj(a_i) b_i.
inline cplx vec_inner(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.size() != b.size()) throw Error("vec_inner: dimension mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

inline double vec_norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& e : v) s += std::norm(e);
  return std::sqrt(s);
}

/// Re(x* A x) for Hermitian A; the imaginary part is roundoff.
inline double quad_form(const Matrix& a, const std::vector<cplx>& x) {
  return vec_inner(x, matvec(a, x)).real();
}

}  // namespace schurkit
