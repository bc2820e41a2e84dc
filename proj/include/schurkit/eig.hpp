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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>

#include "schurkit/matrix.hpp"

namespace schurkit {

/// Spectral decomposition of a Hermitian matrix: H = U diag(eigenvalues) U*,
/// eigenvalues ascending, column k of U paired with eigenvalue k.
struct HermEig {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

namespace detail {

inline double offdiag_frobenius(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

}  // namespace detail

/// Cyclic-by-row complex Jacobi eigensolver. Deterministic sweep order;
/// stops once the off-diagonal Frobenius mass drops below 1e-13 * ||H||_F,
/// errors after 40 sweeps. Rejects inputs outside the Hermitian band rather
/// than symmetrizing them.
inline HermEig herm_eig(const Matrix& h) {
  if (!h.square()) throw Error("herm_eig: matrix must be square");
  if (!is_hermitian(h)) throw Error("herm_eig: matrix is not Hermitian within tolerance");
  const std::size_t n = h.rows();
  Matrix a = hermitize(h);
  Matrix v = Matrix::identity(n);
  const double scale = a.frobenius_norm();

  if (scale > 0.0 && n > 1) {
    const double target = 1e-13 * scale;
    const double skip = 1e-16 * scale / static_cast<double>(n);
    bool converged = false;
    for (int sweep = 0; sweep < 40; ++sweep) {
      if (detail::offdiag_frobenius(a) <= target) {
        converged = true;
        break;
      }
      for (std::size_t p = 0; p + 1 < n; ++p) {
        for (std::size_t q = p + 1; q < n; ++q) {
          const cplx hpq = a(p, q);
          const double apq = std::abs(hpq);
          if (apq <= skip) continue;
          const double app = a(p, p).real();
          const double aqq = a(q, q).real();
          const cplx phase = hpq / apq;  // e^{i phi}
          const double tau = (aqq - app) / (2.0 * apq);
          const double t =
              (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
          const double c = 1.0 / std::sqrt(1.0 + t * t);
          const double s = t * c;
          // Unitary on span{e_p, e_q}: U_pp = c, U_pq = s,
          // U_qp = -s conj(phase), U_qq = c conj(phase).
          const cplx uqp = -s * std::conj(phase);
          const cplx uqq = c * std::conj(phase);
          for (std::size_t i = 0; i < n; ++i) {  // A <- A U
            const cplx aip = a(i, p), aiq = a(i, q);
            a(i, p) = c * aip + uqp * aiq;
            a(i, q) = s * aip + uqq * aiq;
            const cplx vip = v(i, p), viq = v(i, q);
            v(i, p) = c * vip + uqp * viq;
            v(i, q) = s * vip + uqq * viq;
          }
          for (std::size_t j = 0; j < n; ++j) {  // A <- U* A
            const cplx apj = a(p, j), aqj = a(q, j);
            a(p, j) = c * apj + std::conj(uqp) * aqj;
            a(q, j) = s * apj + std::conj(uqq) * aqj;
          }
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          a(p, p) = a(p, p).real();
          a(q, q) = a(q, q).real();
        }
      }
    }
    if (!converged && detail::offdiag_frobenius(a) > target)
      throw Error("herm_eig: Jacobi iteration did not converge within 40 sweeps");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i).real() < a(j, j).real(); });

  HermEig out;
  out.eigenvalues.resize(n);
  out.eigenvectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
  }
  return out;
}

inline double min_eigenvalue(const Matrix& h) { return herm_eig(h).eigenvalues.front(); }

inline double max_eigenvalue(const Matrix& h) { return herm_eig(h).eigenvalues.back(); }

/// Cholesky factor L (lower, H = L L*) of a Hermitian positive definite
/// matrix, or nullopt when a pivot fails. The strict-positivity test doubles
/// as the PD cone membership check used by the barrier line searches.
inline std::optional<Matrix> cholesky(const Matrix& h) {
  if (!h.square()) throw Error("cholesky: matrix must be square");
  const std::size_t n = h.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = h(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
    if (!(d > 0.0) || !std::isfinite(d)) return std::nullopt;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      cplx s = h(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * std::conj(l(j, k));
      l(i, j) = s / ljj;
    }
  }
  return l;
}

inline double logdet_from_cholesky(const Matrix& l) {
  double s = 0.0;
  for (std::size_t j = 0; j < l.rows(); ++j) s += std::log(l(j, j).real());
  return 2.0 * s;
}

/// Inverse of a Hermitian positive definite matrix via its Cholesky factor.
inline Matrix inverse_hpd(const Matrix& h) {
  const auto lopt = cholesky(h);
  if (!lopt) throw Error("inverse_hpd: matrix is not positive definite");
  const Matrix& l = *lopt;
  const std::size_t n = h.rows();
  // Solve L Y = I, then L* X = Y, column by column.
  Matrix x(n, n);
  std::vector<cplx> y(n), z(n);
  for (std::size_t c = 0; c < n; ++c) {
    for (std::size_t i = 0; i < n; ++i) {
      cplx s = (i == c) ? cplx{1.0, 0.0} : cplx{0.0, 0.0};
      for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
      y[i] = s / l(i, i).real();
    }
    for (std::size_t ii = n; ii-- > 0;) {
      cplx s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= std::conj(l(k, ii)) * z[k];
      z[ii] = s / l(ii, ii).real();
    }
    for (std::size_t i = 0; i < n; ++i) x(i, c) = z[i];
  }
  return hermitize(x);
}

/// Largest singular value, via the Gram matrix of the narrower side.
inline double operator_norm(const Matrix& x) {
  if (x.is_zero()) return 0.0;
  const Matrix g = (x.cols() <= x.rows()) ? hermitize(x.adjoint() * x) : hermitize(x * x.adjoint());
  return std::sqrt(std::max(0.0, max_eigenvalue(g)));
}

/// Sum of singular values.
inline double trace_norm(const Matrix& x) {
  if (x.is_zero()) return 0.0;
  const Matrix g = (x.cols() <= x.rows()) ? hermitize(x.adjoint() * x) : hermitize(x * x.adjoint());
  double s = 0.0;
  for (double e : herm_eig(g).eigenvalues) s += std::sqrt(std::max(0.0, e));
  return s;
}

/// Hermitian PSD square root. Eigenvalues in [-tol*(1+lambda_max), 0] are
/// clamped to zero; anything below that band is genuine indefiniteness and an
/// error.
inline Matrix psd_sqrt(const Matrix& p, double tol = 1e-9) {
  const HermEig e = herm_eig(p);
  const double lmax = std::max(0.0, e.eigenvalues.back());
  if (e.eigenvalues.front() < -tol * (1.0 + lmax))
    throw Error("psd_sqrt: eigenvalue below the PSD tolerance band");
  const std::size_t n = p.rows();
  Matrix s(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double w = std::sqrt(std::max(0.0, e.eigenvalues[k]));
        acc += e.eigenvectors(i, k) * w * std::conj(e.eigenvectors(j, k));
      }
      s(i, j) = acc;
    }
  return hermitize(s);
}

/// Inverse square root on the span of eigenvalues above supp_tol * lambda_max,
/// zero on the complement.
inline Matrix pinv_sqrt(const Matrix& p, double supp_tol = 1e-12) {
  const HermEig e = herm_eig(p);
  const double lmax = e.eigenvalues.back();
  const std::size_t n = p.rows();
  Matrix s(n, n);
  if (lmax <= 0.0) return s;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const double ev = e.eigenvalues[k];
        if (ev <= supp_tol * lmax) continue;
        acc += e.eigenvectors(i, k) * (1.0 / std::sqrt(ev)) * std::conj(e.eigenvectors(j, k));
      }
      s(i, j) = acc;
    }
  return hermitize(s);
}

}  // namespace schurkit
