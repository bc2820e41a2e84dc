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
#include <vector>

#include "schurkit/eig.hpp"
#include "schurkit/matrix.hpp"

namespace schurkit {

/// minimize weights . lambda  subject to  Delta(lambda) + F_k >= 0 for all k.
struct DiagSdpProblem {
  std::size_t n = 0;
  std::vector<double> weights;   // c > 0, length n
  std::vector<Matrix> offsets;   // Hermitian F_k, size n
};

struct DiagSdpSolution {
  std::vector<double> lambda;
  double value = 0.0;
  std::vector<Matrix> duals;     // Hermitian PSD M_k with diag(sum M_k) = c
  double gap = 0.0;
  int iterations = 0;
  double dual_rescale = 0.0;     // max |r_j - 1| of the diagonal dual rescale
};

/// minimize t  subject to  D + G_k >= 0, D block-diagonal Hermitian,
/// D_jj <= t. At the optimum D is PSD, so t is the max diagonal entry.
struct BlockMaxDiagProblem {
  std::vector<std::size_t> block_sizes;
  std::vector<Matrix> offsets;   // Hermitian G_k, size sum(block_sizes)
};

struct BlockMaxDiagSolution {
  Matrix d;                      // block-diagonal Hermitian; off-block entries exactly 0
  double t = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

namespace detail {

// Solves the dense real symmetric PD system h x = -g in place. One ridge
// retry before giving up; the barrier Hessian is PD on the interior.
inline std::vector<double> newton_step(std::vector<std::vector<double>> h,
                                       const std::vector<double>& g) {
  const std::size_t p = g.size();
  for (int attempt = 0; attempt < 2; ++attempt) {
    std::vector<std::vector<double>> l(p, std::vector<double>(p, 0.0));
    bool ok = true;
    for (std::size_t j = 0; j < p && ok; ++j) {
      double d = h[j][j];
      for (std::size_t k = 0; k < j; ++k) d -= l[j][k] * l[j][k];
      if (!(d > 0.0) || !std::isfinite(d)) {
        ok = false;
        break;
      }
      l[j][j] = std::sqrt(d);
      for (std::size_t i = j + 1; i < p; ++i) {
        double s = h[i][j];
        for (std::size_t k = 0; k < j; ++k) s -= l[i][k] * l[j][k];
        l[i][j] = s / l[j][j];
      }
    }
    if (!ok) {
      double tr = 0.0;
      for (std::size_t j = 0; j < p; ++j) tr += std::abs(h[j][j]);
      const double ridge = 1e-12 * (1.0 + tr / static_cast<double>(p));
      for (std::size_t j = 0; j < p; ++j) h[j][j] += ridge;
      if (attempt == 1) throw Error("sdp: numerically singular barrier Hessian");
      continue;
    }
    std::vector<double> y(p), x(p);
    for (std::size_t i = 0; i < p; ++i) {
      double s = -g[i];
      for (std::size_t k = 0; k < i; ++k) s -= l[i][k] * y[k];
      y[i] = s / l[i][i];
    }
    for (std::size_t ii = p; ii-- > 0;) {
      double s = y[ii];
      for (std::size_t k = ii + 1; k < p; ++k) s -= l[k][ii] * x[k];
      x[ii] = s / l[ii][ii];
    }
    return x;
  }
  throw Error("sdp: numerically singular barrier Hessian");
}

inline double hermitian_opnorm(const Matrix& h) {
  if (h.is_zero()) return 0.0;
  const HermEig e = herm_eig(h);
  return std::max(std::abs(e.eigenvalues.front()), std::abs(e.eigenvalues.back()));
}

}  // namespace detail

/// Log-det barrier path-following for the diagonal-domination SDP.
/// mu shrinks by 0.2 per outer step until K*n*mu clears tol/2; damped Newton
/// with PSD-cone line search and Armijo backtracking inside. Duals are
/// M_k = mu * (Delta(lambda) + F_k)^{-1} at the final iterate, diagonally
/// rescaled so diag(sum M_k) = c holds exactly.
inline DiagSdpSolution solve_diag_sdp(const DiagSdpProblem& p, double tol = defaults::solver_tol) {
  const std::size_t n = p.n;
  const std::size_t nk = p.offsets.size();
  if (n == 0) throw Error("solve_diag_sdp: empty problem");
  if (p.weights.size() != n) throw Error("solve_diag_sdp: weight length mismatch");
  for (double c : p.weights)
    if (!(c > 0.0) || !std::isfinite(c)) throw Error("solve_diag_sdp: weights must be positive");
  if (nk == 0) throw Error("solve_diag_sdp: at least one offset required");
  for (const Matrix& f : p.offsets) {
    if (f.rows() != n || f.cols() != n) throw Error("solve_diag_sdp: offset size mismatch");
    if (!is_hermitian(f)) throw Error("solve_diag_sdp: offset is not Hermitian");
  }

  double fmax = 0.0;
  for (const Matrix& f : p.offsets) fmax = std::max(fmax, detail::hermitian_opnorm(f));
  std::vector<double> lambda(n, fmax + 1.0);

  const auto slack = [&](const std::vector<double>& lam, std::size_t k) {
    Matrix s = p.offsets[k];
    for (std::size_t j = 0; j < n; ++j) s(j, j) += lam[j];
    return s;
  };
  const auto all_pd = [&](const std::vector<double>& lam, std::vector<Matrix>* chols) {
    for (std::size_t k = 0; k < nk; ++k) {
      auto l = cholesky(slack(lam, k));
      if (!l) return false;
      if (chols) (*chols)[k] = std::move(*l);
    }
    return true;
  };
  const auto barrier_obj = [&](const std::vector<double>& lam, double mu, bool* feasible) {
    std::vector<Matrix> chols(nk);
    if (!all_pd(lam, &chols)) {
      *feasible = false;
      return 0.0;
    }
    *feasible = true;
    double phi = 0.0;
    for (std::size_t j = 0; j < n; ++j) phi += p.weights[j] * lam[j];
    phi /= mu;
    for (const Matrix& l : chols) phi -= logdet_from_cholesky(l);
    return phi;
  };

  double value = 0.0;
  for (std::size_t j = 0; j < n; ++j) value += p.weights[j] * lambda[j];
  double mu = value / static_cast<double>(nk * n);
  int iterations = 0;
  std::vector<Matrix> inverses(nk, Matrix(n, n));

  for (int outer = 0; outer < 200; ++outer) {
    for (int inner = 0; inner < 100; ++inner) {
      for (std::size_t k = 0; k < nk; ++k) inverses[k] = inverse_hpd(slack(lambda, k));
      std::vector<double> g(n, 0.0);
      std::vector<std::vector<double>> h(n, std::vector<double>(n, 0.0));
      for (std::size_t j = 0; j < n; ++j) {
        g[j] = p.weights[j] / mu;
        for (std::size_t k = 0; k < nk; ++k) g[j] -= inverses[k](j, j).real();
        for (std::size_t l = 0; l < n; ++l)
          for (std::size_t k = 0; k < nk; ++k) h[j][l] += std::norm(inverses[k](j, l));
      }
      const std::vector<double> d = detail::newton_step(std::move(h), g);
      double gd = 0.0;
      for (std::size_t j = 0; j < n; ++j) gd += g[j] * d[j];
      if (-gd <= 1e-13) break;

      bool feasible = false;
      const double phi0 = barrier_obj(lambda, mu, &feasible);
      double alpha = 1.0;
      std::vector<double> cand(n);
      for (;;) {
        for (std::size_t j = 0; j < n; ++j) cand[j] = lambda[j] + alpha * d[j];
        const double phi = barrier_obj(cand, mu, &feasible);
        if (feasible && phi <= phi0 + 0.25 * alpha * gd) break;
        alpha *= 0.5;
        if (alpha < 1e-16) break;
      }
      if (alpha < 1e-16) break;  // stalled; centering is as good as it gets
      lambda = cand;
      ++iterations;
      if (iterations > 5000) throw Error("solve_diag_sdp: Newton iteration limit exceeded");
    }
    value = 0.0;
    for (std::size_t j = 0; j < n; ++j) value += p.weights[j] * lambda[j];
    if (static_cast<double>(nk * n) * mu <= 0.5 * tol * (1.0 + std::abs(value))) break;
    mu *= 0.2;
  }

  DiagSdpSolution out;
  out.lambda = lambda;
  out.value = value;
  out.iterations = iterations;
  out.duals.resize(nk, Matrix(n, n));
  std::vector<double> dual_diag(n, 0.0);
  for (std::size_t k = 0; k < nk; ++k) {
    out.duals[k] = mu * inverse_hpd(slack(lambda, k));
    for (std::size_t j = 0; j < n; ++j) dual_diag[j] += out.duals[k](j, j).real();
  }
  std::vector<double> rescale(n);
  for (std::size_t j = 0; j < n; ++j) {
    rescale[j] = std::sqrt(p.weights[j] / std::max(dual_diag[j], 1e-300));
    out.dual_rescale = std::max(out.dual_rescale, std::abs(rescale[j] * rescale[j] - 1.0));
  }
  for (std::size_t k = 0; k < nk; ++k) {
    Matrix& m = out.duals[k];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) *= rescale[i] * rescale[j];
    m = hermitize(m);
  }
  double dual_value = 0.0;
  for (std::size_t k = 0; k < nk; ++k)
    dual_value -= (out.duals[k] * p.offsets[k]).trace().real();
  out.gap = std::abs(out.value - dual_value);
  return out;
}

namespace detail {

// Real coordinates of a block-diagonal Hermitian variable: one per diagonal
// entry, plus (re, im) per off-diagonal pair inside each block.
struct HermCoord {
  std::size_t p, q;
  enum Kind { diag, re, im } kind;
};

inline std::vector<HermCoord> block_coords(const std::vector<std::size_t>& blocks) {
  std::vector<HermCoord> coords;
  std::size_t off = 0;
  for (std::size_t b : blocks) {
    for (std::size_t j = 0; j < b; ++j) coords.push_back({off + j, off + j, HermCoord::diag});
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = i + 1; j < b; ++j) {
        coords.push_back({off + i, off + j, HermCoord::re});
        coords.push_back({off + i, off + j, HermCoord::im});
      }
    off += b;
  }
  return coords;
}

inline void add_coord(Matrix& d, const HermCoord& c, double step) {
  switch (c.kind) {
    case HermCoord::diag:
      d(c.p, c.p) += step;
      break;
    case HermCoord::re:
      d(c.p, c.q) += step;
      d(c.q, c.p) += step;
      break;
    case HermCoord::im:
      d(c.p, c.q) += cplx{0.0, step};
      d(c.q, c.p) -= cplx{0.0, step};
      break;
  }
}

// Re Tr(W E_c) for the sparse basis matrix of coordinate c.
inline double trace_against(const Matrix& w, const HermCoord& c) {
  switch (c.kind) {
    case HermCoord::diag:
      return w(c.p, c.p).real();
    case HermCoord::re:
      return 2.0 * w(c.q, c.p).real();
    case HermCoord::im:
    default:
      return -2.0 * w(c.q, c.p).imag();
  }
}

// T E_c T for Hermitian T and the sparse basis matrix of coordinate c.
inline Matrix sandwich(const Matrix& t, const HermCoord& c) {
  const std::size_t n = t.rows();
  Matrix w(n, n);
  if (c.kind == HermCoord::diag) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = t(i, c.p) * std::conj(t(j, c.p));
    return w;
  }
  const cplx alpha = (c.kind == HermCoord::re) ? cplx{1.0, 0.0} : cplx{0.0, 1.0};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      w(i, j) = alpha * t(i, c.p) * std::conj(t(j, c.q)) +
                std::conj(alpha) * t(i, c.q) * std::conj(t(j, c.p));
  return w;
}

}  // namespace detail

/// Barrier Newton over (block-diagonal Hermitian D, scalar t) for
/// min t s.t. D + G_k >= 0 and t >= D_jj. Same schedule as solve_diag_sdp;
/// strictly feasible start D = (max_k ||G_k|| + 1) I, t = max_k ||G_k|| + 2.
inline BlockMaxDiagSolution solve_blockmaxdiag_sdp(const BlockMaxDiagProblem& p,
                                                   double tol = defaults::solver_tol) {
  std::size_t n = 0;
  for (std::size_t b : p.block_sizes) {
    if (b == 0) throw Error("solve_blockmaxdiag_sdp: zero block size");
    n += b;
  }
  if (n == 0) throw Error("solve_blockmaxdiag_sdp: empty problem");
  const std::size_t nk = p.offsets.size();
  if (nk == 0) throw Error("solve_blockmaxdiag_sdp: at least one offset required");
  for (const Matrix& g : p.offsets) {
    if (g.rows() != n || g.cols() != n) throw Error("solve_blockmaxdiag_sdp: offset size mismatch");
    if (!is_hermitian(g)) throw Error("solve_blockmaxdiag_sdp: offset is not Hermitian");
  }

  const std::vector<detail::HermCoord> coords = detail::block_coords(p.block_sizes);
  const std::size_t nc = coords.size();  // + 1 for t
  double gmax = 0.0;
  for (const Matrix& g : p.offsets) gmax = std::max(gmax, detail::hermitian_opnorm(g));

  Matrix d(n, n);
  for (std::size_t j = 0; j < n; ++j) d(j, j) = gmax + 1.0;
  double t = gmax + 2.0;

  const auto all_pd = [&](const Matrix& dd, double tt, double* logdets) {
    for (std::size_t j = 0; j < n; ++j)
      if (!(tt - dd(j, j).real() > 0.0)) return false;
    if (logdets) *logdets = 0.0;
    for (std::size_t k = 0; k < nk; ++k) {
      auto l = cholesky(dd + p.offsets[k]);
      if (!l) return false;
      if (logdets) *logdets += logdet_from_cholesky(*l);
    }
    return true;
  };
  const auto barrier_obj = [&](const Matrix& dd, double tt, double mu, bool* feasible) {
    double logdets = 0.0;
    if (!all_pd(dd, tt, &logdets)) {
      *feasible = false;
      return 0.0;
    }
    *feasible = true;
    double phi = tt / mu - logdets;
    for (std::size_t j = 0; j < n; ++j) phi -= std::log(tt - dd(j, j).real());
    return phi;
  };

  const double cone_dim = static_cast<double>(nk * n + n);
  double mu = std::max(t, 1.0) / cone_dim;
  int iterations = 0;
  std::vector<Matrix> inverses(nk, Matrix(n, n));
  std::vector<Matrix> sand(nc, Matrix(n, n));

  for (int outer = 0; outer < 200; ++outer) {
    for (int inner = 0; inner < 100; ++inner) {
      for (std::size_t k = 0; k < nk; ++k) inverses[k] = inverse_hpd(d + p.offsets[k]);
      std::vector<double> w(n);
      for (std::size_t j = 0; j < n; ++j) w[j] = 1.0 / (t - d(j, j).real());

      std::vector<double> g(nc + 1, 0.0);
      std::vector<std::vector<double>> h(nc + 1, std::vector<double>(nc + 1, 0.0));
      for (std::size_t a = 0; a < nc; ++a) {
        for (std::size_t k = 0; k < nk; ++k) g[a] -= detail::trace_against(inverses[k], coords[a]);
        if (coords[a].kind == detail::HermCoord::diag) {
          g[a] += w[coords[a].p];
          h[a][a] += w[coords[a].p] * w[coords[a].p];
          h[a][nc] -= w[coords[a].p] * w[coords[a].p];
          h[nc][a] -= w[coords[a].p] * w[coords[a].p];
        }
      }
      g[nc] = 1.0 / mu;
      for (std::size_t j = 0; j < n; ++j) {
        g[nc] -= w[j];
        h[nc][nc] += w[j] * w[j];
      }
      for (std::size_t k = 0; k < nk; ++k) {
        for (std::size_t a = 0; a < nc; ++a) sand[a] = detail::sandwich(inverses[k], coords[a]);
        for (std::size_t a = 0; a < nc; ++a)
          for (std::size_t b = a; b < nc; ++b) {
            const double v = detail::trace_against(sand[a], coords[b]);
            h[a][b] += v;
            if (b != a) h[b][a] += v;
          }
      }

      const std::vector<double> step = detail::newton_step(std::move(h), g);
      double gd = 0.0;
      for (std::size_t a = 0; a <= nc; ++a) gd += g[a] * step[a];
      if (-gd <= 1e-13) break;

      bool feasible = false;
      const double phi0 = barrier_obj(d, t, mu, &feasible);
      double alpha = 1.0;
      Matrix cand = d;
      double tcand = t;
      for (;;) {
        cand = d;
        for (std::size_t a = 0; a < nc; ++a) detail::add_coord(cand, coords[a], alpha * step[a]);
        tcand = t + alpha * step[nc];
        const double phi = barrier_obj(cand, tcand, mu, &feasible);
        if (feasible && phi <= phi0 + 0.25 * alpha * gd) break;
        alpha *= 0.5;
        if (alpha < 1e-16) break;
      }
      if (alpha < 1e-16) break;
      d = cand;
      t = tcand;
      ++iterations;
      if (iterations > 5000) throw Error("solve_blockmaxdiag_sdp: Newton iteration limit exceeded");
    }
    if (cone_dim * mu <= 0.5 * tol * (1.0 + std::abs(t))) break;
    mu *= 0.2;
  }

  BlockMaxDiagSolution out;
  out.d = d;
  out.t = t;
  out.iterations = iterations;
  // Dual objective from the normalized barrier duals; gap is a diagnostic.
  double wsum = 0.0;
  for (std::size_t j = 0; j < n; ++j) wsum += mu / (t - d(j, j).real());
  double dual_value = 0.0;
  for (std::size_t k = 0; k < nk; ++k)
    dual_value -= mu * (inverse_hpd(d + p.offsets[k]) * p.offsets[k]).trace().real();
  out.gap = std::abs(t - dual_value / std::max(wsum, 1e-300));
  return out;
}

}  // namespace schurkit
