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
#include <optional>
#include <utility>
#include <vector>

#include "schurkit/eig.hpp"
#include "schurkit/lp.hpp"
#include "schurkit/matrix.hpp"

namespace schurkit {

/// A signed unit-vector constraint: sign +1 encodes
/// sum_j lambda_j |xi_j|^2 >= <X xi, xi>, sign -1 the mirrored family.
struct Cut {
  std::vector<cplx> vector;  // unit l2 norm
  int sign = +1;
};

struct CutPool {
  std::vector<Cut> cuts;
  std::vector<double> dual_weights;  // mu_xi for sign +, nu_eta for sign -

  /// True when a cut with the same sign lies within the dedup band
  /// |<v, v'>| > 1 - 1e-10.
  bool contains_near(const std::vector<cplx>& v, int sign) const {
    for (const Cut& c : cuts) {
      if (c.sign != sign) continue;
      if (std::abs(vec_inner(c.vector, v)) > 1.0 - 1e-10) return true;
    }
    return false;
  }
};

/// Most violated constraint of Delta(lambda) -/+ X >= 0, or nullopt when both
/// slacks clear -tol. The returned vector is the offending eigenvector; sign
/// + belongs to the Delta(lambda) - X family.
inline std::optional<Cut> separation_oracle(const Matrix& x, const std::vector<double>& lambda,
                                            double tol) {
  if (!is_hermitian(x)) throw Error("separation_oracle: matrix must be Hermitian");
  const std::size_t n = x.rows();
  if (lambda.size() != n) throw Error("separation_oracle: lambda length mismatch");
  const Matrix dl = Matrix::diag(lambda);
  const HermEig minus = herm_eig(hermitize(dl - x));
  const HermEig plus = herm_eig(hermitize(dl + x));
  const double vminus = minus.eigenvalues.front();
  const double vplus = plus.eigenvalues.front();
  if (vminus >= -tol && vplus >= -tol) return std::nullopt;
  Cut cut;
  if (vminus <= vplus) {
    cut.vector = minus.eigenvectors.col(0);
    cut.sign = +1;
  } else {
    cut.vector = plus.eigenvectors.col(0);
    cut.sign = -1;
  }
  return cut;
}

struct ProgramPResult {
  std::vector<double> lambda;
  double value = 0.0;
  CutPool pool;
  int rounds = 0;
};

namespace detail {

inline LpProblem master_problem(const Matrix& x, const CutPool& pool) {
  const std::size_t n = x.rows();
  LpProblem lp;
  lp.objective.assign(n, 1.0);
  for (const Cut& c : pool.cuts) {
    std::vector<double> row(n);
    for (std::size_t j = 0; j < n; ++j) row[j] = std::norm(c.vector[j]);
    lp.lhs.push_back(std::move(row));
    lp.rhs.push_back(static_cast<double>(c.sign) * quad_form(x, c.vector));
  }
  return lp;
}

// All eigenvector cuts violated beyond tol in one family, most violated first.
inline void gather_violated(const Matrix& slackmat, int sign, double tol,
                            std::vector<std::pair<double, Cut>>& out) {
  const HermEig e = herm_eig(slackmat);
  for (std::size_t k = 0; k < e.eigenvalues.size(); ++k) {
    if (e.eigenvalues[k] >= -tol) break;  // ascending order
    out.push_back({e.eigenvalues[k], Cut{e.eigenvectors.col(k), sign}});
  }
}

inline CutPool canonical_pool(std::size_t n) {
  CutPool pool;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<cplx> e(n, cplx{0.0, 0.0});
    e[j] = 1.0;
    pool.cuts.push_back({e, +1});
    pool.cuts.push_back({std::move(e), -1});
  }
  return pool;
}

inline double worst_violation(const Matrix& x, const std::vector<double>& lambda) {
  const Matrix dl = Matrix::diag(lambda);
  return -std::min(min_eigenvalue(hermitize(dl - x)), min_eigenvalue(hermitize(dl + x)));
}

}  // namespace detail

/// Cutting-plane solver for program (P): min sum lambda subject to
/// Delta(lambda) -/+ X >= 0, realized over a growing pool of unit-vector
/// cuts. Starts from the 2n canonical-basis cuts; each round solves the
/// master LP and adds every eigenvector the separation test finds violated,
/// deduplicated per sign class, until the oracle is silent. The master LP
/// duals are the finite (P*) solution.
inline ProgramPResult solve_program_p(const Matrix& x, double tol = defaults::solver_tol) {
  if (!is_hermitian(x)) throw Error("solve_program_p: matrix must be Hermitian");
  if (!x.has_finite_entries()) throw Error("solve_program_p: non-finite entries");
  const std::size_t n = x.rows();
  const std::size_t max_cuts = 50 * n;

  ProgramPResult res;
  res.pool = detail::canonical_pool(n);

  const auto solve_master = [&](CutPool& pool, std::vector<double>& lambda, double& value) {
    const LpSolution sol = solve_lp(detail::master_problem(x, pool));
    if (sol.status != LpStatus::optimal)
      throw Error("solve_program_p: master LP not optimal");  // cannot happen: bounded & feasible
    lambda = sol.primal;
    value = sol.value;
    pool.dual_weights = sol.dual;
  };
  const auto oracle_tol = [&](double value) {
    // Floored above the master LP's own roundoff so a satisfied pool cut is
    // never re-reported as violated.
    return std::max(tol * (1.0 + std::abs(value)) / (2.0 * static_cast<double>(n)),
                    1e-12 * (1.0 + x.frobenius_norm()));
  };

  for (;;) {
    ++res.rounds;
    solve_master(res.pool, res.lambda, res.value);

    const Matrix dl = Matrix::diag(res.lambda);
    std::vector<std::pair<double, Cut>> violated;
    detail::gather_violated(hermitize(dl - x), +1, oracle_tol(res.value), violated);
    detail::gather_violated(hermitize(dl + x), -1, oracle_tol(res.value), violated);
    if (violated.empty()) break;

    std::stable_sort(violated.begin(), violated.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    bool added = false;
    for (auto& [viol, cut] : violated) {
      if (res.pool.cuts.size() >= max_cuts) break;
      if (res.pool.contains_near(cut.vector, cut.sign)) continue;
      res.pool.cuts.push_back(std::move(cut));
      added = true;
    }
    if (!added)
      throw Error("solve_program_p: cut limit reached before separation succeeded");
  }

  // Cut tightening: the pool's near-optimal cut directions lag the optimum by
  // up to the dedup band, which caps the vertex accuracy at ~sqrt(tol). Each
  // tightening round recomputes the near-active eigenvectors at the current
  // vertex and swaps them into the pool in place of their stale neighbors
  // (appending when no neighbor exists), keeping the pool a deduplicated
  // global outer approximation while its binding rows converge to the true
  // active set. The last vertex the separation test is silent on wins.
  const auto tighten = [&](const Cut& cut) {
    for (Cut& c : res.pool.cuts) {
      if (c.sign != cut.sign) continue;
      if (std::abs(vec_inner(c.vector, cut.vector)) > 1.0 - 1e-10) {
        c.vector = cut.vector;
        return;
      }
    }
    if (res.pool.cuts.size() < max_cuts) res.pool.cuts.push_back(cut);
  };
  std::vector<double> best_lambda = res.lambda;
  double best_value = res.value;
  CutPool best_pool = res.pool;
  for (int round = 0; round < 6; ++round) {
    const Matrix dl = Matrix::diag(res.lambda);
    const double gate = std::max(1e-3 * (1.0 + std::abs(res.value)), 10.0 * oracle_tol(res.value));
    const HermEig eminus = herm_eig(hermitize(dl - x));
    const HermEig eplus = herm_eig(hermitize(dl + x));
    for (std::size_t k = 0; k < n; ++k) {
      if (eminus.eigenvalues[k] <= gate) tighten({eminus.eigenvectors.col(k), +1});
      if (eplus.eigenvalues[k] <= gate) tighten({eplus.eigenvectors.col(k), -1});
    }
    const double prev_value = res.value;
    solve_master(res.pool, res.lambda, res.value);
    if (detail::worst_violation(x, res.lambda) <= oracle_tol(res.value)) {
      best_lambda = res.lambda;
      best_value = res.value;
      best_pool = res.pool;
      if (std::abs(res.value - prev_value) <= 1e-3 * tol * (1.0 + std::abs(res.value))) break;
    }
  }
  res.lambda = std::move(best_lambda);
  res.value = best_value;
  res.pool = std::move(best_pool);
  return res;
}

/// A = sum_{sign +} mu P_xi, B = sum_{sign -} nu P_eta, Z = A - B.
struct Certificate {
  Matrix z, a, b;
};

inline Certificate build_certificate(const CutPool& pool) {
  if (pool.cuts.empty()) throw Error("build_certificate: pool has no cuts");
  const std::size_t n = pool.cuts.front().vector.size();
  Certificate c{Matrix(n, n), Matrix(n, n), Matrix(n, n)};
  for (std::size_t k = 0; k < pool.cuts.size(); ++k) {
    const double w = (k < pool.dual_weights.size()) ? pool.dual_weights[k] : 0.0;
    if (w <= 0.0) continue;
    const Cut& cut = pool.cuts[k];
    Matrix& target = (cut.sign > 0) ? c.a : c.b;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        target(i, j) += w * cut.vector[i] * std::conj(cut.vector[j]);
  }
  c.z = c.a - c.b;
  return c;
}

struct PoolFeasibility {
  bool feasible = false;
  double schur_norm_of_sum = 0.0;
};

/// Feasibility test for a finite (P*) solution: W = A + B must have Schur
/// norm at most 1. W is PSD by construction, so any evaluator consistent
/// with the positive-case formula (max diagonal entry) works.
template <typename SchurNormFn>
PoolFeasibility check_pool_feasible(const CutPool& pool, SchurNormFn&& schur_norm_fn,
                                    double tol = defaults::solver_tol) {
  for (double w : pool.dual_weights)
    if (w < 0.0) throw Error("check_pool_feasible: negative dual weight");
  const Certificate c = build_certificate(pool);
  PoolFeasibility out;
  out.schur_norm_of_sum = schur_norm_fn(hermitize(c.a + c.b));
  out.feasible = out.schur_norm_of_sum <= 1.0 + tol;
  return out;
}

}  // namespace schurkit
