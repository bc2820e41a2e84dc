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
#include "schurkit/norms.hpp"
#include "schurkit/random.hpp"
#include "schurkit/sdp.hpp"

namespace schurkit {

/// A numeric enclosure produced by reference computations.
struct Bracket {
  double lower = 0.0;
  double upper = 0.0;
  long trials = 0;
};

/// Exact Schur norm of the rank-one matrix u v*: the d = 1 factorization
/// meets the max-entry lower bound.
inline double rank_one_schur_norm(const std::vector<cplx>& u, const std::vector<cplx>& v) {
  if (vec_norm2(u) == 0.0 || vec_norm2(v) == 0.0)
    throw Error("rank_one_schur_norm: vectors must be nonzero");
  double mu = 0.0, mv = 0.0;
  for (const cplx& e : u) mu = std::max(mu, std::abs(e));
  for (const cplx& e : v) mv = std::max(mv, std::abs(e));
  return mu * mv;
}

/// Exact cbb norm of the rank-one PSD matrix e e*: the Schur-complement
/// condition sum |e_j|^2 / lambda_j <= 1 is minimized in closed form by
/// lambda_j = |e_j| sum_k |e_k|, giving (sum |e_j|)^2.
inline double rank_one_domination_cbb(const std::vector<cplx>& e) {
  if (vec_norm2(e) == 0.0) throw Error("rank_one_domination_cbb: vector must be nonzero");
  double s = 0.0;
  for (const cplx& v : e) s += std::abs(v);
  return s * s;
}

/// max over sampled Y of ||X o Y|| / ||Y||; never exceeds the true norm.
inline double sampled_schur_lower_bound(const Matrix& x, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error("sampled_schur_lower_bound: trials must be >= 1");
  Rng rng(seed);
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Matrix y = random_general(rng, x.rows(), x.cols());
    const double ny = operator_norm(y);
    if (ny < 1e-12) continue;
    best = std::max(best, operator_norm(schur_product(x, y)) / ny);
  }
  return best;
}

/// max over sampled Y of |Tr(Y* X)| / ||Y||_S; never exceeds the true norm.
inline double sampled_cbb_lower_bound(const Matrix& x, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error("sampled_cbb_lower_bound: trials must be >= 1");
  Rng rng(seed);
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    const Matrix y = random_general(rng, x.rows(), x.cols());
    const double sy = schur_norm(y).value;
    if (sy < 1e-12) continue;
    best = std::max(best, std::abs(duality_pair(x, y)) / sy);
  }
  return best;
}

namespace detail {

inline Matrix coords_to_blockdiag(const std::vector<double>& theta,
                                  const std::vector<HermCoord>& coords, std::size_t n) {
  Matrix d(n, n);
  for (std::size_t a = 0; a < coords.size(); ++a) add_coord(d, coords[a], theta[a]);
  return d;
}

}  // namespace detail

/// Brute-force randomized feasibility search for the block-diagonal
/// domination program over the self-adjoint embedding: minimizes
/// max diag(D) over D = diag(D1, D2) >= [[0, X], [X*, 0]]. Coordinate-wise
/// Gaussian perturbations with annealed step size; greedy acceptance of
/// feasible improvements. Only intended to mint reference values for total
/// dimension m + n <= 4.
inline double random_search_blocksdp(const Matrix& x, long trials, std::uint64_t seed) {
  const std::size_t m = x.rows(), n = x.cols();
  if (m + n > 4) throw Error("random_search_blocksdp: total dimension must be <= 4");
  if (trials < 1) throw Error("random_search_blocksdp: trials must be >= 1");
  const Matrix y = block_embed(x);
  const std::size_t dim = m + n;
  const double scale = operator_norm(x) + 1.0;
  const double feas_band = 1e-12 * (1.0 + y.frobenius_norm());

  const std::vector<detail::HermCoord> coords = detail::block_coords({m, n});
  std::vector<double> theta(coords.size(), 0.0);
  for (std::size_t a = 0; a < coords.size(); ++a)
    if (coords[a].kind == detail::HermCoord::diag) theta[a] = scale;

  // Moves that keep the max unchanged are accepted as a random walk on the
  // plateau; a coordinate below the max must often rise before the max
  // coordinate gains the slack to come down.
  const auto objective = [&](const std::vector<double>& th) {
    double mx = -1e300;
    for (std::size_t a = 0; a < coords.size(); ++a)
      if (coords[a].kind == detail::HermCoord::diag) mx = std::max(mx, th[a]);
    return mx;
  };
  const auto feasible = [&](const std::vector<double>& th) {
    const Matrix d = detail::coords_to_blockdiag(th, coords, dim);
    return min_eigenvalue(hermitize(d - y)) >= -feas_band;
  };

  if (!feasible(theta)) throw Error("random_search_blocksdp: scalar start infeasible");
  double cur = objective(theta);
  double best = cur;
  Rng rng(seed);
  double step = 0.5 * scale;
  const double decay = std::pow(1e-6, 1.0 / static_cast<double>(trials));
  std::vector<double> cand = theta;
  for (long t = 0; t < trials; ++t) {
    cand = theta;
    const std::size_t a = rng.below(coords.size());
    cand[a] += step * rng.gaussian();
    const double obj = objective(cand);
    if (obj <= cur + 1e-15 && feasible(cand)) {
      theta = cand;
      cur = obj;
      best = std::min(best, cur);
    }
    step *= decay;
  }
  return best;
}

/// [sampled lower bound, operator norm] enclosure of the Schur norm.
inline Bracket schur_bracket(const Matrix& x, int trials, std::uint64_t seed) {
  Bracket b;
  b.trials = trials;
  b.lower = std::max(entry_norms(x).max_abs, sampled_schur_lower_bound(x, trials, seed));
  b.upper = operator_norm(x);
  return b;
}

/// [sampled lower bound, entrywise l1] enclosure of the cbb norm.
inline Bracket cbb_bracket(const Matrix& x, int trials, std::uint64_t seed) {
  Bracket b;
  b.trials = trials;
  b.lower = std::max(trace_norm(x), sampled_cbb_lower_bound(x, trials, seed));
  b.upper = entry_norms(x).l1;
  return b;
}

}  // namespace schurkit
