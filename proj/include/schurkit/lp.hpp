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
#include <limits>
#include <vector>

#include "schurkit/matrix.hpp"

namespace schurkit {

/// Inequality-form LP: minimize objective . x subject to lhs x >= rhs, x >= 0.
struct LpProblem {
  std::vector<double> objective;          // length N
  std::vector<std::vector<double>> lhs;   // K rows of length N
  std::vector<double> rhs;                // length K
};

enum class LpStatus { optimal, infeasible, unbounded };

struct LpSolution {
  std::vector<double> primal;  // x
  std::vector<double> dual;    // y >= 0, one multiplier per constraint row
  double value = 0.0;
  LpStatus status = LpStatus::optimal;
};

namespace detail {

// Two-phase dense tableau simplex. Bland's rule for both the entering and the
// leaving choice, so the pivot-count guard is a formality. Surplus rows with
// negative right-hand side are flipped so their slack can start basic;
// remaining rows get a phase-one artificial. The dual of original row i is
// the reduced cost of its slack/surplus column at optimality (both the flip
// and the surplus sign cancel into the same identity).
class SimplexTableau {
 public:
  SimplexTableau(const LpProblem& p) : nvar_(p.objective.size()), nrow_(p.rhs.size()) {
    for (std::size_t i = 0; i < nrow_; ++i)
      if (p.lhs[i].size() != nvar_) throw Error("solve_lp: ragged constraint matrix");
    for (double v : p.objective)
      if (!std::isfinite(v)) throw Error("solve_lp: non-finite objective");
    for (double v : p.rhs)
      if (!std::isfinite(v)) throw Error("solve_lp: non-finite right-hand side");
    for (const auto& row : p.lhs)
      for (double v : row)
        if (!std::isfinite(v)) throw Error("solve_lp: non-finite constraint entry");

    slack_col_.resize(nrow_);
    std::size_t art_count = 0;
    for (std::size_t i = 0; i < nrow_; ++i)
      if (p.rhs[i] >= 0.0) ++art_count;
    ncol_ = nvar_ + nrow_ + art_count;
    tab_.assign(nrow_, std::vector<double>(ncol_ + 1, 0.0));
    basis_.assign(nrow_, 0);
    artificial_start_ = nvar_ + nrow_;

    std::size_t next_art = artificial_start_;
    for (std::size_t i = 0; i < nrow_; ++i) {
      const double sgn = (p.rhs[i] >= 0.0) ? 1.0 : -1.0;
      for (std::size_t j = 0; j < nvar_; ++j) tab_[i][j] = sgn * p.lhs[i][j];
      slack_col_[i] = nvar_ + i;
      tab_[i][slack_col_[i]] = -sgn;  // surplus for kept rows, slack for flipped
      tab_[i][ncol_] = sgn * p.rhs[i];
      if (p.rhs[i] >= 0.0) {
        tab_[i][next_art] = 1.0;
        art_row_.push_back(i);
        basis_[i] = next_art++;
      } else {
        basis_[i] = slack_col_[i];
      }
    }
  }

  LpSolution solve(const LpProblem& p) {
    LpSolution out;

    if (artificial_start_ < ncol_) {
      std::vector<double> phase1_cost(ncol_, 0.0);
      for (std::size_t j = artificial_start_; j < ncol_; ++j) phase1_cost[j] = 1.0;
      price(phase1_cost);
      run(/*allow_unbounded=*/false);
      if (objval_ > 1e-8 * (1.0 + max_abs_rhs(p))) {
        out.status = LpStatus::infeasible;
        return out;
      }
      expel_artificials();
    }

    std::vector<double> cost(ncol_, 0.0);
    for (std::size_t j = 0; j < nvar_; ++j) cost[j] = p.objective[j];
    price(cost);
    if (!run(/*allow_unbounded=*/true)) {
      out.status = LpStatus::unbounded;
      return out;
    }

    // Long degenerate pivot runs erode the tableau, so the reported solution
    // is recomputed from the final basis directly: B x_B = b for the primal,
    // B^T y = c_B for the multipliers. The dual of original row i is then
    // read off its slack/surplus column (both the row flip and the surplus
    // sign cancel into the same identity).
    out.status = LpStatus::optimal;
    out.primal.assign(nvar_, 0.0);
    out.dual.assign(nrow_, 0.0);
    if (!from_basis(p, out)) {
      for (std::size_t i = 0; i < nrow_; ++i)
        if (basis_[i] < nvar_) out.primal[basis_[i]] = tab_[i][ncol_];
      for (std::size_t i = 0; i < nrow_; ++i) out.dual[i] = std::max(0.0, objrow_[slack_col_[i]]);
    }
    out.value = 0.0;
    for (std::size_t j = 0; j < nvar_; ++j) out.value += p.objective[j] * out.primal[j];
    return out;
  }

 private:
  static constexpr double kEnterTol = 1e-10;
  static constexpr double kPivotTol = 1e-9;

  double max_abs_rhs(const LpProblem& p) const {
    double m = 0.0;
    for (double v : p.rhs) m = std::max(m, std::abs(v));
    return m;
  }

  double row_sign(const LpProblem& p, std::size_t i) const { return p.rhs[i] >= 0.0 ? 1.0 : -1.0; }

  // Recomputes the primal and the duals from the final basis via one dense
  // LU factorization. Returns false when the basis matrix is too close to
  // singular, in which case the caller falls back to the tableau values.
  bool from_basis(const LpProblem& p, LpSolution& out) const {
    const std::size_t k = nrow_;
    std::vector<std::vector<double>> bmat(k, std::vector<double>(k, 0.0));
    for (std::size_t r = 0; r < k; ++r) {
      const std::size_t var = basis_[r];
      if (var < nvar_) {
        for (std::size_t i = 0; i < k; ++i) bmat[i][r] = row_sign(p, i) * p.lhs[i][var];
      } else if (var < nvar_ + nrow_) {
        const std::size_t i = var - nvar_;
        bmat[i][r] = -row_sign(p, i);
      } else {
        // artificial of a redundant row, pinned at zero
        bmat[art_row_[var - artificial_start_]][r] = 1.0;
      }
    }
    // LU with partial pivoting, factors stored in place
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) perm[i] = i;
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t piv = c;
      for (std::size_t i = c + 1; i < k; ++i)
        if (std::abs(bmat[i][c]) > std::abs(bmat[piv][c])) piv = i;
      if (std::abs(bmat[piv][c]) < 1e-12) return false;
      std::swap(bmat[c], bmat[piv]);
      std::swap(perm[c], perm[piv]);
      const double inv = 1.0 / bmat[c][c];
      for (std::size_t i = c + 1; i < k; ++i) {
        const double f = bmat[i][c] * inv;
        bmat[i][c] = f;
        if (f == 0.0) continue;
        for (std::size_t j = c + 1; j < k; ++j) bmat[i][j] -= f * bmat[c][j];
      }
    }
    const auto lu_solve = [&](std::vector<double> rhs) {
      std::vector<double> w(k);
      for (std::size_t i = 0; i < k; ++i) w[i] = rhs[perm[i]];
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < i; ++j) w[i] -= bmat[i][j] * w[j];
      for (std::size_t ii = k; ii-- > 0;) {
        for (std::size_t j = ii + 1; j < k; ++j) w[ii] -= bmat[ii][j] * w[j];
        w[ii] /= bmat[ii][ii];
      }
      return w;
    };
    const auto lut_solve = [&](const std::vector<double>& rhs) {
      // B^T y = c: with PB = LU, solve U^T z = c, L^T w = z, y = P^T w
      std::vector<double> w(rhs);
      for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) w[i] -= bmat[j][i] * w[j];
        w[i] /= bmat[i][i];
      }
      for (std::size_t ii = k; ii-- > 0;)
        for (std::size_t j = ii + 1; j < k; ++j) w[ii] -= bmat[j][ii] * w[j];
      std::vector<double> y(k);
      for (std::size_t i = 0; i < k; ++i) y[perm[i]] = w[i];
      return y;
    };

    std::vector<double> btilde(k);
    for (std::size_t i = 0; i < k; ++i) btilde[i] = row_sign(p, i) * p.rhs[i];
    const std::vector<double> xb = lu_solve(std::move(btilde));
    for (std::size_t r = 0; r < k; ++r)
      if (basis_[r] < nvar_) out.primal[basis_[r]] = xb[r];

    std::vector<double> cb(k, 0.0);
    for (std::size_t r = 0; r < k; ++r)
      if (basis_[r] < nvar_) cb[r] = p.objective[basis_[r]];
    const std::vector<double> y = lut_solve(cb);
    for (std::size_t i = 0; i < k; ++i)
      out.dual[i] = std::max(0.0, row_sign(p, i) * y[i]);
    return true;
  }

  void price(std::vector<double> cost) {
    cost_ = std::move(cost);
    objrow_ = cost_;
    objval_ = 0.0;
    for (std::size_t i = 0; i < nrow_; ++i) {
      const double cb = cost_[basis_[i]];
      if (cb == 0.0) continue;
      for (std::size_t j = 0; j < ncol_; ++j) objrow_[j] -= cb * tab_[i][j];
      objval_ += cb * tab_[i][ncol_];
    }
  }

  // Returns false when an unbounded ray is detected (phase two only).
  bool run(bool allow_unbounded) {
    const std::size_t guard = 4096 + 256 * (nrow_ + ncol_);
    bool repriced = false;
    for (std::size_t iter = 0;; ++iter) {
      if (iter > guard) throw Error("solve_lp: pivot limit exceeded (cycling guard)");
      // Bland: smallest improving index that admits a pivot row. A column
      // whose reduced cost is barely negative but has no positive entry is
      // roundoff, not an unbounded ray; skip it.
      std::size_t enter = ncol_, leave = nrow_;
      double enter_cost = 0.0;
      for (std::size_t j = 0; j < artificial_start_ && enter == ncol_; ++j) {
        if (objrow_[j] >= -kEnterTol) continue;
        double best_ratio = std::numeric_limits<double>::infinity();
        std::size_t row = nrow_;
        for (std::size_t i = 0; i < nrow_; ++i) {
          const double a = tab_[i][j];
          if (a <= kPivotTol) continue;
          const double ratio = tab_[i][ncol_] / a;
          if (ratio < best_ratio - 1e-12 ||
              (ratio < best_ratio + 1e-12 && (row == nrow_ || basis_[i] < basis_[row]))) {
            best_ratio = std::min(ratio, best_ratio);
            row = i;
          }
        }
        if (row != nrow_) {
          enter = j;
          leave = row;
        } else {
          enter_cost = std::min(enter_cost, objrow_[j]);
        }
      }
      if (enter == ncol_) {
        if (enter_cost < -1e-7) {
          // The incremental reduced-cost row drifts over long pivot runs on
          // near-parallel constraint sets; rebuild it once before concluding.
          if (!repriced) {
            repriced = true;
            price(cost_);
            continue;
          }
          if (allow_unbounded) return false;
          throw Error("solve_lp: phase-one ray (numerical breakdown)");
        }
        return true;  // optimal (any leftover negative reduced costs are noise)
      }
      pivot(leave, enter);
    }
  }

  void pivot(std::size_t r, std::size_t s) {
    const double inv = 1.0 / tab_[r][s];
    for (std::size_t j = 0; j <= ncol_; ++j) tab_[r][j] *= inv;
    tab_[r][s] = 1.0;
    for (std::size_t i = 0; i < nrow_; ++i) {
      if (i == r) continue;
      const double f = tab_[i][s];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= ncol_; ++j) tab_[i][j] -= f * tab_[r][j];
      tab_[i][s] = 0.0;
    }
    const double fo = objrow_[s];
    if (fo != 0.0) {
      for (std::size_t j = 0; j < ncol_; ++j) objrow_[j] -= fo * tab_[r][j];
      objval_ += fo * tab_[r][ncol_];
      objrow_[s] = 0.0;
    }
    basis_[r] = s;
  }

  // After phase one, pivot any artificial still basic (at level zero) onto a
  // structural column; rows with none are redundant and keep their artificial
  // pinned at zero (artificials never re-enter).
  void expel_artificials() {
    for (std::size_t i = 0; i < nrow_; ++i) {
      if (basis_[i] < artificial_start_) continue;
      for (std::size_t j = 0; j < artificial_start_; ++j) {
        if (std::abs(tab_[i][j]) > 1e-9) {
          pivot(i, j);
          break;
        }
      }
    }
  }

  std::size_t nvar_, nrow_, ncol_ = 0, artificial_start_ = 0;
  std::vector<std::vector<double>> tab_;
  std::vector<std::size_t> basis_;
  std::vector<std::size_t> slack_col_;
  std::vector<std::size_t> art_row_;
  std::vector<double> objrow_;
  std::vector<double> cost_;
  double objval_ = 0.0;
};

}  // namespace detail

/// Dense primal simplex with Bland's rule; duals come from the final basis.
inline LpSolution solve_lp(const LpProblem& p) {
  if (p.objective.empty() || p.rhs.empty()) throw Error("solve_lp: empty problem");
  if (p.lhs.size() != p.rhs.size()) throw Error("solve_lp: row count mismatch");
  detail::SimplexTableau tableau(p);
  return tableau.solve(p);
}

}  // namespace schurkit
