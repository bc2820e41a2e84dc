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
#include <string>
#include <vector>

#include "schurkit/cutting_plane.hpp"
#include "schurkit/eig.hpp"
#include "schurkit/matrix.hpp"
#include "schurkit/sdp.hpp"

namespace schurkit {

enum class NormKind { schur, cbb };

/// Which route produced a result.
enum class NormMethod { psd_fastpath, diag_fastpath, sdp, cutting_plane };

/// Requested engine. `automatic` allows fast paths; the explicit choices
/// force the named engine even on inputs a fast path could answer.
enum class MethodChoice { automatic, sdp, cutting_plane };

inline const char* to_string(NormMethod m) {
  switch (m) {
    case NormMethod::psd_fastpath: return "psd-fastpath";
    case NormMethod::diag_fastpath: return "diag-fastpath";
    case NormMethod::sdp: return "sdp";
    case NormMethod::cutting_plane: return "cutting-plane";
  }
  return "?";
}

struct SolveDiagnostics {
  double gap = 0.0;
  int iterations = 0;
  double feas_residual = 0.0;  // most negative slack eigenvalue, clamped to >= 0
  double cert_residual = 0.0;  // |Tr(Z* X) - value| when a certificate exists
};

/// A norm value with its optimal witness. For the Schur norm the witness is
/// the dominating P (self-adjoint input) or the block-diagonal D (general
/// input); for the cbB norm it is the diagonal Delta(lambda), with the
/// halved-trace convention in the general case.
struct NormResult {
  NormKind kind = NormKind::schur;
  double value = 0.0;
  Matrix primal_witness;
  std::optional<Matrix> dual_certificate;
  NormMethod method = NormMethod::sdp;
  SolveDiagnostics diagnostics;
};

namespace detail {

inline bool diagonal_real(const Matrix& x) {
  if (!x.is_diagonal()) return false;
  for (std::size_t i = 0; i < x.rows(); ++i)
    if (x(i, i).imag() != 0.0) return false;
  return true;
}

inline void require_finite(const Matrix& x, const char* who) {
  if (!x.has_finite_entries()) throw Error(std::string(who) + ": non-finite entries");
}

// Most negative eigenvalue among the witness slack matrices, clamped to >= 0.
inline double domination_residual(const Matrix& witness, const Matrix& x, bool both_sides) {
  double worst = 0.0;
  worst = std::min(worst, min_eigenvalue(hermitize(witness - x)));
  if (both_sides) worst = std::min(worst, min_eigenvalue(hermitize(witness + x)));
  return -worst;
}

inline double max_real_diag(const Matrix& m) {
  double best = 0.0;
  for (std::size_t j = 0; j < m.rows(); ++j) best = std::max(best, m(j, j).real());
  return best;
}

}  // namespace detail

/// Schur multiplier norm. Dispatch for `automatic`: exact zero, then diagonal
/// (max modulus entry), then PSD (max diagonal entry), then the self-adjoint
/// single-block SDP with offsets {+X, -X}, then the general block SDP over
/// blocks (m, n) dominating the self-adjoint embedding. `sdp` skips the
/// diagonal/PSD shortcuts.
inline NormResult schur_norm(const Matrix& x, MethodChoice method = MethodChoice::automatic,
                             double tol = defaults::solver_tol) {
  detail::require_finite(x, "schur_norm");
  if (method == MethodChoice::cutting_plane)
    throw Error("schur_norm: the cutting-plane engine applies to the cbb norm only");
  NormResult res;
  res.kind = NormKind::schur;

  if (x.is_zero()) {
    res.method = NormMethod::diag_fastpath;
    res.primal_witness = x.square() ? Matrix(x.rows(), x.rows())
                                    : Matrix(x.rows() + x.cols(), x.rows() + x.cols());
    return res;
  }

  const bool hermitian = x.square() && is_hermitian(x);
  if (method == MethodChoice::automatic && x.is_diagonal()) {
    res.method = NormMethod::diag_fastpath;
    std::vector<double> mods(x.rows());
    for (std::size_t j = 0; j < x.rows(); ++j) mods[j] = std::abs(x(j, j));
    res.value = *std::max_element(mods.begin(), mods.end());
    if (detail::diagonal_real(x)) {
      res.primal_witness = Matrix::diag(mods);
    } else {
      std::vector<double> twice(mods);
      twice.insert(twice.end(), mods.begin(), mods.end());
      res.primal_witness = Matrix::diag(twice);
    }
    return res;
  }
  if (method == MethodChoice::automatic && hermitian) {
    const HermEig e = herm_eig(x);
    if (e.eigenvalues.front() >= -defaults::herm_tol * (1.0 + e.eigenvalues.back())) {
      res.method = NormMethod::psd_fastpath;
      res.value = detail::max_real_diag(x);
      res.primal_witness = x;
      return res;
    }
  }

  res.method = NormMethod::sdp;
  BlockMaxDiagProblem prob;
  if (hermitian) {
    prob.block_sizes = {x.rows()};
    prob.offsets = {x, -x};
  } else {
    prob.block_sizes = {x.rows(), x.cols()};
    prob.offsets = {-block_embed(x)};
  }
  const BlockMaxDiagSolution sol = solve_blockmaxdiag_sdp(prob, tol);
  res.value = sol.t;
  res.primal_witness = sol.d;
  res.diagnostics.gap = sol.gap;
  res.diagnostics.iterations = sol.iterations;
  res.diagnostics.feas_residual =
      hermitian ? detail::domination_residual(sol.d, x, true)
                : detail::domination_residual(sol.d, block_embed(x), false);
  return res;
}

namespace detail {

// Upper-right m x n corner of a certificate for the embedded matrix; carries
// the full trace pairing of the original by the compression lemma.
inline Matrix corner_certificate(const Matrix& zfull, std::size_t m, std::size_t n) {
  Matrix w(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) w(i, j) = zfull(i, m + j);
  return w;
}

struct CbbEngineOutput {
  std::vector<double> lambda;
  double value = 0.0;
  Matrix certificate;
  double gap = 0.0;
  int iterations = 0;
};

// Self-adjoint cbb solve: min sum(lambda) with Delta(lambda) -/+ H >= 0.
// `single_sided` drops the + constraint (valid when H carries the block
// symmetry that makes it redundant).
inline CbbEngineOutput cbb_selfadjoint_engine(const Matrix& h, MethodChoice method, double tol,
                                              bool single_sided) {
  CbbEngineOutput out;
  const std::size_t n = h.rows();
  if (method == MethodChoice::cutting_plane) {
    const ProgramPResult r = solve_program_p(h, tol);
    out.lambda = r.lambda;
    out.value = r.value;
    out.certificate = build_certificate(r.pool).z;
    out.iterations = r.rounds;
    return out;
  }
  DiagSdpProblem prob;
  prob.n = n;
  prob.weights.assign(n, 1.0);
  if (single_sided)
    prob.offsets = {-h};
  else
    prob.offsets = {-h, h};
  const DiagSdpSolution sol = solve_diag_sdp(prob, tol);
  out.lambda = sol.lambda;
  out.value = sol.value;
  out.certificate = single_sided ? sol.duals[0] : hermitize(sol.duals[0] - sol.duals[1]);
  out.gap = sol.gap;
  out.iterations = sol.iterations;
  return out;
}

}  // namespace detail

/// Dual (cbB) norm with a dual certificate Z: ||Z||_S <= 1 and
/// Tr(Z* X) = value. Self-adjoint inputs solve min Tr Delta(lambda) with
/// Delta(lambda) -/+ X >= 0 on the chosen engine; general inputs solve the
/// single-constraint program over the self-adjoint embedding and halve the
/// trace, with the certificate read off the optimal dual's corner block.
inline NormResult cbb_norm(const Matrix& x, MethodChoice method = MethodChoice::automatic,
                           double tol = defaults::solver_tol) {
  detail::require_finite(x, "cbb_norm");
  NormResult res;
  res.kind = NormKind::cbb;

  if (x.is_zero()) {
    res.method = NormMethod::diag_fastpath;
    res.primal_witness = x.square() ? Matrix(x.rows(), x.rows())
                                    : Matrix(x.rows() + x.cols(), x.rows() + x.cols());
    res.dual_certificate = Matrix(x.rows(), x.cols());
    return res;
  }

  if (method == MethodChoice::automatic && x.is_diagonal()) {
    res.method = NormMethod::diag_fastpath;
    const std::size_t n = x.rows();
    std::vector<double> mods(n);
    Matrix z(n, n);
    for (std::size_t j = 0; j < n; ++j) {
      mods[j] = std::abs(x(j, j));
      if (mods[j] > 0.0) z(j, j) = x(j, j) / mods[j];
      res.value += mods[j];
    }
    res.dual_certificate = z;
    if (detail::diagonal_real(x)) {
      res.primal_witness = Matrix::diag(mods);
    } else {
      std::vector<double> twice(mods);
      twice.insert(twice.end(), mods.begin(), mods.end());
      res.primal_witness = Matrix::diag(twice);
    }
    return res;
  }

  const bool hermitian = x.square() && is_hermitian(x);
  if (hermitian) {
    const auto eng = detail::cbb_selfadjoint_engine(x, method, tol, /*single_sided=*/false);
    res.value = eng.value;
    res.primal_witness = Matrix::diag(eng.lambda);
    res.dual_certificate = eng.certificate;
    res.method =
        (method == MethodChoice::cutting_plane) ? NormMethod::cutting_plane : NormMethod::sdp;
    res.diagnostics.gap = eng.gap;
    res.diagnostics.iterations = eng.iterations;
    res.diagnostics.feas_residual = detail::domination_residual(res.primal_witness, x, true);
  } else {
    const Matrix y = block_embed(x);
    // The cutting-plane program carries both constraint families anyway; the
    // SDP route uses the single-sided form of the general-case theorem.
    const bool single = (method != MethodChoice::cutting_plane);
    const auto eng = detail::cbb_selfadjoint_engine(y, method, tol, single);
    res.value = 0.5 * eng.value;
    res.primal_witness = Matrix::diag(eng.lambda);
    res.dual_certificate = detail::corner_certificate(eng.certificate, x.rows(), x.cols());
    res.method =
        (method == MethodChoice::cutting_plane) ? NormMethod::cutting_plane : NormMethod::sdp;
    res.diagnostics.gap = eng.gap;
    res.diagnostics.iterations = eng.iterations;
    res.diagnostics.feas_residual =
        detail::domination_residual(res.primal_witness, y, !single);
  }
  if (res.dual_certificate) {
    cplx pairing = 0.0;
    const Matrix& z = *res.dual_certificate;
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) pairing += std::conj(z(i, j)) * x(i, j);
    res.diagnostics.cert_residual = std::abs(pairing - res.value);
  }
  return res;
}

/// Optimal cbb factorization X = Delta(eta) B Delta(xi) with nonnegative unit
/// vectors eta, xi and ||B|| equal to the norm.
struct CbbFactorization {
  std::vector<double> eta;
  std::vector<double> xi;
  Matrix b;
  double value = 0.0;
};

namespace detail {

inline std::vector<double> support_weights(const std::vector<double>& lambda, double trace,
                                           std::vector<bool>& support) {
  std::vector<double> w(lambda.size(), 0.0);
  double norm2 = 0.0;
  for (std::size_t j = 0; j < lambda.size(); ++j) {
    support[j] = lambda[j] > defaults::lambda_support_rel * trace;
    if (support[j]) {
      w[j] = std::sqrt(lambda[j]);
      norm2 += lambda[j];
    }
  }
  norm2 = std::sqrt(norm2);
  for (double& v : w) v /= norm2;
  return w;
}

inline void check_support_column(const Matrix& x, std::size_t j, bool is_column, double fnorm) {
  double mass = 0.0;
  if (is_column)
    for (std::size_t i = 0; i < x.rows(); ++i) mass += std::norm(x(i, j));
  else
    for (std::size_t k = 0; k < x.cols(); ++k) mass += std::norm(x(j, k));
  if (std::sqrt(mass) > defaults::column_support_rel * fnorm)
    throw Error("cbb_factorization: support violation, vanishing lambda against a nonzero " +
                std::string(is_column ? "column" : "row"));
}

}  // namespace detail

/// Extracts the factorization of the optimal Delta(lambda): xi_j^2 =
/// lambda_j / Tr, B = Delta(xi)^+ X Delta(xi)^+ on the support. General
/// inputs normalize eta and xi within their own blocks of the embedded
/// solution. Verifies reconstruction and ||B|| <= value before returning.
inline CbbFactorization cbb_factorization(const Matrix& x,
                                          MethodChoice method = MethodChoice::automatic,
                                          double tol = defaults::solver_tol) {
  detail::require_finite(x, "cbb_factorization");
  if (x.is_zero()) throw Error("cbb_factorization: zero matrix has no factorization");
  const std::size_t m = x.rows(), n = x.cols();
  const double fnorm = x.frobenius_norm();
  // eta and xi are invariant under scaling of X, and the engines' tolerances
  // are value-relative, so solving at unit Frobenius norm makes the
  // extracted supports scale-free.
  const NormResult r = cbb_norm((1.0 / fnorm) * x, method, tol);
  const std::vector<double> lambda = r.primal_witness.real_diag();

  CbbFactorization f;
  f.value = fnorm * r.value;
  const bool hermitian = x.square() && is_hermitian(x);
  if (hermitian) {
    double trace = 0.0;
    for (double l : lambda) trace += l;
    std::vector<bool> supp(n, false);
    f.xi = detail::support_weights(lambda, trace, supp);
    f.eta = f.xi;
    for (std::size_t j = 0; j < n; ++j)
      if (!supp[j]) detail::check_support_column(x, j, /*is_column=*/true, fnorm);
    f.b = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (supp[i] && supp[j]) f.b(i, j) = x(i, j) / (f.xi[i] * f.xi[j]);
  } else {
    double trace = 0.0;
    for (double l : lambda) trace += l;
    std::vector<double> lrow(lambda.begin(), lambda.begin() + m);
    std::vector<double> lcol(lambda.begin() + m, lambda.end());
    // Support thresholds stay relative to the full embedded trace, the scale
    // the solver worked at.
    std::vector<bool> supp_row(m, false), supp_col(n, false);
    for (std::size_t i = 0; i < m; ++i)
      supp_row[i] = lrow[i] > defaults::lambda_support_rel * trace;
    for (std::size_t j = 0; j < n; ++j)
      supp_col[j] = lcol[j] > defaults::lambda_support_rel * trace;
    double srow = 0.0, scol = 0.0;
    for (std::size_t i = 0; i < m; ++i)
      if (supp_row[i]) srow += lrow[i];
    for (std::size_t j = 0; j < n; ++j)
      if (supp_col[j]) scol += lcol[j];
    if (srow <= 0.0 || scol <= 0.0)
      throw Error("cbb_factorization: degenerate block trace split");
    f.eta.assign(m, 0.0);
    f.xi.assign(n, 0.0);
    for (std::size_t i = 0; i < m; ++i)
      if (supp_row[i]) f.eta[i] = std::sqrt(lrow[i] / srow);
    for (std::size_t j = 0; j < n; ++j)
      if (supp_col[j]) f.xi[j] = std::sqrt(lcol[j] / scol);
    for (std::size_t i = 0; i < m; ++i)
      if (!supp_row[i]) detail::check_support_column(x, i, /*is_column=*/false, fnorm);
    for (std::size_t j = 0; j < n; ++j)
      if (!supp_col[j]) detail::check_support_column(x, j, /*is_column=*/true, fnorm);
    f.b = Matrix(m, n);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (supp_row[i] && supp_col[j]) f.b(i, j) = x(i, j) / (f.eta[i] * f.xi[j]);
  }

  // Postconditions from the optimality of lambda.
  Matrix recon(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) recon(i, j) = f.eta[i] * f.b(i, j) * f.xi[j];
  if ((recon - x).frobenius_norm() > 1e-8 * (1.0 + fnorm))
    throw Error("cbb_factorization: reconstruction check failed (solver inaccuracy)");
  if (operator_norm(f.b) > f.value * (1.0 + tol) + tol)
    throw Error("cbb_factorization: ||B|| exceeds the norm (solver inaccuracy)");
  return f;
}

/// L* R factorization of a self-adjoint X from the optimal Schur witness P:
/// A = (P+X)/2, B = (P-X)/2, L = stack(sqrt A, sqrt B), R = stack(sqrt A,
/// -sqrt B), so L*L = R*R = P and L*R = X.
struct SchurFactorization {
  Matrix l, r;
};

inline SchurFactorization schur_lr_factorization(const Matrix& x,
                                                 double tol = defaults::solver_tol) {
  if (!x.square() || !is_hermitian(x)) throw Error("schur_lr_factorization: input must be self-adjoint");
  const NormResult res = schur_norm(x, MethodChoice::automatic, tol);
  const Matrix& p = res.primal_witness;
  const Matrix a = hermitize(0.5 * (p + x));
  const Matrix b = hermitize(0.5 * (p - x));
  Matrix sa, sb;
  try {
    sa = psd_sqrt(a, 1e-7);
    sb = psd_sqrt(b, 1e-7);
  } catch (const Error&) {
    throw Error("schur_lr_factorization: (P+X)/2 or (P-X)/2 failed the PSD band (solver inaccuracy)");
  }
  SchurFactorization f{vstack(sa, sb), vstack(sa, -sb)};
  const double cn = column_norm(f.l);
  if (cn * cn > res.value * (1.0 + tol) + tol)
    throw Error("schur_lr_factorization: column-norm bound violated (solver inaccuracy)");
  return f;
}

/// X = sqrt(P) E sqrt(P) with a self-adjoint contraction E, for a given
/// admissible witness P.
struct SqrtpContraction {
  Matrix p, e;
};

inline SqrtpContraction sqrtp_contraction_with(const Matrix& x, const Matrix& p,
                                               double tol = defaults::solver_tol) {
  if (!x.square() || !is_hermitian(x)) throw Error("sqrtp_contraction: input must be self-adjoint");
  if (!p.same_shape(x)) throw Error("sqrtp_contraction: witness shape mismatch");
  const Matrix pis = pinv_sqrt(p, 1e-13);
  const Matrix e = hermitize(pis * x * pis);
  if (operator_norm(e) > 1.0 + std::max(tol, 1e-7))
    throw Error("sqrtp_contraction: E is not a contraction (witness not optimal/compatible)");
  const Matrix ps = psd_sqrt(p, 1e-7);
  if ((ps * e * ps - x).frobenius_norm() > 1e-8 * (1.0 + x.frobenius_norm()))
    throw Error("sqrtp_contraction: reconstruction check failed");
  return {p, e};
}

inline SqrtpContraction sqrtp_contraction(const Matrix& x, double tol = defaults::solver_tol) {
  const NormResult res = schur_norm(x, MethodChoice::automatic, tol);
  return sqrtp_contraction_with(x, res.primal_witness, tol);
}

/// Jordan-type split X = A - B with A, B >= 0 and ||A+B||_S = ||X||_S,
/// from the optimal witness.
struct JordanDecomposition {
  Matrix a, b;
};

inline JordanDecomposition jordan_schur_decomposition(const Matrix& x,
                                                      double tol = defaults::solver_tol) {
  if (!x.square() || !is_hermitian(x))
    throw Error("jordan_schur_decomposition: input must be self-adjoint");
  const NormResult res = schur_norm(x, MethodChoice::automatic, tol);
  const Matrix a = hermitize(0.5 * (res.primal_witness + x));
  const Matrix b = hermitize(0.5 * (res.primal_witness - x));
  const double band = std::max(tol, 1e-9);
  if (min_eigenvalue(a) < -band * (1.0 + operator_norm(a)) ||
      min_eigenvalue(b) < -band * (1.0 + operator_norm(b)))
    throw Error("jordan_schur_decomposition: PSD tolerance failure");
  if (detail::max_real_diag(res.primal_witness) > res.value * (1.0 + tol) + tol)
    throw Error("jordan_schur_decomposition: ||A+B||_S bound violated");
  return {a, b};
}

/// Tr(Y* X), the inner product realizing the duality between the two norms.
inline cplx duality_pair(const Matrix& x, const Matrix& y) {
  if (!x.same_shape(y)) throw Error("duality_pair: shape mismatch");
  cplx s = 0.0;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) s += std::conj(y(i, j)) * x(i, j);
  return s;
}

/// Elementary bracketing of both norms plus the computed values:
/// max|X_ij| <= ||X||_S <= ||X||_inf and trace norm <= ||X||_cbB <= sum|X_ij|.
struct SandwichReport {
  double schur_lower = 0.0, schur_upper = 0.0;
  double cbb_lower = 0.0, cbb_upper = 0.0;
  double schur_value = 0.0, cbb_value = 0.0;
  bool ok = true;
};

inline SandwichReport norm_sandwich(const Matrix& x, double tol = 1e-6) {
  detail::require_finite(x, "norm_sandwich");
  SandwichReport r;
  const EntryNorms en = entry_norms(x);
  r.schur_lower = en.max_abs;
  r.schur_upper = operator_norm(x);
  r.cbb_lower = trace_norm(x);
  r.cbb_upper = en.l1;
  r.schur_value = schur_norm(x).value;
  r.cbb_value = cbb_norm(x).value;
  r.ok = r.schur_value >= r.schur_lower - tol && r.schur_value <= r.schur_upper + tol &&
         r.cbb_value >= r.cbb_lower - tol && r.cbb_value <= r.cbb_upper + tol;
  return r;
}

}  // namespace schurkit
