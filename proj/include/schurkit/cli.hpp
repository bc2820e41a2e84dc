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

#include <cstdlib>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "schurkit/matrix_io.hpp"
#include "schurkit/norms.hpp"
#include "schurkit/oracles.hpp"
#include "schurkit/random.hpp"

namespace schurkit::cli {

// Exit codes: 0 success with all verifications passing, 1 usage/IO errors,
// 2 verification or solver failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitVerification = 2;

namespace detail {

inline std::string fmt(double v) { return json(v).dump(); }

inline std::string hash_string(std::uint64_t h) {
  std::ostringstream os;
  os << "fnv1a64:" << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

inline void print_matrix(std::ostream& os, const Matrix& m, const std::string& indent) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << indent;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const cplx v = m(i, j);
      os << "[" << fmt(v.real()) << "," << fmt(v.imag()) << "]";
      if (j + 1 < m.cols()) os << " ";
    }
    os << "\n";
  }
}

struct LoadedMatrix {
  Matrix matrix;
  std::string path;
  std::string hash;
};

inline LoadedMatrix load(const std::string& path) {
  const std::string bytes = read_file_bytes(path);
  LoadedMatrix lm;
  lm.matrix = parse_matrix_text(bytes, path);
  if (!lm.matrix.has_finite_entries()) throw Error(path + ": non-finite entries");
  lm.path = path;
  lm.hash = hash_string(fnv1a_hash(bytes));
  return lm;
}

inline json input_block(const LoadedMatrix& lm) {
  json j;
  j["path"] = lm.path;
  j["hash"] = lm.hash;
  j["m"] = lm.matrix.rows();
  j["n"] = lm.matrix.cols();
  return j;
}

struct NormVerification {
  bool witness_feasible = true;
  bool value_consistent = true;
  bool certificate_valid = true;
  double feas_residual = 0.0;
  double value_residual = 0.0;
  double cert_residual = 0.0;
  bool pass() const { return witness_feasible && value_consistent && certificate_valid; }
};

// Re-derives every NormResult invariant from scratch at emission time.
inline NormVerification verify_norm_result(const Matrix& x, const NormResult& r, double tol) {
  NormVerification v;
  const double feas_tol = tol * (1.0 + std::abs(r.value));
  const double val_tol = 2.0 * tol * (1.0 + std::abs(r.value));
  const bool hermitian = x.square() && is_hermitian(x);
  const Matrix& w = r.primal_witness;

  if (r.kind == NormKind::schur) {
    if (hermitian && w.same_shape(x)) {
      v.feas_residual = schurkit::detail::domination_residual(w, x, true);
      v.value_residual = std::abs(r.value - schurkit::detail::max_real_diag(w));
    } else {
      v.feas_residual = schurkit::detail::domination_residual(w, block_embed(x), false);
      v.value_residual = std::abs(r.value - schurkit::detail::max_real_diag(w));
    }
  } else {
    if (!w.is_diagonal()) v.witness_feasible = false;
    double trace = 0.0;
    for (std::size_t j = 0; j < w.rows(); ++j) {
      trace += w(j, j).real();
      if (w(j, j).real() < -feas_tol) v.witness_feasible = false;
    }
    if (hermitian && w.same_shape(x)) {
      v.feas_residual = schurkit::detail::domination_residual(w, x, true);
      v.value_residual = std::abs(r.value - trace);
    } else {
      v.feas_residual = schurkit::detail::domination_residual(w, block_embed(x), false);
      v.value_residual = std::abs(r.value - 0.5 * trace);
    }
    if (r.dual_certificate) {
      v.cert_residual = std::abs(duality_pair(x, *r.dual_certificate) -
                                 cplx{r.value, 0.0});
      v.certificate_valid = v.cert_residual <= val_tol;
    }
  }
  if (v.feas_residual > feas_tol) v.witness_feasible = false;
  if (v.value_residual > val_tol) v.value_consistent = false;
  return v;
}

inline json verification_block(const NormVerification& v) {
  json j;
  j["witness_feasible"] = v.witness_feasible;
  j["value_consistent"] = v.value_consistent;
  j["certificate_valid"] = v.certificate_valid;
  j["feas_residual"] = v.feas_residual;
  j["value_residual"] = v.value_residual;
  j["cert_residual"] = v.cert_residual;
  j["pass"] = v.pass();
  return j;
}

inline json diagnostics_block(const SolveDiagnostics& d) {
  json j;
  j["gap"] = d.gap;
  j["iterations"] = d.iterations;
  j["feas_residual"] = d.feas_residual;
  j["cert_residual"] = d.cert_residual;
  return j;
}

inline MethodChoice parse_method(const std::string& s) {
  if (s == "auto") return MethodChoice::automatic;
  if (s == "sdp") return MethodChoice::sdp;
  return MethodChoice::cutting_plane;
}

inline std::uint64_t resolve_seed(const std::optional<std::uint64_t>& opt) {
  if (opt) return *opt;
  if (const char* env = std::getenv("SCHURKIT_SEED")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw Error(std::string("SCHURKIT_SEED is not a valid seed: ") + env);
    }
  }
  return 0;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Schur multiplier norm / dual norm toolkit"};
  app.require_subcommand(1);

  std::string kind, in_path, out_path, fac_kind, gen_type;
  std::string method = "auto";
  double tol = defaults::solver_tol;
  bool as_json = false;
  std::vector<std::string> check_paths;
  int trials = 10;
  std::optional<std::uint64_t> seed_opt;
  std::size_t gen_n = 0, gen_m = 0;

  auto* norm = app.add_subcommand("norm", "Compute a norm with witness and certificate");
  norm->add_option("--kind", kind, "schur|cbb")
      ->required()
      ->check(CLI::IsMember({"schur", "cbb"}));
  norm->add_option("--in", in_path, "matrix file")->required();
  norm->add_option("--method", method, "auto|sdp|cutting-plane")
      ->check(CLI::IsMember({"auto", "sdp", "cutting-plane"}));
  norm->add_option("--tol", tol, "solver tolerance (floored at 1e-12)");
  norm->add_flag("--json", as_json, "machine-readable report");

  auto* fac = app.add_subcommand("factorize", "Extract an optimal factorization");
  fac->add_option("--kind", fac_kind, "cbb|schur-lr|sqrtp")
      ->required()
      ->check(CLI::IsMember({"cbb", "schur-lr", "sqrtp"}));
  fac->add_option("--in", in_path, "matrix file")->required();
  fac->add_flag("--json", as_json, "machine-readable report");

  auto* certify = app.add_subcommand("certify", "Self-adjoint cbb value with verified certificate");
  certify->add_option("--in", in_path, "matrix file")->required();
  certify->add_flag("--json", as_json, "machine-readable report");

  auto* check = app.add_subcommand("check", "Sandwich bounds, sampled brackets, engine agreement");
  check->add_option("--in", check_paths, "matrix file(s)")->required();
  check->add_option("--trials", trials, "sampling trials per bound")->check(CLI::PositiveNumber);
  check->add_option("--seed", seed_opt, "sampling seed (falls back to SCHURKIT_SEED)");
  check->add_flag("--json", as_json, "machine-readable report");

  auto* gen = app.add_subcommand("gen", "Generate a random matrix file");
  gen->add_option("--type", gen_type, "psd|selfadjoint|general|diag")
      ->required()
      ->check(CLI::IsMember({"psd", "selfadjoint", "general", "diag"}));
  gen->add_option("--n", gen_n, "columns (and rows unless --m)")->required();
  gen->add_option("--m", gen_m, "rows (general only)");
  gen->add_option("--seed", seed_opt, "generation seed (falls back to SCHURKIT_SEED)");
  gen->add_option("--out", out_path, "output matrix file")->required();
  gen->add_flag("--json", as_json, "machine-readable report");

  std::vector<std::string> argv_storage;
  argv_storage.push_back("schurkit");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  tol = std::max(tol, 1e-12);

  try {
    if (norm->parsed()) {
      if (kind == "schur" && method == "cutting-plane") {
        err << "usage error: --method cutting-plane applies to --kind cbb only\n";
        return kExitUsage;
      }
      const detail::LoadedMatrix lm = detail::load(in_path);
      NormResult r;
      try {
        r = (kind == "schur") ? schur_norm(lm.matrix, detail::parse_method(method), tol)
                              : cbb_norm(lm.matrix, detail::parse_method(method), tol);
      } catch (const Error& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitVerification;
      }
      const detail::NormVerification v = detail::verify_norm_result(lm.matrix, r, tol);
      json rep;
      rep["command"] = "norm";
      rep["input"] = detail::input_block(lm);
      rep["kind"] = kind;
      rep["method"] = to_string(r.method);
      rep["tolerance"] = tol;
      rep["value"] = r.value;
      rep["witness"] = matrix_to_json(r.primal_witness);
      rep["certificate"] = r.dual_certificate ? matrix_to_json(*r.dual_certificate) : json(nullptr);
      rep["diagnostics"] = detail::diagnostics_block(r.diagnostics);
      rep["verification"] = detail::verification_block(v);
      if (as_json) {
        out << rep.dump(2) << "\n";
      } else {
        out << "norm kind=" << kind << " method=" << to_string(r.method)
            << " value=" << detail::fmt(r.value) << "\n";
        out << "  input " << lm.path << " (" << lm.hash << ", " << lm.matrix.rows() << "x"
            << lm.matrix.cols() << "), tolerance " << detail::fmt(tol) << "\n";
        out << "  diagnostics gap=" << detail::fmt(r.diagnostics.gap)
            << " iterations=" << r.diagnostics.iterations
            << " feas_residual=" << detail::fmt(r.diagnostics.feas_residual)
            << " cert_residual=" << detail::fmt(r.diagnostics.cert_residual) << "\n";
        out << "  witness:\n";
        detail::print_matrix(out, r.primal_witness, "    ");
        if (r.dual_certificate) {
          out << "  certificate:\n";
          detail::print_matrix(out, *r.dual_certificate, "    ");
        }
        out << "  verification witness_feasible=" << (v.witness_feasible ? "yes" : "no")
            << " value_consistent=" << (v.value_consistent ? "yes" : "no")
            << " certificate_valid=" << (v.certificate_valid ? "yes" : "no") << " -> "
            << (v.pass() ? "PASS" : "FAIL") << "\n";
      }
      return v.pass() ? kExitOk : kExitVerification;
    }

    if (fac->parsed()) {
      const detail::LoadedMatrix lm = detail::load(in_path);
      json rep;
      rep["command"] = "factorize";
      rep["input"] = detail::input_block(lm);
      rep["kind"] = fac_kind;
      rep["tolerance"] = tol;
      bool pass = true;
      std::string failure;
      try {
        if (fac_kind == "cbb") {
          const CbbFactorization f = cbb_factorization(lm.matrix, MethodChoice::automatic, tol);
          rep["value"] = f.value;
          rep["eta"] = f.eta;
          rep["xi"] = f.xi;
          rep["b"] = matrix_to_json(f.b);
          rep["b_norm"] = operator_norm(f.b);
          if (!as_json) {
            out << "cbb factorization value=" << detail::fmt(f.value)
                << " ||B||=" << detail::fmt(operator_norm(f.b)) << "\n  eta:";
            for (double e : f.eta) out << " " << detail::fmt(e);
            out << "\n  xi:";
            for (double e : f.xi) out << " " << detail::fmt(e);
            out << "\n  B:\n";
            detail::print_matrix(out, f.b, "    ");
          }
        } else if (fac_kind == "schur-lr") {
          const SchurFactorization f = schur_lr_factorization(lm.matrix, tol);
          const double resid = (f.l.adjoint() * f.r - lm.matrix).frobenius_norm();
          rep["l"] = matrix_to_json(f.l);
          rep["r"] = matrix_to_json(f.r);
          rep["column_norm_l"] = column_norm(f.l);
          rep["column_norm_r"] = column_norm(f.r);
          rep["reconstruction_residual"] = resid;
          pass = resid <= 1e-8 * (1.0 + lm.matrix.frobenius_norm());
          if (!pass) failure = "reconstruction residual too large";
          if (!as_json) {
            out << "schur L*R factorization ||L||_c=" << detail::fmt(column_norm(f.l))
                << " ||R||_c=" << detail::fmt(column_norm(f.r)) << " residual "
                << detail::fmt(resid) << "\n  L:\n";
            detail::print_matrix(out, f.l, "    ");
            out << "  R:\n";
            detail::print_matrix(out, f.r, "    ");
          }
        } else {
          const SqrtpContraction f = sqrtp_contraction(lm.matrix, tol);
          rep["p"] = matrix_to_json(f.p);
          rep["e"] = matrix_to_json(f.e);
          rep["e_norm"] = operator_norm(f.e);
          if (!as_json) {
            out << "sqrtp factorization ||E||=" << detail::fmt(operator_norm(f.e)) << "\n  P:\n";
            detail::print_matrix(out, f.p, "    ");
            out << "  E:\n";
            detail::print_matrix(out, f.e, "    ");
          }
        }
      } catch (const Error& e) {
        err << "factorization failure: " << e.what() << "\n";
        return kExitVerification;
      }
      rep["verification"] = json{{"pass", pass}, {"detail", failure}};
      if (as_json) out << rep.dump(2) << "\n";
      if (!as_json) out << "verification -> " << (pass ? "PASS" : "FAIL") << "\n";
      return pass ? kExitOk : kExitVerification;
    }

    if (certify->parsed()) {
      const detail::LoadedMatrix lm = detail::load(in_path);
      if (!lm.matrix.square() || !is_hermitian(lm.matrix)) {
        err << "usage error: certify requires a self-adjoint matrix\n";
        return kExitUsage;
      }
      NormResult r;
      try {
        r = cbb_norm(lm.matrix, MethodChoice::automatic, tol);
      } catch (const Error& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitVerification;
      }
      if (!r.dual_certificate) {
        err << "solver failure: no certificate produced\n";
        return kExitVerification;
      }
      const Matrix& z = *r.dual_certificate;
      const double pairing = duality_pair(lm.matrix, z).real();
      double z_schur = 0.0;
      bool pass = false;
      std::string failure;
      try {
        z_schur = schur_norm(z, MethodChoice::automatic, tol).value;
        const bool trace_ok = std::abs(pairing - r.value) <= tol * (1.0 + std::abs(r.value));
        const bool norm_ok = z_schur <= 1.0 + tol;
        pass = trace_ok && norm_ok;
        if (!trace_ok) failure = "Tr(ZX) does not match the norm value";
        if (!norm_ok) failure += std::string(failure.empty() ? "" : "; ") + "||Z||_S exceeds 1";
      } catch (const Error& e) {
        failure = e.what();
      }
      json rep;
      rep["command"] = "certify";
      rep["input"] = detail::input_block(lm);
      rep["tolerance"] = tol;
      rep["value"] = r.value;
      rep["trace_pairing"] = pairing;
      rep["certificate_schur_norm"] = z_schur;
      rep["certificate"] = matrix_to_json(z);
      rep["witness"] = matrix_to_json(r.primal_witness);
      rep["verification"] = json{{"pass", pass}, {"detail", failure}};
      if (as_json) {
        out << rep.dump(2) << "\n";
      } else {
        out << "cbb value        = " << detail::fmt(r.value) << "\n";
        out << "Tr(Z X)          = " << detail::fmt(pairing) << "\n";
        out << "schur_norm(Z)    = " << detail::fmt(z_schur) << " (must be <= 1)\n";
        out << "certificate Z:\n";
        detail::print_matrix(out, z, "  ");
        out << "verification -> " << (pass ? "PASS" : "FAIL") << "\n";
      }
      return pass ? kExitOk : kExitVerification;
    }

    if (check->parsed()) {
      const std::uint64_t seed = detail::resolve_seed(seed_opt);
      json reports = json::array();
      bool all_pass = true;
      for (const std::string& path : check_paths) {
        json rep;
        rep["command"] = "check";
        bool pass = false;
        try {
          const detail::LoadedMatrix lm = detail::load(path);
          rep["input"] = detail::input_block(lm);
          const SandwichReport sw = norm_sandwich(lm.matrix);
          const Bracket sb = schur_bracket(lm.matrix, trials, seed);
          const Bracket cb = cbb_bracket(lm.matrix, trials, seed + 1);
          const double v_sdp = cbb_norm(lm.matrix, MethodChoice::sdp, tol).value;
          const double v_cp = cbb_norm(lm.matrix, MethodChoice::cutting_plane, tol).value;
          const bool engines_agree = std::abs(v_sdp - v_cp) <= 1e-6 * (1.0 + std::abs(v_sdp));
          const bool brackets_ok = sb.lower <= sw.schur_value + 1e-6 &&
                                   cb.lower <= sw.cbb_value + 1e-6 &&
                                   sw.schur_value <= sb.upper + 1e-6 &&
                                   sw.cbb_value <= cb.upper + 1e-6;
          pass = sw.ok && brackets_ok && engines_agree;
          rep["sandwich"] = json{{"schur_lower", sw.schur_lower}, {"schur_upper", sw.schur_upper},
                                 {"cbb_lower", sw.cbb_lower},     {"cbb_upper", sw.cbb_upper},
                                 {"schur_value", sw.schur_value}, {"cbb_value", sw.cbb_value},
                                 {"ok", sw.ok}};
          rep["brackets"] = json{{"schur", json{{"lower", sb.lower}, {"upper", sb.upper}, {"trials", sb.trials}}},
                                 {"cbb", json{{"lower", cb.lower}, {"upper", cb.upper}, {"trials", cb.trials}}},
                                 {"ok", brackets_ok}};
          rep["engines"] = json{{"cbb_sdp", v_sdp}, {"cbb_cutting_plane", v_cp}, {"agree", engines_agree}};
          rep["seed"] = seed;
          rep["trials"] = trials;
          if (!as_json) {
            out << "check " << path << " (trials " << trials << ", seed " << seed
                << "): schur=" << detail::fmt(sw.schur_value) << " in [" << detail::fmt(sb.lower)
                << ", " << detail::fmt(sb.upper) << "]"
                << ", cbb=" << detail::fmt(sw.cbb_value) << " in [" << detail::fmt(cb.lower)
                << ", " << detail::fmt(cb.upper) << "]"
                << ", sandwich schur [" << detail::fmt(sw.schur_lower) << ", "
                << detail::fmt(sw.schur_upper) << "] cbb [" << detail::fmt(sw.cbb_lower) << ", "
                << detail::fmt(sw.cbb_upper) << "]"
                << ", engines " << detail::fmt(v_sdp) << "/" << detail::fmt(v_cp) << " -> "
                << (pass ? "PASS" : "FAIL") << "\n";
          }
        } catch (const Error& e) {
          rep["error"] = e.what();
          if (!as_json) out << "check " << path << ": ERROR " << e.what() << "\n";
        }
        rep["pass"] = pass;
        all_pass = all_pass && pass;
        reports.push_back(std::move(rep));
      }
      if (as_json) out << reports.dump(2) << "\n";
      return all_pass ? kExitOk : kExitVerification;
    }

    if (gen->parsed()) {
      if (gen_n == 0) {
        err << "usage error: --n must be positive\n";
        return kExitUsage;
      }
      if (gen_m != 0 && gen_type != "general") {
        err << "usage error: --m applies to --type general only\n";
        return kExitUsage;
      }
      const std::uint64_t seed = detail::resolve_seed(seed_opt);
      Rng rng(seed);
      Matrix mtx;
      if (gen_type == "psd") {
        mtx = random_psd(rng, gen_n);
      } else if (gen_type == "selfadjoint") {
        mtx = random_selfadjoint(rng, gen_n);
      } else if (gen_type == "diag") {
        mtx = random_diag(rng, gen_n);
      } else {
        mtx = random_general(rng, gen_m == 0 ? gen_n : gen_m, gen_n);
      }
      write_matrix(mtx, out_path);
      json rep;
      rep["command"] = "gen";
      rep["type"] = gen_type;
      rep["m"] = mtx.rows();
      rep["n"] = mtx.cols();
      rep["seed"] = seed;
      rep["out"] = out_path;
      if (as_json)
        out << rep.dump(2) << "\n";
      else
        out << "wrote " << gen_type << " " << mtx.rows() << "x" << mtx.cols() << " (seed " << seed
            << ") to " << out_path << "\n";
      return kExitOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  err << "usage error: no subcommand\n";
  return kExitUsage;
}

inline int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace schurkit::cli
