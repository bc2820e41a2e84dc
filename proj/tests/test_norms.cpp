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

#include <catch2/catch.hpp>

#include "schurkit/norms.hpp"
#include "schurkit/oracles.hpp"
#include "schurkit/random.hpp"

using namespace schurkit;

namespace {

Matrix ones(std::size_t m, std::size_t n) {
  Matrix j(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t k = 0; k < n; ++k) j(i, k) = 1.0;
  return j;
}

const Matrix kPaperExample = Matrix::diag(std::vector<double>{1.0, -0.25});

}  // namespace

TEST_CASE("schur_norm dispatch and fixed values") {
  SECTION("PSD fast path is the max diagonal entry") {
    const Matrix x = Matrix::from_rows({{2.0, 1.0}, {1.0, 1.0}});
    const NormResult r = schur_norm(x);
    CHECK(r.method == NormMethod::psd_fastpath);
    CHECK(r.value == Approx(2.0));
    CHECK((r.primal_witness - x).frobenius_norm() == 0.0);
  }
  SECTION("paper 2x2 example") {
    CHECK(schur_norm(kPaperExample).value == Approx(1.0).margin(1e-10));
    const NormResult r = schur_norm(kPaperExample, MethodChoice::sdp);
    CHECK(r.method == NormMethod::sdp);
    CHECK(r.value == Approx(1.0).margin(1e-7));
  }
  SECTION("indefinite symmetric 2x2 sits inside the derived bracket") {
    const Matrix x = Matrix::from_rows({{1.0, 1.0}, {1.0, -1.0}});
    const double v = schur_norm(x).value;
    CHECK(v >= 1.0 - 1e-8);
    CHECK(v <= std::sqrt(2.0) + 1e-8);
    const double search = random_search_blocksdp(x, 200000, 12345);
    CHECK(std::abs(v - search) <= 1e-3);
    // the bracket collapses here: multiplying X by itself forces
    // ||X o X|| / ||X|| = sqrt(2), which meets the operator-norm upper bound
    const double self_ratio = operator_norm(schur_product(x, x)) / operator_norm(x);
    CHECK(self_ratio == Approx(std::sqrt(2.0)));
    CHECK(v == Approx(std::sqrt(2.0)).margin(1e-7));
  }
  SECTION("rank-one all-ones rectangle") {
    CHECK(schur_norm(ones(2, 3)).value == Approx(1.0).margin(1e-7));
  }
  SECTION("zero and diagonal fast paths") {
    CHECK(schur_norm(Matrix(3, 4)).value == 0.0);
    const NormResult d = schur_norm(Matrix::diag(std::vector<cplx>{{0.0, 2.0}, {1.0, 0.0}}));
    CHECK(d.method == NormMethod::diag_fastpath);
    CHECK(d.value == Approx(2.0));
    // complex diagonal witness dominates the embedding
    CHECK(min_eigenvalue(hermitize(
              d.primal_witness -
              block_embed(Matrix::diag(std::vector<cplx>{{0.0, 2.0}, {1.0, 0.0}})))) >= -1e-12);
  }
  SECTION("cutting-plane request is rejected") {
    CHECK_THROWS_AS(schur_norm(Matrix::identity(2), MethodChoice::cutting_plane), Error);
  }
}

TEST_CASE("cbb_norm fixed values and certificates") {
  SECTION("diagonal") {
    const Matrix x = Matrix::diag(std::vector<double>{1.0, -1.0});
    const NormResult r = cbb_norm(x);
    CHECK(r.value == Approx(2.0));
    REQUIRE(r.dual_certificate.has_value());
    CHECK(((*r.dual_certificate) - x).frobenius_norm() == 0.0);
  }
  SECTION("all-ones hits the rank-one oracle on both engines") {
    const double oracle = rank_one_domination_cbb({cplx{1.0, 0.0}, cplx{1.0, 0.0}});
    CHECK(cbb_norm(ones(2, 2), MethodChoice::sdp).value == Approx(oracle).epsilon(1e-7));
    CHECK(cbb_norm(ones(2, 2), MethodChoice::cutting_plane).value == Approx(oracle).epsilon(1e-7));
  }
  SECTION("1x1") {
    CHECK(cbb_norm(Matrix::from_rows({{cplx{3.0, -4.0}}})).value == Approx(5.0).margin(1e-7));
  }
  SECTION("general input equals half the embedded self-adjoint value") {
    Rng rng(59);
    const Matrix x = random_general(rng, 2, 3);
    const double direct = cbb_norm(x).value;
    const double embedded = cbb_norm(block_embed(x)).value;
    CHECK(direct == Approx(0.5 * embedded).epsilon(1e-6));
  }
  SECTION("certificates pair to the value with Schur norm at most 1") {
    Rng rng(61);
    for (int trial = 0; trial < 6; ++trial) {
      const bool general = trial % 2 == 0;
      const Matrix x = general ? random_general(rng, 2, 3) : random_selfadjoint(rng, 3);
      for (MethodChoice mc : {MethodChoice::sdp, MethodChoice::cutting_plane}) {
        const NormResult r = cbb_norm(x, mc);
        REQUIRE(r.dual_certificate.has_value());
        const cplx pairing = duality_pair(x, *r.dual_certificate);
        REQUIRE(std::abs(pairing - r.value) <= 1e-6 * (1.0 + r.value));
        REQUIRE(schur_norm(*r.dual_certificate).value <= 1.0 + 1e-6);
      }
    }
  }
}

TEST_CASE("cbb_factorization") {
  SECTION("diag(1,-1)") {
    const CbbFactorization f = cbb_factorization(Matrix::diag(std::vector<double>{1.0, -1.0}));
    CHECK(f.xi[0] == Approx(1.0 / std::sqrt(2.0)));
    CHECK(f.xi[1] == Approx(1.0 / std::sqrt(2.0)));
    CHECK(f.b(0, 0).real() == Approx(2.0));
    CHECK(f.b(1, 1).real() == Approx(-2.0));
  }
  SECTION("support handling on diag(1,0)") {
    const CbbFactorization f = cbb_factorization(Matrix::diag(std::vector<double>{1.0, 0.0}));
    CHECK(f.xi[0] == Approx(1.0));
    CHECK(f.xi[1] == 0.0);
    CHECK(f.b(0, 0).real() == Approx(1.0));
    CHECK(f.b(1, 1) == cplx{0.0, 0.0});
  }
  SECTION("all-ones") {
    const CbbFactorization f = cbb_factorization(ones(2, 2), MethodChoice::sdp);
    CHECK(f.value == Approx(4.0).epsilon(1e-6));
    CHECK(f.xi[0] == Approx(1.0 / std::sqrt(2.0)).margin(1e-5));
    CHECK(f.b(0, 1).real() == Approx(2.0).margin(1e-4));
    CHECK(operator_norm(f.b) == Approx(4.0).epsilon(1e-5));
  }
  SECTION("zero matrix is rejected") {
    CHECK_THROWS_AS(cbb_factorization(Matrix(2, 2)), Error);
  }
  SECTION("general path reconstructs and matches the norm") {
    Rng rng(67);
    for (int trial = 0; trial < 4; ++trial) {
      const Matrix x = random_general(rng, 2 + rng.below(3), 2 + rng.below(3));
      const CbbFactorization f = cbb_factorization(x);
      CHECK(vec_norm2(std::vector<cplx>(f.eta.begin(), f.eta.end())) == Approx(1.0).margin(1e-9));
      CHECK(vec_norm2(std::vector<cplx>(f.xi.begin(), f.xi.end())) == Approx(1.0).margin(1e-9));
      Matrix recon(x.rows(), x.cols());
      for (std::size_t i = 0; i < x.rows(); ++i)
        for (std::size_t j = 0; j < x.cols(); ++j) recon(i, j) = f.eta[i] * f.b(i, j) * f.xi[j];
      CHECK((recon - x).frobenius_norm() <= 1e-8 * (1.0 + x.frobenius_norm()));
      CHECK(operator_norm(f.b) == Approx(f.value).epsilon(1e-5));
    }
  }
  SECTION("xi agrees across the two engines") {
    Rng rng(71);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix x = random_selfadjoint(rng, 2 + rng.below(3));
      // The shared optimum is unique, but the LP vertex only pins it to about
      // sqrt(tol), so the comparison runs both engines tight.
      const CbbFactorization a = cbb_factorization(x, MethodChoice::sdp, 1e-9);
      const CbbFactorization b = cbb_factorization(x, MethodChoice::cutting_plane, 1e-9);
      for (std::size_t j = 0; j < x.rows(); ++j) REQUIRE(a.xi[j] == Approx(b.xi[j]).margin(1e-5));
    }
  }
}

TEST_CASE("schur_lr_factorization") {
  SECTION("paper example: unit column norms") {
    const SchurFactorization f = schur_lr_factorization(kPaperExample);
    CHECK((f.l.adjoint() * f.r - kPaperExample).frobenius_norm() <= 1e-10);
    CHECK(column_norm(f.l) == Approx(1.0).margin(1e-8));
    CHECK(column_norm(f.r) == Approx(1.0).margin(1e-8));
  }
  SECTION("PSD input keeps B = 0") {
    const Matrix x = Matrix::from_rows({{2.0, 1.0}, {1.0, 1.0}});
    const SchurFactorization f = schur_lr_factorization(x);
    // lower half of L is sqrt((P-X)/2) = 0 for the PSD fast path P = X
    for (std::size_t i = 2; i < 4; ++i)
      for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(f.l(i, j)) <= 1e-12);
    CHECK((f.l.adjoint() * f.r - x).frobenius_norm() <= 1e-10);
  }
  SECTION("offdiagonal 2x2") {
    const Matrix x = Matrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
    const SchurFactorization f = schur_lr_factorization(x);
    const double v = schur_norm(x).value;
    CHECK(column_norm(f.l) * column_norm(f.r) == Approx(v).epsilon(1e-6));
    CHECK((f.l.adjoint() * f.r - x).frobenius_norm() <= 1e-8);
  }
  SECTION("random self-adjoint: L*L = R*R = P and L*R = X") {
    Rng rng(73);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix x = random_selfadjoint(rng, 2 + rng.below(4));
      const double v = schur_norm(x).value;
      const SchurFactorization f = schur_lr_factorization(x);
      CHECK((f.l.adjoint() * f.r - x).frobenius_norm() <= 1e-7 * (1.0 + x.frobenius_norm()));
      CHECK((f.l.adjoint() * f.l - f.r.adjoint() * f.r).frobenius_norm() <=
            1e-8 * (1.0 + x.frobenius_norm()));
      CHECK(column_norm(f.l) * column_norm(f.r) <= v * (1.0 + 1e-6) + 1e-6);
    }
  }
  SECTION("rejects non-self-adjoint input") {
    CHECK_THROWS_AS(schur_lr_factorization(Matrix::from_rows({{0.0, 1.0}, {2.0, 0.0}})), Error);
  }
}

TEST_CASE("sqrtp_contraction") {
  SECTION("both paper-displayed factorizations verify") {
    const SqrtpContraction a =
        sqrtp_contraction_with(kPaperExample, Matrix::diag(std::vector<double>{1.0, 0.25}));
    CHECK(a.e(0, 0).real() == Approx(1.0).margin(1e-10));
    CHECK(a.e(1, 1).real() == Approx(-1.0).margin(1e-10));
    const SqrtpContraction b = sqrtp_contraction_with(kPaperExample, Matrix::identity(2));
    CHECK((b.e - kPaperExample).frobenius_norm() <= 1e-10);
  }
  SECTION("PSD input with P = X gives the support projection") {
    const Matrix x = Matrix::diag(std::vector<double>{2.0, 0.0});
    const SqrtpContraction f = sqrtp_contraction(x);
    CHECK(f.e(0, 0).real() == Approx(1.0).margin(1e-10));
    CHECK(std::abs(f.e(1, 1)) <= 1e-12);
  }
  SECTION("solver witness passes the contraction test") {
    Rng rng(79);
    for (int trial = 0; trial < 5; ++trial) {
      const Matrix x = random_selfadjoint(rng, 2 + rng.below(3));
      const SqrtpContraction f = sqrtp_contraction(x);
      CHECK(operator_norm(f.e) <= 1.0 + 1e-6);
      const Matrix ps = psd_sqrt(f.p, 1e-7);
      CHECK((ps * f.e * ps - x).frobenius_norm() <= 1e-8 * (1.0 + x.frobenius_norm()));
    }
  }
  SECTION("an incompatible witness is rejected") {
    CHECK_THROWS_AS(
        sqrtp_contraction_with(Matrix::diag(std::vector<double>{2.0, 0.0}), Matrix::identity(2)),
        Error);
  }
}

TEST_CASE("jordan_schur_decomposition") {
  SECTION("paper example") {
    const JordanDecomposition d = jordan_schur_decomposition(kPaperExample);
    CHECK((d.a - d.b - kPaperExample).frobenius_norm() <= 1e-9);
    CHECK(min_eigenvalue(d.a) >= -1e-9);
    CHECK(min_eigenvalue(d.b) >= -1e-9);
    double maxdiag = 0.0;
    for (std::size_t j = 0; j < 2; ++j) maxdiag = std::max(maxdiag, (d.a + d.b)(j, j).real());
    CHECK(maxdiag == Approx(1.0).margin(1e-8));
  }
  SECTION("PSD input admits A = X, B = 0") {
    const Matrix x = Matrix::from_rows({{2.0, 1.0}, {1.0, 1.0}});
    const JordanDecomposition d = jordan_schur_decomposition(x);
    CHECK((d.a - x).frobenius_norm() <= 1e-10);
    CHECK(d.b.frobenius_norm() <= 1e-10);
  }
  SECTION("negated projection") {
    Matrix q(2, 2);
    q(0, 0) = 1.0;
    const JordanDecomposition d = jordan_schur_decomposition(-q);
    CHECK(d.a.frobenius_norm() <= 1e-10);
    CHECK((d.b - q).frobenius_norm() <= 1e-10);
  }
}

TEST_CASE("duality_pair") {
  CHECK(duality_pair(Matrix::identity(2), Matrix::identity(2)) == cplx{2.0, 0.0});
  const Matrix d = Matrix::diag(std::vector<double>{1.0, -1.0});
  CHECK(duality_pair(d, d) == cplx{2.0, 0.0});
  Matrix a(2, 2), b(2, 2);
  a(0, 0) = cplx{1.0, 2.0};
  b(1, 1) = cplx{3.0, -1.0};
  CHECK(duality_pair(a, b) == cplx{0.0, 0.0});
  CHECK_THROWS_AS(duality_pair(Matrix(2, 2), Matrix(2, 3)), Error);
}

TEST_CASE("norm_sandwich") {
  SECTION("identity") {
    const SandwichReport r = norm_sandwich(Matrix::identity(2));
    CHECK(r.schur_lower == Approx(1.0));
    CHECK(r.schur_upper == Approx(1.0));
    CHECK(r.cbb_lower == Approx(2.0));
    CHECK(r.cbb_upper == Approx(2.0));
    CHECK(r.ok);
  }
  SECTION("all-ones") {
    const SandwichReport r = norm_sandwich(ones(2, 2));
    CHECK(r.schur_lower == Approx(1.0));
    CHECK(r.schur_upper == Approx(2.0));
    CHECK(r.schur_value == Approx(1.0).margin(1e-8));
    CHECK(r.cbb_value == Approx(4.0).epsilon(1e-6));
    CHECK(r.ok);
  }
  SECTION("zero") {
    const SandwichReport r = norm_sandwich(Matrix(2, 2));
    CHECK(r.schur_value == 0.0);
    CHECK(r.cbb_value == 0.0);
    CHECK(r.ok);
  }
}

TEST_CASE("multiplier and duality inequalities on random pairs") {
  Rng rng(83);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t m = 1 + rng.below(4), n = 1 + rng.below(4);
    const Matrix x = random_general(rng, m, n);
    const double sx = schur_norm(x).value;
    const double cx = cbb_norm(x).value;
    for (int k = 0; k < 5; ++k) {
      const Matrix y = random_general(rng, m, n);
      CHECK(operator_norm(schur_product(x, y)) <= sx * operator_norm(y) + 1e-7);
      CHECK(std::abs(duality_pair(x, y)) <= schur_norm(y).value * cx * (1.0 + 1e-6) + 1e-9);
    }
  }
}

TEST_CASE("block-embedding identities and compression on random matrices") {
  Rng rng(89);
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t m = 1 + rng.below(4), n = 1 + rng.below(5);
    const Matrix x = random_general(rng, m, n);
    const Matrix y = block_embed(x);
    CHECK(schur_norm(y).value == Approx(schur_norm(x).value).epsilon(1e-6));
    CHECK(cbb_norm(y).value == Approx(2.0 * cbb_norm(x).value).epsilon(1e-6));
  }
  for (int trial = 0; trial < 5; ++trial) {
    const std::size_t n = 2 + rng.below(4);
    const std::size_t m = 1 + rng.below(n - 1);
    const Matrix z = random_general(rng, n, n);
    CHECK(schur_norm(offdiag_compress(z, m)).value <= schur_norm(z).value + 1e-7);
  }
}

TEST_CASE("positive-case consistency: one-sided and two-sided programs agree") {
  Rng rng(97);
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t n = 1 + rng.below(5);
    const Matrix x = random_psd(rng, n);
    DiagSdpProblem one{n, std::vector<double>(n, 1.0), {-x}};
    DiagSdpProblem two{n, std::vector<double>(n, 1.0), {-x, x}};
    const double v1 = solve_diag_sdp(one).value;
    const double v2 = solve_diag_sdp(two).value;
    REQUIRE(v1 == Approx(v2).epsilon(1e-6));
    REQUIRE(cbb_norm(x).value == Approx(v1).epsilon(1e-6));
  }
}
