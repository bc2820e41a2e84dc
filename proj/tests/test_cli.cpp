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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "schurkit/cli.hpp"
#include "schurkit/matrix_io.hpp"
#include "schurkit/random.hpp"

using namespace schurkit;

namespace {

std::string temp_file(const std::string& stem) {
  static int counter = 0;
  return (std::filesystem::temp_directory_path() /
          (stem + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++) + ".json"))
      .string();
}

std::string write_temp(const Matrix& m, const std::string& stem) {
  const std::string path = temp_file(stem);
  write_matrix(m, path);
  return path;
}

struct CliOutcome {
  int code = 0;
  std::string out, err;
};

CliOutcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("matrix file parsing") {
  SECTION("1x1") {
    const Matrix m = parse_matrix_text(R"({"m":1,"n":1,"entries":[[[2.0,0.0]]]})");
    REQUIRE(m.rows() == 1);
    CHECK(m(0, 0) == cplx{2.0, 0.0});
  }
  SECTION("paper example matrix") {
    const Matrix m = parse_matrix_text(
        R"({"m":2,"n":2,"entries":[[[1,0],[0,0]],[[0,0],[-0.25,0]]]})");
    CHECK(m(0, 0) == cplx{1.0, 0.0});
    CHECK(m(1, 1) == cplx{-0.25, 0.0});
  }
  SECTION("errors carry context") {
    CHECK_THROWS_WITH(parse_matrix_text(R"({"m":2,"n":1,"entries":[[[1,0]]]})"),
                      Catch::Contains("2 rows"));
    CHECK_THROWS_WITH(parse_matrix_text(R"({"m":1,"n":2,"entries":[[[1,0]]]})"),
                      Catch::Contains("row 0"));
    CHECK_THROWS_WITH(parse_matrix_text(R"({"m":1,"n":1,"entries":[[[1,"x"]]]})"),
                      Catch::Contains("(0,0)"));
    CHECK_THROWS_WITH(parse_matrix_text(R"({"m":1,"n":1})"), Catch::Contains("entries"));
    CHECK_THROWS_WITH(parse_matrix_text("not json"), Catch::Contains("malformed"));
    CHECK_THROWS_WITH(parse_matrix_text(R"({"m":1,"n":1,"entries":[[[1,1e999]]]})"),
                      Catch::Contains("non-finite"));
  }
}

TEST_CASE("matrix file round trip is bit-exact") {
  Rng rng(211);
  for (int trial = 0; trial < 25; ++trial) {
    const Matrix m = random_general(rng, 1 + rng.below(5), 1 + rng.below(5));
    const Matrix back = parse_matrix_text(serialize_matrix(m));
    REQUIRE(back.rows() == m.rows());
    REQUIRE(back.cols() == m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j) {
        REQUIRE(std::memcmp(&back(i, j), &m(i, j), sizeof(cplx)) == 0);
      }
  }
  // awkward values
  Matrix awkward = Matrix::from_rows({{cplx{0.1, -0.0}, cplx{1.0 / 3.0, 5e-324}},
                                      {cplx{1e308, -1e-308}, cplx{-0.0, 2.2250738585072014e-308}}});
  const Matrix back = parse_matrix_text(serialize_matrix(awkward));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      REQUIRE(std::memcmp(&back(i, j), &awkward(i, j), sizeof(cplx)) == 0);
}

TEST_CASE("cli norm subcommand") {
  const std::string paper = write_temp(Matrix::diag(std::vector<double>{1.0, -0.25}), "paper");
  SECTION("schur value of the paper example") {
    const CliOutcome r = run_cli({"norm", "--kind", "schur", "--in", paper});
    CHECK(r.code == 0);
    CHECK(r.out.find("value=1") != std::string::npos);
  }
  SECTION("json form is machine readable and verified") {
    const CliOutcome r = run_cli({"norm", "--kind", "schur", "--in", paper, "--json"});
    REQUIRE(r.code == 0);
    const json rep = json::parse(r.out);
    CHECK(rep["value"].get<double>() == Approx(1.0).margin(1e-8));
    CHECK(rep["verification"]["pass"].get<bool>());
    CHECK(rep["input"]["hash"].get<std::string>().rfind("fnv1a64:", 0) == 0);
  }
  SECTION("cbb via both engines") {
    Matrix j2(2, 2);
    j2(0, 0) = j2(0, 1) = j2(1, 0) = j2(1, 1) = 1.0;
    const std::string ones2 = write_temp(j2, "ones2");
    const CliOutcome a =
        run_cli({"norm", "--kind", "cbb", "--in", ones2, "--method", "sdp", "--json"});
    const CliOutcome b =
        run_cli({"norm", "--kind", "cbb", "--in", ones2, "--method", "cutting-plane", "--json"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    const double va = json::parse(a.out)["value"].get<double>();
    const double vb = json::parse(b.out)["value"].get<double>();
    CHECK(va == Approx(4.0).margin(1e-6));
    CHECK(vb == Approx(4.0).margin(1e-6));
    CHECK(va == Approx(vb).margin(1e-6));
  }
  SECTION("deterministic json output") {
    const CliOutcome a = run_cli({"norm", "--kind", "cbb", "--in", paper, "--json"});
    const CliOutcome b = run_cli({"norm", "--kind", "cbb", "--in", paper, "--json"});
    CHECK(a.out == b.out);
  }
  SECTION("tolerance floors at 1e-12") {
    const CliOutcome r =
        run_cli({"norm", "--kind", "schur", "--in", paper, "--tol", "1e-30", "--json"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["tolerance"].get<double>() == 1e-12);
  }
  SECTION("usage errors exit 1") {
    CHECK(run_cli({"norm", "--kind", "schur", "--in", paper, "--method", "cutting-plane"}).code ==
          1);
    CHECK(run_cli({"norm", "--kind", "nope", "--in", paper}).code == 1);
    CHECK(run_cli({"norm", "--kind", "schur", "--in", "/nonexistent/file.json"}).code == 1);
    CHECK(run_cli({"bogus"}).code == 1);
  }
}

TEST_CASE("cli certify subcommand") {
  const std::string pm1 = write_temp(Matrix::diag(std::vector<double>{1.0, -1.0}), "pm1");
  const CliOutcome r = run_cli({"certify", "--in", pm1, "--json"});
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  CHECK(rep["value"].get<double>() == Approx(2.0).margin(1e-7));
  CHECK(rep["trace_pairing"].get<double>() == Approx(2.0).margin(1e-7));
  CHECK(rep["certificate_schur_norm"].get<double>() <= 1.0 + 1e-6);
  CHECK(rep["verification"]["pass"].get<bool>());

  const std::string nonsa =
      write_temp(Matrix::from_rows({{0.0, 1.0}, {2.0, 0.0}}), "nonsa");
  CHECK(run_cli({"certify", "--in", nonsa}).code == 1);
}

TEST_CASE("cli factorize subcommand") {
  const std::string paper = write_temp(Matrix::diag(std::vector<double>{1.0, -0.25}), "paperf");
  for (const char* kind : {"cbb", "schur-lr", "sqrtp"}) {
    const CliOutcome r = run_cli({"factorize", "--kind", kind, "--in", paper, "--json"});
    REQUIRE(r.code == 0);
    CHECK(json::parse(r.out)["verification"]["pass"].get<bool>());
  }
  const std::string zero = write_temp(Matrix(2, 2), "zerof");
  CHECK(run_cli({"factorize", "--kind", "cbb", "--in", zero}).code == 2);
}

TEST_CASE("cli gen subcommand") {
  SECTION("every advertised class parses and validates") {
    for (const char* type : {"psd", "selfadjoint", "general", "diag"}) {
      const std::string out_path = temp_file(std::string("gen_") + type);
      const CliOutcome r =
          run_cli({"gen", "--type", type, "--n", "4", "--seed", "7", "--out", out_path});
      REQUIRE(r.code == 0);
      const Matrix m = parse_matrix(out_path);
      CHECK(m.cols() == 4);
      if (std::string(type) == "psd") CHECK(min_eigenvalue(m) >= -1e-10);
      if (std::string(type) == "selfadjoint") CHECK(is_hermitian(m));
      if (std::string(type) == "diag") CHECK(m.is_diagonal());
    }
  }
  SECTION("rectangular general") {
    const std::string out_path = temp_file("gen_rect");
    REQUIRE(run_cli({"gen", "--type", "general", "--n", "3", "--m", "2", "--seed", "1", "--out",
                     out_path})
                .code == 0);
    const Matrix m = parse_matrix(out_path);
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
  }
  SECTION("same seed, same file") {
    const std::string a = temp_file("gen_det_a"), b = temp_file("gen_det_b");
    run_cli({"gen", "--type", "general", "--n", "3", "--seed", "42", "--out", a});
    run_cli({"gen", "--type", "general", "--n", "3", "--seed", "42", "--out", b});
    CHECK(read_file_bytes(a) == read_file_bytes(b));
  }
  SECTION("SCHURKIT_SEED fallback") {
    const std::string a = temp_file("gen_env_a"), b = temp_file("gen_env_b");
    ::setenv("SCHURKIT_SEED", "99", 1);
    run_cli({"gen", "--type", "diag", "--n", "3", "--out", a});
    run_cli({"gen", "--type", "diag", "--n", "3", "--seed", "99", "--out", b});
    ::unsetenv("SCHURKIT_SEED");
    CHECK(read_file_bytes(a) == read_file_bytes(b));
  }
}

TEST_CASE("cli check subcommand") {
  Rng rng(223);
  const std::string good = write_temp(random_selfadjoint(rng, 3), "check_good");
  const CliOutcome r = run_cli({"check", "--in", good, "--trials", "5", "--seed", "3", "--json"});
  REQUIRE(r.code == 0);
  const json rep = json::parse(r.out);
  REQUIRE(rep.is_array());
  CHECK(rep[0]["pass"].get<bool>());
  CHECK(rep[0]["sandwich"]["ok"].get<bool>());
  CHECK(rep[0]["engines"]["agree"].get<bool>());

  SECTION("batch keeps going past a broken instance") {
    const std::string broken = temp_file("check_broken");
    std::ofstream(broken) << "not json";
    const CliOutcome b = run_cli(
        {"check", "--in", broken, "--in", good, "--trials", "4", "--seed", "3", "--json"});
    CHECK(b.code == 2);
    const json brep = json::parse(b.out);
    REQUIRE(brep.size() == 2);
    CHECK_FALSE(brep[0]["pass"].get<bool>());
    CHECK(brep[0].contains("error"));
    CHECK(brep[1]["pass"].get<bool>());
  }
}
