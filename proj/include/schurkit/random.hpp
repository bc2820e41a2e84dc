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

#include <cstdint>
#include <random>

#include "schurkit/matrix.hpp"

namespace schurkit {

/// Seeded random source with a fully pinned algorithm: mt19937_64 words
/// mapped to [0,1) doubles via the top 53 bits, Gaussians via Box-Muller.
/// std::distribution objects are implementation-defined and deliberately
/// avoided, so seeded draws reproduce bit-for-bit everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  cplx gaussian_cplx() {
    const double re = gaussian();
    return {re, gaussian()};
  }

  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound) { return gen_() % bound; }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline Matrix random_general(Rng& rng, std::size_t m, std::size_t n) {
  Matrix x(m, n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) x(i, j) = rng.gaussian_cplx();
  return x;
}

inline Matrix random_selfadjoint(Rng& rng, std::size_t n) {
  return hermitize(random_general(rng, n, n));
}

inline Matrix random_psd(Rng& rng, std::size_t n) {
  const Matrix g = random_general(rng, n, n);
  return hermitize(g.adjoint() * g);
}

inline Matrix random_diag(Rng& rng, std::size_t n) {
  std::vector<double> d(n);
  for (double& v : d) v = rng.gaussian();
  return Matrix::diag(d);
}

inline std::vector<cplx> random_vector(Rng& rng, std::size_t n) {
  std::vector<cplx> v(n);
  for (cplx& e : v) e = rng.gaussian_cplx();
  return v;
}

}  // namespace schurkit
