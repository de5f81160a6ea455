// Copyright 2026 The qtg authors
//
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

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "qtg/numerics.hpp"
#include "qtg/quantum.hpp"

using namespace qtg;

namespace {

HermitianOperator two_level(double e) {
  Mat h = Mat::Zero(2, 2);
  h(1, 1) = e;
  return HermitianOperator(h);
}

}  // namespace

TEST_CASE("hermitian operator validation and decomposition") {
  Mat bad(2, 2);
  bad << 0.0, 1.0, 0.0, 0.0;
  CHECK_THROWS_AS(HermitianOperator(bad), validation_error);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat m = oracles::random_hermitian(rng, 4);
    HermitianOperator h(m);
    const Mat rebuilt = h.eigenvectors() *
                        h.eigenvalues().asDiagonal().toDenseMatrix().cast<std::complex<double>>() *
                        h.eigenvectors().adjoint();
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    CHECK((rebuilt - h.matrix()).cwiseAbs().maxCoeff() < 1e-10 * scale);
  }
}

TEST_CASE("gibbs state of the zero Hamiltonian is maximally mixed") {
  const GibbsState pi = gibbs_state(HermitianOperator::zero(2), 1.0);
  CHECK((pi.matrix() - 0.5 * Mat::Identity(2, 2)).cwiseAbs().maxCoeff() <
        1e-15);
  CHECK(pi.entropy() == doctest::Approx(std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("two-level populations follow the logistic form") {
  const GibbsState pi = gibbs_state(two_level(2.4), 1.0);
  const double p = std::exp(-2.4) / (1.0 + std::exp(-2.4));
  CHECK(pi.populations()(1) == doctest::Approx(p).epsilon(1e-14));
  CHECK(pi.populations()(0) == doctest::Approx(1.0 - p).epsilon(1e-14));
}

TEST_CASE("gibbs state matches the series exponential oracle") {
  std::mt19937_64 rng(42);
  const double beta = 0.7;
  for (int trial = 0; trial < 5; ++trial) {
    const Mat h = oracles::random_hermitian(rng, 4);
    const GibbsState pi = gibbs_state(HermitianOperator(h), beta);
    Mat direct = oracles::expm_series(-beta * h);
    direct /= direct.trace();
    CHECK((pi.matrix() - direct).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("gibbs state structural invariants") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat h = oracles::random_hermitian(rng, 3, 2.0);
    const GibbsState pi = gibbs_state(HermitianOperator(h), 1.3);
    CHECK(std::abs(pi.matrix().trace().real() - 1.0) < 1e-12);
    CHECK((pi.matrix() * h - h * pi.matrix()).cwiseAbs().maxCoeff() < 1e-10);
    // thermodynamic identity S = beta (<H> - F)
    CHECK(pi.entropy() ==
          doctest::Approx(pi.beta() * (pi.mean_energy() - pi.free_energy()))
              .epsilon(1e-10));
    CHECK(pi.free_energy() == -pi.log_partition() / pi.beta());
  }
  CHECK_THROWS_AS(gibbs_state(HermitianOperator::zero(2), 0.0),
                  validation_error);
  CHECK_THROWS_AS(gibbs_state(HermitianOperator::zero(2), -1.0),
                  validation_error);
}

TEST_CASE("gibbs state survives large beta*E without overflow") {
  Mat h = Mat::Zero(2, 2);
  h(0, 0) = -500.0;
  h(1, 1) = 500.0;
  const GibbsState pi = gibbs_state(HermitianOperator(h), 3.0);
  CHECK(std::isfinite(pi.log_partition()));
  CHECK(pi.populations()(0) == doctest::Approx(1.0));
  CHECK(pi.log_partition() == doctest::Approx(1500.0));
}

TEST_CASE("heat capacity") {
  CHECK(heat_capacity(gibbs_state(HermitianOperator::zero(3), 2.0)) == 0.0);

  const double g = 1.7;
  const GibbsState pi = gibbs_state(two_level(g), 1.0);
  const double p = std::exp(-g) / (1.0 + std::exp(-g));
  CHECK(heat_capacity(pi) ==
        doctest::Approx(g * g * p * (1 - p)).epsilon(1e-13));

  // peak of the two-level heat capacity sits at g* ~ 2.4
  const double g_star = num::maximize_scalar(
      [](double x) { return heat_capacity(gibbs_state(two_level(x), 1.0)); },
      1.0, 4.0);
  CHECK(std::abs(g_star - 2.3993572959941285) < 1e-7);
  CHECK(std::abs(g_star - 2.4) < 0.05);
}

TEST_CASE("heat capacity equals -beta dS/dbeta") {
  std::mt19937_64 rng(3);
  const Mat h = oracles::random_hermitian(rng, 4);
  const double beta = 0.9, db = 1e-5;
  const double c = heat_capacity(gibbs_state(HermitianOperator(h), beta));
  const double s_plus = gibbs_state(HermitianOperator(h), beta + db).entropy();
  const double s_minus =
      gibbs_state(HermitianOperator(h), beta - db).entropy();
  CHECK(c ==
        doctest::Approx(-beta * (s_plus - s_minus) / (2 * db)).epsilon(1e-6));
}

TEST_CASE("hellinger angle") {
  const GibbsState a = gibbs_state(two_level(0.5), 1.0);
  const GibbsState b = gibbs_state(two_level(2.4), 1.0);

  CHECK(hellinger_angle(a, a) == doctest::Approx(0.0).epsilon(1e-12));

  Mat ground = Mat::Zero(2, 2), excited = Mat::Zero(2, 2);
  ground(0, 0) = 1.0;
  excited(1, 1) = 1.0;
  CHECK(hellinger_angle(ground, excited) == doctest::Approx(M_PI));

  // commuting thermal states reduce to the classical two-outcome formula
  RVec pa(2), pb(2);
  pa << a.populations()(0), a.populations()(1);
  pb << b.populations()(0), b.populations()(1);
  CHECK(hellinger_angle(a, b) ==
        doctest::Approx(oracles::classical_hellinger(pa, pb)).epsilon(1e-12));

  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Mat rho = oracles::random_density(rng, 3);
    const Mat sigma = oracles::random_density(rng, 3);
    CHECK(hellinger_angle(rho, sigma) ==
          doctest::Approx(hellinger_angle(sigma, rho)).epsilon(1e-12));
    Eigen::SelfAdjointEigenSolver<Mat> es(rho - sigma);
    const double trace_distance = 0.5 * es.eigenvalues().cwiseAbs().sum();
    if (trace_distance > 1e-8) CHECK(hellinger_angle(rho, sigma) > 1e-10);
  }

  CHECK_THROWS_AS(hellinger_angle(ground, Mat::Identity(3, 3) / 3.0),
                  validation_error);
  Mat not_positive(2, 2);
  not_positive << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(hellinger_angle(not_positive, ground), domain_error);
}
