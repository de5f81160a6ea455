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
#include "qtg/lindblad.hpp"

using namespace qtg;

namespace {

HermitianOperator qubit_h(double e) {
  Mat h = Mat::Zero(2, 2);
  h(1, 1) = e;
  return HermitianOperator(h);
}

HermitianOperator sigma_x() {
  Mat x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return HermitianOperator(x);
}

}  // namespace

TEST_CASE("superoperator basics") {
  std::mt19937_64 rng(101);
  const Mat a = oracles::random_hermitian(rng, 3);
  const Mat b = oracles::random_hermitian(rng, 3);
  const Superoperator left = Superoperator::left_mult(a);
  const Superoperator right = Superoperator::right_mult(b);
  CHECK((left.apply(b) - a * b).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((right.apply(a) - a * b).cwiseAbs().maxCoeff() < 1e-14);

  // linearity on random probes
  const Superoperator map = Superoperator::from_map(
      3, [&](const Mat& m) { return a * m * b + m.trace() * a; });
  const Mat c = oracles::random_hermitian(rng, 3);
  const Mat d = oracles::random_hermitian(rng, 3);
  const Mat lhs = map.apply(0.7 * c + 1.3 * d);
  const Mat rhs = 0.7 * map.apply(c) + 1.3 * map.apply(d);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("reset generator fixes pi and decays traceless operators") {
  const GibbsState pi = gibbs_state(qubit_h(1.2), 1.0);
  const double tau_eq = 0.7;
  const Superoperator reset = build_reset(pi, tau_eq);
  CHECK(reset.apply(pi.matrix()).cwiseAbs().maxCoeff() < 1e-14);

  std::mt19937_64 rng(3);
  Mat a = oracles::random_hermitian(rng, 2);
  a -= 0.5 * a.trace() * Mat::Identity(2, 2);
  CHECK((reset.apply(a) + a / tau_eq).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(build_reset(pi, 0.0), validation_error);
}

TEST_CASE("reset propagator matches the closed form") {
  const GibbsState pi = gibbs_state(qubit_h(0.9), 1.0);
  const double tau_eq = 1.3;
  const Superoperator reset = build_reset(pi, tau_eq);
  std::mt19937_64 rng(17);
  const Mat rho0 = oracles::random_density(rng, 2);
  const double t = tau_eq;
  const Mat propagated =
      unvectorize(oracles::expm_series(t * reset.matrix()) * vectorize(rho0), 2);
  const Mat closed =
      pi.matrix() + std::exp(-t / tau_eq) * (rho0 - pi.matrix());
  CHECK((propagated - closed).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("davies qubit rates obey detailed balance") {
  const double beta = 1.0, e = 1.4;
  const ThermalLindbladian lind =
      build_davies(qubit_h(e), beta, {sigma_x()}, 0.0);
  REQUIRE(lind.jump_ops().size() == 2);
  // one lowering and one raising jump; rate ratio e^{beta E}
  const double r0 = lind.jump_ops()[0].rate;
  const double r1 = lind.jump_ops()[1].rate;
  const double ratio = std::max(r0, r1) / std::min(r0, r1);
  CHECK(ratio == doctest::Approx(std::exp(beta * e)).epsilon(1e-12));

  // steady state from the kernel equals the Gibbs state
  const Mat steady = steady_state_matrix(lind.generator());
  CHECK((steady - lind.target().matrix()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("davies generator spectrum for a three-level system") {
  Mat h = Mat::Zero(3, 3);
  h(1, 1) = 1.0;
  h(2, 2) = 2.6;  // gaps 1.0, 1.6, 2.6 pairwise distinct
  std::mt19937_64 rng(23);
  const HermitianOperator coupling(oracles::random_hermitian(rng, 3));
  const ThermalLindbladian lind =
      build_davies(HermitianOperator(h), 0.8, {coupling}, 1.0);

  Eigen::ComplexEigenSolver<Mat> es(lind.generator().matrix());
  int zeros = 0;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const auto ev = es.eigenvalues()(i);
    if (std::abs(ev) < 1e-10)
      ++zeros;
    else
      CHECK(ev.real() < -1e-10);
  }
  CHECK(zeros == 1);
}

TEST_CASE("davies rejects degenerate Bohr frequencies") {
  Mat h = Mat::Zero(3, 3);
  h(1, 1) = 1.0;
  h(2, 2) = 2.0;  // gap(0,1) == gap(1,2)
  std::mt19937_64 rng(1);
  const HermitianOperator coupling(oracles::random_hermitian(rng, 3));
  try {
    build_davies(HermitianOperator(h), 1.0, {coupling}, 1.0);
    CHECK(false);
  } catch (const domain_error& e) {
    const std::string what = e.what();
    CHECK(what.find("degenerate Bohr") != std::string::npos);
    CHECK(what.find("(0,1)") != std::string::npos);
    CHECK(what.find("(1,2)") != std::string::npos);
  }
}

TEST_CASE("davies flat spectral density rejects diagonal coupling") {
  // alpha = 0 has a divergent zero-frequency rate
  Mat d = Mat::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  CHECK_THROWS_AS(build_davies(qubit_h(1.0), 1.0, {HermitianOperator(d)}, 0.0),
                  domain_error);
  // ohmic alpha = 1 has the finite limit kappa/beta and succeeds
  const ThermalLindbladian lind =
      build_davies(qubit_h(1.0), 1.0, {HermitianOperator(d)}, 1.0);
  CHECK(lind.jump_ops().size() == 1);
}

TEST_CASE("generators preserve hermiticity and trace") {
  std::mt19937_64 rng(31);
  const GibbsState pi = gibbs_state(qubit_h(1.1), 1.0);
  const std::vector<Superoperator> gens = {
      build_reset(pi, 0.5),
      build_davies(qubit_h(1.1), 1.0, {sigma_x()}, 0.0).generator()};
  for (const Superoperator& gen : gens) {
    for (int trial = 0; trial < 5; ++trial) {
      Mat a(2, 2);
      std::normal_distribution<double> gauss;
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          a(i, j) = std::complex<double>(gauss(rng), gauss(rng));
      const Mat image = gen.apply(a);
      const Mat image_dag = gen.apply(a.adjoint());
      CHECK((image_dag - image.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(std::abs(gen.apply(a).trace()) < 1e-10);
    }
  }
}

TEST_CASE("detailed-balance generators do not mix sectors") {
  const HermitianOperator h = qubit_h(1.3);
  const ThermalLindbladian lind = build_davies(h, 0.9, {sigma_x()}, 1.0);
  const Mat& v = h.eigenvectors();
  const Mat u = Superoperator::left_mult(v)
                    .compose(Superoperator::right_mult(v.adjoint()))
                    .matrix();
  const Mat m_eig = u.adjoint() * lind.generator().matrix() * u;
  const double scale = m_eig.cwiseAbs().maxCoeff();
  const int d = 2;
  for (int col = 0; col < d * d; ++col)
    for (int row = 0; row < d * d; ++row) {
      const bool col_diag = (col % d) == (col / d);
      const bool row_diag = (row % d) == (row / d);
      if (col_diag != row_diag)
        CHECK(std::abs(m_eig(row, col)) < 1e-10 * scale);
    }
}

TEST_CASE("drazin inverse of the reset generator") {
  const GibbsState pi = gibbs_state(qubit_h(0.8), 1.0);
  const double tau_eq = 2.2;
  const Superoperator reset = build_reset(pi, tau_eq);
  const Superoperator lp = drazin_inverse(reset, pi);

  const Mat id = Mat::Identity(2, 2);
  const Mat expected =
      -tau_eq * (Mat::Identity(4, 4) -
                 vectorize(pi.matrix()) * vectorize(id).adjoint());
  CHECK((lp.matrix() - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(lp.apply(pi.matrix()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("drazin identities and the quadrature oracle") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 4; ++trial) {
    const double e = 0.6 + 0.4 * trial;
    const HermitianOperator h = qubit_h(e);
    const GibbsState pi = gibbs_state(h, 1.0);
    const ThermalLindbladian lind = build_davies(h, 1.0, {sigma_x()}, 0.0);
    const Superoperator lp = drazin_inverse(lind.generator(), pi);

    const Mat q = Mat::Identity(4, 4) - vectorize(pi.matrix()) *
                                            vectorize(Mat::Identity(2, 2))
                                                .adjoint();
    const Mat lpl = lp.matrix() * lind.generator().matrix();
    const Mat llp = lind.generator().matrix() * lp.matrix();
    CHECK((lpl - q).norm() < 1e-8);
    CHECK((llp - q).norm() < 1e-8);

    const Mat oracle = oracles::drazin_quadrature(lind.generator(),
                                                  pi.matrix());
    CHECK((lp.matrix() - oracle).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("drazin rejects invalid spectra") {
  const GibbsState pi = gibbs_state(qubit_h(1.0), 1.0);
  const Superoperator reset = build_reset(pi, 1.0);
  // flipped sign has a positive real eigenvalue
  const Superoperator unstable(2, (-1.0) * reset.matrix());
  CHECK_THROWS_AS(drazin_inverse(unstable, pi), domain_error);
  // the zero map has a four-fold degenerate kernel
  CHECK_THROWS_AS(drazin_inverse(Superoperator::zero(2), pi), domain_error);
}

TEST_CASE("detailed balance check") {
  const HermitianOperator h = qubit_h(1.0);
  const GibbsState pi = gibbs_state(h, 1.0);
  CHECK(is_detailed_balance(build_reset(pi, 1.0), pi));
  CHECK(is_detailed_balance(build_davies(h, 1.0, {sigma_x()}, 0.0).generator(),
                            pi));

  // a coherent sigma_x drive breaks the weighted symmetry
  const Mat sx = sigma_x().matrix();
  const std::complex<double> im(0.0, 1.0);
  const Mat drive = -im * (Superoperator::left_mult(sx).matrix() -
                           Superoperator::right_mult(sx).matrix());
  const Superoperator driven(2, build_reset(pi, 1.0).matrix() + drive);
  CHECK_FALSE(is_detailed_balance(driven, pi));
  CHECK_THROWS_AS(eigenoperator_decomposition(driven), domain_error);
}

TEST_CASE("eigenoperator decomposition of the reset generator") {
  const GibbsState pi = gibbs_state(qubit_h(1.5), 1.0);
  const double tau_eq = 0.45;
  const EigenoperatorDecomposition dec =
      eigenoperator_decomposition(build_reset(pi, tau_eq));
  CHECK(dec.modes.size() == 3);
  CHECK(dec.oscillatory.empty());
  for (const EigenMode& mode : dec.modes) {
    CHECK(mode.timescale == doctest::Approx(tau_eq).epsilon(1e-10));
    CHECK(std::abs((mode.observable * pi.matrix()).trace()) < 1e-10);
  }
}

TEST_CASE("davies qubit relaxation timescales") {
  const double beta = 1.0, e = 1.2;
  const HermitianOperator h = qubit_h(e);
  const ThermalLindbladian lind = build_davies(h, beta, {sigma_x()}, 0.0);
  REQUIRE(lind.jump_ops().size() == 2);
  const double down =
      std::max(lind.jump_ops()[0].rate, lind.jump_ops()[1].rate);
  const double up = std::min(lind.jump_ops()[0].rate, lind.jump_ops()[1].rate);

  const EigenoperatorDecomposition dec =
      eigenoperator_decomposition(lind.generator());
  // population mode: observable commutes with H, timescale 1/(down+up)
  bool found_population = false;
  for (const EigenMode& mode : dec.modes) {
    const Mat comm = mode.observable * h.matrix() - h.matrix() * mode.observable;
    if (comm.cwiseAbs().maxCoeff() < 1e-8) {
      found_population = true;
      CHECK(mode.timescale ==
            doctest::Approx(1.0 / (down + up)).epsilon(1e-9));
    }
  }
  CHECK(found_population);

  const auto [tmin, tmax] = relaxation_timescales(lind.generator());
  CHECK(tmin == doctest::Approx(1.0 / (down + up)).epsilon(1e-9));
  CHECK(tmax == doctest::Approx(2.0 / (down + up)).epsilon(1e-9));
}

TEST_CASE("eigenoperator modes relax exponentially at their timescale") {
  const HermitianOperator h = qubit_h(1.0);
  const ThermalLindbladian lind = build_davies(h, 1.0, {sigma_x()}, 0.0);
  const EigenoperatorDecomposition dec =
      eigenoperator_decomposition(lind.generator());
  const Mat pi = steady_state_matrix(lind.generator());
  std::mt19937_64 rng(4);
  const Mat rho0 = oracles::random_density(rng, 2);

  for (const EigenMode& mode : dec.modes) {
    std::vector<double> ts, ys;
    for (int k = 1; k <= 12; ++k) {
      const double t = 0.15 * k * mode.timescale;
      const Mat rho_t = unvectorize(
          oracles::expm_series(t * lind.generator().matrix()) *
              vectorize(rho0),
          2);
      const std::complex<double> val =
          (mode.observable * (rho_t - pi)).trace();
      if (std::abs(val) < 1e-12) continue;
      ts.push_back(t);
      ys.push_back(std::abs(val));
    }
    if (ts.size() < 6) continue;  // mode not excited by this initial state
    const double rate = oracles::fitted_decay_rate(ts, ys);
    CHECK(rate == doctest::Approx(1.0 / mode.timescale).epsilon(1e-4));
  }
}

TEST_CASE("lamb shift produces flagged oscillatory modes") {
  const HermitianOperator h = qubit_h(1.0);
  const ThermalLindbladian base = build_davies(h, 1.0, {sigma_x()}, 0.0);
  const ThermalLindbladian shifted(base.jump_ops(),
                                   HermitianOperator(0.4 * h.matrix()), 1.0,
                                   base.target());
  const EigenoperatorDecomposition dec =
      eigenoperator_decomposition(shifted.generator());
  CHECK(dec.oscillatory.size() == 2);
  for (const EigenMode& mode : dec.oscillatory) {
    CHECK(mode.oscillatory);
    CHECK(std::abs(mode.eigenvalue.imag()) > 1e-6);
  }
}

TEST_CASE("lamb shift must commute with the Hamiltonian") {
  const HermitianOperator h = qubit_h(1.0);
  const ThermalLindbladian base = build_davies(h, 1.0, {sigma_x()}, 0.0);
  CHECK_THROWS_AS(
      ThermalLindbladian(base.jump_ops(), sigma_x(), 1.0, base.target()),
      validation_error);
}
