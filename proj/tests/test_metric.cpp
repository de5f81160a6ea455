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
#include "qtg/metric.hpp"

using namespace qtg;

namespace {

Mat pauli_z() {
  Mat z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  return z;
}

Mat pauli_x() {
  Mat x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

HermitianOperator level_op() {  // H = lambda * diag(0, 1)
  Mat x = Mat::Zero(2, 2);
  x(1, 1) = 1.0;
  return HermitianOperator(x);
}

RVec scalar(double x) {
  RVec v(1);
  v << x;
  return v;
}

}  // namespace

TEST_CASE("j superoperator closed form") {
  const GibbsState pi = gibbs_state(HermitianOperator(1.3 * pauli_z()), 0.8);
  const Superoperator j = j_superoperator(pi);

  // diagonal operators commute with pi: J[A] = pi A
  Mat diag = Mat::Zero(2, 2);
  diag(0, 0) = 0.7;
  diag(1, 1) = -0.2;
  const Mat a = pi.hamiltonian().eigenvectors() * diag *
                pi.hamiltonian().eigenvectors().adjoint();
  CHECK((j.apply(a) - pi.matrix() * a).cwiseAbs().maxCoeff() < 1e-13);

  // maximally mixed: J[A] = A/2
  const GibbsState mixed = gibbs_state(HermitianOperator::zero(2), 1.0);
  const Superoperator j_mixed = j_superoperator(mixed);
  std::mt19937_64 rng(9);
  const Mat b = oracles::random_hermitian(rng, 2);
  CHECK((j_mixed.apply(b) - 0.5 * b).cwiseAbs().maxCoeff() < 1e-13);

  // closed form vs 200-point Gauss-Legendre quadrature of the x-integral
  const Mat sx = pauli_x();
  CHECK((j.apply(sx) - oracles::j_map_quadrature(pi, sx)).cwiseAbs().maxCoeff() <
        1e-10);
}

TEST_CASE("j superoperator is self-adjoint and rejects rank deficiency") {
  std::mt19937_64 rng(21);
  const GibbsState pi =
      gibbs_state(HermitianOperator(oracles::random_hermitian(rng, 3)), 1.1);
  const Superoperator j = j_superoperator(pi);
  for (int trial = 0; trial < 8; ++trial) {
    const Mat a = oracles::random_hermitian(rng, 3);
    const Mat b = oracles::random_hermitian(rng, 3);
    const std::complex<double> lhs = (a.adjoint() * j.apply(b)).trace();
    const std::complex<double> rhs = (j.apply(a).adjoint() * b).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }

  Mat h = Mat::Zero(2, 2);
  h(1, 1) = 40.0;  // population e^{-40} < 1e-14
  CHECK_THROWS_AS(j_superoperator(gibbs_state(HermitianOperator(h), 1.0)),
                  domain_error);
}

TEST_CASE("bkm metric of the two-level system") {
  const ControlledHamiltonian ch(HermitianOperator::zero(2), {level_op()});
  const double beta = 1.0;
  for (double e : {0.5, 1.2, 2.4}) {
    const MetricTensor g = bkm_metric(ch, beta, scalar(e));
    const double p = std::exp(-beta * e) / (1.0 + std::exp(-beta * e));
    CHECK(g.g(0, 0) ==
          doctest::Approx(beta * beta * p * (1 - p)).epsilon(1e-12));
  }
}

TEST_CASE("bkm metric scales as beta^2 at high temperature") {
  const ControlledHamiltonian ch(HermitianOperator::zero(2),
                                 {HermitianOperator(pauli_z())});
  const double g1 = bkm_metric(ch, 1e-3, scalar(1.0)).g(0, 0);
  const double g2 = bkm_metric(ch, 2e-3, scalar(1.0)).g(0, 0);
  CHECK(g1 / g2 == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("bkm metric equals the finite-difference Hessian of log Z") {
  const ControlledHamiltonian ch(
      HermitianOperator::zero(2),
      {HermitianOperator(pauli_z()), HermitianOperator(pauli_x())});
  RVec lambda(2);
  lambda << 1.0, 0.0;
  const MetricTensor g = bkm_metric(ch, 1.0, lambda);
  const RMat hess = oracles::fd_hessian_log_z(ch, 1.0, lambda, 1e-4);
  CHECK((g.g - hess).cwiseAbs().maxCoeff() < 1e-6);

  // random 2-4 level systems, relative tolerance 1e-5
  std::mt19937_64 rng(55);
  for (int d : {2, 3, 4}) {
    std::vector<HermitianOperator> basis;
    for (int i = 0; i < 2; ++i)
      basis.push_back(HermitianOperator(oracles::random_hermitian(rng, d)));
    const ControlledHamiltonian chr(HermitianOperator::zero(d), basis);
    RVec l(2);
    l << 0.6, -0.3;
    const MetricTensor gr = bkm_metric(chr, 0.9, l);
    const RMat hr = oracles::fd_hessian_log_z(chr, 0.9, l, 1e-4);
    CHECK((gr.g - hr).cwiseAbs().maxCoeff() <
          1e-5 * std::max(1.0, gr.g.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("dissipative metric under reset dynamics is tau_eq times BKM") {
  std::mt19937_64 rng(33);
  const double beta = 1.0, tau_eq = 1.7;
  for (int trial = 0; trial < 10; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    std::vector<HermitianOperator> basis;
    for (int i = 0; i < 2; ++i)
      basis.push_back(HermitianOperator(oracles::random_hermitian(rng, d)));
    const ControlledHamiltonian ch(HermitianOperator::zero(d), basis);
    RVec lambda(2);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    lambda << unif(rng), unif(rng);

    const GibbsState pi = gibbs_state(ch.at(lambda), beta);
    const Superoperator reset = build_reset(pi, tau_eq);
    const MetricTensor gd = dissipative_metric(ch, reset, beta, lambda);
    const MetricTensor gb = bkm_metric(ch, beta, lambda);
    CHECK((gd.g - tau_eq * gb.g).cwiseAbs().maxCoeff() <
          1e-9 * std::max(1.0, gb.g.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("dissipative metric in an eigenoperator control basis") {
  // controls chosen as left eigenoperators of the Davies generator:
  // g^d_ab = (tau_a + tau_b)/2 g^BKM_ab
  const HermitianOperator h0(1.1 * level_op().matrix());
  const double beta = 1.0;
  const ThermalLindbladian lind =
      build_davies(h0, beta, {HermitianOperator(pauli_x())}, 0.0);
  const EigenoperatorDecomposition dec =
      eigenoperator_decomposition(lind.generator());
  REQUIRE(dec.modes.size() == 3);

  std::vector<HermitianOperator> basis;
  std::vector<double> taus;
  for (const EigenMode& mode : dec.modes) {
    basis.push_back(HermitianOperator(mode.observable));
    taus.push_back(mode.timescale);
  }
  const ControlledHamiltonian ch(h0, basis);
  const RVec lambda = RVec::Zero(3);
  const MetricTensor gd = dissipative_metric(ch, lind.generator(), beta,
                                             lambda);
  const MetricTensor gb = bkm_metric(ch, beta, lambda);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const double expected = 0.5 * (taus[a] + taus[b]) * gb.g(a, b);
      CHECK(gd.g(a, b) == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("dissipative metric for a davies qubit is a positive scalar") {
  const ControlledHamiltonian ch(HermitianOperator::zero(2), {level_op()});
  const double beta = 1.0;
  const RVec lambda = scalar(1.4);
  const Superoperator gen =
      build_davies(ch.at(lambda), beta, {HermitianOperator(pauli_x())}, 0.0)
          .generator();
  const MetricTensor gd = dissipative_metric(ch, gen, beta, lambda);
  CHECK(gd.g(0, 0) > 0.0);
}

TEST_CASE("adiabatic metric") {
  // commuting control has no adiabatic response
  {
    const ControlledHamiltonian ch(HermitianOperator(0.7 * pauli_z()),
                                   {HermitianOperator(pauli_z())});
    const MetricTensor g = adiabatic_metric(ch, 1.0, scalar(0.4));
    CHECK(std::abs(g.g(0, 0)) < 1e-14);
  }
  // qubit H = E sigma_z with X = sigma_x: hand spectral sum
  {
    const double e = 0.7, beta = 1.0;
    const ControlledHamiltonian ch(HermitianOperator(e * pauli_z()),
                                   {HermitianOperator(pauli_x())});
    const MetricTensor g = adiabatic_metric(ch, beta, scalar(0.0));
    const double z = std::exp(beta * e) + std::exp(-beta * e);
    const double expected =
        beta * (std::exp(beta * e) - std::exp(-beta * e)) / (z * 4 * e * e);
    CHECK(g.g(0, 0) == doctest::Approx(expected).epsilon(1e-12));
  }
  // exact symmetry by construction
  {
    std::mt19937_64 rng(8);
    const ControlledHamiltonian ch(
        HermitianOperator(oracles::random_hermitian(rng, 3)),
        {HermitianOperator(oracles::random_hermitian(rng, 3)),
         HermitianOperator(oracles::random_hermitian(rng, 3))});
    RVec l(2);
    l << 0.2, -0.1;
    const MetricTensor g = adiabatic_metric(ch, 1.0, l);
    CHECK(g.g(0, 1) == g.g(1, 0));
  }
  // degenerate spectrum rejected with the pairs named
  {
    const ControlledHamiltonian ch(HermitianOperator::identity(2),
                                   {HermitianOperator(pauli_x())});
    CHECK_THROWS_AS(adiabatic_metric(ch, 1.0, scalar(0.0)), domain_error);
  }
}

TEST_CASE("coherence split") {
  const double beta = 1.0;
  const HermitianOperator h(1.2 * pauli_z());
  const GibbsState pi = gibbs_state(h, beta);
  const Superoperator gen =
      build_davies(h, beta, {HermitianOperator(pauli_x())}, 0.0).generator();

  // diagonal drive: all dissipation in the population sector
  {
    const auto [w_diag, w_coh] =
        coherence_split(HermitianOperator(pauli_z()), pi, gen);
    CHECK(w_coh == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w_diag > 0.0);
  }
  // sigma_x drive on a sigma_z Hamiltonian: purely coherent
  {
    const auto [w_diag, w_coh] =
        coherence_split(HermitianOperator(pauli_x()), pi, gen);
    CHECK(w_diag == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(w_coh > 0.0);
  }
  // random drives: vanishing cross term, sum rule, nonnegativity
  std::mt19937_64 rng(12);
  const Superoperator j = j_superoperator(pi);
  const Superoperator lp = drazin_inverse(gen, pi);
  for (int trial = 0; trial < 8; ++trial) {
    const Mat hdot = oracles::random_hermitian(rng, 2);
    const Mat& v = h.eigenvectors();
    const Mat he = v.adjoint() * hdot * v;
    Mat diag = Mat::Zero(2, 2);
    diag(0, 0) = he(0, 0);
    diag(1, 1) = he(1, 1);
    const Mat h_diag = v * diag * v.adjoint();
    const Mat h_coh = hdot - h_diag;
    const double cross =
        std::abs((h_diag * lp.apply(j.apply(h_coh))).trace().real());
    CHECK(cross < 1e-10);

    const auto [w_diag, w_coh] =
        coherence_split(HermitianOperator(hdot), pi, gen);
    const double total = -beta * (hdot * lp.apply(j.apply(hdot))).trace().real();
    CHECK(w_diag + w_coh == doctest::Approx(total).epsilon(1e-9));
    CHECK(w_diag >= -1e-10);
    CHECK(w_coh >= -1e-10);
  }

  // non-detailed-balance generator: the split theorem does not apply
  const std::complex<double> im(0.0, 1.0);
  const Mat sx = pauli_x();
  const Mat drive = -im * (Superoperator::left_mult(sx).matrix() -
                           Superoperator::right_mult(sx).matrix());
  const Superoperator bad(2, gen.matrix() + drive);
  CHECK_THROWS_AS(coherence_split(HermitianOperator(pauli_z()), pi, bad),
                  domain_error);
}

TEST_CASE("metric tensor validation") {
  RMat negative(2, 2);
  negative << -1.0, 0.0, 0.0, -2.0;
  CHECK_THROWS_AS(make_metric_tensor(negative, MetricKind::bkm), domain_error);
}

TEST_CASE("controlled hamiltonian linearity and derivatives") {
  std::mt19937_64 rng(2);
  const HermitianOperator x0(oracles::random_hermitian(rng, 3));
  const HermitianOperator x1(oracles::random_hermitian(rng, 3));
  const ControlledHamiltonian ch(HermitianOperator::zero(3), {x0, x1});
  RVec lambda(2), mu(2);
  lambda << 0.4, -0.8;
  mu << 0.15, 0.25;
  const Mat diff = ch.at(lambda + mu).matrix() - ch.at(lambda).matrix();
  const Mat expected = mu(0) * x0.matrix() + mu(1) * x1.matrix();
  CHECK((diff - expected).cwiseAbs().maxCoeff() < 1e-13);
  CHECK((ch.derivative(lambda, 1).matrix() - x1.matrix()).cwiseAbs().maxCoeff() ==
        0.0);

  // nonlinear map: rotating two-level Hamiltonian, analytic derivative
  const ControlledHamiltonian rot(2, 2, [](const RVec& l) {
    const double e = l(0), theta = l(1);
    return (e * (std::cos(theta) * pauli_z() + std::sin(theta) * pauli_x()))
        .eval();
  });
  RVec point(2);
  point << 1.3, 0.6;
  const Mat d_theta = rot.derivative(point, 1).matrix();
  const Mat expected_theta =
      point(0) *
      (-std::sin(point(1)) * pauli_z() + std::cos(point(1)) * pauli_x());
  CHECK((d_theta - expected_theta).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("thermal metric fields guard the population domain") {
  const ControlledHamiltonian ch(HermitianOperator::zero(2), {level_op()});
  const MetricField field = bkm_field(ch, 1.0);
  CHECK(field.at(scalar(1.0)).g(0, 0) > 0.0);
  try {
    field.at(scalar(35.0));  // population ~ 6e-16 < 1e-12
    CHECK(false);
  } catch (const domain_error& e) {
    CHECK(std::string(e.what()).find("population") != std::string::npos);
  }

  const MetricField step = step_field(ch, 1.0, 2.0);
  CHECK(step.at(scalar(1.0)).g(0, 0) ==
        doctest::Approx(2.0 * field.at(scalar(1.0)).g(0, 0)));
  CHECK(step.kind() == MetricKind::step);

  BathSpec bath;
  bath.tau_eq = 2.0;
  const MetricField diss = dissipative_field(ch, 1.0, bath);
  CHECK(diss.at(scalar(1.0)).g(0, 0) ==
        doctest::Approx(step.at(scalar(1.0)).g(0, 0)).epsilon(1e-10));
}
