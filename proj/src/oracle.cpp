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

#include "qtg/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "qtg/numerics.hpp"

namespace qtg {

namespace {

using cxd = std::complex<double>;

void validate_density_matrix(const Mat& rho, int dim) {
  if (rho.rows() != dim || rho.cols() != dim)
    throw validation_error("integrate: initial state dimension mismatch");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
    throw validation_error("integrate: initial state is not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-9)
    throw validation_error("integrate: initial state trace differs from 1");
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  if (es.eigenvalues().minCoeff() < -1e-9)
    throw validation_error("integrate: initial state is not positive "
                           "semidefinite");
}

Mat hdot_at(const Protocol& p, double s) {
  const RVec lambda = p.path.value(s);
  const RVec vel = p.path.velocity(s) / p.tau;
  Mat hdot = Mat::Zero(p.ch.dim(), p.ch.dim());
  for (int i = 0; i < p.ch.n_controls(); ++i)
    hdot += vel(i) * p.ch.derivative(lambda, i).matrix();
  return hdot;
}

// reset dynamics shortcut: the generator action needs no d^2 x d^2 matrix
Mat apply_bath(const BathSpec& bath, const HermitianOperator& h, double beta,
               const Mat& rho) {
  if (bath.type == BathSpec::Type::reset) {
    const GibbsState pi = gibbs_state(h, beta);
    return (pi.matrix() * rho.trace() - rho) / bath.tau_eq;
  }
  return build_bath_generator(bath, h, beta).apply(rho);
}

}  // namespace

double trace_norm(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (a + a.adjoint().eval()));
  return es.eigenvalues().cwiseAbs().sum();
}

RunRecord integrate(const Protocol& protocol, const Mat& rho0) {
  const int d = protocol.ch.dim();
  validate_density_matrix(rho0, d);
  if (!(protocol.tau > 0))
    throw validation_error("integrate: tau must be positive");

  const auto rhs = [&](double t, const Vec& y, Vec& dy) {
    const double s = t / protocol.tau;
    const RVec lambda = protocol.path.value(s);
    const HermitianOperator h = protocol.ch.at(lambda);
    const Mat rho = unvectorize(y.head(d * d), d);
    dy.head(d * d) =
        vectorize(apply_bath(protocol.bath, h, protocol.beta, rho));
    dy(d * d) = (hdot_at(protocol, s) * rho).trace();
  };

  RunRecord rec;
  Vec y(d * d + 1);
  y.head(d * d) = vectorize(rho0);
  y(d * d) = 0.0;

  const auto observer = [&](double t, const Vec& yy) {
    const Mat rho = unvectorize(yy.head(d * d), d);
    const double drift = std::abs(rho.trace().real() - 1.0);
    if (drift > 1e-8)
      throw convergence_error("integrate: trace drift " +
                              std::to_string(drift) + " at t=" +
                              std::to_string(t));
    const double s = t / protocol.tau;
    const HermitianOperator h = protocol.ch.at(protocol.path.value(s));
    const Mat rho_eig = h.eigenvectors().adjoint() * rho * h.eigenvectors();
    TrajectorySample sample;
    sample.t = t;
    sample.populations = rho_eig.diagonal().real();
    sample.max_coherence = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j)
          sample.max_coherence =
              std::max(sample.max_coherence, std::abs(rho_eig(i, j)));
    sample.work_rate = (hdot_at(protocol, s) * rho).trace().real();
    rec.trajectory.push_back(std::move(sample));
  };

  num::OdeOptions opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 1e-12;
  num::integrate_rk45(rhs, 0.0, protocol.tau, y, opt, observer);

  rec.final_state = unvectorize(y.head(d * d), d);
  rec.w = y(d * d).real();
  const GibbsState pi0 = gibbs_state(protocol.ch.at(protocol.path.value(0.0)),
                                     protocol.beta);
  const GibbsState pi1 = gibbs_state(protocol.ch.at(protocol.path.value(1.0)),
                                     protocol.beta);
  rec.w_eq = pi1.free_energy() - pi0.free_energy();
  rec.w_diss = rec.w - rec.w_eq;
  const double u0 = (pi0.hamiltonian().matrix() * rho0).trace().real();
  const double u1 =
      (pi1.hamiltonian().matrix() * rec.final_state).trace().real();
  rec.heat = (u1 - u0) - rec.w;
  return rec;
}

RunRecord integrate(const Protocol& protocol) {
  const GibbsState pi0 = gibbs_state(protocol.ch.at(protocol.path.value(0.0)),
                                     protocol.beta);
  return integrate(protocol, pi0.matrix());
}

double slow_driving_residual(const Protocol& protocol) {
  const int d = protocol.ch.dim();
  const GibbsState pi0 = gibbs_state(protocol.ch.at(protocol.path.value(0.0)),
                                     protocol.beta);
  Vec y(d * d + 1);
  y.head(d * d) = vectorize(pi0.matrix());
  y(d * d) = 0.0;
  const auto rhs = [&](double t, const Vec& yy, Vec& dy) {
    const double s = t / protocol.tau;
    const HermitianOperator h = protocol.ch.at(protocol.path.value(s));
    const Mat rho = unvectorize(yy.head(d * d), d);
    dy.head(d * d) =
        vectorize(apply_bath(protocol.bath, h, protocol.beta, rho));
    dy(d * d) = 0.0;
  };

  const int samples = 33;
  num::OdeOptions opt;
  opt.rel_tol = 1e-9;
  opt.abs_tol = 1e-12;
  double worst = 0.0;
  double t_prev = 0.0;
  for (int k = 0; k < samples; ++k) {
    const double s = 0.5 + 0.5 * k / (samples - 1);
    const double t = s * protocol.tau;
    if (t > t_prev) num::integrate_rk45(rhs, t_prev, t, y, opt);
    t_prev = t;

    const RVec lambda = protocol.path.value(s);
    const RVec vel = protocol.path.velocity(s) / protocol.tau;
    const HermitianOperator h = protocol.ch.at(lambda);
    const GibbsState pi = gibbs_state(h, protocol.beta);
    const Superoperator j = j_superoperator(pi);
    Mat pidot = Mat::Zero(d, d);
    for (int i = 0; i < protocol.ch.n_controls(); ++i) {
      const Mat x = protocol.ch.derivative(lambda, i).matrix();
      const Mat xbar =
          x - (x * pi.matrix()).trace().real() * Mat::Identity(d, d);
      pidot += -protocol.beta * vel(i) * j.apply(xbar);
    }
    const Superoperator gen =
        build_bath_generator(protocol.bath, h, protocol.beta);
    const Superoperator lp = drazin_inverse(gen, pi);
    const Mat rho = unvectorize(y.head(d * d), d);
    const Mat predicted = pi.matrix() + lp.apply(pidot);
    worst = std::max(worst, trace_norm(rho - predicted));
  }
  return worst;
}

DissipationFit extract_dissipation_coefficient(const Protocol& base,
                                               const std::vector<double>& taus) {
  if (taus.size() < 4)
    throw validation_error("extract_dissipation_coefficient: need at least 4 "
                           "durations");
  std::vector<double> sorted = taus;
  std::sort(sorted.begin(), sorted.end());
  if (!(sorted.front() > 0))
    throw validation_error("extract_dissipation_coefficient: durations must "
                           "be positive");
  if (sorted.back() / sorted.front() < 4.0)
    throw validation_error("extract_dissipation_coefficient: durations must "
                           "span at least a factor of 4");
  double slowest = 0.0;
  for (double s : {0.0, 0.5, 1.0}) {
    const Superoperator gen = build_bath_generator(
        base.bath, base.ch.at(base.path.value(s)), base.beta);
    slowest = std::max(slowest, relaxation_timescales(gen).second);
  }
  if (sorted.front() < 20.0 * slowest)
    throw validation_error("extract_dissipation_coefficient: shortest "
                           "duration is under 20 relaxation times");

  DissipationFit fit;
  double sxx = 0, sxxx = 0, sxxxx = 0, sxw = 0, sxxw = 0, sw = 0;
  for (double tau : sorted) {
    Protocol p = base;
    p.tau = tau;
    const RunRecord rec = integrate(p);
    fit.samples.push_back({tau, rec.w_diss});
    const double x = 1.0 / tau, w = rec.w_diss;
    sxx += x * x;
    sxxx += x * x * x;
    sxxxx += x * x * x * x;
    sxw += x * w;
    sxxw += x * x * w;
    sw += w;
  }
  const double det = sxx * sxxxx - sxxx * sxxx;
  fit.coefficient = (sxxxx * sxw - sxxx * sxxw) / det;
  fit.second_order = (sxx * sxxw - sxxx * sxw) / det;
  const double wbar = sw / static_cast<double>(sorted.size());
  double ss_res = 0, ss_tot = 0;
  for (const auto& [tau, w] : fit.samples) {
    const double x = 1.0 / tau;
    const double model = fit.coefficient * x + fit.second_order * x * x;
    ss_res += (w - model) * (w - model);
    ss_tot += (w - wbar) * (w - wbar);
  }
  fit.r_squared = (ss_tot > 0) ? 1.0 - ss_res / ss_tot : 1.0;
  if (fit.r_squared < 0.999)
    throw convergence_error(
        "extract_dissipation_coefficient: fit quality R^2 = " +
        std::to_string(fit.r_squared) +
        " below 0.999; use larger tau values");
  return fit;
}

RunRecord discrete_protocol(const std::vector<GibbsState>& sequence,
                            double tau_eq, Thermalization mode) {
  if (sequence.size() < 2)
    throw validation_error("discrete_protocol: need at least 2 states");
  if (!(tau_eq > 0))
    throw validation_error("discrete_protocol: tau_eq must be positive");
  const int d = sequence.front().dim();
  const double beta = sequence.front().beta();
  for (const GibbsState& pi : sequence) {
    if (pi.dim() != d)
      throw validation_error("discrete_protocol: dimension mismatch in "
                             "sequence");
    if (std::abs(pi.beta() - beta) > 1e-12 * beta)
      throw validation_error("discrete_protocol: all states must share one "
                             "bath temperature");
  }

  RunRecord rec;
  Mat rho = sequence.front().matrix();
  const double lag = std::exp(-1.0);
  for (std::size_t k = 0; k + 1 < sequence.size(); ++k) {
    const Mat dh = sequence[k + 1].hamiltonian().matrix() -
                   sequence[k].hamiltonian().matrix();
    rec.w += (dh * rho).trace().real();
    if (mode == Thermalization::full)
      rho = sequence[k + 1].matrix();
    else
      rho = sequence[k + 1].matrix() + lag * (rho - sequence[k + 1].matrix());

    TrajectorySample sample;
    sample.t = static_cast<double>(k + 1) * tau_eq;
    const HermitianOperator& h = sequence[k + 1].hamiltonian();
    const Mat rho_eig = h.eigenvectors().adjoint() * rho * h.eigenvectors();
    sample.populations = rho_eig.diagonal().real();
    sample.max_coherence = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (i != j)
          sample.max_coherence =
              std::max(sample.max_coherence, std::abs(rho_eig(i, j)));
    sample.work_rate = 0.0;
    rec.trajectory.push_back(std::move(sample));
  }
  rec.final_state = rho;
  rec.w_eq = sequence.back().free_energy() - sequence.front().free_energy();
  rec.w_diss = rec.w - rec.w_eq;
  const double u0 = (sequence.front().hamiltonian().matrix() *
                     sequence.front().matrix())
                        .trace()
                        .real();
  const double u1 =
      (sequence.back().hamiltonian().matrix() * rho).trace().real();
  rec.heat = (u1 - u0) - rec.w;
  return rec;
}

}  // namespace qtg
