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

#include "qtg/metric.hpp"

#include <cmath>
#include <sstream>

namespace qtg {

namespace {

using cxd = std::complex<double>;

constexpr double kPopulationFloor = 1e-14;   // j_superoperator precondition
constexpr double kDomainGuard = 1e-12;       // field-level guard
constexpr double kLogDegeneracy = 1e-9;      // J closed-form limit switch

double mean_free_trace(const Mat& x, const GibbsState& pi) {
  return (x * pi.matrix()).trace().real();
}

// closed-form kernel of the x-integral
double j_factor(double a, double b) {
  const double dl = std::log(a) - std::log(b);
  if (std::abs(dl) < kLogDegeneracy) return 0.5 * (a + b);
  return (a - b) / dl;
}

}  // namespace

const char* metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::bkm: return "bkm";
    case MetricKind::step: return "step";
    case MetricKind::dissipative: return "dissipative";
    case MetricKind::adiabatic: return "adiabatic";
  }
  return "unknown";
}

MetricTensor make_metric_tensor(const RMat& raw, MetricKind kind) {
  if (raw.rows() != raw.cols())
    throw validation_error("make_metric_tensor: matrix must be square");
  RMat g = 0.5 * (raw + raw.transpose());
  Eigen::SelfAdjointEigenSolver<RMat> es(g);
  const double max_eig = es.eigenvalues().cwiseAbs().maxCoeff();
  if (es.eigenvalues().minCoeff() < -1e-10 * std::max(max_eig, 1e-300))
    throw domain_error("make_metric_tensor: tensor is not positive "
                       "semidefinite (min eigenvalue " +
                       std::to_string(es.eigenvalues().minCoeff()) + ")");
  return MetricTensor{std::move(g), kind};
}

ControlledHamiltonian::ControlledHamiltonian(
    HermitianOperator offset, std::vector<HermitianOperator> basis_ops)
    : n_(static_cast<int>(basis_ops.size())),
      dim_(offset.dim()),
      offset_(std::move(offset)),
      basis_(std::move(basis_ops)) {
  if (n_ == 0)
    throw validation_error("ControlledHamiltonian: at least one control "
                           "observable required");
  for (const auto& x : basis_)
    if (x.dim() != dim_)
      throw validation_error("ControlledHamiltonian: observable dimension "
                             "mismatch");
}

ControlledHamiltonian::ControlledHamiltonian(int n_controls, int dim,
                                             std::function<Mat(const RVec&)> map)
    : n_(n_controls),
      dim_(dim),
      offset_(HermitianOperator::zero(dim)),
      general_(std::move(map)) {
  if (n_ <= 0 || dim_ <= 0)
    throw validation_error("ControlledHamiltonian: invalid shape");
}

HermitianOperator ControlledHamiltonian::at(const RVec& lambda) const {
  if (lambda.size() != n_)
    throw validation_error("ControlledHamiltonian: control vector has wrong "
                           "size");
  if (general_) return HermitianOperator(general_(lambda));
  Mat h = offset_.matrix();
  for (int i = 0; i < n_; ++i) h += lambda(i) * basis_[i].matrix();
  return HermitianOperator(std::move(h));
}

HermitianOperator ControlledHamiltonian::derivative(const RVec& lambda,
                                                    int i) const {
  if (i < 0 || i >= n_)
    throw validation_error("ControlledHamiltonian: control index out of "
                           "range");
  if (!general_) return basis_[i];
  const double h = 1e-6 * (1.0 + lambda.norm());
  RVec up = lambda, dn = lambda;
  up(i) += h;
  dn(i) -= h;
  return HermitianOperator((general_(up) - general_(dn)) / (2.0 * h));
}

Superoperator j_superoperator(const GibbsState& pi) {
  const RVec& p = pi.populations();
  const int d = pi.dim();
  for (long i = 0; i < p.size(); ++i)
    if (p(i) <= kPopulationFloor)
      throw domain_error("j_superoperator: population " + std::to_string(i) +
                         " vanishes (" + std::to_string(p(i)) + ")");
  const Mat& v = pi.hamiltonian().eigenvectors();
  const Mat u = Superoperator::left_mult(v)
                    .compose(Superoperator::right_mult(v.adjoint()))
                    .matrix();  // kron(conj(V), V)
  RVec factors(d * d);
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m) factors(n * d + m) = j_factor(p(m), p(n));
  return Superoperator(d, u * factors.asDiagonal() * u.adjoint());
}

MetricTensor bkm_metric(const ControlledHamiltonian& ch, double beta,
                        const RVec& lambda) {
  const HermitianOperator h = ch.at(lambda);
  const GibbsState pi = gibbs_state(h, beta);
  const RVec& p = pi.populations();
  const int d = pi.dim();
  for (long i = 0; i < p.size(); ++i)
    if (p(i) <= kPopulationFloor)
      throw domain_error("bkm_metric: population " + std::to_string(i) +
                         " vanishes");
  const Mat& v = h.eigenvectors();
  const int n = ch.n_controls();
  std::vector<Mat> x_eig(n);
  for (int i = 0; i < n; ++i) {
    Mat xe = v.adjoint() * ch.derivative(lambda, i).matrix() * v;
    cxd mean = 0.0;
    for (int m = 0; m < d; ++m) mean += xe(m, m) * p(m);
    for (int m = 0; m < d; ++m) xe(m, m) -= mean;
    x_eig[i] = std::move(xe);
  }
  RMat g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      cxd acc = 0.0;
      for (int m = 0; m < d; ++m)
        for (int nn = 0; nn < d; ++nn)
          acc += x_eig[i](m, nn) * x_eig[j](nn, m) * j_factor(p(nn), p(m));
      g(i, j) = g(j, i) = beta * beta * acc.real();
    }
  return make_metric_tensor(g, MetricKind::bkm);
}

MetricTensor dissipative_metric(const ControlledHamiltonian& ch,
                                const Superoperator& lindbladian, double beta,
                                const RVec& lambda) {
  const HermitianOperator h = ch.at(lambda);
  const GibbsState pi = gibbs_state(h, beta);
  const Superoperator j = j_superoperator(pi);
  const Superoperator lp = drazin_inverse(lindbladian, pi);
  const int n = ch.n_controls();
  std::vector<Mat> xbar(n), lpj(n);
  for (int i = 0; i < n; ++i) {
    const Mat x = ch.derivative(lambda, i).matrix();
    xbar[i] = x - mean_free_trace(x, pi) * Mat::Identity(pi.dim(), pi.dim());
    lpj[i] = lp.apply(j.apply(xbar[i]));
  }
  RMat q(n, n);
  for (int i = 0; i < n; ++i)
    for (int jdx = 0; jdx < n; ++jdx)
      q(i, jdx) = -beta * beta * (xbar[i] * lpj[jdx]).trace().real();
  return make_metric_tensor(0.5 * (q + q.transpose()),
                            MetricKind::dissipative);
}

MetricTensor adiabatic_metric(const ControlledHamiltonian& ch, double beta,
                              const RVec& lambda) {
  const HermitianOperator h = ch.at(lambda);
  const RVec& eps = h.eigenvalues();
  const int d = h.dim();
  const double range = eps.maxCoeff() - eps.minCoeff();
  const double gap_tol = 1e-9 * std::max(range, 1e-300);
  std::ostringstream degenerate;
  for (int m = 0; m < d; ++m)
    for (int n = m + 1; n < d; ++n)
      if (eps(n) - eps(m) < gap_tol)
        degenerate << " (" << m << "," << n << ")";
  if (degenerate.tellp() > 0)
    throw domain_error("adiabatic_metric: degenerate spectrum at pairs" +
                       degenerate.str());

  const RVec p = gibbs_state(h, beta).populations();
  const Mat& v = h.eigenvectors();
  const int n = ch.n_controls();
  std::vector<Mat> x_eig(n);
  for (int i = 0; i < n; ++i)
    x_eig[i] = v.adjoint() * ch.derivative(lambda, i).matrix() * v;

  RMat g = RMat::Zero(n, n);
  for (int m = 0; m < d; ++m)
    for (int nn = m + 1; nn < d; ++nn) {
      const double gap = eps(nn) - eps(m);
      const double weight = beta * (p(m) - p(nn)) / (gap * gap);
      for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
          const double re = (x_eig[i](m, nn) * x_eig[j](nn, m)).real();
          g(i, j) += weight * re;
        }
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) g(i, j) = g(j, i);
  return make_metric_tensor(g, MetricKind::adiabatic);
}

std::pair<double, double> coherence_split(const HermitianOperator& h_dot,
                                          const GibbsState& pi,
                                          const Superoperator& lindbladian) {
  if (!is_detailed_balance(lindbladian, pi))
    throw domain_error("coherence_split: generator violates detailed balance; "
                       "the diagonal/coherent split theorem does not apply");
  const Mat& v = pi.hamiltonian().eigenvectors();
  const Mat h_eig = v.adjoint() * h_dot.matrix() * v;
  Mat diag_eig = Mat::Zero(pi.dim(), pi.dim());
  for (int i = 0; i < pi.dim(); ++i) diag_eig(i, i) = h_eig(i, i);
  const Mat h_diag = v * diag_eig * v.adjoint();
  const Mat h_coh = h_dot.matrix() - h_diag;

  const Superoperator j = j_superoperator(pi);
  const Superoperator lp = drazin_inverse(lindbladian, pi);
  const double beta = pi.beta();
  auto rate = [&](const Mat& x) {
    return -beta * (x * lp.apply(j.apply(x))).trace().real();
  };
  const double w_diag = rate(h_diag);
  const double w_coh = rate(h_coh);
  const double w_total = rate(h_dot.matrix());
  if (std::abs(w_diag + w_coh - w_total) >
      1e-9 * std::max(1.0, std::abs(w_total)))
    throw domain_error("coherence_split: sector sum rule violated");
  if (w_diag < -1e-10 || w_coh < -1e-10)
    throw domain_error("coherence_split: negative sector dissipation rate");
  return {w_diag, w_coh};
}

MetricField::MetricField(int n, MetricKind kind,
                         std::function<MetricTensor(const RVec&)> eval)
    : n_(n), kind_(kind), eval_(std::move(eval)) {}

MetricTensor MetricField::at(const RVec& lambda) const {
  if (lambda.size() != n_)
    throw validation_error("MetricField: control vector has wrong size");
  return eval_(lambda);
}

namespace {

void guard_domain(const ControlledHamiltonian& ch, double beta,
                  const RVec& lambda) {
  const RVec p = gibbs_state(ch.at(lambda), beta).populations();
  if (p.minCoeff() < kDomainGuard) {
    std::ostringstream msg;
    msg << "metric field: population " << p.minCoeff()
        << " below the 1e-12 domain guard at lambda = [";
    for (long i = 0; i < lambda.size(); ++i)
      msg << (i ? ", " : "") << lambda(i);
    msg << "]";
    throw domain_error(msg.str());
  }
}

}  // namespace

MetricField bkm_field(const ControlledHamiltonian& ch, double beta) {
  return MetricField(ch.n_controls(), MetricKind::bkm, [=](const RVec& l) {
    guard_domain(ch, beta, l);
    return bkm_metric(ch, beta, l);
  });
}

MetricField step_field(const ControlledHamiltonian& ch, double beta,
                       double tau_eq) {
  if (!(tau_eq > 0))
    throw validation_error("step_field: tau_eq must be positive");
  return MetricField(ch.n_controls(), MetricKind::step, [=](const RVec& l) {
    guard_domain(ch, beta, l);
    MetricTensor g = bkm_metric(ch, beta, l);
    return MetricTensor{tau_eq * g.g, MetricKind::step};
  });
}

MetricField dissipative_field(const ControlledHamiltonian& ch, double beta,
                              const BathSpec& bath) {
  return MetricField(
      ch.n_controls(), MetricKind::dissipative, [=](const RVec& l) {
        guard_domain(ch, beta, l);
        const Superoperator gen = build_bath_generator(bath, ch.at(l), beta);
        return dissipative_metric(ch, gen, beta, l);
      });
}

MetricField adiabatic_field(const ControlledHamiltonian& ch, double beta) {
  return MetricField(ch.n_controls(), MetricKind::adiabatic,
                     [=](const RVec& l) { return adiabatic_metric(ch, beta, l); });
}

MetricField constant_field(const RMat& g, MetricKind kind) {
  const MetricTensor tensor = make_metric_tensor(g, kind);
  return MetricField(tensor.n(), kind,
                     [tensor](const RVec&) { return tensor; });
}

}  // namespace qtg
