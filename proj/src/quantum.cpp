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

#include "qtg/quantum.hpp"

#include <cmath>
#include <string>

namespace qtg {

namespace {

constexpr double kHermTol = 1e-12;
constexpr double kEigenvalueClamp = 1e-14;

Mat sqrt_psd(const Mat& rho, const char* what) {
  Eigen::SelfAdjointEigenSolver<Mat> es(rho);
  RVec ev = es.eigenvalues();
  const double scale = std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  for (long i = 0; i < ev.size(); ++i) {
    if (ev(i) < -1e-10 * scale)
      throw domain_error(std::string(what) + ": input is not positive "
                         "semidefinite (eigenvalue " + std::to_string(ev(i)) +
                         ")");
    if (ev(i) < kEigenvalueClamp) ev(i) = 0.0;  // absorb negative roundoff
  }
  return es.eigenvectors() * ev.cwiseSqrt().asDiagonal() *
         es.eigenvectors().adjoint();
}

}  // namespace

HermitianOperator::HermitianOperator(Mat entries) {
  if (entries.rows() != entries.cols() || entries.rows() == 0)
    throw validation_error("HermitianOperator: matrix must be square and "
                           "non-empty");
  const double asym = (entries - entries.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermTol)
    throw validation_error("HermitianOperator: matrix is not Hermitian "
                           "(max |A - A^dag| = " + std::to_string(asym) + ")");
  entries_ = 0.5 * (entries + entries.adjoint().eval());
  Eigen::SelfAdjointEigenSolver<Mat> es(entries_);
  eigenvalues_ = es.eigenvalues();
  eigenvectors_ = es.eigenvectors();
}

HermitianOperator HermitianOperator::zero(int dim) {
  return HermitianOperator(Mat::Zero(dim, dim));
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(Mat::Identity(dim, dim));
}

Mat HermitianOperator::apply_spectral(
    const std::function<double(double)>& f) const {
  RVec mapped(eigenvalues_.size());
  for (long i = 0; i < mapped.size(); ++i) mapped(i) = f(eigenvalues_(i));
  return eigenvectors_ * mapped.asDiagonal() * eigenvectors_.adjoint();
}

GibbsState::GibbsState(HermitianOperator hamiltonian, double beta, Mat matrix,
                       double log_partition, RVec populations)
    : hamiltonian_(std::move(hamiltonian)),
      beta_(beta),
      matrix_(std::move(matrix)),
      log_partition_(log_partition),
      free_energy_(-log_partition / beta),
      populations_(std::move(populations)) {
  mean_energy_ = populations_.dot(hamiltonian_.eigenvalues());
  double s = 0.0;
  for (long i = 0; i < populations_.size(); ++i)
    if (populations_(i) > 0) s -= populations_(i) * std::log(populations_(i));
  entropy_ = s;
}

GibbsState gibbs_state(const HermitianOperator& hamiltonian, double beta) {
  if (!(beta > 0))
    throw validation_error("gibbs_state: beta must be positive");
  const RVec& eps = hamiltonian.eigenvalues();
  const double eps_min = eps.minCoeff();
  RVec boltzmann = (-beta * (eps.array() - eps_min)).exp().matrix();
  const double z_shifted = boltzmann.sum();
  RVec populations = boltzmann / z_shifted;
  const double log_partition = std::log(z_shifted) - beta * eps_min;
  Mat matrix = hamiltonian.eigenvectors() * populations.asDiagonal() *
               hamiltonian.eigenvectors().adjoint();
  return GibbsState(hamiltonian, beta, std::move(matrix), log_partition,
                    std::move(populations));
}

double heat_capacity(const GibbsState& pi) {
  const RVec& eps = pi.hamiltonian().eigenvalues();
  const RVec& p = pi.populations();
  const double mean = p.dot(eps);
  double var = 0.0;
  for (long i = 0; i < p.size(); ++i)
    var += p(i) * (eps(i) - mean) * (eps(i) - mean);
  return std::max(0.0, pi.beta() * pi.beta() * var);
}

double hellinger_angle(const Mat& rho, const Mat& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw validation_error("hellinger_angle: dimension mismatch");
  if (rho.rows() != rho.cols())
    throw validation_error("hellinger_angle: inputs must be square");
  for (const Mat* m : {&rho, &sigma}) {
    if ((*m - m->adjoint()).cwiseAbs().maxCoeff() > 1e-10)
      throw validation_error("hellinger_angle: input is not Hermitian");
    if (std::abs(m->trace().real() - 1.0) > 1e-8)
      throw validation_error("hellinger_angle: input trace differs from 1");
  }
  const Mat overlap = sqrt_psd(rho, "hellinger_angle") *
                      sqrt_psd(sigma, "hellinger_angle");
  double fidelity = overlap.trace().real();
  fidelity = std::clamp(fidelity, -1.0, 1.0);  // absorb roundoff
  return 2.0 * std::acos(fidelity);
}

double hellinger_angle(const GibbsState& rho, const GibbsState& sigma) {
  return hellinger_angle(rho.matrix(), sigma.matrix());
}

}  // namespace qtg
