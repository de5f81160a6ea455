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

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "qtg/errors.hpp"

// Hermitian-operator algebra, Gibbs-state thermodynamics and state-distance
// primitives. Units: k_B = hbar = 1, temperatures carry energy units.

namespace qtg {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RMat = Eigen::MatrixXd;
using RVec = Eigen::VectorXd;

/// Finite-dimensional Hermitian matrix with its eigendecomposition attached.
/// Immutable after construction.
class HermitianOperator {
 public:
  /// Validates hermiticity (absolute tolerance 1e-12 on |A - A^dag|) and
  /// symmetrizes exactly before decomposing.
  explicit HermitianOperator(Mat entries);

  static HermitianOperator zero(int dim);
  static HermitianOperator identity(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Mat& matrix() const { return entries_; }
  const RVec& eigenvalues() const { return eigenvalues_; }
  const Mat& eigenvectors() const { return eigenvectors_; }

  /// V f(eps) V^dag for a scalar function of the eigenvalues.
  Mat apply_spectral(const std::function<double(double)>& f) const;

 private:
  Mat entries_;
  RVec eigenvalues_;
  Mat eigenvectors_;
};

/// Thermal state pi = e^{-beta H}/Z with its scalar thermodynamic functions.
class GibbsState {
 public:
  GibbsState(HermitianOperator hamiltonian, double beta, Mat matrix,
             double log_partition, RVec populations);

  const HermitianOperator& hamiltonian() const { return hamiltonian_; }
  double beta() const { return beta_; }
  const Mat& matrix() const { return matrix_; }
  double log_partition() const { return log_partition_; }
  double free_energy() const { return free_energy_; }
  double entropy() const { return entropy_; }
  double mean_energy() const { return mean_energy_; }
  /// Populations in the energy eigenbasis, ordered like the eigenvalues.
  const RVec& populations() const { return populations_; }
  int dim() const { return hamiltonian_.dim(); }

 private:
  HermitianOperator hamiltonian_;
  double beta_;
  Mat matrix_;
  double log_partition_;
  double free_energy_;
  double entropy_;
  double mean_energy_;
  RVec populations_;
};

/// Thermal state of H at inverse temperature beta > 0. The partition function
/// is evaluated with the spectrum shifted by its minimum, so large beta*E is
/// safe from overflow.
GibbsState gibbs_state(const HermitianOperator& hamiltonian, double beta);

/// Var_pi(beta H), the dimensionless heat capacity.
double heat_capacity(const GibbsState& pi);

/// Quantum Hellinger angle 2 arccos Tr[sqrt(rho) sqrt(sigma)] in [0, pi].
/// For commuting inputs this is the classical angle of the eigenvalue
/// distributions.
double hellinger_angle(const Mat& rho, const Mat& sigma);
double hellinger_angle(const GibbsState& rho, const GibbsState& sigma);

}  // namespace qtg
