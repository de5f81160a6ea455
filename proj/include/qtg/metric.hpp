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

#include <functional>
#include <utility>
#include <vector>

#include "qtg/lindblad.hpp"
#include "qtg/quantum.hpp"

// The three thermodynamic metric tensors (BKM/step, dissipative Lindbladian,
// adiabatic unitary) and the diagonal/coherent dissipation split.

namespace qtg {

enum class MetricKind { bkm, step, dissipative, adiabatic };

const char* metric_kind_name(MetricKind kind);

/// Symmetric positive-semidefinite metric on control-parameter velocities.
struct MetricTensor {
  RMat g;
  MetricKind kind;
  int n() const { return static_cast<int>(g.rows()); }
};

/// Validates symmetry/PSD (min eigenvalue >= -1e-10 * max) and returns the
/// exactly symmetrized tensor.
MetricTensor make_metric_tensor(const RMat& raw, MetricKind kind);

/// Controlled Hamiltonian H(lambda). Linear families carry explicit basis
/// observables; general maps differentiate by central differences with step
/// 1e-6 (1 + |lambda|).
class ControlledHamiltonian {
 public:
  ControlledHamiltonian(HermitianOperator offset,
                        std::vector<HermitianOperator> basis_ops);
  ControlledHamiltonian(int n_controls, int dim,
                        std::function<Mat(const RVec&)> map);

  int n_controls() const { return n_; }
  int dim() const { return dim_; }
  bool linear() const { return !general_; }

  HermitianOperator at(const RVec& lambda) const;
  /// dH/d lambda_i at lambda.
  HermitianOperator derivative(const RVec& lambda, int i) const;

 private:
  int n_;
  int dim_;
  HermitianOperator offset_;
  std::vector<HermitianOperator> basis_;
  std::function<Mat(const RVec&)> general_;
};

/// J[A] = int_0^1 pi^{1-x} A pi^x dx, in closed form in the pi eigenbasis.
/// Requires all populations > 1e-14.
Superoperator j_superoperator(const GibbsState& pi);

/// g_ij = beta^2 Tr[Xbar_i J[Xbar_j]], the Hessian of log Z.
MetricTensor bkm_metric(const ControlledHamiltonian& ch, double beta,
                        const RVec& lambda);

/// Symmetrization of q_ij = -beta^2 Tr[Xbar_i L+ J[Xbar_j]].
MetricTensor dissipative_metric(const ControlledHamiltonian& ch,
                                const Superoperator& lindbladian, double beta,
                                const RVec& lambda);

/// Spectral-sum adiabatic response metric over nondegenerate level pairs;
/// degenerate spectra are rejected with the pairs listed.
MetricTensor adiabatic_metric(const ControlledHamiltonian& ch, double beta,
                              const RVec& lambda);

/// Splits Hdot into its diagonal and coherent parts in the pi eigenbasis and
/// returns both dissipation-rate quadratic forms
/// -beta Tr[Hdot^(X) L+ J[Hdot^(X)]]. Requires detailed balance.
std::pair<double, double> coherence_split(const HermitianOperator& h_dot,
                                          const GibbsState& pi,
                                          const Superoperator& lindbladian);

/// lambda -> g(lambda), tagged with its construction.
class MetricField {
 public:
  MetricField(int n, MetricKind kind,
              std::function<MetricTensor(const RVec&)> eval);

  MetricTensor at(const RVec& lambda) const;
  int n() const { return n_; }
  MetricKind kind() const { return kind_; }

 private:
  int n_;
  MetricKind kind_;
  std::function<MetricTensor(const RVec&)> eval_;
};

// Field factories. Thermal-state fields refuse points where any population
// drops below 1e-12 (the J closed form degenerates at rank deficiency).
MetricField bkm_field(const ControlledHamiltonian& ch, double beta);
MetricField step_field(const ControlledHamiltonian& ch, double beta,
                       double tau_eq);
MetricField dissipative_field(const ControlledHamiltonian& ch, double beta,
                              const BathSpec& bath);
MetricField adiabatic_field(const ControlledHamiltonian& ch, double beta);
MetricField constant_field(const RMat& g, MetricKind kind = MetricKind::bkm);

}  // namespace qtg
