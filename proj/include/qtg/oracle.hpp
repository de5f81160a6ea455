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

#include <vector>

#include "qtg/geometry.hpp"
#include "qtg/lindblad.hpp"
#include "qtg/metric.hpp"

// Direct dynamical validation: integrates the driven master equation with
// frozen-generator snapshots along the control path, measures work and
// dissipation, and verifies the slow-driving expansion.

namespace qtg {

/// A driven protocol: lambda(s) over total duration tau against a thermal
/// bath whose rates are recomputed at every control snapshot.
struct Protocol {
  ControlledHamiltonian ch;
  ControlPath path;
  BathSpec bath;
  double tau;
  double beta;
};

struct TrajectorySample {
  double t;
  RVec populations;      // in the instantaneous Hamiltonian eigenbasis
  double max_coherence;  // largest off-diagonal magnitude in that basis
  double work_rate;      // Tr[Hdot rho]
};

struct RunRecord {
  double w = 0.0;       // integral of Tr[Hdot rho]
  double w_eq = 0.0;    // Delta F
  double w_diss = 0.0;  // w - w_eq, by definition
  double heat = 0.0;    // Delta U - w
  Mat final_state;
  std::vector<TrajectorySample> trajectory;
};

/// Adaptive RK4(5) on the vectorized state, rel tol 1e-9 / abs tol 1e-12,
/// work accumulated on the integrator grid. The default initial state is the
/// thermal state at lambda(0).
RunRecord integrate(const Protocol& protocol, const Mat& rho0);
RunRecord integrate(const Protocol& protocol);

/// Max over the late-protocol window (s in [1/2, 1]) of the trace-norm
/// residual || rho_t - pi_t - L+[pidot_t] ||, with pidot from the analytic
/// -beta lambdadot^i J[Xbar_i] form. Scales as O(1/tau^2).
double slow_driving_residual(const Protocol& protocol);

struct DissipationFit {
  double coefficient = 0.0;   // a in w_diss = a/tau + b/tau^2
  double second_order = 0.0;  // b
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> samples;  // (tau, w_diss)
};

/// Least-squares fit of w_diss(tau) across a tau sweep of the same protocol
/// shape; a*beta reproduces the metric action sigma. Requires >= 4 durations
/// with span >= 4x, all at least 20 relaxation times long.
DissipationFit extract_dissipation_coefficient(const Protocol& base,
                                               const std::vector<double>& taus);

enum class Thermalization { full, exponential };

/// Quench sequence through the given thermal states. `full` resets to each
/// target exactly; `exponential` retains an e^{-1} lag per step (window
/// length equal to the relaxation time tau_eq).
RunRecord discrete_protocol(const std::vector<GibbsState>& sequence,
                            double tau_eq, Thermalization mode);

/// Sum of singular values (Hermitian input).
double trace_norm(const Mat& a);

}  // namespace qtg
