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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qtg/metric.hpp"

// Finite-time thermal-machine optimization in the low-dissipation regime:
// duration allocation, maximum power, power at fixed efficiency/COP, cooling
// rate, multi-bath bounds, heat-capacity location and the qubit case study.

namespace qtg {

/// One near-equilibrium transformation: heat T dS with dissipation T sigma/tau.
struct IsothermStep {
  double T;      // bath temperature (energy units)
  double dS;     // entropy change
  double sigma;  // action value (time units)
};

struct EngineResult {
  std::vector<double> durations;
  double total_time = 0.0;
  double power = 0.0;
  double efficiency = 0.0;  // or COP; NaN when not applicable
  double w_diss = 0.0;
  double quasistatic_output = 0.0;  // sum of T dS
  std::map<std::string, double> diagnostics;
};

/// Cauchy-Schwarz duration allocation at fixed dissipated work:
/// tau_j = sqrt(T_j sigma_j) sum_i sqrt(T_i sigma_i) / w_diss. The resulting
/// dissipation rates T_j sigma_j / tau_j^2 are all equal.
EngineResult optimal_durations(const std::vector<IsothermStep>& steps,
                               double w_diss);

/// Maximum power point: w_diss = (1/2) sum T_i dS_i, so the losses are half
/// of the quasistatic output.
EngineResult max_power(const std::vector<IsothermStep>& steps);

/// Two-isotherm Carnot max power for baths of ohmicity alpha, using
/// sigma_c = sigma_h (T_c/T_h)^{-alpha}.
double carnot_max_power(double dS, double sigma_h, double T_h, double T_c,
                        double alpha);

/// Power at efficiency eta = (1-delta) eta_C. The closed form at fixed delta
/// exists for alpha = 0 only; for other alpha the result carries the
/// sigma_c scaling and the max-power endpoint, with power set to NaN.
EngineResult carnot_power_at_efficiency(double dS, double sigma_h, double T_h,
                                        double T_c, double delta,
                                        double alpha = 0.0);

/// Cooling power at COP eps = (1-delta) T_c/(T_h-T_c), flat spectral density.
EngineResult refrigerator_power_at_cop(double dS, double sigma, double T_h,
                                       double T_c, double delta);

/// Overall maximum of the cooling rate with extra cycle time tau_ex.
EngineResult cooling_max(double dS_c, double sigma_c, double T_c,
                         double tau_ex);

struct MultibathResult {
  double p_multi = 0.0;     // multi-bath max power under the sigma scaling
  double p_extremal = 0.0;  // two extremal baths only
  bool holds = false;       // p_multi <= p_extremal + 1e-12
  bool claim_valid = true;  // the bound is only claimed for alpha >= -1
};

/// Appendix-style multi-bath comparison with sigma_i = kappa0 (T_i/T0)^{-alpha} dS_i^2.
MultibathResult multibath_bound(
    const std::vector<std::pair<double, double>>& baths /* (T_i, dS_i) */,
    double kappa0, double alpha, double T0);

struct OptimalPoint {
  RVec lambda;
  double c_value = 0.0;
  int skipped_points = 0;  // metric-singular interior points encountered
};

/// Maximizes C(lambda) = dS^T g^{-1} dS over a box by seeded multistart
/// compass search (16 starts, deterministic reduction).
OptimalPoint locate_optimal_point(const ControlledHamiltonian& ch,
                                  const MetricField& field, double beta,
                                  const RVec& lo, const RVec& hi,
                                  std::uint64_t seed = 0);

struct QubitCaseStudy {
  double dS = 0.0;
  double sigma_min = 0.0;  // tau_eq (2 arccos[...])^2
  double fom = 0.0;        // dS^2 / sigma_min, 0 at coincident endpoints
};

/// Driven two-level engine with levels {0, E}, g = beta E, under reset
/// dynamics with timescale tau_eq.
QubitCaseStudy qubit_case_study(double g_x, double g_y, double tau_eq);

/// Excited-state population p = e^{-g}/(1+e^{-g}) of the two-level system.
double qubit_excited_population(double g);
/// Binary entropy of the thermal qubit at g = beta E.
double qubit_entropy(double g);
/// Heat capacity g^2 p(1-p) of the thermal qubit.
double qubit_heat_capacity(double g);

}  // namespace qtg
