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

#include "qtg/engines.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "qtg/numerics.hpp"

namespace qtg {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void validate_steps(const std::vector<IsothermStep>& steps) {
  if (steps.empty())
    throw validation_error("engine: at least one isotherm step required");
  bool any_sigma = false;
  for (const IsothermStep& st : steps) {
    if (!(st.T > 0))
      throw validation_error("engine: bath temperatures must be positive");
    if (st.sigma < 0)
      throw validation_error("engine: sigma must be nonnegative");
    any_sigma = any_sigma || st.sigma > 0;
  }
  if (!any_sigma)
    throw domain_error("engine: all sigma vanish (quasistatic degenerate "
                       "case has no finite-time optimum)");
}

}  // namespace

EngineResult optimal_durations(const std::vector<IsothermStep>& steps,
                               double w_diss) {
  validate_steps(steps);
  if (!(w_diss > 0))
    throw validation_error("optimal_durations: w_diss must be positive");
  double root_sum = 0.0, quasi = 0.0;
  for (const IsothermStep& st : steps) {
    root_sum += std::sqrt(st.T * st.sigma);
    quasi += st.T * st.dS;
  }
  EngineResult res;
  res.w_diss = w_diss;
  res.quasistatic_output = quasi;
  for (const IsothermStep& st : steps) {
    const double tau = std::sqrt(st.T * st.sigma) * root_sum / w_diss;
    res.durations.push_back(tau);
    res.total_time += tau;
  }
  res.power = (quasi - w_diss) / res.total_time;
  res.efficiency = kNan;
  // the saturation certificate: T_j sigma_j / tau_j^2 equal across steps
  res.diagnostics["dissipation_rate"] =
      w_diss * w_diss / (root_sum * root_sum);
  return res;
}

EngineResult max_power(const std::vector<IsothermStep>& steps) {
  validate_steps(steps);
  double quasi = 0.0, root_sum = 0.0;
  for (const IsothermStep& st : steps) {
    quasi += st.T * st.dS;
    root_sum += std::sqrt(st.T * st.sigma);
  }
  if (!(quasi > 0))
    throw domain_error("max_power: quasistatic output is not positive (no "
                       "engine operation)");
  EngineResult res = optimal_durations(steps, 0.5 * quasi);
  res.power = quasi * quasi / (4.0 * root_sum * root_sum);
  res.diagnostics["loss_fraction"] = res.w_diss / quasi;
  return res;
}

double carnot_max_power(double dS, double sigma_h, double T_h, double T_c,
                        double alpha) {
  if (!(T_h > T_c) || !(T_c > 0))
    throw validation_error("carnot_max_power: need T_h > T_c > 0");
  if (!(dS > 0) || !(sigma_h > 0))
    throw validation_error("carnot_max_power: dS and sigma_h must be positive");
  const double ratio = std::pow(T_c / T_h, 0.5 * (1.0 - alpha));
  return dS * dS / sigma_h * (T_h - T_c) * (T_h - T_c) /
         (4.0 * T_h * (1.0 + ratio) * (1.0 + ratio));
}

EngineResult carnot_power_at_efficiency(double dS, double sigma_h, double T_h,
                                        double T_c, double delta,
                                        double alpha) {
  if (!(delta > 0) || !(delta < 1))
    throw validation_error("carnot_power_at_efficiency: delta must lie in "
                           "(0,1)");
  if (!(T_h > T_c) || !(T_c > 0))
    throw validation_error("carnot_power_at_efficiency: need T_h > T_c > 0");
  if (!(dS > 0) || !(sigma_h > 0))
    throw validation_error("carnot_power_at_efficiency: dS and sigma_h must "
                           "be positive");
  const double sigma_c = sigma_h * std::pow(T_c / T_h, -alpha);
  EngineResult res;
  res.quasistatic_output = dS * (T_h - T_c);
  res.efficiency = (1.0 - delta) * (1.0 - T_c / T_h);
  res.diagnostics["sigma_c"] = sigma_c;
  res.diagnostics["max_power"] = carnot_max_power(dS, sigma_h, T_h, T_c, alpha);
  if (alpha == 0.0) {
    const double dT = T_h - T_c;
    res.power = dS * dS / (4.0 * sigma_h) * dT * dT * delta * (1.0 - delta) /
                ((1.0 - delta) * T_c + delta * T_h);
    res.diagnostics["delta_power_defined"] = 1.0;
  } else {
    // fixed-delta closed form is only known for flat spectral density
    res.power = kNan;
    res.diagnostics["delta_power_defined"] = 0.0;
  }
  return res;
}

EngineResult refrigerator_power_at_cop(double dS, double sigma, double T_h,
                                       double T_c, double delta) {
  if (!(delta > 0) || !(delta <= 1))
    throw validation_error("refrigerator_power_at_cop: delta must lie in "
                           "(0,1]");
  if (!(T_h > T_c) || !(T_c > 0))
    throw validation_error("refrigerator_power_at_cop: need T_h > T_c > 0");
  if (!(dS > 0) || !(sigma > 0))
    throw validation_error("refrigerator_power_at_cop: dS and sigma must be "
                           "positive");
  EngineResult res;
  res.power = dS * dS / (4.0 * sigma) * T_c * (T_h - T_c) * delta /
              (T_h - delta * T_c);
  res.efficiency = (1.0 - delta) * T_c / (T_h - T_c);  // COP
  res.quasistatic_output = T_c * dS;
  return res;
}

EngineResult cooling_max(double dS_c, double sigma_c, double T_c,
                         double tau_ex) {
  if (!(dS_c > 0))
    throw validation_error("cooling_max: dS_c must be positive");
  if (!(sigma_c > 0) || !(T_c > 0) || tau_ex < 0)
    throw validation_error("cooling_max: invalid sigma_c, T_c or tau_ex");
  EngineResult res;
  res.quasistatic_output = T_c * dS_c;
  double w_opt;
  if (tau_ex == 0.0) {
    res.power = T_c * dS_c * dS_c / (4.0 * sigma_c);
    w_opt = 0.5 * T_c * dS_c;
  } else {
    const double root = std::sqrt(dS_c * tau_ex / sigma_c + 1.0) - 1.0;
    res.power = T_c * sigma_c * root * root / (tau_ex * tau_ex);
    w_opt = T_c * sigma_c * root / tau_ex;
  }
  res.w_diss = w_opt;
  res.durations = {T_c * sigma_c / w_opt};
  res.total_time = res.durations[0] + tau_ex;
  res.efficiency = kNan;
  return res;
}

MultibathResult multibath_bound(
    const std::vector<std::pair<double, double>>& baths, double kappa0,
    double alpha, double T0) {
  if (baths.size() < 2)
    throw validation_error("multibath_bound: need at least two baths");
  if (!(kappa0 > 0) || !(T0 > 0))
    throw validation_error("multibath_bound: kappa0 and T0 must be positive");
  double ds_sum = 0.0, ds_abs = 0.0;
  double t_hot = baths.front().first, t_cold = baths.front().first;
  for (const auto& [t, ds] : baths) {
    if (!(t > 0))
      throw validation_error("multibath_bound: temperatures must be positive");
    ds_sum += ds;
    ds_abs += std::abs(ds);
    t_hot = std::max(t_hot, t);
    t_cold = std::min(t_cold, t);
  }
  if (std::abs(ds_sum) > 1e-10)
    throw domain_error("multibath_bound: entropy changes do not close a "
                       "cycle (sum dS = " + std::to_string(ds_sum) + ")");
  if (ds_abs == 0.0)
    throw validation_error("multibath_bound: all entropy changes vanish");

  double numerator = 0.0, weighted = 0.0;
  for (const auto& [t, ds] : baths) {
    numerator += t * ds;
    weighted += std::pow(t / T0, 0.5 * (1.0 - alpha)) * std::abs(ds);
  }
  MultibathResult res;
  res.p_multi =
      numerator * numerator / (4.0 * kappa0 * T0 * weighted * weighted);
  const double wh = std::pow(t_hot / T0, 0.5 * (1.0 - alpha));
  const double wc = std::pow(t_cold / T0, 0.5 * (1.0 - alpha));
  res.p_extremal = (t_hot - t_cold) * (t_hot - t_cold) /
                   (4.0 * kappa0 * T0 * (wh + wc) * (wh + wc));
  res.holds = res.p_multi <= res.p_extremal + 1e-12;
  res.claim_valid = alpha >= -1.0;
  return res;
}

OptimalPoint locate_optimal_point(const ControlledHamiltonian& ch,
                                  const MetricField& field, double beta,
                                  const RVec& lo, const RVec& hi,
                                  std::uint64_t seed) {
  const int n = ch.n_controls();
  if (lo.size() != n || hi.size() != n || field.n() != n)
    throw validation_error("locate_optimal_point: box/field dimension "
                           "mismatch");
  int skipped = 0;
  auto entropy_gradient = [&](const RVec& lambda) {
    const HermitianOperator h = ch.at(lambda);
    const GibbsState pi = gibbs_state(h, beta);
    const Superoperator j = j_superoperator(pi);
    const Mat hbar =
        h.matrix() -
        (h.matrix() * pi.matrix()).trace().real() * Mat::Identity(pi.dim(), pi.dim());
    RVec grad(n);
    for (int i = 0; i < n; ++i) {
      const Mat x = ch.derivative(lambda, i).matrix();
      grad(i) = -beta * beta * (hbar * j.apply(x)).trace().real();
    }
    return grad;
  };
  auto objective = [&](const RVec& lambda) -> double {
    try {
      const RVec ds = entropy_gradient(lambda);
      const RMat g = field.at(lambda).g;
      Eigen::LDLT<RMat> ldlt(g);
      if (ldlt.info() != Eigen::Success ||
          (ldlt.vectorD().array() <= 0).any()) {
        ++skipped;
        return -std::numeric_limits<double>::infinity();
      }
      return ds.dot(ldlt.solve(ds));
    } catch (const domain_error&) {
      ++skipped;
      return -std::numeric_limits<double>::infinity();
    }
  };

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  OptimalPoint best;
  best.c_value = -std::numeric_limits<double>::infinity();
  const int starts = 16;
  for (int s = 0; s < starts; ++s) {
    RVec x0(n);
    for (int i = 0; i < n; ++i)
      x0(i) = (s == 0) ? 0.5 * (lo(i) + hi(i))
                       : lo(i) + unit(rng) * (hi(i) - lo(i));
    const RVec x = num::maximize_compass(objective, x0, lo, hi);
    const double val = objective(x);
    if (val > best.c_value) {
      best.c_value = val;
      best.lambda = x;
    }
  }
  if (!std::isfinite(best.c_value))
    throw domain_error("locate_optimal_point: metric singular on the entire "
                       "sampled domain");
  best.skipped_points = skipped;
  return best;
}

double qubit_excited_population(double g) {
  return std::exp(-g) / (1.0 + std::exp(-g));
}

double qubit_entropy(double g) {
  const double p = qubit_excited_population(g);
  double s = 0.0;
  if (p > 0) s -= p * std::log(p);
  if (p < 1) s -= (1.0 - p) * std::log(1.0 - p);
  return s;
}

double qubit_heat_capacity(double g) {
  const double p = qubit_excited_population(g);
  return g * g * p * (1.0 - p);
}

QubitCaseStudy qubit_case_study(double g_x, double g_y, double tau_eq) {
  if (!(tau_eq > 0))
    throw validation_error("qubit_case_study: tau_eq must be positive");
  if (!(g_x > 0) || !(g_y > 0))
    throw validation_error("qubit_case_study: endpoints must be positive");
  QubitCaseStudy out;
  if (g_x == g_y) return out;  // degenerate 0/0 limit, defined as 0
  const double px = qubit_excited_population(g_x);
  const double py = qubit_excited_population(g_y);
  out.dS = qubit_entropy(g_y) - qubit_entropy(g_x);
  const double overlap =
      std::clamp(std::sqrt(px * py) + std::sqrt((1.0 - px) * (1.0 - py)),
                 -1.0, 1.0);
  const double angle = 2.0 * std::acos(overlap);
  out.sigma_min = tau_eq * angle * angle;
  out.fom = out.dS * out.dS / out.sigma_min;
  return out;
}

}  // namespace qtg
