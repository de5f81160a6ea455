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

#include "qtg/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "qtg/engines.hpp"
#include "qtg/numerics.hpp"
#include "qtg/oracle.hpp"

namespace qtg::cli {

namespace {

namespace fs = std::filesystem;

struct SystemSpec {
  ControlledHamiltonian ch;
  double beta;
};

double get_number(const json& j, const std::string& key,
                  const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_number())
    throw validation_error(ctx + ": \"" + key + "\" must be a number");
  return j[key].get<double>();
}

RVec vector_from_json(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty())
    throw validation_error(ctx + ": expected a non-empty numeric array");
  RVec v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number())
      throw validation_error(ctx + ": expected numbers");
    v(i) = j[i].get<double>();
  }
  return v;
}

SystemSpec system_from_json(const json& j, const std::string& ctx) {
  require_keys(j, {"beta", "controls", "offset"}, {"beta", "controls"}, ctx);
  const double beta = get_number(j, "beta", ctx);
  if (!(beta > 0)) throw validation_error(ctx + ": beta must be positive");
  if (!j["controls"].is_array() || j["controls"].empty())
    throw validation_error(ctx + ": controls must be a non-empty array");
  std::vector<HermitianOperator> controls;
  for (const json& c : j["controls"])
    controls.push_back(hermitian_from_json(c, ctx + ".controls"));
  HermitianOperator offset =
      j.contains("offset")
          ? hermitian_from_json(j["offset"], ctx + ".offset")
          : HermitianOperator::zero(controls.front().dim());
  return SystemSpec{ControlledHamiltonian(std::move(offset), std::move(controls)),
                    beta};
}

MetricField field_from_spec(const SystemSpec& system, const std::string& kind,
                            const json& job, const std::string& ctx) {
  if (kind == "bkm") return bkm_field(system.ch, system.beta);
  if (kind == "adiabatic") return adiabatic_field(system.ch, system.beta);
  if (kind == "step") {
    if (!job.contains("tau_eq"))
      throw validation_error(ctx + ": kind \"step\" requires tau_eq");
    return step_field(system.ch, system.beta, get_number(job, "tau_eq", ctx));
  }
  if (kind == "dissipative") {
    if (!job.contains("bath"))
      throw validation_error(ctx + ": kind \"dissipative\" requires a bath");
    return dissipative_field(system.ch, system.beta,
                             bath_from_json(job["bath"], ctx + ".bath"));
  }
  throw validation_error(ctx + ": unknown metric kind \"" + kind + "\"");
}

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  std::ofstream out(dir / name, std::ios::binary);
  if (!out)
    throw validation_error("cannot open output file " + (dir / name).string());
  return out;
}

std::string trim_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", x);
  return buf;
}

void fill_default(json& job, const std::string& key, const json& value,
                  json& defaults) {
  if (!job.contains(key)) {
    job[key] = value;
    defaults[key] = value;
  }
}

json engine_result_to_json(const EngineResult& res) {
  json j;
  j["durations"] = res.durations;
  j["total_time"] = res.total_time;
  j["power"] = res.power;
  j["efficiency"] = res.efficiency;
  j["w_diss"] = res.w_diss;
  j["quasistatic_output"] = res.quasistatic_output;
  j["diagnostics"] = res.diagnostics;
  return j;
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectorySample>& samples) {
  if (samples.empty()) return;
  out << "t";
  for (long i = 0; i < samples.front().populations.size(); ++i)
    out << ",p" << i;
  out << ",max_coherence,work_rate\n";
  for (const TrajectorySample& s : samples) {
    out << format_g17(s.t);
    for (long i = 0; i < s.populations.size(); ++i)
      out << "," << format_g17(s.populations(i));
    out << "," << format_g17(s.max_coherence) << ","
        << format_g17(s.work_rate) << "\n";
  }
}

// ---------------------------------------------------------------------------

json run_figure1(json& job, const fs::path& dir, json& defaults) {
  require_keys(job, {"command", "seed", "g_y", "g_x_range", "points", "tau_eq"},
               {"command"}, "figure1");
  fill_default(job, "g_y", json::array({0.5, 1.5, 2.4}), defaults);
  fill_default(job, "g_x_range", json::array({0.01, 8.0}), defaults);
  fill_default(job, "points", 400, defaults);
  fill_default(job, "tau_eq", 1.0, defaults);

  const double tau_eq = get_number(job, "tau_eq", "figure1");
  const RVec range = vector_from_json(job["g_x_range"], "figure1.g_x_range");
  if (range.size() != 2 || !(range(0) > 0) || !(range(1) > range(0)))
    throw validation_error("figure1: g_x_range must be [lo, hi] with "
                           "0 < lo < hi");
  const int points = job["points"].get<int>();
  if (points < 2) throw validation_error("figure1: points must be >= 2");

  auto grid_value = [&](int k) {
    return range(0) + (range(1) - range(0)) * k / (points - 1);
  };

  json curves = json::array();
  for (const json& gy_j : job["g_y"]) {
    const double gy = gy_j.get<double>();
    auto csv = open_output(dir, "fom_gy_" + trim_number(gy) + ".csv");
    csv << "g_x,fom\n";
    double best_fom = -1.0, best_gx = 0.0;
    for (int k = 0; k < points; ++k) {
      const double gx = grid_value(k);
      const double fom = qubit_case_study(gx, gy, tau_eq).fom;
      csv << format_g17(gx) << "," << format_g17(fom) << "\n";
      if (fom > best_fom) {
        best_fom = fom;
        best_gx = gx;
      }
    }
    curves.push_back({{"g_y", gy}, {"peak_g_x", best_gx}, {"peak_fom", best_fom}});
  }

  {
    auto csv = open_output(dir, "heat_capacity.csv");
    csv << "g,heat_capacity\n";
    for (int k = 0; k < points; ++k) {
      const double g = grid_value(k);
      csv << format_g17(g) << "," << format_g17(qubit_heat_capacity(g))
          << "\n";
    }
  }

  const double g_star =
      num::maximize_scalar(qubit_heat_capacity, range(0), range(1));
  json results;
  results["curves"] = std::move(curves);
  results["g_star"] = g_star;
  results["c_max"] = qubit_heat_capacity(g_star);
  results["c_max_over_tau_eq"] = qubit_heat_capacity(g_star) / tau_eq;
  return results;
}

json run_metric(json& job, const fs::path& dir, json& defaults) {
  require_keys(job,
               {"command", "seed", "system", "kind", "bath", "tau_eq",
                "points"},
               {"command", "system", "kind", "points"}, "metric");
  (void)defaults;
  const SystemSpec system = system_from_json(job["system"], "metric.system");
  const std::string kind = job["kind"].get<std::string>();
  const MetricField field = field_from_spec(system, kind, job, "metric");
  if (!job["points"].is_array() || job["points"].empty())
    throw validation_error("metric: points must be a non-empty array");

  auto csv = open_output(dir, "metrics.csv");
  csv << "index";
  for (int i = 0; i < field.n(); ++i) csv << ",lambda" << i;
  for (int i = 0; i < field.n(); ++i)
    for (int j = 0; j < field.n(); ++j) csv << ",g" << i << j;
  csv << "\n";

  json entries = json::array();
  int index = 0;
  for (const json& pt : job["points"]) {
    const RVec lambda = vector_from_json(pt, "metric.points");
    const MetricTensor g = field.at(lambda);
    csv << index;
    for (long i = 0; i < lambda.size(); ++i)
      csv << "," << format_g17(lambda(i));
    for (int i = 0; i < g.n(); ++i)
      for (int j = 0; j < g.n(); ++j) csv << "," << format_g17(g.g(i, j));
    csv << "\n";
    json entry;
    entry["lambda"] = pt;
    json rows = json::array();
    for (int i = 0; i < g.n(); ++i) {
      json row = json::array();
      for (int j = 0; j < g.n(); ++j) row.push_back(g.g(i, j));
      rows.push_back(std::move(row));
    }
    entry["g"] = std::move(rows);
    entries.push_back(std::move(entry));
    ++index;
  }
  json results;
  results["kind"] = kind;
  results["metrics"] = std::move(entries);
  return results;
}

json run_geodesic(json& job, const fs::path& dir, json& defaults) {
  require_keys(job,
               {"command", "seed", "system", "kind", "bath", "tau_eq",
                "lambda0", "lambda1", "segments"},
               {"command", "system", "kind", "lambda0", "lambda1"},
               "geodesic");
  fill_default(job, "segments", 32, defaults);
  const SystemSpec system = system_from_json(job["system"], "geodesic.system");
  const std::string kind = job["kind"].get<std::string>();
  const MetricField field = field_from_spec(system, kind, job, "geodesic");
  const RVec l0 = vector_from_json(job["lambda0"], "geodesic.lambda0");
  const RVec l1 = vector_from_json(job["lambda1"], "geodesic.lambda1");
  GeodesicOptions opt;
  opt.segments = job["segments"].get<int>();
  const ControlPath path = geodesic(field, l0, l1, opt);

  {
    auto out = open_output(dir, "path.json");
    out << path_to_json(path).dump(2) << "\n";
  }
  {
    auto out = open_output(dir, "path.csv");
    write_path_csv(out, path, field);
  }
  json results;
  results["length"] = path_length(path, field);
  results["action"] = sigma_action(path, field);
  if (kind != "adiabatic") {
    const GibbsState pi0 = gibbs_state(system.ch.at(l0), system.beta);
    const GibbsState pi1 = gibbs_state(system.ch.at(l1), system.beta);
    results["hellinger"] = hellinger_angle(pi0, pi1);
  }
  return results;
}

json run_bounds(json& job, const fs::path& dir, json& defaults) {
  require_keys(job,
               {"command", "seed", "system", "lambda0", "lambda1", "N", "tau",
                "tau_min", "temperature"},
               {"command", "system", "lambda0", "lambda1"}, "bounds");
  (void)dir;
  const SystemSpec system = system_from_json(job["system"], "bounds.system");
  fill_default(job, "temperature", 1.0 / system.beta, defaults);
  const RVec l0 = vector_from_json(job["lambda0"], "bounds.lambda0");
  const RVec l1 = vector_from_json(job["lambda1"], "bounds.lambda1");
  HorseCarrotRequest req;
  req.temperature = get_number(job, "temperature", "bounds");
  if (job.contains("N")) req.steps = job["N"].get<int>();
  if (job.contains("tau")) req.tau = get_number(job, "tau", "bounds");
  if (job.contains("tau_min"))
    req.tau_min = get_number(job, "tau_min", "bounds");
  const GibbsState pi0 = gibbs_state(system.ch.at(l0), system.beta);
  const GibbsState pi1 = gibbs_state(system.ch.at(l1), system.beta);
  const BoundsReport report = horse_carrot_bounds(pi0, pi1, req);
  json results;
  results["hellinger"] = report.hellinger;
  results["length"] = report.length;
  results["bound_step"] = report.bound_step;
  results["bound_markov"] = report.bound_markov;
  results["temperature"] = report.temperature;
  if (report.steps) results["N"] = *report.steps;
  if (report.tau) results["tau"] = *report.tau;
  results["tau_min"] = report.tau_min;
  return results;
}

json run_engine(json& job, const fs::path& dir, json& defaults) {
  (void)dir;
  if (!job.contains("mode") || !job["mode"].is_string())
    throw validation_error("engine: \"mode\" string required");
  const std::string mode = job["mode"].get<std::string>();
  json results;
  results["mode"] = mode;
  if (mode == "durations") {
    require_keys(job, {"command", "seed", "mode", "steps", "w_diss"},
                 {"command", "mode", "steps", "w_diss"}, "engine");
    results["result"] = engine_result_to_json(optimal_durations(
        steps_from_json(job["steps"], "engine.steps"),
        get_number(job, "w_diss", "engine")));
  } else if (mode == "max_power") {
    require_keys(job, {"command", "seed", "mode", "steps"},
                 {"command", "mode", "steps"}, "engine");
    results["result"] = engine_result_to_json(
        max_power(steps_from_json(job["steps"], "engine.steps")));
  } else if (mode == "carnot") {
    require_keys(job,
                 {"command", "seed", "mode", "dS", "sigma_h", "T_h", "T_c",
                  "delta", "alpha"},
                 {"command", "mode", "dS", "sigma_h", "T_h", "T_c", "delta"},
                 "engine");
    fill_default(job, "alpha", 0.0, defaults);
    results["result"] = engine_result_to_json(carnot_power_at_efficiency(
        get_number(job, "dS", "engine"), get_number(job, "sigma_h", "engine"),
        get_number(job, "T_h", "engine"), get_number(job, "T_c", "engine"),
        get_number(job, "delta", "engine"),
        get_number(job, "alpha", "engine")));
  } else if (mode == "refrigerator") {
    require_keys(job,
                 {"command", "seed", "mode", "dS", "sigma", "T_h", "T_c",
                  "delta"},
                 {"command", "mode", "dS", "sigma", "T_h", "T_c", "delta"},
                 "engine");
    results["result"] = engine_result_to_json(refrigerator_power_at_cop(
        get_number(job, "dS", "engine"), get_number(job, "sigma", "engine"),
        get_number(job, "T_h", "engine"), get_number(job, "T_c", "engine"),
        get_number(job, "delta", "engine")));
  } else if (mode == "cooling") {
    require_keys(job,
                 {"command", "seed", "mode", "dS_c", "sigma_c", "T_c",
                  "tau_ex"},
                 {"command", "mode", "dS_c", "sigma_c", "T_c"}, "engine");
    fill_default(job, "tau_ex", 0.0, defaults);
    results["result"] = engine_result_to_json(cooling_max(
        get_number(job, "dS_c", "engine"), get_number(job, "sigma_c", "engine"),
        get_number(job, "T_c", "engine"), get_number(job, "tau_ex", "engine")));
  } else if (mode == "multibath") {
    require_keys(job,
                 {"command", "seed", "mode", "baths", "kappa0", "alpha", "T0"},
                 {"command", "mode", "baths", "kappa0", "alpha", "T0"},
                 "engine");
    if (!job["baths"].is_array())
      throw validation_error("engine: baths must be an array");
    std::vector<std::pair<double, double>> baths;
    for (const json& b : job["baths"]) {
      require_keys(b, {"T", "dS"}, {"T", "dS"}, "engine.baths");
      baths.push_back({get_number(b, "T", "engine.baths"),
                       get_number(b, "dS", "engine.baths")});
    }
    const MultibathResult mb = multibath_bound(
        baths, get_number(job, "kappa0", "engine"),
        get_number(job, "alpha", "engine"), get_number(job, "T0", "engine"));
    results["result"] = {{"p_multi", mb.p_multi},
                         {"p_extremal", mb.p_extremal},
                         {"holds", mb.holds},
                         {"claim_valid", mb.claim_valid}};
  } else {
    throw validation_error("engine: unknown mode \"" + mode + "\"");
  }
  return results;
}

json run_validate(json& job, const fs::path& dir, json& defaults, bool dump) {
  require_keys(job,
               {"command", "seed", "system", "bath", "lambda0", "lambda1",
                "path", "taus", "segments"},
               {"command", "system", "bath", "lambda0", "lambda1"},
               "validate");
  fill_default(job, "path", "geodesic", defaults);
  fill_default(job, "taus", json::array({50.0, 100.0, 200.0, 400.0}),
               defaults);
  fill_default(job, "segments", 32, defaults);
  const SystemSpec system = system_from_json(job["system"], "validate.system");
  const BathSpec bath = bath_from_json(job["bath"], "validate.bath");
  const RVec l0 = vector_from_json(job["lambda0"], "validate.lambda0");
  const RVec l1 = vector_from_json(job["lambda1"], "validate.lambda1");
  const MetricField field = dissipative_field(system.ch, system.beta, bath);

  const std::string path_mode = job["path"].get<std::string>();
  GeodesicOptions opt;
  opt.segments = job["segments"].get<int>();
  ControlPath path = (path_mode == "geodesic")
                         ? geodesic(field, l0, l1, opt)
                         : ControlPath::line(l0, l1, opt.segments);
  if (path_mode != "geodesic" && path_mode != "line")
    throw validation_error("validate: path must be \"geodesic\" or \"line\"");

  const double sigma = sigma_action(path, field);
  std::vector<double> taus;
  for (const json& t : job["taus"]) taus.push_back(t.get<double>());
  Protocol base{system.ch, path, bath, taus.front(), system.beta};
  const DissipationFit fit = extract_dissipation_coefficient(base, taus);

  {
    auto csv = open_output(dir, "wdiss_vs_tau.csv");
    csv << "tau,w_diss\n";
    for (const auto& [tau, w] : fit.samples)
      csv << format_g17(tau) << "," << format_g17(w) << "\n";
  }
  if (dump) {
    int idx = 0;
    for (double tau : taus) {
      Protocol p = base;
      p.tau = tau;
      const RunRecord rec = integrate(p);
      auto csv =
          open_output(dir, "trajectory_tau" + std::to_string(idx) + ".csv");
      write_trajectory_csv(csv, rec.trajectory);
      ++idx;
    }
  }

  json results;
  results["sigma"] = sigma;
  results["coefficient"] = fit.coefficient;
  results["second_order"] = fit.second_order;
  results["ratio"] = fit.coefficient * system.beta / sigma;
  results["r_squared"] = fit.r_squared;
  json samples = json::array();
  for (const auto& [tau, w] : fit.samples)
    samples.push_back({{"tau", tau}, {"w_diss", w}});
  results["samples"] = std::move(samples);
  return results;
}

}  // namespace

json execute_job(const json& jobspec, const std::string& out_dir,
                 std::optional<std::uint64_t> seed_override, bool dump) {
  if (!jobspec.is_object())
    throw validation_error("jobspec: top level must be an object");
  if (!jobspec.contains("command") || !jobspec["command"].is_string())
    throw validation_error("jobspec: \"command\" string required");

  json job = jobspec;
  json defaults = json::object();
  if (seed_override) {
    job["seed"] = *seed_override;
  } else if (!job.contains("seed")) {
    job["seed"] = 0;
    defaults["seed"] = 0;
  }
  if (!job["seed"].is_number_integer())
    throw validation_error("jobspec: \"seed\" must be an integer");

  const fs::path dir(out_dir);
  fs::create_directories(dir);

  const std::string command = job["command"].get<std::string>();
  json results;
  if (command == "figure1") {
    results = run_figure1(job, dir, defaults);
  } else if (command == "metric") {
    results = run_metric(job, dir, defaults);
  } else if (command == "geodesic") {
    results = run_geodesic(job, dir, defaults);
  } else if (command == "bounds") {
    results = run_bounds(job, dir, defaults);
  } else if (command == "engine") {
    results = run_engine(job, dir, defaults);
  } else if (command == "validate") {
    results = run_validate(job, dir, defaults, dump);
  } else {
    throw validation_error("jobspec: unknown command \"" + command + "\"");
  }

  json envelope;
  envelope["tool_version"] = kToolVersion;
  envelope["command"] = command;
  envelope["seed"] = job["seed"];
  envelope["jobspec"] = job;  // defaults made explicit
  envelope["defaults_applied"] = defaults;
  envelope["results"] = results;
  envelope["tolerances"] = {{"quadrature_rel_tol", 1e-8},
                            {"ode_rel_tol", 1e-9},
                            {"ode_abs_tol", 1e-12},
                            {"geodesic_speed_tol", 1e-4},
                            {"geodesic_residual_tol", 1e-3}};
  {
    auto out = open_output(dir, "results.json");
    out << envelope.dump(2) << "\n";
  }
  return envelope;
}

int run_job(const Options& options) {
  try {
    json jobspec;
    {
      std::ifstream in(options.job_file);
      if (!in) {
        std::cerr << "error: cannot read job file " << options.job_file
                  << "\n";
        return 1;
      }
      try {
        in >> jobspec;
      } catch (const json::exception& e) {
        std::cerr << "error: job file is not valid JSON: " << e.what() << "\n";
        return 1;
      }
    }
    execute_job(jobspec, options.out_dir, options.seed, options.dump);
    return 0;
  } catch (const validation_error& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return 1;
  } catch (const convergence_error& e) {
    std::cerr << "convergence failure: " << e.what() << "\n";
    return 3;
  } catch (const domain_error& e) {
    std::cerr << "numeric-domain error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace qtg::cli
