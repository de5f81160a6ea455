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

#include <optional>
#include <vector>

#include "qtg/metric.hpp"

// Lengths, actions, Christoffel symbols, geodesic solving and the
// Horse-Carrot dissipation bounds.

namespace qtg {

/// Smooth control curve lambda(s), s in [0,1]: piecewise-cubic Hermite with
/// continuous first derivative through ordered knots.
class ControlPath {
 public:
  /// Knot abscissae must be strictly increasing with s_0 = 0 and s_last = 1.
  ControlPath(std::vector<double> s, std::vector<RVec> knots);

  static ControlPath line(const RVec& a, const RVec& b, int segments = 1);

  int n() const { return static_cast<int>(knots_.front().size()); }
  std::size_t knot_count() const { return s_.size(); }
  const std::vector<double>& knot_s() const { return s_; }
  const std::vector<RVec>& knot_points() const { return knots_; }

  RVec value(double s) const;
  RVec velocity(double s) const;
  RVec acceleration(double s) const;

  /// Same curve re-sampled at `segments`+1 uniform knots.
  ControlPath resampled(int segments) const;

 private:
  std::vector<double> s_;
  std::vector<RVec> knots_;
  std::vector<RVec> tangents_;
  std::size_t segment_of(double s) const;
};

/// l = int_0^1 sqrt(lambda'^T g lambda') ds, adaptive Gauss-Kronrod with
/// relative tolerance 1e-8 and a hard 1e4-evaluation cap.
double path_length(const ControlPath& path, const MetricField& field);

/// sigma = int_0^1 lambda'^T g lambda' ds >= l^2, equality at constant speed.
double sigma_action(const ControlPath& path, const MetricField& field);

/// Christoffel symbols Gamma^i_{jk} (one n x n matrix per upper index) with
/// metric derivatives by central differences, step 1e-5 (1 + |lambda|).
std::vector<RMat> christoffel(const MetricField& field, const RVec& lambda);

struct GeodesicOptions {
  int segments = 32;        // discretized-action knot count
  int max_segments = 256;   // doubled on verification failure
  double speed_tol = 1e-4;  // stdev/mean of lambda'^T g lambda'
  double residual_tol = 1e-3;
  int max_iterations = 800;
};

/// Non-convergence carries the best path found and its residual.
class geodesic_error : public convergence_error {
 public:
  geodesic_error(const std::string& msg, ControlPath best, double residual);
  const ControlPath& best_path() const { return best_; }
  double residual() const { return residual_; }

 private:
  ControlPath best_;
  double residual_;
};

/// Minimal-length constant-speed path between two points, solved by direct
/// minimization of the discretized action over interior knots, verified
/// against the geodesic equation, with shooting refinement as fallback.
ControlPath geodesic(const MetricField& field, const RVec& lambda0,
                     const RVec& lambda1, const GeodesicOptions& opt = {});

struct HorseCarrotRequest {
  std::optional<int> steps;       // N-quench step process
  std::optional<double> tau;      // continuous protocol duration
  std::optional<double> tau_min;  // smallest relaxation timescale
  double temperature = 1.0;
  std::optional<double> w_diss_predicted;  // metric prediction, echoed
  std::optional<double> length;            // solved geodesic length, echoed
};

struct BoundsReport {
  double hellinger = 0.0;   // quantum Hellinger angle of the endpoints
  double length = 0.0;      // geodesic length when supplied, else the angle
  double bound_step = 0.0;  // (T/2N) L^2, NaN when no step count given
  double bound_markov = 0.0;  // T (tau_min/tau) L^2, NaN when not requested
  double w_diss_predicted = 0.0;  // NaN unless supplied
  double tau_min = 0.0;
  double temperature = 0.0;
  std::optional<int> steps;
  std::optional<double> tau;
};

/// Horse-Carrot lower bounds on dissipated work from the endpoint states.
BoundsReport horse_carrot_bounds(const GibbsState& pi0, const GibbsState& pi1,
                                 const HorseCarrotRequest& request);

struct ThermolengthReport {
  double w_diss = 0.0;  // sigma/(beta tau)
  double lower = 0.0;   // l^2/(beta tau)
  bool saturated = false;
  double sigma = 0.0;
  double length = 0.0;
};

/// Thermodynamic length inequality beta w_diss >= l^2/tau for a path.
ThermolengthReport thermolength_check(const ControlPath& path,
                                      const MetricField& field, double tau,
                                      double beta);

}  // namespace qtg
