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

#include "qtg/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "qtg/numerics.hpp"

namespace qtg {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

double clamp01(double s) { return std::clamp(s, 0.0, 1.0); }

// integrand wrapper attaching the s-location to metric failures
template <typename F>
double with_location(F&& f, double s) {
  try {
    return f();
  } catch (const domain_error& e) {
    std::ostringstream msg;
    msg << e.what() << " [at path parameter s=" << s << "]";
    throw domain_error(msg.str());
  }
}

double integrate_over_path(const ControlPath& path, const MetricField& field,
                           bool square_root) {
  const auto& s = path.knot_s();
  const int segments = static_cast<int>(s.size()) - 1;
  const int evals_per_segment = std::max(10000 / std::max(segments, 1), 60);
  double total = 0.0;
  for (int k = 0; k < segments; ++k) {
    auto integrand = [&](double x) {
      return with_location(
          [&] {
            const RVec v = path.velocity(x);
            const double q = v.dot(field.at(path.value(x)).g * v);
            return square_root ? std::sqrt(std::max(q, 0.0)) : std::max(q, 0.0);
          },
          x);
    };
    total += num::integrate_adaptive(integrand, s[k], s[k + 1], 1e-8,
                                     evals_per_segment);
  }
  return total;
}

}  // namespace

ControlPath::ControlPath(std::vector<double> s, std::vector<RVec> knots)
    : s_(std::move(s)), knots_(std::move(knots)) {
  if (s_.size() != knots_.size() || s_.size() < 2)
    throw validation_error("ControlPath: need matching s/knot lists with at "
                           "least two entries");
  if (s_.front() != 0.0 || s_.back() != 1.0)
    throw validation_error("ControlPath: knots must start at s=0 and end at "
                           "s=1");
  for (std::size_t k = 1; k < s_.size(); ++k)
    if (!(s_[k] > s_[k - 1]))
      throw validation_error("ControlPath: knot abscissae must be strictly "
                             "increasing");
  const long n = knots_.front().size();
  for (const RVec& p : knots_)
    if (p.size() != n)
      throw validation_error("ControlPath: knot dimension mismatch");
  tangents_.resize(s_.size());
  for (std::size_t k = 0; k < s_.size(); ++k)
    tangents_[k] = num::lagrange_node_derivative(s_, knots_, k);
}

ControlPath ControlPath::line(const RVec& a, const RVec& b, int segments) {
  if (a.size() != b.size())
    throw validation_error("ControlPath::line: endpoint dimension mismatch");
  segments = std::max(segments, 1);
  std::vector<double> s(segments + 1);
  std::vector<RVec> pts(segments + 1);
  for (int k = 0; k <= segments; ++k) {
    s[k] = static_cast<double>(k) / segments;
    pts[k] = a + s[k] * (b - a);
  }
  s.front() = 0.0;
  s.back() = 1.0;
  pts.front() = a;
  pts.back() = b;
  return ControlPath(std::move(s), std::move(pts));
}

std::size_t ControlPath::segment_of(double s) const {
  const auto it = std::upper_bound(s_.begin(), s_.end(), s);
  const std::size_t idx = static_cast<std::size_t>(it - s_.begin());
  return std::clamp<std::size_t>(idx, 1, s_.size() - 1) - 1;
}

RVec ControlPath::value(double s) const {
  s = clamp01(s);
  if (s == 0.0) return knots_.front();
  if (s == 1.0) return knots_.back();
  const std::size_t k = segment_of(s);
  const double h = s_[k + 1] - s_[k];
  const double t = (s - s_[k]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * knots_[k] + (t3 - 2 * t2 + t) * h * tangents_[k] +
         (-2 * t3 + 3 * t2) * knots_[k + 1] + (t3 - t2) * h * tangents_[k + 1];
}

RVec ControlPath::velocity(double s) const {
  s = clamp01(s);
  const std::size_t k = segment_of(s == 1.0 ? 1.0 - 1e-15 : s);
  const double h = s_[k + 1] - s_[k];
  const double t = (s - s_[k]) / h;
  const double t2 = t * t;
  return ((6 * t2 - 6 * t) * knots_[k] + (3 * t2 - 4 * t + 1) * h * tangents_[k] +
          (-6 * t2 + 6 * t) * knots_[k + 1] + (3 * t2 - 2 * t) * h * tangents_[k + 1]) /
         h;
}

RVec ControlPath::acceleration(double s) const {
  s = clamp01(s);
  const std::size_t k = segment_of(s == 1.0 ? 1.0 - 1e-15 : s);
  const double h = s_[k + 1] - s_[k];
  const double t = (s - s_[k]) / h;
  return ((12 * t - 6) * knots_[k] + (6 * t - 4) * h * tangents_[k] +
          (-12 * t + 6) * knots_[k + 1] + (6 * t - 2) * h * tangents_[k + 1]) /
         (h * h);
}

ControlPath ControlPath::resampled(int segments) const {
  segments = std::max(segments, 1);
  std::vector<double> s(segments + 1);
  std::vector<RVec> pts(segments + 1);
  for (int k = 0; k <= segments; ++k) {
    s[k] = static_cast<double>(k) / segments;
    pts[k] = value(s[k]);
  }
  s.front() = 0.0;
  s.back() = 1.0;
  return ControlPath(std::move(s), std::move(pts));
}

double path_length(const ControlPath& path, const MetricField& field) {
  return integrate_over_path(path, field, /*square_root=*/true);
}

double sigma_action(const ControlPath& path, const MetricField& field) {
  return integrate_over_path(path, field, /*square_root=*/false);
}

std::vector<RMat> christoffel(const MetricField& field, const RVec& lambda) {
  const int n = field.n();
  const RMat g0 = field.at(lambda).g;
  Eigen::SelfAdjointEigenSolver<RMat> es(g0);
  const double max_eig = es.eigenvalues().cwiseAbs().maxCoeff();
  const double min_eig = es.eigenvalues().cwiseAbs().minCoeff();
  if (!(min_eig > 0) || max_eig / min_eig > 1e12) {
    std::ostringstream msg;
    msg << "christoffel: metric is singular at lambda (eigenvalues:";
    for (long i = 0; i < es.eigenvalues().size(); ++i)
      msg << " " << es.eigenvalues()(i);
    msg << ")";
    throw domain_error(msg.str());
  }
  const RMat inv = es.eigenvectors() *
                   es.eigenvalues().cwiseInverse().asDiagonal() *
                   es.eigenvectors().transpose();

  const double h = 1e-5 * (1.0 + lambda.norm());
  std::vector<RMat> dg(n);
  for (int l = 0; l < n; ++l) {
    RVec up = lambda, dn = lambda;
    up(l) += h;
    dn(l) -= h;
    dg[l] = (field.at(up).g - field.at(dn).g) / (2.0 * h);
  }
  std::vector<RMat> gamma(n, RMat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j; k < n; ++k) {
        double sum = 0.0;
        for (int l = 0; l < n; ++l)
          sum += inv(i, l) * (dg[j](l, k) + dg[k](j, l) - dg[l](j, k));
        gamma[i](j, k) = gamma[i](k, j) = 0.5 * sum;
      }
  return gamma;
}

geodesic_error::geodesic_error(const std::string& msg, ControlPath best,
                               double residual)
    : convergence_error(msg), best_(std::move(best)), residual_(residual) {}

namespace {

struct DiscretizedAction {
  const MetricField* field;
  RVec lambda0, lambda1;
  int segments;
  int n;

  RVec pack(const std::vector<RVec>& interior) const {
    RVec z(n * (segments - 1));
    for (int k = 0; k < segments - 1; ++k) z.segment(k * n, n) = interior[k];
    return z;
  }

  std::vector<RVec> unpack(const RVec& z) const {
    std::vector<RVec> pts(segments + 1);
    pts[0] = lambda0;
    pts[segments] = lambda1;
    for (int k = 1; k < segments; ++k)
      pts[k] = z.segment((k - 1) * n, n);
    return pts;
  }

  // sigma_disc = N sum_k dl_k^T g(mid_k) dl_k, gradient by differentiating
  // the quadratic form; dg by central differences
  double operator()(const RVec& z, RVec& grad) const {
    const std::vector<RVec> pts = unpack(z);
    grad = RVec::Zero(z.size());
    double sigma = 0.0;
    const double fd = 1e-6;
    for (int k = 0; k < segments; ++k) {
      const RVec d = pts[k + 1] - pts[k];
      const RVec mid = 0.5 * (pts[k] + pts[k + 1]);
      const RMat g = field->at(mid).g;
      sigma += d.dot(g * d);
      const RVec gd = g * d;
      RVec quad_grad(n);  // del_l (d^T g d) at the midpoint
      const double h = fd * (1.0 + mid.norm());
      for (int l = 0; l < n; ++l) {
        RVec up = mid, dn = mid;
        up(l) += h;
        dn(l) -= h;
        quad_grad(l) =
            (d.dot(field->at(up).g * d) - d.dot(field->at(dn).g * d)) /
            (2.0 * h);
      }
      if (k > 0)
        grad.segment((k - 1) * n, n) += -2.0 * gd + 0.5 * quad_grad;
      if (k < segments - 1)
        grad.segment(k * n, n) += 2.0 * gd + 0.5 * quad_grad;
    }
    grad *= segments;
    return sigma * segments;
  }
};

struct Verification {
  double speed_cv;
  double residual;
};

Verification verify_geodesic(const ControlPath& path, const MetricField& field,
                             int samples = 64) {
  Verification v{0.0, 0.0};
  std::vector<double> speeds(samples);
  for (int i = 0; i < samples; ++i) {
    const double s = (i + 0.5) / samples;
    const RVec vel = path.velocity(s);
    speeds[i] = vel.dot(field.at(path.value(s)).g * vel);
  }
  double mean = 0.0;
  for (double q : speeds) mean += q;
  mean /= samples;
  double var = 0.0;
  for (double q : speeds) var += (q - mean) * (q - mean);
  var /= samples;
  v.speed_cv = (mean > 0) ? std::sqrt(var) / mean : 0.0;

  double max_res = 0.0, max_acc = 0.0, max_gam = 0.0;
  const int res_samples = 32;
  for (int i = 0; i < res_samples; ++i) {
    const double s = (i + 0.5) / res_samples;
    const RVec lam = path.value(s);
    const RVec vel = path.velocity(s);
    const RVec acc = path.acceleration(s);
    const std::vector<RMat> gam = christoffel(field, lam);
    RVec r = acc;
    RVec gvv(acc.size());
    for (int a = 0; a < acc.size(); ++a) gvv(a) = vel.dot(gam[a] * vel);
    r += gvv;
    max_res = std::max(max_res, r.cwiseAbs().maxCoeff());
    max_acc = std::max(max_acc, acc.cwiseAbs().maxCoeff());
    max_gam = std::max(max_gam, gvv.cwiseAbs().maxCoeff());
  }
  const double scale = std::max({max_acc, max_gam, 1e-12});
  v.residual = max_res / scale;
  return v;
}

ControlPath solve_at_resolution(const MetricField& field, const RVec& l0,
                                const RVec& l1, int segments,
                                const ControlPath* warm_start,
                                int max_iterations) {
  DiscretizedAction action{&field, l0, l1, segments,
                           static_cast<int>(l0.size())};
  std::vector<RVec> init(segments + 1);
  for (int k = 0; k <= segments; ++k) {
    const double s = static_cast<double>(k) / segments;
    init[k] = warm_start ? warm_start->value(s) : (l0 + s * (l1 - l0)).eval();
  }
  std::vector<RVec> interior(init.begin() + 1, init.end() - 1);
  num::LbfgsOptions opt;
  opt.max_iter = max_iterations;
  opt.grad_tol = 1e-11;
  const num::LbfgsResult res = num::minimize_lbfgs(
      [&](const RVec& z, RVec& g) { return action(z, g); },
      action.pack(interior), opt);
  const std::vector<RVec> pts = action.unpack(res.x);
  std::vector<double> s(segments + 1);
  for (int k = 0; k <= segments; ++k)
    s[k] = static_cast<double>(k) / segments;
  s.front() = 0.0;
  s.back() = 1.0;
  return ControlPath(std::move(s), pts);
}

// one Newton-refined shooting pass on the initial velocity
ControlPath shoot_geodesic(const MetricField& field, const RVec& l0,
                           const RVec& l1, const ControlPath& guess) {
  const int n = static_cast<int>(l0.size());
  const int steps = 256;
  auto propagate = [&](const RVec& v0, std::vector<RVec>* store) {
    RVec x = l0, v = v0;
    const double h = 1.0 / steps;
    if (store) store->push_back(x);
    auto rhs = [&](const RVec& xx, const RVec& vv) {
      const std::vector<RMat> gam = christoffel(field, xx);
      RVec a(n);
      for (int i = 0; i < n; ++i) a(i) = -vv.dot(gam[i] * vv);
      return a;
    };
    for (int k = 0; k < steps; ++k) {
      // velocity-Verlet style RK4 on the second-order system
      const RVec a1 = rhs(x, v);
      const RVec x2 = x + 0.5 * h * v, v2 = v + 0.5 * h * a1;
      const RVec a2 = rhs(x2, v2);
      const RVec x3 = x + 0.5 * h * v2, v3 = v + 0.5 * h * a2;
      const RVec a3 = rhs(x3, v3);
      const RVec x4 = x + h * v3, v4 = v + h * a3;
      const RVec a4 = rhs(x4, v4);
      x += h / 6.0 * (v + 2 * v2 + 2 * v3 + v4);
      v += h / 6.0 * (a1 + 2 * a2 + 2 * a3 + a4);
      if (store) store->push_back(x);
    }
    return x;
  };
  RVec v0 = guess.velocity(0.0);
  for (int it = 0; it < 20; ++it) {
    const RVec miss = propagate(v0, nullptr) - l1;
    if (miss.cwiseAbs().maxCoeff() < 1e-10 * (1.0 + l1.norm())) break;
    RMat jac(n, n);
    const double h = 1e-6 * (1.0 + v0.norm());
    for (int j = 0; j < n; ++j) {
      RVec vp = v0;
      vp(j) += h;
      jac.col(j) = (propagate(vp, nullptr) - l1 - miss) / h;
    }
    v0 -= jac.partialPivLu().solve(miss);
  }
  std::vector<RVec> samples;
  propagate(v0, &samples);
  std::vector<double> s(steps + 1);
  for (int k = 0; k <= steps; ++k) s[k] = static_cast<double>(k) / steps;
  s.front() = 0.0;
  s.back() = 1.0;
  samples.back() = l1;  // pin the endpoint
  return ControlPath(std::move(s), std::move(samples));
}

}  // namespace

ControlPath geodesic(const MetricField& field, const RVec& lambda0,
                     const RVec& lambda1, const GeodesicOptions& opt) {
  if (lambda0.size() != field.n() || lambda1.size() != field.n())
    throw validation_error("geodesic: endpoint dimension mismatch");
  if ((lambda0 - lambda1).cwiseAbs().maxCoeff() == 0.0)
    return ControlPath::line(lambda0, lambda1);

  std::optional<ControlPath> best;
  Verification best_check{std::numeric_limits<double>::infinity(),
                          std::numeric_limits<double>::infinity()};
  for (int segments = opt.segments; segments <= opt.max_segments;
       segments *= 2) {
    ControlPath candidate =
        solve_at_resolution(field, lambda0, lambda1, segments,
                            best ? &*best : nullptr, opt.max_iterations);
    const Verification check = verify_geodesic(candidate, field);
    if (!best || check.residual <= best_check.residual) {
      best = std::move(candidate);
      best_check = check;
    }
    if (best_check.speed_cv < opt.speed_tol &&
        best_check.residual < opt.residual_tol)
      return *best;
  }
  // shooting refinement from the best minimizer
  try {
    ControlPath shot = shoot_geodesic(field, lambda0, lambda1, *best);
    const Verification check = verify_geodesic(shot, field);
    if (check.speed_cv < opt.speed_tol && check.residual < opt.residual_tol)
      return shot;
    if (check.residual < best_check.residual) {
      best = std::move(shot);
      best_check = check;
    }
  } catch (const domain_error&) {
    // shooting left the metric domain; keep the minimizer result
  }
  std::ostringstream msg;
  msg << "geodesic: failed to converge (speed stdev/mean=" << best_check.speed_cv
      << ", residual=" << best_check.residual << " after " << opt.max_segments
      << " segments)";
  throw geodesic_error(msg.str(), *best, best_check.residual);
}

BoundsReport horse_carrot_bounds(const GibbsState& pi0, const GibbsState& pi1,
                                 const HorseCarrotRequest& request) {
  if (pi0.dim() != pi1.dim())
    throw validation_error("horse_carrot_bounds: dimension mismatch");
  if (!(request.temperature > 0))
    throw validation_error("horse_carrot_bounds: temperature must be positive");
  if (!request.steps && !(request.tau && request.tau_min))
    throw validation_error("horse_carrot_bounds: give a step count N or a "
                           "duration tau with tau_min");
  if (request.steps && *request.steps < 1)
    throw validation_error("horse_carrot_bounds: N must be at least 1");
  if (request.tau && !(*request.tau > 0))
    throw validation_error("horse_carrot_bounds: tau must be positive");
  if (request.tau_min && !(*request.tau_min > 0))
    throw validation_error("horse_carrot_bounds: tau_min must be positive");

  BoundsReport report;
  report.hellinger = hellinger_angle(pi0, pi1);
  report.length = request.length.value_or(report.hellinger);
  report.temperature = request.temperature;
  report.steps = request.steps;
  report.tau = request.tau;
  report.tau_min = request.tau_min.value_or(kNan);
  report.w_diss_predicted = request.w_diss_predicted.value_or(kNan);
  const double l2 = report.hellinger * report.hellinger;
  report.bound_step =
      request.steps ? request.temperature / (2.0 * *request.steps) * l2 : kNan;
  report.bound_markov = (request.tau && request.tau_min)
                            ? request.temperature *
                                  (*request.tau_min / *request.tau) * l2
                            : kNan;
  return report;
}

ThermolengthReport thermolength_check(const ControlPath& path,
                                      const MetricField& field, double tau,
                                      double beta) {
  if (!(tau > 0))
    throw validation_error("thermolength_check: tau must be positive");
  ThermolengthReport report;
  report.sigma = sigma_action(path, field);
  report.length = path_length(path, field);
  report.w_diss = report.sigma / (beta * tau);
  report.lower = report.length * report.length / (beta * tau);
  report.saturated =
      (report.w_diss - report.lower) <= 1e-6 * std::max(report.lower, 1e-300);
  return report;
}

}  // namespace qtg
