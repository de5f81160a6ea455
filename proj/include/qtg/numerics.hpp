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
#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <limits>
#include <vector>

#include "qtg/errors.hpp"

// Shared numerical kernels: adaptive Gauss-Kronrod quadrature, embedded
// Runge-Kutta 4(5), Brent scalar minimization, L-BFGS, compass search.

namespace qtg::num {

// ---------------------------------------------------------------------------
// Adaptive quadrature (Gauss 7 / Kronrod 15 pair)

namespace detail {

// K15 abscissae on [0,1] half interval and weights; G7 weights on the
// odd-index subset.
inline constexpr double kKronrodX[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
inline constexpr double kKronrodW[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
inline constexpr double kGaussW[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct PanelEstimate {
  double value = 0.0;
  double error = 0.0;
};

inline PanelEstimate kronrod_panel(const std::function<double(double)>& f,
                                   double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double fv[15];
  for (int i = 0; i < 7; ++i) {
    fv[i] = f(c - h * kKronrodX[i]);
    fv[14 - i] = f(c + h * kKronrodX[i]);
  }
  fv[7] = f(c);
  double k15 = 0.0;
  for (int i = 0; i < 7; ++i) k15 += kKronrodW[i] * (fv[i] + fv[14 - i]);
  k15 += kKronrodW[7] * fv[7];
  double g7 = kGaussW[3] * fv[7];
  for (int i = 0; i < 3; ++i) g7 += kGaussW[i] * (fv[2 * i + 1] + fv[13 - 2 * i]);
  PanelEstimate out;
  out.value = k15 * h;
  out.error = std::abs((k15 - g7) * h);
  return out;
}

}  // namespace detail

/// Integrates f over [a,b] by adaptive bisection of Gauss-Kronrod panels.
/// The evaluation cap is hard; on hitting it the best estimate is returned.
inline double integrate_adaptive(const std::function<double(double)>& f,
                                 double a, double b, double rel_tol = 1e-8,
                                 int max_evals = 10000) {
  if (a == b) return 0.0;
  struct Interval {
    double a, b, value, error;
  };
  auto first = detail::kronrod_panel(f, a, b);
  std::vector<Interval> heap{{a, b, first.value, first.error}};
  int evals = 15;
  double total = first.value, total_err = first.error;
  while (total_err > rel_tol * std::max(std::abs(total), 1e-300) &&
         evals + 30 <= max_evals) {
    // split the interval with the largest error estimate
    std::size_t worst = 0;
    for (std::size_t i = 1; i < heap.size(); ++i)
      if (heap[i].error > heap[worst].error) worst = i;
    Interval iv = heap[worst];
    heap.erase(heap.begin() + static_cast<long>(worst));
    const double m = 0.5 * (iv.a + iv.b);
    auto left = detail::kronrod_panel(f, iv.a, m);
    auto right = detail::kronrod_panel(f, m, iv.b);
    evals += 30;
    heap.push_back({iv.a, m, left.value, left.error});
    heap.push_back({m, iv.b, right.value, right.error});
    total = total - iv.value + left.value + right.value;
    total_err = total_err - iv.error + left.error + right.error;
  }
  return total;
}

// ---------------------------------------------------------------------------
// Embedded Runge-Kutta 4(5), Dormand-Prince coefficients

struct OdeOptions {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0 = auto
  double max_step = std::numeric_limits<double>::infinity();
};

using OdeRhs =
    std::function<void(double, const Eigen::VectorXcd&, Eigen::VectorXcd&)>;
using OdeObserver = std::function<void(double, const Eigen::VectorXcd&)>;

/// Integrates y' = f(t, y) from t0 to t1 in place. The observer, when given,
/// is called at t0 and after every accepted step.
inline void integrate_rk45(const OdeRhs& f, double t0, double t1,
                           Eigen::VectorXcd& y, const OdeOptions& opt = {},
                           const OdeObserver& observe = nullptr) {
  static const double c[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  static const double a[7][6] = {
      {},
      {1.0 / 5},
      {3.0 / 40, 9.0 / 40},
      {44.0 / 45, -56.0 / 15, 32.0 / 9},
      {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
      {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
      {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  // b5 - b4 (error weights)
  static const double e[7] = {71.0 / 57600,  0.0,          -71.0 / 16695,
                              71.0 / 1920,   -17253.0 / 339200,
                              22.0 / 525,    -1.0 / 40};

  const double span = t1 - t0;
  if (span <= 0) throw validation_error("integrate_rk45: t1 must exceed t0");
  const long n = y.size();
  std::vector<Eigen::VectorXcd> k(7, Eigen::VectorXcd(n));
  Eigen::VectorXcd ytmp(n), ynew(n);

  double t = t0;
  double h = opt.initial_step > 0 ? opt.initial_step : span / 100.0;
  h = std::min(h, opt.max_step);
  const double h_min = span * 1e-14;
  f(t, y, k[0]);
  if (observe) observe(t, y);

  while (t < t1) {
    h = std::min(h, t1 - t);
    if (h < h_min)
      throw convergence_error(
          "integrate_rk45: step size underflow at t=" + std::to_string(t) +
          "; the generator is stiff on this timescale (tau/tau_eq too large "
          "for the explicit integrator)");
    for (int s = 1; s < 7; ++s) {
      ytmp = y;
      for (int j = 0; j < s; ++j) ytmp += (h * a[s][j]) * k[j];
      f(t + c[s] * h, ytmp, k[s]);
    }
    ynew = ytmp;  // stage 7 input equals the 5th-order solution (FSAL)
    double err = 0.0;
    for (long i = 0; i < n; ++i) {
      std::complex<double> ei = 0.0;
      for (int s = 0; s < 7; ++s) ei += e[s] * k[s](i);
      const double sc = opt.abs_tol +
                        opt.rel_tol * std::max(std::abs(y(i)), std::abs(ynew(i)));
      err = std::max(err, std::abs(ei) * h / sc);
    }
    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k[0].swap(k[6]);  // FSAL
      if (observe) observe(t, y);
    }
    const double factor =
        std::clamp(0.9 * std::pow(std::max(err, 1e-10), -0.2), 0.2, 5.0);
    h = std::min(h * factor, opt.max_step);
  }
}

// ---------------------------------------------------------------------------
// Scalar minimization (Brent's method, bracketed)

inline double minimize_scalar(const std::function<double(double)>& f, double a,
                              double b, double tol = 1e-12,
                              int max_iter = 200) {
  const double gold = 0.3819660112501051;
  double x = a + gold * (b - a), w = x, v = x;
  double fx = f(x), fw = fx, fv = fx;
  double d = 0.0, e = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const double m = 0.5 * (a + b);
    const double tol1 = tol * std::abs(x) + 1e-15;
    const double tol2 = 2 * tol1;
    if (std::abs(x - m) <= tol2 - 0.5 * (b - a)) break;
    bool parabolic = false;
    if (std::abs(e) > tol1) {
      const double r = (x - w) * (fx - fv);
      double q = (x - v) * (fx - fw);
      double p = (x - v) * q - (x - w) * r;
      q = 2 * (q - r);
      if (q > 0) p = -p;
      q = std::abs(q);
      const double e_old = e;
      e = d;
      if (std::abs(p) < std::abs(0.5 * q * e_old) && p > q * (a - x) &&
          p < q * (b - x)) {
        d = p / q;
        const double u = x + d;
        if (u - a < tol2 || b - u < tol2) d = (x < m) ? tol1 : -tol1;
        parabolic = true;
      }
    }
    if (!parabolic) {
      e = (x < m) ? b - x : a - x;
      d = gold * e;
    }
    const double u = (std::abs(d) >= tol1) ? x + d : x + (d > 0 ? tol1 : -tol1);
    const double fu = f(u);
    if (fu <= fx) {
      if (u < x) b = x; else a = x;
      v = w; fv = fw; w = x; fw = fx; x = u; fx = fu;
    } else {
      if (u < x) a = u; else b = u;
      if (fu <= fw || w == x) {
        v = w; fv = fw; w = u; fw = fu;
      } else if (fu <= fv || v == x || v == w) {
        v = u; fv = fu;
      }
    }
  }
  return x;
}

inline double maximize_scalar(const std::function<double(double)>& f, double a,
                              double b, double tol = 1e-12,
                              int max_iter = 200) {
  return minimize_scalar([&](double x) { return -f(x); }, a, b, tol, max_iter);
}

// ---------------------------------------------------------------------------
// L-BFGS with Armijo backtracking

struct LbfgsOptions {
  int max_iter = 600;
  double grad_tol = 1e-10;  // on the inf-norm of the gradient
  int history = 8;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f(x, grad) -> value. The callable must fill `grad`.
inline LbfgsResult minimize_lbfgs(
    const std::function<double(const Eigen::VectorXd&, Eigen::VectorXd&)>& f,
    Eigen::VectorXd x0, const LbfgsOptions& opt = {}) {
  const long n = x0.size();
  Eigen::VectorXd g(n), g_new(n), x_new(n), q(n), z(n);
  std::deque<Eigen::VectorXd> s_hist, y_hist;
  std::deque<double> rho_hist;

  double fx = f(x0, g);
  LbfgsResult res;
  res.x = x0;
  res.value = fx;
  for (int it = 0; it < opt.max_iter; ++it) {
    if (g.cwiseAbs().maxCoeff() <= opt.grad_tol * std::max(1.0, std::abs(fx))) {
      res.converged = true;
      break;
    }
    // two-loop recursion
    q = g;
    std::vector<double> alpha(s_hist.size());
    for (long i = static_cast<long>(s_hist.size()) - 1; i >= 0; --i) {
      alpha[i] = rho_hist[i] * s_hist[i].dot(q);
      q -= alpha[i] * y_hist[i];
    }
    double gamma = 1.0;
    if (!s_hist.empty()) {
      const double yy = y_hist.back().squaredNorm();
      if (yy > 0) gamma = s_hist.back().dot(y_hist.back()) / yy;
    }
    z = gamma * q;
    for (std::size_t i = 0; i < s_hist.size(); ++i) {
      const double beta = rho_hist[i] * y_hist[i].dot(z);
      z += (alpha[i] - beta) * s_hist[i];
    }
    Eigen::VectorXd dir = -z;
    double slope = g.dot(dir);
    if (slope >= 0) {  // fall back to steepest descent
      dir = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    double f_new = fx;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      x_new = res.x + step * dir;
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new) && f_new <= fx + 1e-4 * step * slope) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    Eigen::VectorXd s = x_new - res.x;
    Eigen::VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-12 * s.norm() * yv.norm()) {
      s_hist.push_back(s);
      y_hist.push_back(yv);
      rho_hist.push_back(1.0 / sy);
      if (static_cast<int>(s_hist.size()) > opt.history) {
        s_hist.pop_front();
        y_hist.pop_front();
        rho_hist.pop_front();
      }
    }
    res.x = x_new;
    fx = f_new;
    g = g_new;
    res.iterations = it + 1;
  }
  res.value = fx;
  return res;
}

// ---------------------------------------------------------------------------
// Box-constrained compass (pattern) search, derivative-free

inline Eigen::VectorXd maximize_compass(
    const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
    const Eigen::VectorXd& lo, const Eigen::VectorXd& hi,
    double initial_step_frac = 0.25, double tol_frac = 1e-9,
    int max_iter = 4000) {
  const long n = x.size();
  const Eigen::VectorXd width = hi - lo;
  Eigen::VectorXd step = initial_step_frac * width;
  double fx = f(x);
  for (int it = 0; it < max_iter; ++it) {
    bool improved = false;
    for (long i = 0; i < n; ++i) {
      for (int sgn : {+1, -1}) {
        Eigen::VectorXd cand = x;
        cand(i) = std::clamp(cand(i) + sgn * step(i), lo(i), hi(i));
        if (cand(i) == x(i)) continue;
        const double fc = f(cand);
        if (fc > fx) {
          x = cand;
          fx = fc;
          improved = true;
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      if ((step.array() <= tol_frac * width.array()).all()) break;
    }
  }
  return x;
}

// ---------------------------------------------------------------------------
// Derivative of the local Lagrange interpolant at a node (nonuniform grid)

inline Eigen::VectorXd lagrange_node_derivative(
    const std::vector<double>& s, const std::vector<Eigen::VectorXd>& pts,
    std::size_t k, int window = 5) {
  const std::size_t n = s.size();
  const std::size_t half = static_cast<std::size_t>(window) / 2;
  std::size_t lo = (k > half) ? k - half : 0;
  std::size_t hi = std::min(n, lo + static_cast<std::size_t>(window));
  if (hi - lo < static_cast<std::size_t>(window) && hi == n)
    lo = (n > static_cast<std::size_t>(window)) ? n - window : 0;

  Eigen::VectorXd d = Eigen::VectorXd::Zero(pts[0].size());
  for (std::size_t j = lo; j < hi; ++j) {
    double lj = 0.0;
    if (j == k) {
      for (std::size_t m = lo; m < hi; ++m)
        if (m != k) lj += 1.0 / (s[k] - s[m]);
    } else {
      double prod = 1.0 / (s[j] - s[k]);
      for (std::size_t m = lo; m < hi; ++m) {
        if (m == j || m == k) continue;
        prod *= (s[k] - s[m]) / (s[j] - s[m]);
      }
      lj = prod;
    }
    d += lj * pts[j];
  }
  return d;
}

}  // namespace qtg::num
