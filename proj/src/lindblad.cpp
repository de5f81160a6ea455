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

#include "qtg/lindblad.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qtg {

namespace {

using cxd = std::complex<double>;

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i)
    for (long j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// gamma(omega) for the spectral-density family kappa w^a/(1 - e^{-beta w});
// at omega = 0 the analytic limit (infinite for a < 1).
double spectral_rate(double omega, double alpha, double kappa, double beta) {
  if (omega > 0) return kappa * std::pow(omega, alpha) / (-std::expm1(-beta * omega));
  if (alpha > 1) return 0.0;
  if (alpha == 1) return kappa / beta;
  return std::numeric_limits<double>::infinity();
}

struct Spectrum {
  std::vector<cxd> eigenvalues;
  double scale;     // max |eigenvalue|
  double zero_tol;  // threshold separating the kernel
};

Spectrum generator_spectrum(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
  Spectrum sp;
  sp.eigenvalues.assign(es.eigenvalues().data(),
                        es.eigenvalues().data() + es.eigenvalues().size());
  sp.scale = 0.0;
  for (const cxd& ev : sp.eigenvalues) sp.scale = std::max(sp.scale, std::abs(ev));
  sp.zero_tol = 1e-10 * std::max(1.0, sp.scale);
  return sp;
}

void require_valid_spectrum(const Spectrum& sp, const char* who) {
  int zeros = 0;
  std::ostringstream bad;
  for (const cxd& ev : sp.eigenvalues) {
    if (std::abs(ev) < sp.zero_tol) {
      ++zeros;
    } else if (ev.real() > -sp.zero_tol) {
      bad << " (" << ev.real() << (ev.imag() < 0 ? "" : "+") << ev.imag()
          << "i)";
    }
  }
  if (zeros != 1 || bad.tellp() > 0) {
    std::ostringstream msg;
    msg << who << ": spectral validity failed, " << zeros
        << " zero eigenvalue(s)";
    if (bad.tellp() > 0) msg << ", non-decaying eigenvalues:" << bad.str();
    throw domain_error(msg.str());
  }
}

}  // namespace

Vec vectorize(const Mat& a) {
  return Eigen::Map<const Vec>(a.data(), a.size());
}

Mat unvectorize(const Vec& v, int dim) {
  return Eigen::Map<const Mat>(v.data(), dim, dim);
}

Superoperator::Superoperator(int hilbert_dim, Mat matrix)
    : hilbert_dim_(hilbert_dim), matrix_(std::move(matrix)) {
  const long d2 = static_cast<long>(hilbert_dim) * hilbert_dim;
  if (matrix_.rows() != d2 || matrix_.cols() != d2)
    throw validation_error("Superoperator: matrix must be d^2 x d^2");
}

Superoperator Superoperator::identity(int d) {
  return Superoperator(d, Mat::Identity(d * d, d * d));
}

Superoperator Superoperator::zero(int d) {
  return Superoperator(d, Mat::Zero(d * d, d * d));
}

Superoperator Superoperator::left_mult(const Mat& x) {
  const int d = static_cast<int>(x.rows());
  return Superoperator(d, kron(Mat::Identity(d, d), x));
}

Superoperator Superoperator::right_mult(const Mat& x) {
  const int d = static_cast<int>(x.rows());
  return Superoperator(d, kron(x.transpose(), Mat::Identity(d, d)));
}

Superoperator Superoperator::from_map(int d,
                                      const std::function<Mat(const Mat&)>& map) {
  Mat m(d * d, d * d);
  Mat basis = Mat::Zero(d, d);
  for (int c = 0; c < d; ++c)
    for (int r = 0; r < d; ++r) {
      basis(r, c) = 1.0;
      m.col(c * d + r) = vectorize(map(basis));
      basis(r, c) = 0.0;
    }
  return Superoperator(d, std::move(m));
}

Mat Superoperator::apply(const Mat& a) const {
  if (a.rows() != hilbert_dim_ || a.cols() != hilbert_dim_)
    throw validation_error("Superoperator::apply: operand dimension mismatch");
  return unvectorize(matrix_ * vectorize(a), hilbert_dim_);
}

Superoperator Superoperator::compose(const Superoperator& inner) const {
  return Superoperator(hilbert_dim_, matrix_ * inner.matrix_);
}

Superoperator Superoperator::operator+(const Superoperator& o) const {
  return Superoperator(hilbert_dim_, matrix_ + o.matrix_);
}

Superoperator Superoperator::operator-(const Superoperator& o) const {
  return Superoperator(hilbert_dim_, matrix_ - o.matrix_);
}

Superoperator Superoperator::operator*(double s) const {
  return Superoperator(hilbert_dim_, matrix_ * s);
}

ThermalLindbladian::ThermalLindbladian(std::vector<JumpOperator> jump_ops,
                                       HermitianOperator lamb_shift,
                                       double bath_beta, GibbsState target)
    : jump_ops_(std::move(jump_ops)),
      lamb_shift_(std::move(lamb_shift)),
      bath_beta_(bath_beta),
      target_(std::move(target)),
      generator_(Superoperator::zero(target_.dim())) {
  const int d = target_.dim();
  const Mat id = Mat::Identity(d, d);
  Mat m = Mat::Zero(d * d, d * d);
  const Mat& hls = lamb_shift_.matrix();
  const cxd im(0.0, 1.0);
  m -= im * (kron(id, hls) - kron(hls.transpose(), id));
  for (const JumpOperator& j : jump_ops_) {
    if (j.rate < 0)
      throw validation_error("ThermalLindbladian: negative jump rate");
    const Mat ada = j.op.adjoint() * j.op;
    m += j.rate * (kron(j.op.conjugate(), j.op) -
                   0.5 * (kron(id, ada) + kron(ada.transpose(), id)));
  }
  generator_ = Superoperator(d, std::move(m));

  const double scale = std::max(1.0, generator_.matrix().cwiseAbs().maxCoeff());
  const Vec trace_row = generator_.matrix().adjoint() * vectorize(id);
  if (trace_row.cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw validation_error("ThermalLindbladian: generator is not "
                           "trace-preserving");
  if (generator_.apply(target_.matrix()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw validation_error("ThermalLindbladian: target Gibbs state is not a "
                           "fixed point");
  const Mat comm = hls * target_.hamiltonian().matrix() -
                   target_.hamiltonian().matrix() * hls;
  if (comm.cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw validation_error("ThermalLindbladian: Lamb shift does not commute "
                           "with H");
}

Superoperator build_reset(const GibbsState& target, double tau_eq) {
  if (!(tau_eq > 0))
    throw validation_error("build_reset: tau_eq must be positive");
  const int d = target.dim();
  Mat m = -Mat::Identity(d * d, d * d);
  m += vectorize(target.matrix()) *
       vectorize(Mat::Identity(d, d)).adjoint();
  return Superoperator(d, m / tau_eq);
}

ThermalLindbladian build_davies(
    const HermitianOperator& hamiltonian, double beta,
    const std::vector<HermitianOperator>& coupling_ops,
    const std::function<double(double)>& rate) {
  if (!(beta > 0)) throw validation_error("build_davies: beta must be positive");
  const int d = hamiltonian.dim();
  const RVec& eps = hamiltonian.eigenvalues();
  const Mat& v = hamiltonian.eigenvectors();
  const double range = eps.maxCoeff() - eps.minCoeff();
  const double collision_tol = 1e-9 * std::max(range, 1e-300);

  // Bohr frequencies must be pairwise distinct (and nonzero).
  std::vector<std::pair<std::pair<int, int>, double>> gaps;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      gaps.push_back({{i, j}, eps(j) - eps(i)});
  std::ostringstream collisions;
  for (std::size_t a = 0; a < gaps.size(); ++a) {
    if (std::abs(gaps[a].second) < collision_tol)
      collisions << " (" << gaps[a].first.first << "," << gaps[a].first.second
                 << ") degenerate";
    for (std::size_t b = a + 1; b < gaps.size(); ++b)
      if (std::abs(gaps[a].second - gaps[b].second) < collision_tol)
        collisions << " (" << gaps[a].first.first << ","
                   << gaps[a].first.second << ")~(" << gaps[b].first.first
                   << "," << gaps[b].first.second << ")";
  }
  if (collisions.tellp() > 0)
    throw domain_error("build_davies: degenerate Bohr frequencies:" +
                       collisions.str());

  std::vector<JumpOperator> jumps;
  for (const HermitianOperator& coupling : coupling_ops) {
    if (coupling.dim() != d)
      throw validation_error("build_davies: coupling operator dimension "
                             "mismatch");
    const Mat a_eig = v.adjoint() * coupling.matrix() * v;
    const double a_scale = std::max(a_eig.cwiseAbs().maxCoeff(), 1e-300);
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        if (std::abs(a_eig(i, j)) < 1e-14 * a_scale) continue;
        const double omega = eps(j) - eps(i);
        const double g_down = rate(omega);
        if (!std::isfinite(g_down) || g_down < 0)
          throw domain_error("build_davies: invalid rate at omega=" +
                             std::to_string(omega));
        const Mat down = a_eig(i, j) * (v.col(i) * v.col(j).adjoint());
        const Mat up = std::conj(a_eig(i, j)) * (v.col(j) * v.col(i).adjoint());
        jumps.push_back({down, g_down});
        jumps.push_back({up, g_down * std::exp(-beta * omega)});
      }
    }
    // zero-frequency (dephasing) component from the diagonal part
    RVec diag(d);
    for (int i = 0; i < d; ++i) diag(i) = a_eig(i, i).real();
    const double mean = diag.mean();
    if ((diag.array() - mean).abs().maxCoeff() > 1e-12 * a_scale) {
      const double g0 = rate(0.0);
      if (!std::isfinite(g0))
        throw domain_error("build_davies: coupling has a diagonal component "
                           "but the zero-frequency rate diverges");
      if (g0 > 0) {
        Mat dephase = Mat::Zero(d, d);
        for (int i = 0; i < d; ++i)
          dephase += (diag(i) - mean) * (v.col(i) * v.col(i).adjoint());
        jumps.push_back({dephase, g0});
      }
    }
  }
  GibbsState target = gibbs_state(hamiltonian, beta);
  return ThermalLindbladian(std::move(jumps), HermitianOperator::zero(d), beta,
                            std::move(target));
}

ThermalLindbladian build_davies(
    const HermitianOperator& hamiltonian, double beta,
    const std::vector<HermitianOperator>& coupling_ops, double alpha,
    double kappa) {
  if (!(kappa > 0)) throw validation_error("build_davies: kappa must be positive");
  return build_davies(hamiltonian, beta, coupling_ops,
                      [alpha, kappa, beta](double omega) {
                        return spectral_rate(omega, alpha, kappa, beta);
                      });
}

Superoperator drazin_inverse(const Superoperator& lindbladian,
                             const GibbsState& target) {
  const int d = lindbladian.hilbert_dim();
  if (target.dim() != d)
    throw validation_error("drazin_inverse: target dimension mismatch");
  const Mat& m = lindbladian.matrix();
  const Spectrum sp = generator_spectrum(m);
  require_valid_spectrum(sp, "drazin_inverse");

  const Vec pi_vec = vectorize(target.matrix());
  const Vec id_vec = vectorize(Mat::Identity(d, d));
  const Mat q = Mat::Identity(d * d, d * d) - pi_vec * id_vec.adjoint();
  // bordered system: adding the rank-one term makes M invertible without
  // touching the traceless subspace
  const Mat bordered = m - sp.scale * (pi_vec * id_vec.adjoint());
  const Mat inv_q = bordered.partialPivLu().solve(q);
  return Superoperator(d, q * inv_q);
}

Mat steady_state_matrix(const Superoperator& lindbladian) {
  const Mat& m = lindbladian.matrix();
  Eigen::ComplexEigenSolver<Mat> es(m);
  long best = 0;
  for (long i = 1; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i)) < std::abs(es.eigenvalues()(best)))
      best = i;
  const int d = lindbladian.hilbert_dim();
  Mat pi = unvectorize(es.eigenvectors().col(best), d);
  pi = 0.5 * (pi + pi.adjoint().eval());
  const double tr = pi.trace().real();
  if (std::abs(tr) < 1e-12)
    throw domain_error("steady_state_matrix: kernel element is traceless");
  pi /= tr;
  Eigen::SelfAdjointEigenSolver<Mat> pe(pi);
  if (pe.eigenvalues().minCoeff() < -1e-9)
    throw domain_error("steady_state_matrix: steady state is not positive "
                       "semidefinite");
  return pi;
}

bool is_detailed_balance(const Superoperator& lindbladian, const Mat& pi,
                         double tol) {
  const int d = lindbladian.hilbert_dim();
  Eigen::SelfAdjointEigenSolver<Mat> es(pi);
  if (es.eigenvalues().minCoeff() < 1e-14)
    throw domain_error("is_detailed_balance: pi must be full rank");
  const Mat sqrt_pi = es.eigenvectors() *
                      es.eigenvalues().cwiseSqrt().asDiagonal() *
                      es.eigenvectors().adjoint();
  const Mat inv_sqrt_pi = es.eigenvectors() *
                          es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                          es.eigenvectors().adjoint();
  const Mat w = kron(sqrt_pi.transpose(), sqrt_pi);
  const Mat w_inv = kron(inv_sqrt_pi.transpose(), inv_sqrt_pi);
  const Mat& m = lindbladian.matrix();
  const double scale = std::max(m.norm(), 1e-300);
  // antisymmetric remainder under the weighted adjoint M -> W M^dag W^{-1}
  const Mat anti = 0.5 * (m - w * m.adjoint() * w_inv);
  // it must be a commutator -i[Htilde, .] with [Htilde, pi] = 0
  Mat partial = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) {
      cxd sum = 0.0;
      for (int j = 0; j < d; ++j) sum += anti(j * d + i, j * d + k);
      partial(i, k) = sum;
    }
  Mat h_tilde = cxd(0.0, 1.0) / static_cast<double>(d) * partial;
  h_tilde = 0.5 * (h_tilde + h_tilde.adjoint().eval());
  const Mat id = Mat::Identity(d, d);
  const Mat commutator_gen =
      cxd(0.0, -1.0) * (kron(id, h_tilde) - kron(h_tilde.transpose(), id));
  if ((anti - commutator_gen).norm() > tol * scale) return false;
  return (h_tilde * pi - pi * h_tilde).norm() <=
         tol * std::max(1.0, h_tilde.norm());
}

bool is_detailed_balance(const Superoperator& lindbladian, const GibbsState& pi,
                         double tol) {
  return is_detailed_balance(lindbladian, pi.matrix(), tol);
}

EigenoperatorDecomposition eigenoperator_decomposition(
    const Superoperator& lindbladian) {
  const int d = lindbladian.hilbert_dim();
  const Mat pi = steady_state_matrix(lindbladian);
  if (!is_detailed_balance(lindbladian, pi))
    throw domain_error("eigenoperator_decomposition: generator violates "
                       "detailed balance");
  const Spectrum sp = generator_spectrum(lindbladian.matrix());
  require_valid_spectrum(sp, "eigenoperator_decomposition");

  Eigen::ComplexEigenSolver<Mat> es(lindbladian.matrix().adjoint());
  EigenoperatorDecomposition out;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const cxd mu = es.eigenvalues()(i);
    if (std::abs(mu) < sp.zero_tol) continue;  // identity mode
    EigenMode mode;
    mode.eigenvalue = std::conj(mu);
    mode.timescale = -1.0 / mu.real();
    mode.oscillatory = std::abs(mu.imag()) > 1e-8 * std::max(1.0, sp.scale);
    Mat y = unvectorize(es.eigenvectors().col(i), d).adjoint();
    if (!mode.oscillatory) {
      Mat herm = 0.5 * (y + y.adjoint().eval());
      if (herm.norm() < 0.5 * y.norm())
        herm = cxd(0.0, 0.5) * (y - y.adjoint().eval());
      y = herm;
    }
    mode.observable = y / y.norm();
    (mode.oscillatory ? out.oscillatory : out.modes).push_back(std::move(mode));
  }
  auto by_timescale = [](const EigenMode& a, const EigenMode& b) {
    return a.timescale < b.timescale;
  };
  std::sort(out.modes.begin(), out.modes.end(), by_timescale);
  std::sort(out.oscillatory.begin(), out.oscillatory.end(), by_timescale);
  return out;
}

std::pair<double, double> relaxation_timescales(
    const Superoperator& lindbladian) {
  const Spectrum sp = generator_spectrum(lindbladian.matrix());
  require_valid_spectrum(sp, "relaxation_timescales");
  double tmin = std::numeric_limits<double>::infinity();
  double tmax = 0.0;
  for (const cxd& ev : sp.eigenvalues) {
    if (std::abs(ev) < sp.zero_tol) continue;
    const double tau = -1.0 / ev.real();
    tmin = std::min(tmin, tau);
    tmax = std::max(tmax, tau);
  }
  return {tmin, tmax};
}

Superoperator build_bath_generator(const BathSpec& bath,
                                   const HermitianOperator& hamiltonian,
                                   double beta) {
  switch (bath.type) {
    case BathSpec::Type::reset:
      return build_reset(gibbs_state(hamiltonian, beta), bath.tau_eq);
    case BathSpec::Type::davies:
      return build_davies(hamiltonian, beta, bath.coupling_ops, bath.alpha,
                          bath.kappa)
          .generator();
  }
  throw validation_error("build_bath_generator: unknown bath type");
}

}  // namespace qtg
