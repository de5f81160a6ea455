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

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "qtg/quantum.hpp"

// Superoperator algebra: detailed-balance Lindbladians, steady states,
// spectral analysis and the Drazin inverse. Operator-space matrices use the
// column-stacking convention: vec(A) stacks columns, so vec(X A Y) =
// (Y^T kron X) vec(A).

namespace qtg {

Vec vectorize(const Mat& a);
Mat unvectorize(const Vec& v, int dim);

/// Linear map on the d^2-dimensional operator space in the column-stacking
/// basis.
class Superoperator {
 public:
  Superoperator(int hilbert_dim, Mat matrix);

  static Superoperator identity(int hilbert_dim);
  static Superoperator zero(int hilbert_dim);
  /// A -> X A
  static Superoperator left_mult(const Mat& x);
  /// A -> A X
  static Superoperator right_mult(const Mat& x);
  /// Builds the matrix column by column from an arbitrary linear map.
  static Superoperator from_map(int hilbert_dim,
                                const std::function<Mat(const Mat&)>& map);

  int hilbert_dim() const { return hilbert_dim_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  const Mat& matrix() const { return matrix_; }

  Mat apply(const Mat& a) const;
  Superoperator compose(const Superoperator& inner) const;  // this o inner

  Superoperator operator+(const Superoperator& o) const;
  Superoperator operator-(const Superoperator& o) const;
  Superoperator operator*(double s) const;

 private:
  int hilbert_dim_;
  Mat matrix_;
};

/// One jump term gamma * (A rho A^dag - {A^dag A, rho}/2).
struct JumpOperator {
  Mat op;
  double rate;
};

/// Detailed-balance thermal generator with its jump decomposition and target
/// Gibbs state. The generator contains no coherent -i[H, .] system term; an
/// optional Lamb shift commuting with H is admitted.
class ThermalLindbladian {
 public:
  ThermalLindbladian(std::vector<JumpOperator> jump_ops,
                     HermitianOperator lamb_shift, double bath_beta,
                     GibbsState target);

  const std::vector<JumpOperator>& jump_ops() const { return jump_ops_; }
  const HermitianOperator& lamb_shift() const { return lamb_shift_; }
  double bath_beta() const { return bath_beta_; }
  const GibbsState& target() const { return target_; }
  const Superoperator& generator() const { return generator_; }

 private:
  std::vector<JumpOperator> jump_ops_;
  HermitianOperator lamb_shift_;
  double bath_beta_;
  GibbsState target_;
  Superoperator generator_;
};

/// Reset master equation L[A] = (pi Tr A - A)/tau_eq.
Superoperator build_reset(const GibbsState& target, double tau_eq);

/// Davies generator for a nondegenerate H: jump operators |i><j| between
/// energy eigenstates with rates gamma(omega) obeying detailed balance
/// gamma(-omega) = e^{-beta omega} gamma(omega). `rate` supplies
/// gamma(omega) for omega >= 0; the absorption side is derived.
/// Degenerate Bohr frequencies are rejected with the colliding pairs listed.
ThermalLindbladian build_davies(const HermitianOperator& hamiltonian,
                                double beta,
                                const std::vector<HermitianOperator>& coupling_ops,
                                const std::function<double(double)>& rate);

/// Convenience overload with the spectral-density form
/// gamma(omega) = kappa omega^alpha / (1 - e^{-beta omega}).
ThermalLindbladian build_davies(const HermitianOperator& hamiltonian,
                                double beta,
                                const std::vector<HermitianOperator>& coupling_ops,
                                double alpha, double kappa = 1.0);

/// Drazin inverse: the inverse of L restricted to the complement of the
/// steady-state direction, sandwiched between Q[A] = A - pi Tr A on both
/// sides. Requires exactly one zero eigenvalue, all others with strictly
/// negative real part.
Superoperator drazin_inverse(const Superoperator& lindbladian,
                             const GibbsState& target);

/// Steady state of L extracted from its kernel; Hermitized, positivity
/// validated, trace-normalized.
Mat steady_state_matrix(const Superoperator& lindbladian);

/// Quantum detailed balance with respect to pi: the generator splits into a
/// part symmetric under the sqrt(pi)-weighted inner product plus a
/// Hamiltonian commutator whose Hamiltonian commutes with pi. Tolerance is
/// relative to the generator scale. Requires full-rank pi.
bool is_detailed_balance(const Superoperator& lindbladian, const Mat& pi,
                         double tol = 1e-8);
bool is_detailed_balance(const Superoperator& lindbladian, const GibbsState& pi,
                         double tol = 1e-8);

struct EigenMode {
  Mat observable;                   // left eigenoperator Y, Tr[Y pi] = 0
  double timescale;                 // -1/Re(eigenvalue)
  std::complex<double> eigenvalue;  // of the adjoint generator
  bool oscillatory;
};

struct EigenoperatorDecomposition {
  std::vector<EigenMode> modes;        // real-timescale list, fastest first
  std::vector<EigenMode> oscillatory;  // complex-eigenvalue modes, flagged
};

/// Left eigenoperators and relaxation timescales of a detailed-balance
/// generator: d/dt Tr[Y rho_t] = (1/tau) (Tr[Y pi] - Tr[Y rho_t]).
EigenoperatorDecomposition eigenoperator_decomposition(
    const Superoperator& lindbladian);

/// Smallest/largest relaxation timescale of a valid generator.
std::pair<double, double> relaxation_timescales(const Superoperator& lindbladian);

/// Bath selector used by the oracle and the dissipative metric field.
struct BathSpec {
  enum class Type { reset, davies };
  Type type = Type::reset;
  double tau_eq = 1.0;  // reset
  double alpha = 0.0;   // davies ohmicity
  double kappa = 1.0;   // davies overall rate
  std::vector<HermitianOperator> coupling_ops;  // davies
};

/// Frozen-lambda snapshot generator for the bath at Hamiltonian H.
Superoperator build_bath_generator(const BathSpec& bath,
                                   const HermitianOperator& hamiltonian,
                                   double beta);

}  // namespace qtg
