// Copyright 2026 The qmetro Authors
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

#include "qmetro/channels.hpp"

#include <cmath>
#include <sstream>

namespace qmetro {

ChoiOperator::ChoiOperator(HermitianMatrix matrix, Index d_in, Index d_out,
                           double tol)
    : matrix_(std::move(matrix)), d_in_(d_in), d_out_(d_out) {
  if (matrix_.dim() != d_in * d_out)
    throw DimensionMismatch("ChoiOperator: dimension != d_in * d_out");
  const double min_eig = matrix_.min_eigenvalue();
  if (min_eig < -tol)
    throw NotPSD("ChoiOperator: not completely positive", min_eig);
  const ComplexMatrix marginal =
      partial_trace(matrix_.matrix(), dims(), kOutputFactor);
  const double tp_error =
      max_abs(marginal - ComplexMatrix::Identity(d_in, d_in));
  if (tp_error > tol) {
    std::ostringstream os;
    os << "ChoiOperator: not trace preserving, |tr_out C - 1| = " << tp_error;
    throw InvalidArgument(os.str());
  }
}

ChoiOperator choi_of_unitary(const ComplexMatrix& u) {
  if (!is_unitary(u))
    throw InvalidArgument("choi_of_unitary: matrix is not unitary");
  const Index d = u.rows();
  ComplexVector phi(d * d);
  for (Index i = 0; i < d; ++i)
    for (Index o = 0; o < d; ++o) phi(i * d + o) = u(o, i);
  return ChoiOperator(HermitianMatrix::projector(phi), d, d);
}

ChoiOperator phase_channel(Index d, double theta) {
  if (d < 2) throw InvalidArgument("phase_channel: d must be at least 2");
  ComplexMatrix u = ComplexMatrix::Zero(d, d);
  for (Index k = 0; k < d; ++k)
    u(k, k) = std::exp(Complex(0.0, -theta * static_cast<double>(k)));
  return choi_of_unitary(u);
}

double occupation(double theta, double epsilon, Statistics statistics) {
  if (!(theta > 0.0))
    throw InvalidArgument("occupation: temperature must be positive");
  const double x = epsilon / theta;
  if (statistics == Statistics::Bosonic) return 1.0 / std::expm1(x);
  return 1.0 / (std::exp(x) + 1.0);
}

ChoiOperator thermal_channel(const ThermalChannelParams& params,
                             double theta) {
  if (!(params.epsilon > 0.0))
    throw InvalidArgument("thermal_channel: epsilon must be positive");
  if (!(params.coupling > 0.0))
    throw InvalidArgument("thermal_channel: J must be positive");
  if (!(params.time >= 0.0))
    throw InvalidArgument("thermal_channel: time must be non-negative");
  const double n = occupation(theta, params.epsilon, params.statistics);
  const double rate_in = params.coupling * n;
  const double rate_out = params.statistics == Statistics::Bosonic
                              ? params.coupling * (1.0 + n)
                              : params.coupling * (1.0 - n);
  const double gamma = rate_in + rate_out;
  const double t = params.time;
  const double decay = std::exp(-gamma * t);
  const double ground_ss = rate_out / gamma;

  // Ground-state population after starting in |0> or |1>.
  const double from_ground = ground_ss + (1.0 - ground_ss) * decay;
  const double from_excited = ground_ss * (1.0 - decay);
  // E[|0><1|] = coherence |0><1|; the free evolution rotates it by e^{+i eps t}.
  Complex coherence(std::exp(-0.5 * gamma * t), 0.0);
  if (params.keep_hamiltonian_phase)
    coherence *= std::exp(Complex(0.0, params.epsilon * t));

  ComplexMatrix c = ComplexMatrix::Zero(4, 4);
  c(0, 0) = from_ground;
  c(1, 1) = 1.0 - from_ground;
  c(2, 2) = from_excited;
  c(3, 3) = 1.0 - from_excited;
  c(0, 3) = coherence;
  c(3, 0) = std::conj(coherence);
  return ChoiOperator(HermitianMatrix(c), 2, 2);
}

ComplexMatrix su2_unitary(const std::array<double, 3>& theta) {
  const double norm = std::sqrt(theta[0] * theta[0] + theta[1] * theta[1] +
                                theta[2] * theta[2]);
  const double sinc = norm < 1e-8 ? 1.0 : std::sin(norm) / norm;
  const Complex i(0.0, 1.0);
  // theta . sigma
  ComplexMatrix gen(2, 2);
  gen << theta[2], Complex(theta[0], -theta[1]), Complex(theta[0], theta[1]),
      -theta[2];
  return std::cos(norm) * ComplexMatrix::Identity(2, 2) - i * sinc * gen;
}

ChoiOperator su2_channel(const std::array<double, 3>& theta) {
  return choi_of_unitary(su2_unitary(theta));
}

}  // namespace qmetro
