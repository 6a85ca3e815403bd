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

#pragma once

#include <array>

#include "qmetro/linalg.hpp"

namespace qmetro {

/// Tensor-factor order of every Choi operator and tester element in the
/// library: input space first, output space second,
/// C = sum_ij |i><j| (x) E[|i><j|].
inline constexpr Subsystem kInputFactor = Subsystem::First;
inline constexpr Subsystem kOutputFactor = Subsystem::Second;

/// Choi operator of a CPTP map on H_in (x) H_out.
///
/// Construction checks positivity and trace preservation
/// (tr_out C = 1_in) to 1e-9.
class ChoiOperator {
 public:
  ChoiOperator(HermitianMatrix matrix, Index d_in, Index d_out,
               double tol = 1e-9);

  const HermitianMatrix& matrix() const { return matrix_; }
  Index d_in() const { return d_in_; }
  Index d_out() const { return d_out_; }
  BipartiteDims dims() const { return {d_in_, d_out_}; }

 private:
  HermitianMatrix matrix_;
  Index d_in_;
  Index d_out_;
};

ChoiOperator choi_of_unitary(const ComplexMatrix& u);

/// Choi of diag(1, e^{-i theta}, ..., e^{-i (d-1) theta}), i.e. e^{-i theta S_z}
/// on the symmetric subspace of d-1 qubits.
ChoiOperator phase_channel(Index d, double theta);

enum class Statistics { Bosonic, Fermionic };

/// Mean occupation of a bath mode at energy epsilon and temperature theta.
double occupation(double theta, double epsilon, Statistics statistics);

struct ThermalChannelParams {
  double epsilon = 0.1;
  double coupling = 2.0;  ///< spectral density J(epsilon)
  Statistics statistics = Statistics::Bosonic;
  double time = 0.0;
  bool keep_hamiltonian_phase = false;
};

/// Qubit thermalization after time t under the Markovian master equation with
/// H = epsilon |1><1|, Gamma_in = J N, Gamma_out = J (1 +/- N).
ChoiOperator thermal_channel(const ThermalChannelParams& params, double theta);

/// exp(-i (tx sx + ty sy + tz sz)) in closed form.
ComplexMatrix su2_unitary(const std::array<double, 3>& theta);
ChoiOperator su2_channel(const std::array<double, 3>& theta);

}  // namespace qmetro
