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

#include <numbers>
#include <vector>

#include "qmetro/channels.hpp"
#include "qmetro/problem.hpp"

namespace qmetro {

struct PriorSpec {
  enum class Kind { Uniform, Gaussian };
  Kind kind = Kind::Uniform;
  double mu = 0.0;
  double sigma = 1.0;

  static PriorSpec uniform() { return {}; }
  static PriorSpec gaussian(double mu, double sigma) {
    return {Kind::Gaussian, mu, sigma};
  }
  Prior on(const HypothesisGrid& grid) const;
};

/// Local phase e^{-i theta S_z} on n qubits in the symmetric subspace
/// (d = n + 1).
struct PhaseCase {
  Index qubits = 2;
  double theta_min = 0.0;
  double theta_max = 2.0 * std::numbers::pi;
  PriorSpec prior;
  RewardKind reward = RewardKind::Cos2;
};

struct ThermometryCase {
  ThermalChannelParams channel;
  double theta_min = 0.1;
  double theta_max = 2.0;
  PriorSpec prior;
  RewardKind reward = RewardKind::Mse;
};

/// exp(-i theta . sigma) with theta on a cubic grid over [min, max)^3.
struct Su2Case {
  double theta_min = -std::numbers::pi;
  double theta_max = std::numbers::pi;
  PriorSpec prior;
  RewardKind reward = RewardKind::ChoiFidelity;
};

EstimationProblem phase_problem(const PhaseCase& c, Index n_hypotheses);
EstimationProblem thermometry_problem(const ThermometryCase& c,
                                      Index n_hypotheses);
/// n_per_axis^3 hypotheses.
EstimationProblem su2_problem(const Su2Case& c, Index n_per_axis);

/// Evenly spaced starting estimators, theta_min + (max - min)(i - 1)/N_O.
std::vector<ParameterPoint> grid_estimators(double theta_min, double theta_max,
                                            Index n_outcomes);
/// n_per_axis^3 estimators flattened in the hypothesis order.
std::vector<ParameterPoint> su2_grid_estimators(double theta_min,
                                                double theta_max,
                                                Index n_per_axis);

}  // namespace qmetro
