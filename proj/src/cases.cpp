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

#include "qmetro/cases.hpp"

namespace qmetro {

Prior PriorSpec::on(const HypothesisGrid& grid) const {
  return kind == Kind::Uniform ? uniform_prior(grid)
                               : gaussian_prior(grid, mu, sigma);
}

EstimationProblem phase_problem(const PhaseCase& c, Index n_hypotheses) {
  if (c.qubits < 1) throw InvalidArgument("phase_problem: qubits < 1");
  const HypothesisGrid grid =
      HypothesisGrid::from_values(make_grid(c.theta_min, c.theta_max, n_hypotheses));
  const Index d = c.qubits + 1;
  std::vector<ChoiOperator> chois;
  chois.reserve(grid.size());
  for (const auto& p : grid.points()) chois.push_back(phase_channel(d, p[0]));
  ChannelMap channel = [d](const ParameterPoint& p) {
    return phase_channel(d, p.at(0));
  };
  return EstimationProblem(grid, c.prior.on(grid), RewardFunction(c.reward, channel),
                           std::move(chois), channel);
}

EstimationProblem thermometry_problem(const ThermometryCase& c,
                                      Index n_hypotheses) {
  const HypothesisGrid grid =
      HypothesisGrid::from_values(make_grid(c.theta_min, c.theta_max, n_hypotheses));
  const ThermalChannelParams params = c.channel;
  ChannelMap channel = [params](const ParameterPoint& p) {
    return thermal_channel(params, p.at(0));
  };
  std::vector<ChoiOperator> chois;
  chois.reserve(grid.size());
  for (const auto& p : grid.points()) chois.push_back(channel(p));
  return EstimationProblem(grid, c.prior.on(grid), RewardFunction(c.reward, channel),
                           std::move(chois), channel);
}

EstimationProblem su2_problem(const Su2Case& c, Index n_per_axis) {
  const auto axis = make_grid(c.theta_min, c.theta_max, n_per_axis);
  auto [grid, unused] = flatten_multiparameter({axis, axis, axis}, {axis, axis, axis});
  ChannelMap channel = [](const ParameterPoint& p) {
    return su2_channel({p.at(0), p.at(1), p.at(2)});
  };
  std::vector<ChoiOperator> chois;
  chois.reserve(grid.size());
  for (const auto& p : grid.points()) chois.push_back(channel(p));
  Prior prior = c.prior.on(grid);
  return EstimationProblem(std::move(grid), std::move(prior),
                           RewardFunction(c.reward, channel), std::move(chois),
                           channel);
}

std::vector<ParameterPoint> grid_estimators(double theta_min, double theta_max,
                                            Index n_outcomes) {
  std::vector<ParameterPoint> out;
  for (double v : make_grid(theta_min, theta_max, n_outcomes)) out.push_back({v});
  return out;
}

std::vector<ParameterPoint> su2_grid_estimators(double theta_min,
                                                double theta_max,
                                                Index n_per_axis) {
  const auto axis = make_grid(theta_min, theta_max, n_per_axis);
  return flatten_multiparameter({axis, axis, axis}, {axis, axis, axis}).second;
}

}  // namespace qmetro
