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

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qmetro/channels.hpp"
#include "qmetro/linalg.hpp"

namespace qmetro {

/// One value of the (possibly multi-component) parameter.
using ParameterPoint = std::vector<double>;

/// Maps a parameter value to the Choi operator of the encoding channel.
using ChannelMap = std::function<ChoiOperator(const ParameterPoint&)>;

enum class GridScheme {
  LeftAligned,   ///< min + (max - min) (k - 1) / N, k = 1..N
  CellCentered,  ///< min + (max - min) (k - 1/2) / N
};

/// N evenly spaced values in [min, max); the endpoint is excluded.
std::vector<double> make_grid(double min, double max, Index n,
                              GridScheme scheme = GridScheme::LeftAligned);

class HypothesisGrid {
 public:
  /// axis_counts is empty for an unstructured list; otherwise its product
  /// must equal the number of points.
  explicit HypothesisGrid(std::vector<ParameterPoint> points,
                          std::vector<Index> axis_counts = {});
  static HypothesisGrid from_values(const std::vector<double>& values);

  const std::vector<ParameterPoint>& points() const { return points_; }
  const ParameterPoint& operator[](std::size_t k) const { return points_[k]; }
  std::size_t size() const { return points_.size(); }
  std::size_t arity() const { return points_.front().size(); }
  const std::vector<Index>& axis_counts() const { return axis_counts_; }

 private:
  std::vector<ParameterPoint> points_;
  std::vector<Index> axis_counts_;
};

/// Hypothesis weights, renormalized on the grid so that they sum to one.
class Prior {
 public:
  explicit Prior(std::vector<double> weights);
  const std::vector<double>& weights() const { return weights_; }
  double operator[](std::size_t k) const { return weights_[k]; }
  std::size_t size() const { return weights_.size(); }

 private:
  std::vector<double> weights_;
};

Prior uniform_prior(const HypothesisGrid& grid);
/// Isotropic Gaussian exp(-|theta - mu|^2 / (2 sigma^2)) evaluated on the
/// grid, mu applied to every component.
Prior gaussian_prior(const HypothesisGrid& grid, double mu, double sigma);

enum class RewardKind {
  Cos2,          ///< cos^2((theta - est) / 2), maximized
  Mse,           ///< (theta - est)^2, minimized
  Msle,          ///< log^2(est / theta), minimized
  ChoiFidelity,  ///< tr(C_theta C_est) / d^2, maximized
  Custom,        ///< user-supplied callable
};

enum class Direction { Maximize, Minimize };

Direction direction_of(RewardKind kind);
std::string to_string(RewardKind kind);
RewardKind parse_reward_kind(const std::string& name);
std::string to_string(Direction direction);

/// tr(C1 C2) / d_in^2.
double choi_fidelity(const ChoiOperator& a, const ChoiOperator& b);

/// Natural-valued reward or cost r(theta, est). ChoiFidelity needs the
/// channel map of the problem; the other built-ins ignore it.
double reward(RewardKind kind, const ParameterPoint& theta,
              const ParameterPoint& estimate, const ChannelMap& channel = {});

class RewardFunction {
 public:
  using Callable =
      std::function<double(const ParameterPoint&, const ParameterPoint&)>;

  explicit RewardFunction(RewardKind kind, ChannelMap channel = {});
  static RewardFunction custom(Callable f, Direction direction,
                               std::string name = "custom");

  RewardKind kind() const { return kind_; }
  Direction direction() const { return direction_; }
  const std::string& name() const { return name_; }

  /// Natural value: reward for maximized kinds, cost for minimized ones.
  double operator()(const ParameterPoint& theta,
                    const ParameterPoint& estimate) const;
  /// Value in the maximization convention (costs negated).
  double signed_value(const ParameterPoint& theta,
                      const ParameterPoint& estimate) const;

 private:
  RewardKind kind_;
  Direction direction_;
  std::string name_;
  ChannelMap channel_;
  Callable custom_;
};

/// Immutable bundle of hypotheses, prior, reward and per-hypothesis Choi
/// operators.
class EstimationProblem {
 public:
  EstimationProblem(HypothesisGrid grid, Prior prior, RewardFunction reward,
                    ChannelMap channel);
  /// Uses precomputed Choi operators; channel may be empty when the reward
  /// does not need it.
  EstimationProblem(HypothesisGrid grid, Prior prior, RewardFunction reward,
                    std::vector<ChoiOperator> chois, ChannelMap channel = {});

  const HypothesisGrid& grid() const { return grid_; }
  const Prior& prior() const { return prior_; }
  const RewardFunction& reward() const { return reward_; }
  Direction direction() const { return reward_.direction(); }
  const std::vector<ChoiOperator>& chois() const { return chois_; }
  const ChannelMap& channel() const { return channel_; }
  Index d_in() const { return chois_.front().d_in(); }
  Index d_out() const { return chois_.front().d_out(); }
  std::size_t num_hypotheses() const { return grid_.size(); }

  /// Signed rewards r(theta_k, estimate) for every hypothesis k.
  std::vector<double> signed_rewards(const ParameterPoint& estimate) const;

  /// Converts between the maximized objective and the reported score.
  double to_natural(double signed_score) const;
  double to_signed(double natural_score) const;

 private:
  void validate() const;

  HypothesisGrid grid_;
  Prior prior_;
  RewardFunction reward_;
  std::vector<ChoiOperator> chois_;
  ChannelMap channel_;
};

/// X(est_i) = sum_k p(theta_k) r(theta_k, est_i) C_{theta_k}, one per
/// estimator, with costs negated so that every program maximizes.
std::vector<HermitianMatrix> assemble_X(
    const EstimationProblem& problem,
    const std::vector<ParameterPoint>& estimators);

/// Lexicographic flattening of per-axis grids and estimators (first axis
/// varies slowest).
std::pair<HypothesisGrid, std::vector<ParameterPoint>> flatten_multiparameter(
    const std::vector<std::vector<double>>& axis_grids,
    const std::vector<std::vector<double>>& axis_estimators);

}  // namespace qmetro
