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

#include "qmetro/problem.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qmetro {

std::vector<double> make_grid(double min, double max, Index n,
                              GridScheme scheme) {
  if (!(max > min) || !std::isfinite(min) || !std::isfinite(max))
    throw InvalidArgument("make_grid: require finite theta_max > theta_min");
  if (n < 1) throw InvalidArgument("make_grid: need at least one point");
  const double offset = scheme == GridScheme::LeftAligned ? 0.0 : 0.5;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k)
    out[static_cast<std::size_t>(k)] =
        min + (max - min) * (static_cast<double>(k) + offset) /
                  static_cast<double>(n);
  return out;
}

HypothesisGrid::HypothesisGrid(std::vector<ParameterPoint> points,
                               std::vector<Index> axis_counts)
    : points_(std::move(points)), axis_counts_(std::move(axis_counts)) {
  if (points_.empty()) throw InvalidArgument("HypothesisGrid: empty grid");
  const std::size_t arity = points_.front().size();
  if (arity == 0) throw InvalidArgument("HypothesisGrid: empty parameter");
  for (const auto& p : points_) {
    if (p.size() != arity)
      throw InvalidArgument("HypothesisGrid: mixed parameter arity");
    for (double v : p)
      if (!std::isfinite(v))
        throw InvalidArgument("HypothesisGrid: non-finite parameter");
  }
  if (!axis_counts_.empty()) {
    const Index product =
        std::accumulate(axis_counts_.begin(), axis_counts_.end(), Index{1},
                        std::multiplies<Index>());
    if (product != static_cast<Index>(points_.size()))
      throw InvalidArgument("HypothesisGrid: axis counts do not match size");
  }
  std::vector<ParameterPoint> sorted = points_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvalidArgument("HypothesisGrid: duplicate hypothesis");
}

HypothesisGrid HypothesisGrid::from_values(const std::vector<double>& values) {
  std::vector<ParameterPoint> pts;
  pts.reserve(values.size());
  for (double v : values) pts.push_back({v});
  return HypothesisGrid(std::move(pts),
                        {static_cast<Index>(values.size())});
}

Prior::Prior(std::vector<double> weights) : weights_(std::move(weights)) {
  if (weights_.empty()) throw InvalidArgument("Prior: no weights");
  double total = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w))
      throw InvalidArgument("Prior: weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw InvalidArgument("Prior: all weights are zero");
  for (double& w : weights_) w /= total;
}

Prior uniform_prior(const HypothesisGrid& grid) {
  return Prior(std::vector<double>(grid.size(), 1.0));
}

Prior gaussian_prior(const HypothesisGrid& grid, double mu, double sigma) {
  if (!(sigma > 0.0))
    throw InvalidArgument("gaussian_prior: sigma must be positive");
  // Shift by the smallest exponent so distant grids do not underflow to 0.
  std::vector<double> expo(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    double sq = 0.0;
    for (double v : grid[k]) sq += (v - mu) * (v - mu);
    expo[k] = -sq / (2.0 * sigma * sigma);
  }
  const double top = *std::max_element(expo.begin(), expo.end());
  std::vector<double> w(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) w[k] = std::exp(expo[k] - top);
  return Prior(std::move(w));
}

Direction direction_of(RewardKind kind) {
  switch (kind) {
    case RewardKind::Mse:
    case RewardKind::Msle:
      return Direction::Minimize;
    default:
      return Direction::Maximize;
  }
}

std::string to_string(RewardKind kind) {
  switch (kind) {
    case RewardKind::Cos2: return "cos2";
    case RewardKind::Mse: return "mse";
    case RewardKind::Msle: return "msle";
    case RewardKind::ChoiFidelity: return "fidelity";
    case RewardKind::Custom: return "custom";
  }
  return "unknown";
}

RewardKind parse_reward_kind(const std::string& name) {
  if (name == "cos2") return RewardKind::Cos2;
  if (name == "mse") return RewardKind::Mse;
  if (name == "msle") return RewardKind::Msle;
  if (name == "fidelity" || name == "choi_fidelity")
    return RewardKind::ChoiFidelity;
  throw InvalidArgument("unknown reward kind '" + name + "'");
}

std::string to_string(Direction direction) {
  return direction == Direction::Maximize ? "maximize" : "minimize";
}

double choi_fidelity(const ChoiOperator& a, const ChoiOperator& b) {
  const double d = static_cast<double>(a.d_in());
  return trace_product(a.matrix(), b.matrix()) / (d * d);
}

double reward(RewardKind kind, const ParameterPoint& theta,
              const ParameterPoint& estimate, const ChannelMap& channel) {
  if (theta.size() != estimate.size())
    throw DimensionMismatch("reward: parameter arity mismatch");
  switch (kind) {
    case RewardKind::Cos2: {
      double r = 1.0;
      for (std::size_t a = 0; a < theta.size(); ++a) {
        const double c = std::cos(0.5 * (theta[a] - estimate[a]));
        r *= c * c;
      }
      return r;
    }
    case RewardKind::Mse: {
      double r = 0.0;
      for (std::size_t a = 0; a < theta.size(); ++a)
        r += (theta[a] - estimate[a]) * (theta[a] - estimate[a]);
      return r;
    }
    case RewardKind::Msle: {
      double r = 0.0;
      for (std::size_t a = 0; a < theta.size(); ++a) {
        if (!(theta[a] > 0.0) || !(estimate[a] > 0.0))
          throw InvalidArgument("msle reward needs positive parameters");
        const double l = std::log(estimate[a] / theta[a]);
        r += l * l;
      }
      return r;
    }
    case RewardKind::ChoiFidelity:
      if (!channel)
        throw InvalidArgument("fidelity reward needs a channel map");
      return choi_fidelity(channel(theta), channel(estimate));
    case RewardKind::Custom:
      break;
  }
  throw InvalidArgument("reward: custom kinds need a RewardFunction");
}

RewardFunction::RewardFunction(RewardKind kind, ChannelMap channel)
    : kind_(kind),
      direction_(direction_of(kind)),
      name_(to_string(kind)),
      channel_(std::move(channel)) {
  if (kind == RewardKind::Custom)
    throw InvalidArgument("RewardFunction: use RewardFunction::custom");
  if (kind == RewardKind::ChoiFidelity && !channel_)
    throw InvalidArgument("RewardFunction: fidelity needs a channel map");
}

RewardFunction RewardFunction::custom(Callable f, Direction direction,
                                      std::string name) {
  RewardFunction r(RewardKind::Cos2);
  r.kind_ = RewardKind::Custom;
  r.direction_ = direction;
  r.name_ = std::move(name);
  r.custom_ = std::move(f);
  return r;
}

double RewardFunction::operator()(const ParameterPoint& theta,
                                  const ParameterPoint& estimate) const {
  if (kind_ == RewardKind::Custom) return custom_(theta, estimate);
  return reward(kind_, theta, estimate, channel_);
}

double RewardFunction::signed_value(const ParameterPoint& theta,
                                    const ParameterPoint& estimate) const {
  const double v = (*this)(theta, estimate);
  return direction_ == Direction::Maximize ? v : -v;
}

namespace {

std::vector<ChoiOperator> evaluate_channel(const HypothesisGrid& grid,
                                           const ChannelMap& channel) {
  if (!channel) throw InvalidArgument("EstimationProblem: empty channel map");
  std::vector<ChoiOperator> out;
  out.reserve(grid.size());
  for (const auto& p : grid.points()) out.push_back(channel(p));
  return out;
}

}  // namespace

EstimationProblem::EstimationProblem(HypothesisGrid grid, Prior prior,
                                     RewardFunction reward, ChannelMap channel)
    : grid_(std::move(grid)),
      prior_(std::move(prior)),
      reward_(std::move(reward)),
      chois_(evaluate_channel(grid_, channel)),
      channel_(std::move(channel)) {
  validate();
}

EstimationProblem::EstimationProblem(HypothesisGrid grid, Prior prior,
                                     RewardFunction reward,
                                     std::vector<ChoiOperator> chois,
                                     ChannelMap channel)
    : grid_(std::move(grid)),
      prior_(std::move(prior)),
      reward_(std::move(reward)),
      chois_(std::move(chois)),
      channel_(std::move(channel)) {
  validate();
}

void EstimationProblem::validate() const {
  if (prior_.size() != grid_.size())
    throw DimensionMismatch("EstimationProblem: prior and grid sizes differ");
  if (chois_.size() != grid_.size())
    throw DimensionMismatch("EstimationProblem: one Choi per hypothesis");
  for (const auto& c : chois_)
    if (c.d_in() != chois_.front().d_in() ||
        c.d_out() != chois_.front().d_out())
      throw DimensionMismatch("EstimationProblem: Choi dimensions differ");
}

std::vector<double> EstimationProblem::signed_rewards(
    const ParameterPoint& estimate) const {
  std::vector<double> out(grid_.size());
  if (reward_.kind() == RewardKind::ChoiFidelity) {
    // Reuse the stored Choi operators; only the estimate's is new.
    const ChoiOperator est = channel_(estimate);
    for (std::size_t k = 0; k < grid_.size(); ++k)
      out[k] = choi_fidelity(chois_[k], est);
    return out;
  }
  for (std::size_t k = 0; k < grid_.size(); ++k)
    out[k] = reward_.signed_value(grid_[k], estimate);
  return out;
}

double EstimationProblem::to_natural(double signed_score) const {
  return direction() == Direction::Maximize ? signed_score : -signed_score;
}

double EstimationProblem::to_signed(double natural_score) const {
  return to_natural(natural_score);
}

std::vector<HermitianMatrix> assemble_X(
    const EstimationProblem& problem,
    const std::vector<ParameterPoint>& estimators) {
  if (estimators.empty())
    throw InvalidArgument("assemble_X: no estimators given");
  const Index dim = problem.d_in() * problem.d_out();
  std::vector<HermitianMatrix> out;
  out.reserve(estimators.size());
  for (const auto& est : estimators) {
    const std::vector<double> r = problem.signed_rewards(est);
    ComplexMatrix x = ComplexMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double coeff = problem.prior()[k] * r[k];
      if (coeff != 0.0) x += coeff * problem.chois()[k].matrix().matrix();
    }
    out.emplace_back(x);
  }
  return out;
}

std::pair<HypothesisGrid, std::vector<ParameterPoint>> flatten_multiparameter(
    const std::vector<std::vector<double>>& axis_grids,
    const std::vector<std::vector<double>>& axis_estimators) {
  if (axis_grids.empty() || axis_grids.size() > 3)
    throw InvalidArgument("flatten_multiparameter: need 1 to 3 axes");
  if (axis_estimators.size() != axis_grids.size())
    throw InvalidArgument("flatten_multiparameter: axis count mismatch");
  auto product = [](const std::vector<std::vector<double>>& axes) {
    std::vector<ParameterPoint> out{ParameterPoint{}};
    for (const auto& axis : axes) {
      if (axis.empty())
        throw InvalidArgument("flatten_multiparameter: empty axis");
      std::vector<ParameterPoint> next;
      next.reserve(out.size() * axis.size());
      for (const auto& prefix : out)
        for (double v : axis) {
          ParameterPoint p = prefix;
          p.push_back(v);
          next.push_back(std::move(p));
        }
      out = std::move(next);
    }
    return out;
  };
  std::vector<Index> counts;
  for (const auto& axis : axis_grids)
    counts.push_back(static_cast<Index>(axis.size()));
  return {HypothesisGrid(product(axis_grids), counts), product(axis_estimators)};
}

}  // namespace qmetro
