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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmetro/problem.hpp"
#include "qmetro/sdp.hpp"

namespace qmetro {

/// Tester, estimators and the score they achieve.
struct Protocol {
  Tester tester = Tester::trivial(1, 1);
  std::vector<ParameterPoint> estimators;
  double score = 0.0;  ///< natural units (reward or cost)
  /// Seesaw only: score after every half-step, starting with the initial
  /// protocol; estimator steps at odd positions, tester steps at even ones.
  std::vector<double> history;
  int iterations = 0;
  bool solver_warning = false;
  double max_primal_residual = 0.0;
  double max_dual_gap = 0.0;
};

enum class EstimatorUpdate {
  ClosedFormCos2,
  ClosedFormMse,
  ClosedFormMsle,
  GradientDescent,
};

/// Closed form where one exists, gradient ascent otherwise.
EstimatorUpdate default_update(RewardKind kind);
std::string to_string(EstimatorUpdate update);

struct GradientOptions {
  double fd_step = 1e-5;
  double grad_tol = 1e-6;
  int max_steps = 500;
  int restarts = 5;
};

struct SeesawConfig {
  double score_gap_tol = 1e-6;
  int max_iters = 200;
  std::optional<EstimatorUpdate> estimator_update;
  GradientOptions gradient;
  std::uint64_t seed = 0;
  /// When the seesaw stalls, the tester step also tries moving the estimator
  /// of an unused outcome (zero probability, a copy of another outcome's
  /// estimator, or else the rarest one) next to one of the most spread-out
  /// posteriors and keeps the best program. Lets the seesaw split outcomes
  /// instead of stopping with dead ones.
  bool reassign_idle_outcomes = true;
  TesterConstraintSet constraints = TesterConstraintSet::general();
  SdpOptions sdp = default_sdp_options();
};

struct Posterior {
  double probability = 0.0;     ///< p(i)
  std::vector<double> weights;  ///< p(theta_k | i)
};

/// Outcome probabilities below this leave the posterior undefined.
inline constexpr double kMinOutcomeProbability = 1e-12;

/// Throws ZeroOutcomeProbability when p(i) < kMinOutcomeProbability.
Posterior posterior(const EstimationProblem& problem,
                    const HermitianMatrix& element);
/// One entry per outcome; empty for outcomes with negligible probability.
std::vector<std::optional<Posterior>> posteriors(const EstimationProblem& problem,
                                                 const Tester& tester);

/// Single-outcome closed forms over 1-D values with posterior weights.
double cos2_estimate(const std::vector<double>& values,
                     const std::vector<double>& weights);
double mse_estimate(const std::vector<double>& values,
                    const std::vector<double>& weights);
double msle_estimate(const std::vector<double>& values,
                     const std::vector<double>& weights);

/// Outcome-wise estimator updates. Outcomes without a posterior keep their
/// current estimator.
std::vector<ParameterPoint> update_estimators_cos2(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current);
std::vector<ParameterPoint> update_estimators_mse(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current);
std::vector<ParameterPoint> update_estimators_msle(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current);
/// Finite-difference ascent on f_i(est) = sum_k p(theta_k|i) r(theta_k, est)
/// (signed convention) from the current estimator plus random restarts in
/// the bounding box of the grid. Never returns a worse estimator.
std::vector<ParameterPoint> update_estimators_gradient(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current, const GradientOptions& options,
    std::uint64_t seed);

/// Signed conditional objective sum_k w_k r(theta_k, est) of one outcome.
double conditional_reward(const EstimationProblem& problem,
                          const std::vector<double>& weights,
                          const ParameterPoint& estimate);

/// Score of a tester with the given estimators, natural units.
double protocol_score(const EstimationProblem& problem, const Tester& tester,
                      const std::vector<ParameterPoint>& estimators);

/// Discrimination: N_H = N_O, estimators equal to the grid points.
Protocol method1(const EstimationProblem& problem,
                 const TesterConstraintSet& constraints =
                     TesterConstraintSet::general(),
                 const SdpOptions& sdp = default_sdp_options());

/// Best tester for fixed estimators.
Protocol method2(const EstimationProblem& problem,
                 const std::vector<ParameterPoint>& estimators,
                 const TesterConstraintSet& constraints =
                     TesterConstraintSet::general(),
                 const SdpOptions& sdp = default_sdp_options());

/// Seesaw between the tester program and the estimator update, starting
/// from initial. The score never gets worse than the initial one.
Protocol method3(const EstimationProblem& problem, const Protocol& initial,
                 const SeesawConfig& config = {});

/// Seesaw over product testers rho^T (x) M_i: POVM program, probe state
/// eigenproblem and estimator update in turn, from `starts` random pure
/// probe states; the best run is kept.
Protocol product_seesaw(const EstimationProblem& problem,
                        const std::vector<ParameterPoint>& estimators,
                        const SeesawConfig& config, int starts = 5);

struct VariantLadder {
  Protocol general;
  Protocol ppt;      ///< outer bound on entanglement-free strategies
  Protocol product;  ///< inner bound from the product seesaw
};

/// Product seesaw, then the PPT seesaw from the best of the initial and
/// product estimators, then the general seesaw from the best of the initial
/// and PPT estimators. Each rung starts from a point feasible for it, so
/// score(product) <= score(ppt) <= score(general) in the maximization
/// convention.
VariantLadder no_entanglement_bounds(const EstimationProblem& problem,
                                     const std::vector<ParameterPoint>& estimators,
                                     const SeesawConfig& config);

struct ConvergenceReport {
  std::vector<Index> n_outcomes;  ///< points used in the fit
  std::vector<double> gaps;       ///< |S_ref - S_N|, clamped at the floor
  double reference = 0.0;
  double slope = 0.0;             ///< least-squares slope of log gap vs log N
  double expected_slope = -1.0;   ///< -2 for MSE and cos^2, -1 otherwise
  bool converged = false;         ///< every gap at the floor
  /// Slope comparisons allow 1e-9 for rounding in the fit.
  bool slope_at_most_one() const { return converged || slope <= -1.0 + 1e-9; }
  bool meets_expected() const {
    return converged || slope <= expected_slope + 1e-9;
  }
};

/// Log-log fit of score gaps against a reference score. Without an explicit
/// reference the entry with the largest N is used and left out of the fit.
ConvergenceReport convergence_monitor(const std::vector<Index>& n_outcomes,
                                      const std::vector<double>& scores,
                                      RewardKind kind,
                                      std::optional<double> reference = {},
                                      double floor = 1e-10);

}  // namespace qmetro
