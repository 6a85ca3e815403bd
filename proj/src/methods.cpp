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

#include "qmetro/methods.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "qmetro/channels.hpp"

namespace qmetro {

EstimatorUpdate default_update(RewardKind kind) {
  switch (kind) {
    case RewardKind::Cos2: return EstimatorUpdate::ClosedFormCos2;
    case RewardKind::Mse: return EstimatorUpdate::ClosedFormMse;
    case RewardKind::Msle: return EstimatorUpdate::ClosedFormMsle;
    default: return EstimatorUpdate::GradientDescent;
  }
}

std::string to_string(EstimatorUpdate update) {
  switch (update) {
    case EstimatorUpdate::ClosedFormCos2: return "closed_form_cos2";
    case EstimatorUpdate::ClosedFormMse: return "closed_form_mse";
    case EstimatorUpdate::ClosedFormMsle: return "closed_form_msle";
    case EstimatorUpdate::GradientDescent: return "gradient_descent";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Posteriors and estimator updates.

Posterior posterior(const EstimationProblem& problem,
                    const HermitianMatrix& element) {
  Posterior post;
  post.weights.resize(problem.num_hypotheses());
  double total = 0.0;
  for (std::size_t k = 0; k < problem.num_hypotheses(); ++k) {
    // Slightly negative overlaps come from solver round-off.
    const double overlap =
        std::max(0.0, trace_product(problem.chois()[k].matrix(), element));
    post.weights[k] = problem.prior()[k] * overlap;
    total += post.weights[k];
  }
  post.probability = total;
  if (total < kMinOutcomeProbability)
    throw ZeroOutcomeProbability("posterior: outcome probability below 1e-12",
                                 total);
  for (double& w : post.weights) w /= total;
  return post;
}

std::vector<std::optional<Posterior>> posteriors(const EstimationProblem& problem,
                                                 const Tester& tester) {
  std::vector<std::optional<Posterior>> out;
  out.reserve(tester.size());
  for (const auto& element : tester.elements()) {
    try {
      out.emplace_back(posterior(problem, element));
    } catch (const ZeroOutcomeProbability&) {
      out.emplace_back(std::nullopt);
    }
  }
  return out;
}

double cos2_estimate(const std::vector<double>& values,
                     const std::vector<double>& weights) {
  double s = 0.0, c = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    s += weights[k] * std::sin(values[k]);
    c += weights[k] * std::cos(values[k]);
  }
  const double est = std::atan2(s, c);
  return est < 0.0 ? est + 2.0 * std::numbers::pi : est;
}

double mse_estimate(const std::vector<double>& values,
                    const std::vector<double>& weights) {
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) m += weights[k] * values[k];
  return m;
}

double msle_estimate(const std::vector<double>& values,
                     const std::vector<double>& weights) {
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!(values[k] > 0.0))
      throw InvalidArgument("msle_estimate: parameter values must be positive");
    m += weights[k] * std::log(values[k]);
  }
  return std::exp(m);
}

namespace {

using ScalarEstimate = double (*)(const std::vector<double>&,
                                  const std::vector<double>&);

std::vector<ParameterPoint> closed_form_update(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current, ScalarEstimate estimate,
    const char* what) {
  if (problem.grid().arity() != 1) {
    std::ostringstream msg;
    msg << what << ": closed form needs a one-component parameter";
    throw InvalidArgument(msg.str());
  }
  if (posts.size() != current.size())
    throw DimensionMismatch("estimator update: posterior count != estimators");
  std::vector<double> values;
  values.reserve(problem.num_hypotheses());
  for (const auto& p : problem.grid().points()) values.push_back(p[0]);
  std::vector<ParameterPoint> out = current;
  for (std::size_t i = 0; i < posts.size(); ++i)
    if (posts[i]) out[i] = {estimate(values, posts[i]->weights)};
  return out;
}

}  // namespace

std::vector<ParameterPoint> update_estimators_cos2(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current) {
  return closed_form_update(problem, posts, current, cos2_estimate,
                            "update_estimators_cos2");
}

std::vector<ParameterPoint> update_estimators_mse(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current) {
  return closed_form_update(problem, posts, current, mse_estimate,
                            "update_estimators_mse");
}

std::vector<ParameterPoint> update_estimators_msle(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current) {
  return closed_form_update(problem, posts, current, msle_estimate,
                            "update_estimators_msle");
}

double conditional_reward(const EstimationProblem& problem,
                          const std::vector<double>& weights,
                          const ParameterPoint& estimate) {
  const std::vector<double> r = problem.signed_rewards(estimate);
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) s += weights[k] * r[k];
  return s;
}

namespace {

using Objective = std::function<double(const ParameterPoint&)>;

// Posterior-averaged objective of one outcome. For the Choi fidelity the
// average over hypotheses folds into one operator.
Objective outcome_objective(const EstimationProblem& problem,
                            const std::vector<double>& weights) {
  if (problem.reward().kind() == RewardKind::ChoiFidelity && problem.channel()) {
    const Index dim = problem.d_in() * problem.d_out();
    ComplexMatrix avg = ComplexMatrix::Zero(dim, dim);
    for (std::size_t k = 0; k < weights.size(); ++k)
      if (weights[k] != 0.0) avg += weights[k] * problem.chois()[k].matrix().matrix();
    const HermitianMatrix mean(avg);
    const double norm = static_cast<double>(problem.d_in() * problem.d_in());
    const ChannelMap channel = problem.channel();
    return [mean, norm, channel](const ParameterPoint& est) {
      return trace_product(mean, channel(est).matrix()) / norm;
    };
  }
  return [&problem, weights](const ParameterPoint& est) {
    return conditional_reward(problem, weights, est);
  };
}

struct AscentResult {
  ParameterPoint point;
  double value;
};

AscentResult ascend(const Objective& f, ParameterPoint x,
                    const GradientOptions& opt) {
  // BFGS on -f with central-difference gradients and Armijo backtracking.
  const auto n = static_cast<Index>(x.size());
  auto gradient = [&](const ParameterPoint& at) {
    RealVector g(n);
    for (Index c = 0; c < n; ++c) {
      ParameterPoint xp = at, xm = at;
      xp[c] += opt.fd_step;
      xm[c] -= opt.fd_step;
      g(c) = (f(xp) - f(xm)) / (2.0 * opt.fd_step);
    }
    return g;
  };
  double fx = f(x);
  RealVector g = gradient(x);
  RealMatrix h = RealMatrix::Identity(n, n);  // inverse Hessian of -f
  ParameterPoint trial(x.size());
  for (int it = 0; it < opt.max_steps && g.norm() >= opt.grad_tol; ++it) {
    RealVector d = h * g;
    double slope = g.dot(d);
    if (!(slope > 0.0)) {
      h.setIdentity();
      d = g;
      slope = g.squaredNorm();
    }
    double step = 1.0;
    bool accepted = false;
    while (step > 1e-12) {
      for (Index c = 0; c < n; ++c) trial[c] = x[c] + step * d(c);
      const double ft = f(trial);
      if (ft >= fx + 1e-4 * step * slope) {
        accepted = true;
        fx = ft;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const RealVector sk = step * d;
    x = trial;
    const RealVector g_new = gradient(x);
    const RealVector yk = g - g_new;  // gradient change of -f
    g = g_new;
    const double sy = sk.dot(yk);
    if (sy > 1e-12 * sk.norm() * yk.norm()) {
      const RealVector hy = h * yk;
      h += ((sy + yk.dot(hy)) / (sy * sy)) * (sk * sk.transpose()) -
           (hy * sk.transpose() + sk * hy.transpose()) / sy;
    }
  }
  return {x, fx};
}

}  // namespace

std::vector<ParameterPoint> update_estimators_gradient(
    const EstimationProblem& problem,
    const std::vector<std::optional<Posterior>>& posts,
    const std::vector<ParameterPoint>& current, const GradientOptions& options,
    std::uint64_t seed) {
  if (posts.size() != current.size())
    throw DimensionMismatch("estimator update: posterior count != estimators");
  const std::size_t arity = problem.grid().arity();
  ParameterPoint lo(arity, std::numeric_limits<double>::infinity());
  ParameterPoint hi(arity, -std::numeric_limits<double>::infinity());
  for (const auto& p : problem.grid().points())
    for (std::size_t c = 0; c < arity; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }

  std::vector<ParameterPoint> out = current;
  for (std::size_t i = 0; i < posts.size(); ++i) {
    if (!posts[i]) continue;
    const Objective f = outcome_objective(problem, posts[i]->weights);
    const double base = f(current[i]);
    AscentResult best = ascend(f, current[i], options);
    std::seed_seq seq{seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    for (int r = 0; r < options.restarts; ++r) {
      ParameterPoint start(arity);
      for (std::size_t c = 0; c < arity; ++c)
        start[c] = std::uniform_real_distribution<double>(lo[c], hi[c])(rng);
      AscentResult cand = ascend(f, start, options);
      if (cand.value > best.value) best = std::move(cand);
    }
    if (best.value >= base) out[i] = best.point;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Methods.

double protocol_score(const EstimationProblem& problem, const Tester& tester,
                      const std::vector<ParameterPoint>& estimators) {
  return problem.to_natural(tester_score(assemble_X(problem, estimators), tester));
}

namespace {

void absorb(Protocol& p, const SolveReport& report) {
  p.solver_warning = p.solver_warning || report.warning;
  p.max_primal_residual = std::max(p.max_primal_residual, report.primal_residual);
  p.max_dual_gap = std::max(p.max_dual_gap, report.dual_gap);
}

Protocol from_report(const EstimationProblem& problem, const SolveReport& report,
                     std::vector<ParameterPoint> estimators) {
  Protocol p;
  p.tester = report.tester;
  p.estimators = std::move(estimators);
  p.score = problem.to_natural(report.score);
  absorb(p, report);
  return p;
}

// Tester half-step of a seesaw: best tester for the given X, optionally
// informed by the current tester.
using TesterStep = std::function<SolveReport(const std::vector<HermitianMatrix>&,
                                             const Tester&)>;

std::vector<ParameterPoint> update_estimators(
    const EstimationProblem& problem, const Tester& tester,
    const std::vector<ParameterPoint>& current, const SeesawConfig& config,
    int iteration) {
  const auto posts = posteriors(problem, tester);
  switch (config.estimator_update.value_or(default_update(problem.reward().kind()))) {
    case EstimatorUpdate::ClosedFormCos2:
      return update_estimators_cos2(problem, posts, current);
    case EstimatorUpdate::ClosedFormMse:
      return update_estimators_mse(problem, posts, current);
    case EstimatorUpdate::ClosedFormMsle:
      return update_estimators_msle(problem, posts, current);
    case EstimatorUpdate::GradientDescent:
      return update_estimators_gradient(
          problem, posts, current, config.gradient,
          config.seed * 1000003ULL + static_cast<std::uint64_t>(iteration));
  }
  return current;
}

bool same_point(const ParameterPoint& a, const ParameterPoint& b) {
  for (std::size_t c = 0; c < a.size(); ++c)
    if (std::abs(a[c] - b[c]) > 1e-6 * (1.0 + std::abs(a[c]))) return false;
  return true;
}

// Alternative estimator sets for the tester step. Each candidate moves the
// estimator of the least useful outcome (zero probability, a copy of an
// earlier outcome's estimator, or else the rarest one) next to a live
// outcome, delta * std of its posterior away from that outcome's estimator
// or posterior mean, so the tester program can split the live outcome.
// Candidates are only adopted when the program improves on them.
std::vector<std::vector<ParameterPoint>> split_candidates(
    const EstimationProblem& problem, const Tester& tester,
    const std::vector<ParameterPoint>& est) {
  constexpr std::size_t kTargets = 3;
  constexpr double kDeltas[] = {0.003, 0.01, 0.03, 0.1, 0.3};
  // Outcomes this rare count as unused.
  constexpr double kUnused = 1e-7;
  const std::size_t n_out = tester.size();
  const std::size_t arity = problem.grid().arity();
  if (n_out < 2) return {};
  const auto posts = posteriors(problem, tester);
  auto prob = [&](std::size_t i) { return posts[i] ? posts[i]->probability : 0.0; };

  std::optional<std::size_t> idle;
  for (std::size_t i = 0; i < n_out && !idle; ++i) {
    if (prob(i) < kUnused) idle = i;
    for (std::size_t j = 0; j < i && !idle; ++j)
      if (prob(j) >= kUnused && same_point(est[i], est[j])) idle = i;
  }
  if (!idle) {
    idle = 0;
    for (std::size_t i = 1; i < n_out; ++i)
      if (prob(i) < prob(*idle)) idle = i;
  }

  struct Spread {
    double weight;
    std::size_t index;
    ParameterPoint mean;
    ParameterPoint std;
  };
  std::vector<Spread> live;
  for (std::size_t i = 0; i < n_out; ++i) {
    if (prob(i) < kUnused || i == *idle) continue;
    const auto& w = posts[i]->weights;
    ParameterPoint mean(arity, 0.0), sd(arity, 0.0);
    for (std::size_t k = 0; k < w.size(); ++k)
      for (std::size_t c = 0; c < arity; ++c) mean[c] += w[k] * problem.grid()[k][c];
    double total = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
      for (std::size_t c = 0; c < arity; ++c) {
        const double d = problem.grid()[k][c] - mean[c];
        sd[c] += w[k] * d * d;
      }
    for (std::size_t c = 0; c < arity; ++c) {
      total += sd[c];
      sd[c] = std::sqrt(sd[c]);
    }
    live.push_back({posts[i]->probability * total, i, mean, sd});
  }
  std::stable_sort(live.begin(), live.end(), [](const Spread& a, const Spread& b) {
    return a.weight > b.weight;
  });

  ParameterPoint lo(arity, std::numeric_limits<double>::infinity());
  ParameterPoint hi(arity, -std::numeric_limits<double>::infinity());
  for (const auto& p : problem.grid().points())
    for (std::size_t c = 0; c < arity; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  std::vector<std::vector<ParameterPoint>> out;
  for (std::size_t t = 0; t < std::min(kTargets, live.size()); ++t)
    for (double delta : kDeltas)
      for (double sign : {1.0, -1.0}) {
        // Split around the target's estimator: either the idle outcome moves
        // beside it, or both move apart symmetrically.
        const auto& centre = est[live[t].index];
        auto cand = est;
        for (std::size_t c = 0; c < arity; ++c)
          cand[*idle][c] = std::clamp(centre[c] + sign * delta * live[t].std[c],
                                      lo[c], hi[c]);
        out.push_back(cand);
        for (std::size_t c = 0; c < arity; ++c)
          cand[live[t].index][c] = std::clamp(
              centre[c] - sign * delta * live[t].std[c], lo[c], hi[c]);
        out.push_back(cand);
        // Or beside the posterior mean.
        cand = est;
        for (std::size_t c = 0; c < arity; ++c)
          cand[*idle][c] = std::clamp(
              live[t].mean[c] + sign * delta * live[t].std[c], lo[c], hi[c]);
        out.push_back(std::move(cand));
      }
  return out;
}

Protocol seesaw(const EstimationProblem& problem, const Protocol& initial,
                const SeesawConfig& config, const TesterStep& step) {
  if (!(config.score_gap_tol > 0.0))
    throw InvalidArgument("seesaw: score_gap_tol must be positive");
  if (initial.estimators.size() != initial.tester.size())
    throw DimensionMismatch("seesaw: estimator count != tester size");
  Protocol cur = initial;
  // Work in the maximization convention.
  double s = problem.to_signed(
      protocol_score(problem, initial.tester, initial.estimators));
  cur.history = {problem.to_natural(s)};
  cur.iterations = 0;
  for (int it = 1; it <= config.max_iters; ++it) {
    cur.iterations = it;
    const double slack = 1e-8 * (1.0 + std::abs(s));

    auto est = update_estimators(problem, cur.tester, cur.estimators, config, it);
    auto x = assemble_X(problem, est);
    double s_est = tester_score(x, cur.tester);
    if (s_est < s - slack) {
      std::ostringstream msg;
      msg << "estimator step lowered the signed score from " << s << " to "
          << s_est;
      throw NonMonotoneStep(msg.str());
    }
    if (s_est < s) {
      est = cur.estimators;
      x = assemble_X(problem, est);
      s_est = s;
    }
    cur.estimators = est;
    cur.history.push_back(problem.to_natural(s_est));

    double s_new = s_est;
    bool split = false;
    auto try_step = [&](const std::vector<ParameterPoint>& cand,
                        const std::vector<HermitianMatrix>& xc, bool is_split) {
      const SolveReport report = step(xc, cur.tester);
      absorb(cur, report);
      if (report.score > s_new) {
        s_new = report.score;
        cur.tester = report.tester;
        cur.estimators = cand;
        split = is_split;
      }
    };
    const Tester before = cur.tester;
    try_step(est, x, false);
    // Splitting is a way out of stalls only; while the plain seesaw makes
    // progress it is not worth the extra programs.
    if (config.reassign_idle_outcomes && s_new - s < config.score_gap_tol)
      for (const auto& cand : split_candidates(problem, before, est))
        try_step(cand, assemble_X(problem, cand), true);
    cur.history.push_back(problem.to_natural(s_new));
    const double gain = s_new - s;
    s = s_new;
    // A freshly split outcome starts close to its parent; give the next
    // estimator step a chance to pull them apart before stopping.
    if (gain < config.score_gap_tol && !split) break;
  }
  cur.score = problem.to_natural(s);
  return cur;
}

ComplexVector random_pure_state(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexVector v(d);
  for (Index k = 0; k < d; ++k) v(k) = Complex(g(rng), g(rng));
  return v / v.norm();
}

}  // namespace

Protocol method1(const EstimationProblem& problem,
                 const TesterConstraintSet& constraints, const SdpOptions& sdp) {
  return method2(problem, problem.grid().points(), constraints, sdp);
}

Protocol method2(const EstimationProblem& problem,
                 const std::vector<ParameterPoint>& estimators,
                 const TesterConstraintSet& constraints, const SdpOptions& sdp) {
  const auto x = assemble_X(problem, estimators);
  const SolveReport report =
      solve_tester_sdp(x, problem.d_in(), problem.d_out(), constraints, sdp);
  return from_report(problem, report, estimators);
}

Protocol method3(const EstimationProblem& problem, const Protocol& initial,
                 const SeesawConfig& config) {
  const TesterConstraintSet constraints = config.constraints;
  const SdpOptions sdp = config.sdp;
  const Index d_in = problem.d_in();
  const Index d_out = problem.d_out();
  return seesaw(problem, initial, config,
                [&](const std::vector<HermitianMatrix>& x, const Tester&) {
                  return solve_tester_sdp(x, d_in, d_out, constraints, sdp);
                });
}

Protocol product_seesaw(const EstimationProblem& problem,
                        const std::vector<ParameterPoint>& estimators,
                        const SeesawConfig& config, int starts) {
  if (starts < 1) throw InvalidArgument("product_seesaw: starts < 1");
  const Index d_in = problem.d_in();
  const SdpOptions sdp = config.sdp;
  const TesterStep step = [&](const std::vector<HermitianMatrix>& x,
                              const Tester& current) {
    // Current tester is rho^T (x) M_i: sigma = rho^T, M_i = tr_in T_i.
    const HermitianMatrix rho = current.sigma().transpose();
    std::vector<HermitianMatrix> povm;
    for (const auto& t : current.elements())
      povm.push_back(partial_trace(t, current.dims(), kInputFactor));
    const double before = tester_score(x, current);
    SolveReport by_povm = solve_povm_given_state(x, rho, sdp);
    if (by_povm.score < before) by_povm.povm = povm;
    SolveReport by_state = solve_state_given_povm(x, by_povm.povm, d_in);
    by_state.warning = by_povm.warning;
    by_state.primal_residual = by_povm.primal_residual;
    by_state.dual_gap = by_povm.dual_gap;
    return by_state;
  };

  std::mt19937_64 rng(config.seed);
  std::optional<Protocol> best;
  for (int s = 0; s < starts; ++s) {
    const HermitianMatrix rho =
        HermitianMatrix::projector(random_pure_state(d_in, rng));
    const auto x = assemble_X(problem, estimators);
    const SolveReport first = solve_povm_given_state(x, rho, sdp);
    const Protocol initial = from_report(problem, first, estimators);
    Protocol run = seesaw(problem, initial, config, step);
    if (!best || problem.to_signed(run.score) > problem.to_signed(best->score))
      best = std::move(run);
  }
  return *best;
}

VariantLadder no_entanglement_bounds(const EstimationProblem& problem,
                                     const std::vector<ParameterPoint>& estimators,
                                     const SeesawConfig& config) {
  VariantLadder ladder;
  ladder.product = product_seesaw(problem, estimators, config);

  auto better = [&](const Protocol& a, const Protocol& b) {
    return problem.to_signed(a.score) >= problem.to_signed(b.score) ? a : b;
  };
  auto rung = [&](const TesterConstraintSet& set, const Protocol& below) {
    const Protocol start =
        better(method2(problem, estimators, set, config.sdp),
               method2(problem, below.estimators, set, config.sdp));
    SeesawConfig c = config;
    c.constraints = set;
    return method3(problem, start, c);
  };
  ladder.ppt = rung(TesterConstraintSet::ppt(), ladder.product);
  ladder.general = rung(TesterConstraintSet::general(), ladder.ppt);
  return ladder;
}

// ---------------------------------------------------------------------------

ConvergenceReport convergence_monitor(const std::vector<Index>& n_outcomes,
                                      const std::vector<double>& scores,
                                      RewardKind kind,
                                      std::optional<double> reference,
                                      double floor) {
  if (n_outcomes.size() != scores.size() || n_outcomes.empty())
    throw DimensionMismatch("convergence_monitor: mismatched or empty input");
  ConvergenceReport report;
  report.expected_slope =
      kind == RewardKind::Mse || kind == RewardKind::Cos2 ? -2.0 : -1.0;
  std::size_t ref_index = scores.size();
  if (reference) {
    report.reference = *reference;
  } else {
    ref_index = static_cast<std::size_t>(
        std::max_element(n_outcomes.begin(), n_outcomes.end()) - n_outcomes.begin());
    report.reference = scores[ref_index];
  }
  for (std::size_t j = 0; j < scores.size(); ++j) {
    if (j == ref_index) continue;
    report.n_outcomes.push_back(n_outcomes[j]);
    report.gaps.push_back(std::max(floor, std::abs(report.reference - scores[j])));
  }
  report.converged =
      std::all_of(report.gaps.begin(), report.gaps.end(),
                  [&](double g) { return g <= floor; });
  const std::size_t m = report.gaps.size();
  if (m >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t j = 0; j < m; ++j) {
      const double lx = std::log(static_cast<double>(report.n_outcomes[j]));
      const double ly = std::log(report.gaps[j]);
      sx += lx;
      sy += ly;
      sxx += lx * lx;
      sxy += lx * ly;
    }
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom > 0.0) report.slope = (static_cast<double>(m) * sxy - sx * sy) / denom;
  }
  return report;
}

}  // namespace qmetro
