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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qmetro/cases.hpp"
#include "qmetro/methods.hpp"
#include "qmetro/realization.hpp"

using namespace qmetro;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_weights(std::size_t n, std::mt19937& rng) {
  std::exponential_distribution<double> e;
  std::vector<double> w(n);
  double total = 0;
  for (auto& x : w) total += x = e(rng);
  for (auto& x : w) x /= total;
  return w;
}

template <typename F>
double golden_min(F f, double lo, double hi, double tol = 1e-12) {
  const double r = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - r * (b - a), d = a + r * (b - a);
  while (b - a > tol) {
    if (f(c) < f(d)) {
      b = d;
    } else {
      a = c;
    }
    c = b - r * (b - a);
    d = a + r * (b - a);
  }
  return 0.5 * (a + b);
}

EstimationProblem two_point_phase() {
  const auto grid = HypothesisGrid::from_values({0.0, kPi});
  return EstimationProblem(
      grid, uniform_prior(grid), RewardFunction(RewardKind::Cos2),
      [](const ParameterPoint& t) { return phase_channel(3, t[0]); });
}

bool monotone(const Protocol& p, Direction dir) {
  for (std::size_t k = 1; k < p.history.size(); ++k) {
    const double step = p.history[k] - p.history[k - 1];
    if ((dir == Direction::Maximize ? step : -step) < -1e-8) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("discrimination of two antipodal phases") {
  const auto p = two_point_phase();
  const auto m1 = method1(p);
  CHECK(m1.score == doctest::Approx(1.0).epsilon(1e-7));
  const auto posts = posteriors(p, m1.tester);
  REQUIRE(posts.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    REQUIRE(posts[i]);
    CHECK(posts[i]->probability == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(posts[i]->weights[i] == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("posteriors are normalized and zero outcomes are flagged") {
  std::mt19937 rng(1);
  PhaseCase pc;
  const auto p = phase_problem(pc, 40);
  const auto m2 = method2(p, grid_estimators(0, 2 * kPi, 5));
  double total = 0;
  for (const auto& post : posteriors(p, m2.tester)) {
    if (!post) continue;
    total += post->probability;
    double s = 0;
    for (double w : post->weights) {
      CHECK(w >= -1e-12);
      s += w;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
  CHECK_THROWS_AS(posterior(p, HermitianMatrix::zero(9)), ZeroOutcomeProbability);
}

TEST_CASE("cos2 estimate matches a dense search") {
  std::mt19937 rng(2);
  const auto grid = make_grid(0, 2 * kPi, 50);
  for (int rep = 0; rep < 100; ++rep) {
    const auto w = random_weights(grid.size(), rng);
    const double est = cos2_estimate(grid, w);
    auto value = [&](double e) {
      double s = 0;
      for (std::size_t k = 0; k < grid.size(); ++k)
        s += w[k] * std::pow(std::cos((grid[k] - e) / 2), 2);
      return s;
    };
    double best = -1, arg = 0;
    for (int j = 0; j < 100000; ++j) {
      const double e = 2 * kPi * j / 100000;
      if (value(e) > best) best = value(e), arg = e;
    }
    CHECK(value(est) >= best - 1e-9);
    const double d = std::abs(std::remainder(est - arg, 2 * kPi));
    CHECK(d < 1e-4);
  }
}

TEST_CASE("mse estimate matches a ternary search") {
  const auto grid = make_grid(0.1, 2, 20);
  const std::vector<double> flat(grid.size(), 1.0 / grid.size());
  double mean = 0;
  for (double g : grid) mean += g / grid.size();
  CHECK(mse_estimate(grid, flat) == doctest::Approx(mean));

  std::mt19937 rng(3);
  for (int rep = 0; rep < 100; ++rep) {
    const auto w = random_weights(grid.size(), rng);
    auto cost = [&](long double e) {
      long double s = 0;
      for (std::size_t k = 0; k < grid.size(); ++k) s += w[k] * (grid[k] - e) * (grid[k] - e);
      return s;
    };
    // Long double: near the minimum the cost is flat to ~1e-16 over 1e-8.
    long double a = 0.1L, b = 2.0L;
    while (b - a > 1e-13L) {
      const long double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
      if (cost(m1) < cost(m2)) {
        b = m2;
      } else {
        a = m1;
      }
    }
    CHECK(std::abs(mse_estimate(grid, w) - static_cast<double>(0.5L * (a + b))) < 1e-8);
  }
}

TEST_CASE("msle estimate matches a golden-section search") {
  const auto grid = make_grid(0.1, 2, 30);
  std::mt19937 rng(4);
  for (int rep = 0; rep < 100; ++rep) {
    const auto w = random_weights(grid.size(), rng);
    auto cost = [&](double e) {
      double s = 0;
      for (std::size_t k = 0; k < grid.size(); ++k) s += w[k] * std::pow(std::log(e / grid[k]), 2);
      return s;
    };
    CHECK(std::abs(msle_estimate(grid, w) - golden_min(cost, 0.1, 2)) < 1e-6);
  }
  CHECK_THROWS_AS(msle_estimate({0.0, 1.0}, {0.5, 0.5}), InvalidArgument);
}

TEST_CASE("closed forms never lose to the current estimators") {
  ThermometryCase tc;
  tc.channel.time = 0.1;
  const auto p = thermometry_problem(tc, 60);
  const auto start = grid_estimators(0.1, 2, 4);
  const auto m2 = method2(p, start);
  const auto posts = posteriors(p, m2.tester);
  const auto next = update_estimators_mse(p, posts, start);
  CHECK(protocol_score(p, m2.tester, next) <= m2.score + 1e-12);
}

TEST_CASE("fidelity ascent finds the quaternion optimum") {
  // For unit quaternions q, a: tr(U_q^dag V_a) = 2 q.a, so the conditional
  // fidelity is a^T M a with M = sum_k w_k q_k q_k^T and its maximum is the
  // top eigenvalue of M.
  const auto p = su2_problem(Su2Case{}, 3);
  std::mt19937 rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    const auto w = random_weights(p.num_hypotheses(), rng);
    Eigen::Matrix4d m = Eigen::Matrix4d::Zero();
    for (std::size_t k = 0; k < w.size(); ++k) {
      const auto& t = p.grid()[k];
      const double n = std::sqrt(t[0] * t[0] + t[1] * t[1] + t[2] * t[2]);
      const double s = n < 1e-12 ? 1.0 : std::sin(n) / n;
      const Eigen::Vector4d q(std::cos(n), s * t[0], s * t[1], s * t[2]);
      m += w[k] * q * q.transpose();
    }
    const double best = Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(m).eigenvalues()(3);
    std::vector<std::optional<Posterior>> posts{Posterior{1.0, w}};
    const auto est = update_estimators_gradient(p, posts, {{0.1, 0.2, 0.3}}, {}, 7);
    CHECK(conditional_reward(p, w, est[0]) == doctest::Approx(best).epsilon(1e-6));
  }

  // Point mass: the estimate reproduces the channel.
  std::vector<double> point(p.num_hypotheses(), 0.0);
  point[13] = 1.0;
  std::vector<std::optional<Posterior>> posts{Posterior{1.0, point}};
  const auto est = update_estimators_gradient(p, posts, {{1.0, -1.0, 0.5}}, {}, 3);
  CHECK(conditional_reward(p, point, est[0]) > 1 - 1e-4);
}

TEST_CASE("symmetric posterior has a stationary midpoint") {
  const auto grid = HypothesisGrid({{-0.5, 0, 0}, {0.5, 0, 0}});
  const EstimationProblem p(grid, uniform_prior(grid),
                            RewardFunction(RewardKind::ChoiFidelity, [](const ParameterPoint& t) {
                              return su2_channel({t[0], t[1], t[2]});
                            }),
                            [](const ParameterPoint& t) { return su2_channel({t[0], t[1], t[2]}); });
  const std::vector<double> w{0.5, 0.5};
  const double h = 1e-5;
  for (int c = 0; c < 3; ++c) {
    ParameterPoint a{0, 0, 0}, b{0, 0, 0};
    a[c] += h;
    b[c] -= h;
    const double g = (conditional_reward(p, w, a) - conditional_reward(p, w, b)) / (2 * h);
    CHECK(std::abs(g) < 1e-8);
  }
}

TEST_CASE("phase estimation plateau") {
  PhaseCase pc;
  const auto p = phase_problem(pc, 200);
  const auto m2 = method2(p, grid_estimators(0, 2 * kPi, 3));
  const double target = 0.5 * (1 + std::cos(kPi / 4));
  CHECK(std::abs(m2.score - target) < 1e-3);
  // Already optimal: one seesaw round, no change.
  const auto m3 = method3(p, m2);
  CHECK(m3.iterations == 1);
  CHECK(m3.score == doctest::Approx(m2.score).epsilon(1e-7));
  CHECK(monotone(m3, p.direction()));
}

TEST_CASE("no information at t = 0") {
  ThermometryCase tc;
  const auto p = thermometry_problem(tc, 100);
  double mean = 0, second = 0;
  for (std::size_t k = 0; k < p.num_hypotheses(); ++k) {
    mean += p.prior()[k] * p.grid()[k][0];
    second += p.prior()[k] * p.grid()[k][0] * p.grid()[k][0];
  }
  const double variance = second - mean * mean;
  SeesawConfig cfg;
  const auto ladder = no_entanglement_bounds(p, grid_estimators(0.1, 2, 4), cfg);
  CHECK(std::abs(ladder.general.score - variance) < 1e-8);
  CHECK(std::abs(ladder.ppt.score - variance) < 1e-8);
  CHECK(std::abs(ladder.product.score - variance) < 1e-8);
}

TEST_CASE("entanglement ladder is ordered and monotone") {
  ThermometryCase tc;
  tc.channel.time = 0.05;
  const auto p = thermometry_problem(tc, 100);
  SeesawConfig cfg;
  cfg.seed = 11;
  const auto ladder = no_entanglement_bounds(p, grid_estimators(0.1, 2, 4), cfg);
  // Costs: general <= ppt <= product.
  CHECK(ladder.general.score <= ladder.ppt.score + 1e-7);
  CHECK(ladder.ppt.score <= ladder.product.score + 1e-7);
  CHECK(ladder.product.score - ladder.general.score > 1e-4);
  for (const auto* proto : {&ladder.general, &ladder.ppt, &ladder.product})
    CHECK(monotone(*proto, Direction::Minimize));
  CHECK(verify_tester(ladder.general.tester).ok());

  // Same seed, same answer.
  const auto again = product_seesaw(p, grid_estimators(0.1, 2, 4), cfg);
  CHECK(again.score == doctest::Approx(ladder.product.score).epsilon(1e-9));
}

TEST_CASE("projective rounding keeps the score") {
  ThermometryCase tc;
  tc.channel.time = 1.0;
  const auto p = thermometry_problem(tc, 100);
  const auto m3 = method3(p, method2(p, grid_estimators(0.1, 2, 4)));
  const auto refined = projective_refinement(p, m3);
  REQUIRE(refined);
  CHECK(refined->signed_score_change > -1e-7);
  CHECK(verify_realization(refined->realization, refined->protocol.tester).ok());
  CHECK(verify_tester(refined->protocol.tester).ok());
  for (const auto& s : povm_spectra(refined->realization)) {
    CHECK(s(0) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(s(1)) < 1e-9);
  }
}

TEST_CASE("convergence monitor") {
  const std::vector<Index> n{2, 4, 8, 16};
  std::vector<double> quad, lin;
  for (Index k : n) {
    quad.push_back(1.0 - 0.3 / double(k * k));
    lin.push_back(1.0 - 0.3 / double(k));
  }
  const auto q = convergence_monitor(n, quad, RewardKind::Mse, 1.0);
  CHECK(q.slope == doctest::Approx(-2.0));
  CHECK(q.meets_expected());
  const auto l = convergence_monitor(n, lin, RewardKind::Mse, 1.0);
  CHECK(l.slope == doctest::Approx(-1.0));
  CHECK(l.slope_at_most_one());
  CHECK_FALSE(l.meets_expected());
  const auto m = convergence_monitor(n, lin, RewardKind::Msle, 1.0);
  CHECK(m.meets_expected());

  // Largest N as reference, left out of the fit.
  const auto r = convergence_monitor(n, quad, RewardKind::Cos2);
  CHECK(r.reference == quad.back());
  CHECK(r.gaps.size() == 3);
  // Exact plateau: every gap hits the floor.
  const auto flat = convergence_monitor(n, {0.5, 0.5, 0.5, 0.5}, RewardKind::Cos2);
  CHECK(flat.converged);
  CHECK(flat.meets_expected());
  CHECK_THROWS_AS(convergence_monitor({2}, {1.0, 2.0}, RewardKind::Mse), DimensionMismatch);
}
