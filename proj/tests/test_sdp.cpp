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

#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "qmetro/channels.hpp"
#include "qmetro/problem.hpp"
#include "qmetro/sdp.hpp"

using namespace qmetro;

namespace {

HermitianMatrix random_hermitian(Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
  return HermitianMatrix(0.5 * (a + a.adjoint()));
}

HermitianMatrix random_state(Index n, std::mt19937& rng) {
  const HermitianMatrix h = random_hermitian(n, rng);
  const ComplexMatrix p = h.matrix() * h.matrix();
  return HermitianMatrix(p / p.trace().real());
}

std::vector<HermitianMatrix> random_operators(std::size_t count, Index dim,
                                              std::mt19937& rng) {
  std::vector<HermitianMatrix> x;
  for (std::size_t i = 0; i < count; ++i) x.push_back(random_hermitian(dim, rng));
  return x;
}

// Projective qubit measurement along the Bloch direction (theta, phi).
std::vector<HermitianMatrix> bloch_projectors(double theta, double phi) {
  ComplexVector up(2), down(2);
  up << std::cos(theta / 2), std::polar(std::sin(theta / 2), phi);
  down << -std::polar(std::sin(theta / 2), -phi), std::cos(theta / 2);
  return {HermitianMatrix::projector(up), HermitianMatrix::projector(down)};
}

}  // namespace

TEST_CASE("single-outcome tester is forced to sigma (x) 1") {
  const ChoiOperator c = phase_channel(3, 0.7);
  const auto report =
      solve_tester_sdp({c.matrix()}, 3, 3, TesterConstraintSet::general());
  CHECK(report.score == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(verify_tester(report.tester).ok());
}

TEST_CASE("two antipodal phases are perfectly discriminated") {
  const double pi = std::numbers::pi;
  // X(0) = C_0 / 2, X(pi) = C_pi / 2 since cos^2(pi/2) = 0.
  const std::vector<HermitianMatrix> x = {phase_channel(3, 0.0).matrix() * 0.5,
                                          phase_channel(3, pi).matrix() * 0.5};
  const auto report = solve_tester_sdp(x, 3, 3, TesterConstraintSet::general());
  CHECK(report.score == doctest::Approx(1.0).epsilon(1e-8));

  // Witness: probe (|0> + |1>)/sqrt(2), output projectors onto
  // (|0> +/- |1>)/sqrt(2).
  ComplexVector plus(3), minus(3), psi(3);
  plus << 1, 1, 0;
  minus << 1, -1, 0;
  psi << 1, 1, 0;
  const HermitianMatrix rho = HermitianMatrix::projector(psi / std::sqrt(2.0));
  const HermitianMatrix p0 = HermitianMatrix::projector(plus / std::sqrt(2.0));
  const HermitianMatrix p1 = HermitianMatrix::projector(minus / std::sqrt(2.0));
  const HermitianMatrix rest = HermitianMatrix::identity(3) - p0 - p1;
  const Tester witness({HermitianMatrix(kron(rho.transpose().matrix(),
                                             (p0 + rest).matrix())),
                        HermitianMatrix(kron(rho.transpose().matrix(), p1.matrix()))},
                       3, 3);
  CHECK(verify_tester(witness).ok());
  CHECK(tester_score(x, witness) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("constant reward scores one for every constraint set") {
  const HypothesisGrid grid = HypothesisGrid::from_values({0.1, 0.5, 1.3});
  ThermalChannelParams params;
  params.time = 0.2;
  const auto channel = [&](const ParameterPoint& th) {
    return thermal_channel(params, th[0]);
  };
  const auto reward = RewardFunction::custom(
      [](const ParameterPoint&, const ParameterPoint&) { return 1.0; },
      Direction::Maximize);
  const EstimationProblem problem(grid, uniform_prior(grid), reward, channel);
  const auto x = assemble_X(problem, {{0.1}, {0.5}, {1.0}});
  for (auto set : {TesterConstraintSet::general(), TesterConstraintSet::ppt()})
    CHECK(solve_tester_sdp(x, 2, 2, set).score ==
          doctest::Approx(1.0).epsilon(1e-8));
  ComplexVector v(2);
  v << 0.6, 0.8;
  CHECK(solve_povm_given_state(x, HermitianMatrix::projector(v)).score ==
        doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("projected and constrained embeddings give the same optimum") {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    const auto x = random_operators(3, 4, rng);
    SdpOptions projected, constrained;
    constrained.symmetry = EmbeddingSymmetry::Constrained;
    for (auto set : {TesterConstraintSet::general(), TesterConstraintSet::ppt()}) {
      const auto a = solve_tester_sdp(x, 2, 2, set, projected);
      const auto b = solve_tester_sdp(x, 2, 2, set, constrained);
      CHECK(a.score == doctest::Approx(b.score).epsilon(1e-7));
      CHECK(verify_tester(a.tester).ok());
      CHECK(verify_tester(b.tester).ok());
      CHECK(a.dual_gap < 1e-7);
    }
  }
}

TEST_CASE("PPT optimum lies between product and general optima") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 4; ++trial) {
    const auto x = random_operators(2, 4, rng);
    const double general =
        solve_tester_sdp(x, 2, 2, TesterConstraintSet::general()).score;
    const double ppt = solve_tester_sdp(x, 2, 2, TesterConstraintSet::ppt()).score;
    const double product =
        solve_povm_given_state(x, random_state(2, rng)).score;
    CHECK(ppt <= general + 1e-7);
    CHECK(product <= ppt + 1e-7);
  }
}

TEST_CASE("fixed-state POVM program matches projective enumeration") {
  // X_i = rho^T (x) P_i: the best qubit measurement is {P_i}; compare with a
  // dense Bloch-sphere scan over projective measurements.
  ComplexVector v(2);
  v << 1.0, Complex(0.0, 1.0);
  const HermitianMatrix rho = HermitianMatrix::projector(v / std::sqrt(2.0));
  const auto target = bloch_projectors(1.1, 0.4);
  std::vector<HermitianMatrix> x;
  for (const auto& p : target)
    x.push_back(HermitianMatrix(kron(rho.transpose().matrix(), p.matrix())));
  const auto report = solve_povm_given_state(x, rho);

  double best = -1.0;
  const int steps = 200;
  for (int a = 0; a <= steps; ++a)
    for (int b = 0; b < 2 * steps; ++b) {
      const auto m = bloch_projectors(std::numbers::pi * a / steps,
                                      std::numbers::pi * b / steps);
      std::vector<HermitianMatrix> el;
      for (const auto& p : m)
        el.push_back(HermitianMatrix(kron(rho.transpose().matrix(), p.matrix())));
      best = std::max(best, tester_score(x, Tester(el, 2, 2)));
    }
  CHECK(report.score >= best - 1e-9);
  CHECK(report.score == doctest::Approx(best).epsilon(1e-4));
  // tr((rho^T)^2) = 1 and tr(P_i^2) = 1 for both outcomes.
  CHECK(report.score == doctest::Approx(2.0).epsilon(1e-8));
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(max_abs(report.povm[i].matrix() - target[i].matrix()) < 1e-6);
}

TEST_CASE("state for a fixed POVM: eigenvector route agrees with the SDP") {
  SUBCASE("diagonal contraction") {
    // A = diag(0.2, 0.8) via a single outcome with M = 1 on a 1-dim output.
    const HermitianMatrix x =
        HermitianMatrix::from_real(RealVector(Eigen::Vector2d(0.2, 0.8)).asDiagonal());
    const auto report =
        solve_state_given_povm({x}, {HermitianMatrix::identity(1)}, 2);
    CHECK(report.score == doctest::Approx(0.8));
    CHECK(std::abs((*report.state)(1, 1)) == doctest::Approx(1.0));
  }
  SUBCASE("random instances") {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 5; ++trial) {
      const auto x = random_operators(2, 4, rng);
      const auto povm = bloch_projectors(0.3 + trial, 1.7 * trial);
      const auto eig = solve_state_given_povm(x, povm, 2);
      const auto sdp =
          solve_tester_sdp(x, 2, 2, TesterConstraintSet::fixed_povm(povm));
      CHECK(eig.score == doctest::Approx(sdp.score).epsilon(1e-7));
      CHECK(verify_tester(eig.tester).ok());
    }
  }
}

TEST_CASE("verify_tester flags constructed defects") {
  CHECK(verify_tester(Tester::trivial(2, 3)).ok());
  std::mt19937 rng(1);
  const auto x = random_operators(3, 4, rng);
  const auto report = solve_tester_sdp(x, 2, 2, TesterConstraintSet::general());
  std::vector<HermitianMatrix> el = report.tester.elements();
  el[0] = el[0] * 1.1;
  const auto diag = verify_tester(Tester(el, 2, 2));
  CHECK_FALSE(diag.ok());
  CHECK(diag.trace_deviation > 1e-3);
}
