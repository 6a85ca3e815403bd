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

using namespace qmetro;

namespace {

void check_valid(const ChoiOperator& c) {
  CHECK(is_psd(c.matrix()));
  const auto out = partial_trace(c.matrix(), c.dims(), kOutputFactor);
  CHECK(max_abs(out.matrix() - ComplexMatrix::Identity(c.d_in(), c.d_in())) < 1e-9);
}

// Lindblad generator with H = eps |1><1|, jump rates J(1 +/- N) down and J N up.
ComplexMatrix lindblad(const ComplexMatrix& rho, double eps, double down,
                       double up, bool hamiltonian) {
  ComplexMatrix lower = ComplexMatrix::Zero(2, 2);  // |0><1|
  lower(0, 1) = 1;
  const ComplexMatrix raise = lower.adjoint();
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(1, 1) = eps;
  auto dissipator = [&](const ComplexMatrix& l) {
    const ComplexMatrix ll = l.adjoint() * l;
    return ComplexMatrix(l * rho * l.adjoint() - 0.5 * (ll * rho + rho * ll));
  };
  ComplexMatrix out = down * dissipator(lower) + up * dissipator(raise);
  if (hamiltonian) out += Complex(0, -1) * (h * rho - rho * h);
  return out;
}

// Choi operator by RK4 integration of the master equation on |i><j|.
ComplexMatrix integrated_choi(const ThermalChannelParams& p, double theta) {
  const double n = occupation(theta, p.epsilon, p.statistics);
  const double up = p.coupling * n;
  const double down = p.statistics == Statistics::Bosonic ? p.coupling * (1 + n)
                                                          : p.coupling * (1 - n);
  const int steps = 20000;
  const double dt = p.time / steps;
  ComplexMatrix choi = ComplexMatrix::Zero(4, 4);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      ComplexMatrix rho = ComplexMatrix::Zero(2, 2);
      rho(i, j) = 1;
      auto f = [&](const ComplexMatrix& r) {
        return lindblad(r, p.epsilon, down, up, p.keep_hamiltonian_phase);
      };
      for (int s = 0; s < steps; ++s) {
        const ComplexMatrix k1 = f(rho);
        const ComplexMatrix k2 = f(rho + 0.5 * dt * k1);
        const ComplexMatrix k3 = f(rho + 0.5 * dt * k2);
        const ComplexMatrix k4 = f(rho + dt * k3);
        rho += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      }
      choi.block(i * 2, j * 2, 2, 2) = rho;
    }
  return choi;
}

}  // namespace

TEST_CASE("choi of unitary") {
  const auto id = choi_of_unitary(ComplexMatrix::Identity(2, 2));
  CHECK(id.matrix().trace() == doctest::Approx(2.0));
  CHECK(id.matrix().eigenvalues()(2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(id.matrix().eigenvalues()(3) == doctest::Approx(2.0));
  CHECK(std::abs(id.matrix()(0, 3) - 1.0) < 1e-14);
  check_valid(id);

  const double phi = 0.7;
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  u(1, 1) = std::polar(1.0, phi);
  const auto c = choi_of_unitary(u);
  CHECK(std::abs(c.matrix()(0, 3) - std::polar(1.0, -phi)) < 1e-14);

  ComplexMatrix bad = ComplexMatrix::Identity(2, 2);
  bad(0, 0) = 2;
  CHECK_THROWS(choi_of_unitary(bad));
}

TEST_CASE("phase channel") {
  const auto id = choi_of_unitary(ComplexMatrix::Identity(3, 3)).matrix().matrix();
  CHECK(max_abs(phase_channel(3, 0.0).matrix().matrix() - id) < 1e-14);
  CHECK(max_abs(phase_channel(3, 2 * std::numbers::pi).matrix().matrix() - id) < 1e-12);
  RealVector d(3);
  d << 1, -1, 1;
  const ComplexMatrix u = d.cast<Complex>().asDiagonal();
  CHECK(max_abs(phase_channel(3, std::numbers::pi).matrix().matrix() -
                choi_of_unitary(u).matrix().matrix()) < 1e-12);
  check_valid(phase_channel(4, 1.3));
}

TEST_CASE("occupation numbers") {
  CHECK(occupation(0.1 / std::log(2.0), 0.1, Statistics::Bosonic) ==
        doctest::Approx(1.0));
  CHECK(occupation(0.1, 0.1, Statistics::Bosonic) ==
        doctest::Approx(1.0 / (std::exp(1.0) - 1.0)));
  CHECK(occupation(0.1, 0.1, Statistics::Bosonic) == doctest::Approx(0.581977).epsilon(1e-6));
  CHECK(occupation(1e6, 0.1, Statistics::Fermionic) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(occupation(1.0, 0.1, Statistics::Fermionic) < 0.5);
  CHECK_THROWS_AS(occupation(0.0, 0.1, Statistics::Bosonic), InvalidArgument);
}

TEST_CASE("thermal channel limits") {
  ThermalChannelParams p;
  const auto id = choi_of_unitary(ComplexMatrix::Identity(2, 2)).matrix().matrix();
  CHECK(max_abs(thermal_channel(p, 0.7).matrix().matrix() - id) < 1e-14);

  const double theta = 0.7;
  const double n = occupation(theta, p.epsilon, p.statistics);
  p.time = 1e3 / (p.coupling * (2 * n + 1));
  const auto c = thermal_channel(p, theta);
  check_valid(c);
  const auto gibbs = partial_trace(c.matrix(), c.dims(), kInputFactor);
  CHECK(gibbs(0, 0).real() == doctest::Approx(2 * (n + 1) / (2 * n + 1)));
  CHECK(gibbs(1, 1).real() == doctest::Approx(2 * n / (2 * n + 1)));
  CHECK(std::abs(c.matrix()(0, 3)) < 1e-12);

  p.time = 0.3;
  ThermalChannelParams q = p;
  q.time += 1e-6;
  CHECK(max_abs(thermal_channel(p, 1.0).matrix().matrix() -
                thermal_channel(q, 1.0).matrix().matrix()) < 1e-5);
  p.time = -1;
  CHECK_THROWS_AS(thermal_channel(p, 1.0), InvalidArgument);
}

TEST_CASE("thermal channel matches the integrated master equation") {
  for (auto stats : {Statistics::Bosonic, Statistics::Fermionic})
    for (bool phase : {false, true}) {
      ThermalChannelParams p;
      p.statistics = stats;
      p.time = 0.05;
      p.keep_hamiltonian_phase = phase;
      for (double theta : {0.2, 1.0}) {
        const auto c = thermal_channel(p, theta);
        check_valid(c);
        CHECK(max_abs(c.matrix().matrix() - integrated_choi(p, theta)) < 1e-10);
      }
    }
  // The (1,1) entry from the closed form.
  ThermalChannelParams p;
  p.time = 0.05;
  const double n = occupation(1.0, 0.1, Statistics::Bosonic);
  const double g = 2 * (2 * n + 1);
  const double e = std::exp(-g * p.time);
  CHECK(thermal_channel(p, 1.0).matrix()(1, 1).real() ==
        doctest::Approx((n - n * e) / (2 * n + 1)));
}

TEST_CASE("su2 channel") {
  const auto id = choi_of_unitary(ComplexMatrix::Identity(2, 2)).matrix().matrix();
  CHECK(max_abs(su2_channel({0, 0, 0}).matrix().matrix() - id) < 1e-14);
  ComplexMatrix rz = ComplexMatrix::Zero(2, 2);
  rz(0, 0) = std::polar(1.0, -std::numbers::pi / 2);
  rz(1, 1) = std::polar(1.0, std::numbers::pi / 2);
  CHECK(max_abs(su2_channel({0, 0, std::numbers::pi / 2}).matrix().matrix() -
                choi_of_unitary(rz).matrix().matrix()) < 1e-12);

  // Against exp(-i theta.sigma) from the eigendecomposition of theta.sigma.
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  for (int rep = 0; rep < 20; ++rep) {
    const std::array<double, 3> t{u(rng), u(rng), u(rng)};
    ComplexMatrix gen(2, 2);
    gen << t[2], Complex(t[0], -t[1]), Complex(t[0], t[1]), -t[2];
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(gen);
    const ComplexVector phases =
        (Complex(0, -1) * es.eigenvalues().cast<Complex>()).array().exp();
    const ComplexMatrix expect =
        es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    CHECK(max_abs(su2_unitary(t) - expect) < 1e-10);
    const auto c = su2_channel(t);
    check_valid(c);
    CHECK(c.matrix().eigenvalues()(3) == doctest::Approx(2.0));
  }
  // Tiny rotations go through the series branch.
  CHECK(max_abs(su2_unitary({1e-10, 0, 0}) - ComplexMatrix::Identity(2, 2)) < 1e-9);
}

TEST_CASE("fidelity of unitary chois is |tr(U^dag V)|^2 / d^2") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int rep = 0; rep < 10; ++rep) {
    const std::array<double, 3> a{u(rng), u(rng), u(rng)}, b{u(rng), u(rng), u(rng)};
    const double want =
        std::norm((su2_unitary(a).adjoint() * su2_unitary(b)).trace()) / 4.0;
    CHECK(choi_fidelity(su2_channel(a), su2_channel(b)) == doctest::Approx(want));
  }
}
