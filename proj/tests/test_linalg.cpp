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
#include <random>

#include "doctest.h"
#include "qmetro/linalg.hpp"

using namespace qmetro;

namespace {

ComplexMatrix random_matrix(Index r, Index c, std::mt19937& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix a(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) a(i, j) = Complex(g(rng), g(rng));
  return a;
}

HermitianMatrix random_hermitian(Index n, std::mt19937& rng) {
  const ComplexMatrix a = random_matrix(n, n, rng);
  return HermitianMatrix(0.5 * (a + a.adjoint()));
}

HermitianMatrix random_psd(Index n, std::mt19937& rng) {
  const ComplexMatrix a = random_matrix(n, n, rng);
  return HermitianMatrix(a * a.adjoint());
}

}  // namespace

TEST_CASE("kron follows the index formula") {
  CHECK(max_abs(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) -
                ComplexMatrix::Identity(4, 4)) == 0.0);
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1;
  RealVector diag(4);
  diag << 1, 1, 0, 0;
  CHECK(max_abs(kron(p0, ComplexMatrix::Identity(2, 2)) -
                ComplexMatrix(diag.cast<Complex>().asDiagonal())) == 0.0);

  std::mt19937 rng(1);
  const ComplexMatrix a = random_matrix(2, 3, rng), b = random_matrix(3, 2, rng);
  const ComplexMatrix k = kron(a, b);
  REQUIRE(k.rows() == 6);
  REQUIRE(k.cols() == 6);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 3; ++j)
      for (Index p = 0; p < 3; ++p)
        for (Index q = 0; q < 2; ++q)
          CHECK(std::abs(k(i * 3 + p, j * 2 + q) - a(i, j) * b(p, q)) < 1e-14);
}

TEST_CASE("partial trace matches the index sum") {
  std::mt19937 rng(2);
  const HermitianMatrix a = random_hermitian(6, rng);
  const BipartiteDims dims{2, 3};
  const HermitianMatrix t2 = partial_trace(a, dims, Subsystem::Second);
  const HermitianMatrix t1 = partial_trace(a, dims, Subsystem::First);
  for (Index i = 0; i < 2; ++i)
    for (Index j = 0; j < 2; ++j) {
      Complex s = 0;
      for (Index k = 0; k < 3; ++k) s += a(i * 3 + k, j * 3 + k);
      CHECK(std::abs(t2(i, j) - s) < 1e-13);
    }
  for (Index k = 0; k < 3; ++k)
    for (Index l = 0; l < 3; ++l) {
      Complex s = 0;
      for (Index i = 0; i < 2; ++i) s += a(i * 3 + k, i * 3 + l);
      CHECK(std::abs(t1(k, l) - s) < 1e-13);
    }
  CHECK(t1.trace() == doctest::Approx(a.trace()));

  // Swapping the factors exchanges the two traces.
  const HermitianMatrix swapped(swap_factors(a.matrix(), dims));
  CHECK(max_abs(partial_trace(swapped, {3, 2}, Subsystem::Second).matrix() -
                t1.matrix()) < 1e-13);

  // tr_2(A (x) B) = tr(B) A
  const HermitianMatrix x = random_hermitian(2, rng), y = random_hermitian(3, rng);
  const HermitianMatrix xy(kron(x.matrix(), y.matrix()));
  CHECK(max_abs(partial_trace(xy, dims, Subsystem::Second).matrix() -
                y.trace() * x.matrix()) < 1e-12);

  ComplexVector omega = ComplexVector::Zero(4);
  omega(0) = omega(3) = 1;
  CHECK(max_abs(partial_trace(HermitianMatrix::projector(omega), {2, 2},
                              Subsystem::Second).matrix() -
                ComplexMatrix::Identity(2, 2)) < 1e-14);
  CHECK_THROWS_AS(partial_trace(a, {2, 2}, Subsystem::First), DimensionMismatch);
}

TEST_CASE("partial transpose") {
  std::mt19937 rng(3);
  const HermitianMatrix x = random_hermitian(2, rng), y = random_hermitian(2, rng);
  const HermitianMatrix xy(kron(x.matrix(), y.matrix()));
  CHECK(max_abs(partial_transpose(xy, {2, 2}, Subsystem::First).matrix() -
                kron(x.matrix().transpose(), y.matrix())) < 1e-13);

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  const RealVector ev =
      partial_transpose(HermitianMatrix::projector(bell), {2, 2}, Subsystem::First)
          .eigenvalues();
  CHECK(ev(0) == doctest::Approx(-0.5));
  for (Index k = 1; k < 4; ++k) CHECK(ev(k) == doctest::Approx(0.5));

  const HermitianMatrix a = random_hermitian(6, rng);
  for (auto which : {Subsystem::First, Subsystem::Second}) {
    const auto once = partial_transpose(a, {2, 3}, which);
    CHECK(once.trace() == doctest::Approx(a.trace()));
    CHECK(max_abs(partial_transpose(once, {2, 3}, which).matrix() - a.matrix()) == 0.0);
  }
}

TEST_CASE("psd square roots") {
  CHECK(max_abs(psd_sqrt(HermitianMatrix::identity(3)).matrix() -
                ComplexMatrix::Identity(3, 3)) < 1e-14);
  RealMatrix d = RealMatrix::Zero(2, 2);
  d(0, 0) = 4;
  const auto h = HermitianMatrix::from_real(d);
  CHECK(psd_sqrt(h)(0, 0).real() == doctest::Approx(2.0));
  CHECK(std::abs(psd_sqrt(h)(1, 1)) < 1e-14);
  CHECK(psd_pinv_sqrt(h)(0, 0).real() == doctest::Approx(0.5));
  CHECK(std::abs(psd_pinv_sqrt(h)(1, 1)) < 1e-14);

  std::mt19937 rng(4);
  for (int rep = 0; rep < 10; ++rep) {
    const HermitianMatrix a = random_psd(3, rng);
    const ComplexMatrix s = psd_sqrt(a).matrix();
    CHECK(max_abs(s * s - a.matrix()) < 1e-10);
    // Rank-deficient: pinv_sqrt A pinv_sqrt is the support projector.
    const ComplexMatrix v = random_matrix(3, 2, rng);
    const HermitianMatrix low(v * v.adjoint());
    const ComplexMatrix p = psd_pinv_sqrt(low, kTolPsd, 1e-9).matrix();
    const ComplexMatrix proj = p * low.matrix() * p;
    CHECK(max_abs(proj - support_projector(low, 1e-9).matrix()) < 1e-9);
    CHECK(proj.trace().real() == doctest::Approx(2.0));
  }
  const auto neg = HermitianMatrix::identity(2) * -1.0;
  CHECK_THROWS_AS(psd_sqrt(neg), NotPSD);
}

TEST_CASE("schmidt decomposition") {
  ComplexVector prod = ComplexVector::Zero(4);
  prod(0) = 1;
  auto s = schmidt(prod, {2, 2});
  CHECK(s.coefficients(0) == doctest::Approx(1.0));
  CHECK(s.coefficients(1) == doctest::Approx(0.0));

  ComplexVector bell = ComplexVector::Zero(4);
  bell(0) = bell(3) = 1 / std::sqrt(2.0);
  s = schmidt(bell, {2, 2});
  CHECK(s.coefficients(0) == doctest::Approx(1 / std::sqrt(2.0)));
  CHECK(s.coefficients(1) == doctest::Approx(1 / std::sqrt(2.0)));

  std::mt19937 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    ComplexVector v = random_matrix(6, 1, rng).col(0);
    v.normalize();
    s = schmidt(v, {2, 3});
    CHECK(s.coefficients.squaredNorm() == doctest::Approx(1.0));
    CHECK((s.reconstruct() - v).norm() < 1e-10);
    CHECK(s.coefficients(0) >= s.coefficients(1));
  }
  CHECK_THROWS_AS(schmidt(ComplexVector::Zero(4), {2, 2}), InvalidArgument);
}

TEST_CASE("real embedding") {
  std::mt19937 rng(6);
  const RealMatrix sym = [&] {
    RealMatrix m = random_hermitian(3, rng).matrix().real();
    return RealMatrix(0.5 * (m + m.transpose()));
  }();
  const RealMatrix e = real_embed(HermitianMatrix::from_real(sym));
  CHECK((e.topLeftCorner(3, 3) - sym).norm() < 1e-14);
  CHECK((e.bottomRightCorner(3, 3) - sym).norm() < 1e-14);
  CHECK(e.topRightCorner(3, 3).norm() < 1e-14);

  ComplexMatrix y(2, 2);
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  const RealMatrix ey = real_embed(HermitianMatrix(y));
  RealMatrix expect(4, 4);
  expect << 0, 0, 0, 1, 0, 0, -1, 0, 0, -1, 0, 0, 1, 0, 0, 0;
  CHECK((ey - expect).norm() < 1e-14);
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(ey);
  CHECK(es.eigenvalues()(0) == doctest::Approx(-1));
  CHECK(es.eigenvalues()(1) == doctest::Approx(-1));
  CHECK(es.eigenvalues()(2) == doctest::Approx(1));
  CHECK(es.eigenvalues()(3) == doctest::Approx(1));

  int psd_count = 0;
  for (int rep = 0; rep < 20; ++rep) {
    // Shift half of them to PSD.
    HermitianMatrix a = random_hermitian(3, rng);
    if (rep % 2) a = a + HermitianMatrix::identity(3) * (1e-3 - a.min_eigenvalue());
    Eigen::SelfAdjointEigenSolver<RealMatrix> ee(real_embed(a));
    const bool embedded_psd = ee.eigenvalues()(0) >= -1e-12;
    CHECK(embedded_psd == is_psd(a));
    psd_count += embedded_psd;
    const HermitianMatrix b = random_hermitian(3, rng);
    CHECK((real_embed(a) * real_embed(b)).trace() ==
          doctest::Approx(2.0 * trace_product(a, b)));
  }
  CHECK(psd_count == 10);
}

TEST_CASE("hermitian construction") {
  ComplexMatrix m(2, 2);
  m << 1, Complex(0, 1), Complex(0, -1), 2;
  CHECK_NOTHROW(HermitianMatrix{m});
  m(0, 1) += 1e-3;
  CHECK_THROWS_AS(HermitianMatrix{m}, NotHermitian);
  m(0, 1) = Complex(0, 1) + 1e-8;
  const HermitianMatrix h(m);
  CHECK(h(0, 1) == std::conj(h(1, 0)));
}
