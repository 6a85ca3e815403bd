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

#include "qmetro/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace qmetro {

namespace {

void require_dims(Index n, BipartiteDims dims, const char* op) {
  if (dims.first <= 0 || dims.second <= 0 || dims.total() != n) {
    std::ostringstream os;
    os << op << ": matrix dimension " << n << " does not factor as "
       << dims.first << " x " << dims.second;
    throw DimensionMismatch(os.str());
  }
}

void require_square(const ComplexMatrix& m, const char* op) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << op << ": expected a square matrix, got " << m.rows() << " x "
       << m.cols();
    throw DimensionMismatch(os.str());
  }
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> eigh(const HermitianMatrix& a) {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(a.matrix());
}

}  // namespace

HermitianMatrix::HermitianMatrix(const ComplexMatrix& m, double tol) {
  require_square(m, "HermitianMatrix");
  if (!m.allFinite()) throw InvalidArgument("HermitianMatrix: non-finite entry");
  const double asym = max_abs(m - m.adjoint());
  if (asym > tol) {
    std::ostringstream os;
    os << "HermitianMatrix: |A - A^dagger| = " << asym << " exceeds " << tol;
    throw NotHermitian(os.str());
  }
  m_ = 0.5 * (m + m.adjoint());
}

HermitianMatrix HermitianMatrix::zero(Index dim) {
  return HermitianMatrix(ComplexMatrix::Zero(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::identity(Index dim) {
  return HermitianMatrix(ComplexMatrix::Identity(dim, dim), Trusted{});
}

HermitianMatrix HermitianMatrix::from_real(const RealMatrix& m) {
  return HermitianMatrix(m.cast<Complex>());
}

HermitianMatrix HermitianMatrix::projector(const ComplexVector& v) {
  return HermitianMatrix(v * v.adjoint(), Trusted{});
}

RealVector HermitianMatrix::eigenvalues() const {
  return Eigen::SelfAdjointEigenSolver<ComplexMatrix>(m_, Eigen::EigenvaluesOnly)
      .eigenvalues();
}

double HermitianMatrix::min_eigenvalue() const {
  return dim() == 0 ? 0.0 : eigenvalues()(0);
}

double HermitianMatrix::max_eigenvalue() const {
  return dim() == 0 ? 0.0 : eigenvalues()(dim() - 1);
}

HermitianMatrix HermitianMatrix::operator+(const HermitianMatrix& o) const {
  if (o.dim() != dim()) throw DimensionMismatch("HermitianMatrix::operator+");
  return HermitianMatrix(m_ + o.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator-(const HermitianMatrix& o) const {
  if (o.dim() != dim()) throw DimensionMismatch("HermitianMatrix::operator-");
  return HermitianMatrix(m_ - o.m_, Trusted{});
}

HermitianMatrix HermitianMatrix::operator*(double s) const {
  return HermitianMatrix(m_ * s, Trusted{});
}

HermitianMatrix HermitianMatrix::transpose() const {
  return HermitianMatrix(m_.transpose(), Trusted{});
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& a, BipartiteDims dims,
                            Subsystem which) {
  require_square(a, "partial_trace");
  require_dims(a.rows(), dims, "partial_trace");
  const Index d1 = dims.first;
  const Index d2 = dims.second;
  if (which == Subsystem::Second) {
    ComplexMatrix out = ComplexMatrix::Zero(d1, d1);
    for (Index i = 0; i < d1; ++i)
      for (Index j = 0; j < d1; ++j)
        out(i, j) = a.block(i * d2, j * d2, d2, d2).trace();
    return out;
  }
  ComplexMatrix out = ComplexMatrix::Zero(d2, d2);
  for (Index i = 0; i < d1; ++i) out += a.block(i * d2, i * d2, d2, d2);
  return out;
}

HermitianMatrix partial_trace(const HermitianMatrix& a, BipartiteDims dims,
                              Subsystem which) {
  return HermitianMatrix(partial_trace(a.matrix(), dims, which));
}

ComplexMatrix partial_transpose(const ComplexMatrix& a, BipartiteDims dims,
                                Subsystem which) {
  require_square(a, "partial_transpose");
  require_dims(a.rows(), dims, "partial_transpose");
  const Index d1 = dims.first;
  const Index d2 = dims.second;
  ComplexMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < d1; ++i)
    for (Index j = 0; j < d1; ++j) {
      if (which == Subsystem::First)
        out.block(j * d2, i * d2, d2, d2) = a.block(i * d2, j * d2, d2, d2);
      else
        out.block(i * d2, j * d2, d2, d2) =
            a.block(i * d2, j * d2, d2, d2).transpose();
    }
  return out;
}

HermitianMatrix partial_transpose(const HermitianMatrix& a, BipartiteDims dims,
                                  Subsystem which) {
  return HermitianMatrix(partial_transpose(a.matrix(), dims, which));
}

ComplexMatrix swap_factors(const ComplexMatrix& a, BipartiteDims dims) {
  require_square(a, "swap_factors");
  require_dims(a.rows(), dims, "swap_factors");
  const Index d1 = dims.first;
  const Index d2 = dims.second;
  ComplexMatrix out(a.rows(), a.cols());
  for (Index i = 0; i < d1; ++i)
    for (Index k = 0; k < d2; ++k)
      for (Index j = 0; j < d1; ++j)
        for (Index l = 0; l < d2; ++l)
          out(k * d1 + i, l * d1 + j) = a(i * d2 + k, j * d2 + l);
  return out;
}

HermitianMatrix psd_sqrt(const HermitianMatrix& a, double tol_psd) {
  const auto es = eigh(a);
  const RealVector& w = es.eigenvalues();
  if (a.dim() > 0 && w(0) < -tol_psd)
    throw NotPSD("psd_sqrt: matrix is not positive semidefinite", w(0));
  const RealVector s = w.cwiseMax(0.0).cwiseSqrt();
  const ComplexMatrix& v = es.eigenvectors();
  return HermitianMatrix(v * s.cast<Complex>().asDiagonal() * v.adjoint());
}

HermitianMatrix psd_pinv_sqrt(const HermitianMatrix& a, double tol_psd,
                              double support_tol) {
  const auto es = eigh(a);
  const RealVector& w = es.eigenvalues();
  if (a.dim() > 0 && w(0) < -tol_psd)
    throw NotPSD("psd_pinv_sqrt: matrix is not positive semidefinite", w(0));
  RealVector s(w.size());
  for (Index i = 0; i < w.size(); ++i)
    s(i) = w(i) > support_tol ? 1.0 / std::sqrt(w(i)) : 0.0;
  const ComplexMatrix& v = es.eigenvectors();
  return HermitianMatrix(v * s.cast<Complex>().asDiagonal() * v.adjoint());
}

HermitianMatrix support_projector(const HermitianMatrix& a,
                                  double support_tol) {
  const auto es = eigh(a);
  const RealVector& w = es.eigenvalues();
  RealVector s(w.size());
  for (Index i = 0; i < w.size(); ++i) s(i) = w(i) > support_tol ? 1.0 : 0.0;
  const ComplexMatrix& v = es.eigenvectors();
  return HermitianMatrix(v * s.cast<Complex>().asDiagonal() * v.adjoint());
}

bool is_psd(const HermitianMatrix& a, double tol_psd) {
  return a.min_eigenvalue() >= -tol_psd;
}

ComplexVector SchmidtDecomposition::reconstruct() const {
  const Index d1 = left.rows();
  const Index d2 = right.rows();
  ComplexVector v = ComplexVector::Zero(d1 * d2);
  for (Index k = 0; k < coefficients.size(); ++k)
    for (Index i = 0; i < d1; ++i)
      v.segment(i * d2, d2) += coefficients(k) * left(i, k) * right.col(k);
  return v;
}

SchmidtDecomposition schmidt(const ComplexVector& v, BipartiteDims dims,
                             double norm_tol) {
  require_dims(v.size(), dims, "schmidt");
  const double norm = v.norm();
  if (norm == 0.0) throw InvalidArgument("schmidt: zero vector");
  if (std::abs(norm - 1.0) > norm_tol)
    throw InvalidArgument("schmidt: vector is not normalized");
  ComplexMatrix m(dims.first, dims.second);
  for (Index i = 0; i < dims.first; ++i)
    for (Index j = 0; j < dims.second; ++j) m(i, j) = v(i * dims.second + j);
  Eigen::JacobiSVD<ComplexMatrix> svd(m,
                                      Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Index k = std::min(dims.first, dims.second);
  SchmidtDecomposition out;
  out.coefficients = svd.singularValues().head(k);
  out.left = svd.matrixU().leftCols(k);
  out.right = svd.matrixV().leftCols(k).conjugate();
  return out;
}

RealMatrix real_embed(const HermitianMatrix& a) {
  const Index n = a.dim();
  const RealMatrix re = a.matrix().real();
  const RealMatrix im = a.matrix().imag();
  RealMatrix out(2 * n, 2 * n);
  out.topLeftCorner(n, n) = re;
  out.topRightCorner(n, n) = -im;
  out.bottomLeftCorner(n, n) = im;
  out.bottomRightCorner(n, n) = re;
  return out;
}

double max_abs(const ComplexMatrix& a) {
  return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("trace_product");
  // tr(AB) = sum_ij A_ij B_ji = sum_ij A_ij conj(B_ij) for Hermitian B.
  return (a.matrix().array() * b.matrix().conjugate().array()).real().sum();
}

bool is_unitary(const ComplexMatrix& u, double tol) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u -
                 ComplexMatrix::Identity(u.rows(), u.cols())) <= tol;
}

}  // namespace qmetro
