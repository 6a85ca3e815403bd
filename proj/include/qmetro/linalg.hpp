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

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "qmetro/errors.hpp"

namespace qmetro {

using Complex = std::complex<double>;
using Index = Eigen::Index;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Eigenvalues in [-kTolPsd, 0) are treated as zero.
inline constexpr double kTolPsd = 1e-9;
/// Largest anti-Hermitian part accepted before symmetrization.
inline constexpr double kTolHerm = 1e-6;

/// Square complex matrix with A = A^dagger.
///
/// Construction from approximate data symmetrizes (A + A^dagger)/2 and
/// rejects inputs whose anti-Hermitian part exceeds the tolerance in the
/// max-entry norm. Values are immutable once built.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const ComplexMatrix& m, double tol = kTolHerm);

  static HermitianMatrix zero(Index dim);
  static HermitianMatrix identity(Index dim);
  /// Real symmetric input, no tolerance check beyond symmetry.
  static HermitianMatrix from_real(const RealMatrix& m);
  /// |v><v|
  static HermitianMatrix projector(const ComplexVector& v);

  Index dim() const { return m_.rows(); }
  const ComplexMatrix& matrix() const { return m_; }
  Complex operator()(Index r, Index c) const { return m_(r, c); }

  double trace() const { return m_.diagonal().real().sum(); }
  RealVector eigenvalues() const;
  double min_eigenvalue() const;
  double max_eigenvalue() const;

  HermitianMatrix operator+(const HermitianMatrix& o) const;
  HermitianMatrix operator-(const HermitianMatrix& o) const;
  HermitianMatrix operator*(double s) const;
  HermitianMatrix transpose() const;

 private:
  struct Trusted {};
  HermitianMatrix(ComplexMatrix m, Trusted) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

inline HermitianMatrix operator*(double s, const HermitianMatrix& h) {
  return h * s;
}

/// Factorization of a tensor-product space H_first (x) H_second.
struct BipartiteDims {
  Index first = 1;
  Index second = 1;
  Index total() const { return first * second; }
};

enum class Subsystem { First, Second };

/// Kronecker product: (A (x) B)[i*rB + k, j*cB + l] = A[i,j] * B[k,l].
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix partial_trace(const ComplexMatrix& a, BipartiteDims dims,
                            Subsystem which);
HermitianMatrix partial_trace(const HermitianMatrix& a, BipartiteDims dims,
                              Subsystem which);

ComplexMatrix partial_transpose(const ComplexMatrix& a, BipartiteDims dims,
                                Subsystem which);
HermitianMatrix partial_transpose(const HermitianMatrix& a, BipartiteDims dims,
                                  Subsystem which);

/// Swaps the two tensor factors: (A (x) B) -> (B (x) A).
ComplexMatrix swap_factors(const ComplexMatrix& a, BipartiteDims dims);

/// Principal square root of a PSD matrix. Throws NotPSD when the smallest
/// eigenvalue is below -tol_psd.
HermitianMatrix psd_sqrt(const HermitianMatrix& a, double tol_psd = kTolPsd);

/// Inverse of psd_sqrt on the support of A, zero on its kernel. Eigenvalues
/// at or below support_tol count as kernel.
HermitianMatrix psd_pinv_sqrt(const HermitianMatrix& a,
                              double tol_psd = kTolPsd,
                              double support_tol = kTolPsd);

/// Orthogonal projector onto the eigenvectors with eigenvalue > support_tol.
HermitianMatrix support_projector(const HermitianMatrix& a,
                                  double support_tol = kTolPsd);

bool is_psd(const HermitianMatrix& a, double tol_psd = kTolPsd);

/// Schmidt decomposition v = sum_k c_k |l_k> (x) |r_k>.
struct SchmidtDecomposition {
  RealVector coefficients;  ///< descending, nonnegative
  ComplexMatrix left;       ///< columns |l_k>
  ComplexMatrix right;      ///< columns |r_k>

  ComplexVector reconstruct() const;
};

SchmidtDecomposition schmidt(const ComplexVector& v, BipartiteDims dims,
                             double norm_tol = 1e-8);

/// [[Re A, -Im A], [Im A, Re A]]. PSD iff A is, and
/// tr(embed(A) embed(B)) = 2 Re tr(A B).
RealMatrix real_embed(const HermitianMatrix& a);

/// Largest absolute entry.
double max_abs(const ComplexMatrix& a);

/// Re tr(A B) without forming the product.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

bool is_unitary(const ComplexMatrix& u, double tol = 1e-9);

}  // namespace qmetro
