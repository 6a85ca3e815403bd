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

#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "qmetro/linalg.hpp"

namespace qmetro {

/// One entry of a real symmetric coefficient matrix. An off-diagonal entry
/// stands for both (row, col) and (col, row), so it contributes
/// 2 * value * X(row, col) to <A, X> = sum_ij A_ij X_ij.
struct SymmetricEntry {
  Index block = 0;
  Index row = 0;
  Index col = 0;
  double value = 0.0;
};

/// Accumulates a linear functional sum w_rc X_rc over the entries of a
/// block-diagonal symmetric variable and freezes it into SymmetricEntry form.
class LinearForm {
 public:
  /// Adds weight * X(row, col); the variable is symmetric so (row, col) and
  /// (col, row) refer to the same unknown.
  void add(Index block, Index row, Index col, double weight);
  std::vector<SymmetricEntry> entries() const;
  bool empty() const { return terms_.empty(); }

 private:
  std::map<std::tuple<Index, Index, Index>, double> terms_;
};

/// Standard-form conic program over real symmetric PSD blocks:
///
///   maximize <C, X>  subject to  <A_k, X> = b_k,  X = diag(X_1..X_B) >= 0.
struct ConicProgram {
  std::vector<Index> block_dims;
  std::vector<SymmetricEntry> objective;
  std::vector<std::vector<SymmetricEntry>> constraints;
  std::vector<double> rhs;

  Index add_block(Index dim);
  void add_constraint(const LinearForm& form, double value);
  void set_objective(const LinearForm& form);
  std::size_t num_constraints() const { return constraints.size(); }
  /// Throws DimensionMismatch on out-of-range entries.
  void validate() const;
};

enum class SolverStatus { Optimal, NearOptimal, Failed };
std::string to_string(SolverStatus status);

struct ConicSolution {
  SolverStatus status = SolverStatus::Failed;
  std::vector<RealMatrix> primal;  ///< X blocks
  std::vector<RealMatrix> slack;   ///< dual slack Z blocks
  RealVector dual;                 ///< y with sum_k y_k A_k - C = Z
  double primal_objective = 0.0;   ///< <C, X>
  double dual_objective = 0.0;
  double primal_residual = 0.0;    ///< |b - A(X)| / (1 + |b|)
  double dual_residual = 0.0;      ///< |A^T y - Z - C| / (1 + |C|)
  double gap = 0.0;                ///< |primal_objective - dual_objective|
  int iterations = 0;
  std::string message;
};

struct SolverOptions {
  double tolerance = 1e-9;
  int max_iterations = 120;
};

/// Adapter boundary for PSD-cone solvers. Implementations must be stateless
/// across calls so that concurrent solves can share one instance.
class ConicSolver {
 public:
  virtual ~ConicSolver() = default;
  virtual ConicSolution solve(const ConicProgram& program) const = 0;
};

/// Infeasible primal-dual path-following method with the HKM search
/// direction and Mehrotra predictor-corrector steps. Dense blocks, sparse
/// constraint matrices, dense Schur complement.
class InteriorPointSolver final : public ConicSolver {
 public:
  explicit InteriorPointSolver(SolverOptions options = {});
  ConicSolution solve(const ConicProgram& program) const override;
  const SolverOptions& options() const { return options_; }

 private:
  SolverOptions options_;
};

}  // namespace qmetro
