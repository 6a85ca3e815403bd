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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qmetro/conic.hpp"
#include "qmetro/linalg.hpp"

namespace qmetro {

/// Ordered tester elements T_i on H_in (x) H_out. The constructor checks
/// shapes only; feasibility is reported by verify_tester.
class Tester {
 public:
  Tester(std::vector<HermitianMatrix> elements, Index d_in, Index d_out);
  /// Single-outcome tester {1/d_in (x) 1}.
  static Tester trivial(Index d_in, Index d_out);

  const std::vector<HermitianMatrix>& elements() const { return elements_; }
  const HermitianMatrix& operator[](std::size_t i) const { return elements_[i]; }
  std::size_t size() const { return elements_.size(); }
  Index d_in() const { return d_in_; }
  Index d_out() const { return d_out_; }
  BipartiteDims dims() const { return {d_in_, d_out_}; }
  /// tr_out(sum_i T_i) / d_out.
  const HermitianMatrix& sigma() const { return sigma_; }

 private:
  std::vector<HermitianMatrix> elements_;
  Index d_in_;
  Index d_out_;
  HermitianMatrix sigma_;
};

/// Feasible set of a tester program.
struct TesterConstraintSet {
  enum class Kind { General, Ppt, ProductFixedState, ProductFixedPovm };
  Kind kind = Kind::General;
  HermitianMatrix state;              ///< rho for ProductFixedState
  std::vector<HermitianMatrix> povm;  ///< M_i for ProductFixedPovm

  static TesterConstraintSet general() { return {}; }
  static TesterConstraintSet ppt() { return {Kind::Ppt, {}, {}}; }
  static TesterConstraintSet fixed_state(HermitianMatrix rho) {
    return {Kind::ProductFixedState, std::move(rho), {}};
  }
  static TesterConstraintSet fixed_povm(std::vector<HermitianMatrix> m) {
    return {Kind::ProductFixedPovm, {}, std::move(m)};
  }
};

std::string to_string(TesterConstraintSet::Kind kind);

/// How the Re/Im blocks of an embedded Hermitian variable are tied together.
enum class EmbeddingSymmetry {
  /// Y = [[A, B^T], [B, D]] is decoded as ((A + D) + i (B - B^T)) / 2 and the
  /// program is posed on that projection, so no tying constraints are needed.
  Projected,
  /// A = D and B = -B^T imposed as equality constraints.
  Constrained,
};

struct SdpOptions {
  SolverOptions solver;
  EmbeddingSymmetry symmetry = EmbeddingSymmetry::Projected;
  /// Backend; an InteriorPointSolver with the options above when empty.
  std::shared_ptr<const ConicSolver> backend;
};

/// SdpOptions with the solver tolerance taken from QMETRO_SOLVER_TOL when set.
SdpOptions default_sdp_options();

struct SolveReport {
  double score = 0.0;  ///< sum_i Re tr(X_i T_i), maximization convention
  Tester tester = Tester::trivial(1, 1);
  SolverStatus status = SolverStatus::Failed;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double dual_gap = 0.0;  ///< relative primal-dual objective gap
  int iterations = 0;
  bool warning = false;  ///< accepted with NearOptimal status
  /// Set by the product programs.
  std::optional<HermitianMatrix> state;
  std::vector<HermitianMatrix> povm;
};

/// Complex Hermitian PSD program posed over real-embedded blocks.
///
/// Every linear functional is written as Re(alpha * H(p, q)) for a variable
/// H; the builder translates it onto the 2n x 2n real block.
class HermitianProgram {
 public:
  explicit HermitianProgram(EmbeddingSymmetry symmetry);

  /// New Hermitian PSD variable of dimension n; returns its id.
  int add_variable(Index n);
  Index dim(int var) const { return dims_[var]; }

  /// form += Re(alpha * H_var(p, q)).
  void add_term(LinearForm& form, int var, Index p, Index q,
                Complex alpha) const;
  /// form += Re tr(F H_var).
  void add_trace_term(LinearForm& form, int var, const ComplexMatrix& f) const;

  void add_objective(const LinearForm& form);
  void add_equality(const LinearForm& form, double value);

  const ConicProgram& program();
  HermitianMatrix decode(const ConicSolution& solution, int var) const;

 private:
  EmbeddingSymmetry symmetry_;
  std::vector<Index> dims_;
  ConicProgram program_;
  LinearForm objective_;
  bool finished_ = false;
};

/// Helper collecting the real functionals of a Hermitian equality G = R
/// entry by entry: Re on the diagonal, Re and Im above it.
class HermitianEquality {
 public:
  explicit HermitianEquality(Index n);
  /// G(p, q) += coefficient * H_var(vp, vq), for p <= q.
  void add(const HermitianProgram& prog, Index p, Index q, int var,
           Index vp, Index vq, Complex coefficient);
  /// Emits G = rhs as real equality constraints.
  void emit(HermitianProgram& prog, const ComplexMatrix& rhs);

 private:
  Index n_;
  std::vector<LinearForm> re_;
  std::vector<LinearForm> im_;
  std::size_t slot(Index p, Index q) const;
};

/// max sum_i Re tr(X_i T_i) over General or PPT testers.
SolveReport solve_tester_sdp(const std::vector<HermitianMatrix>& x, Index d_in,
                             Index d_out, const TesterConstraintSet& constraints,
                             const SdpOptions& options = default_sdp_options());

/// Best POVM M_i for the fixed probe state rho; tester T_i = rho^T (x) M_i.
SolveReport solve_povm_given_state(
    const std::vector<HermitianMatrix>& x, const HermitianMatrix& rho,
    const SdpOptions& options = default_sdp_options());

/// Best probe state for the fixed POVM, from the top eigenvector of
/// A^T with A = sum_i tr_out(X_i (1 (x) M_i)).
SolveReport solve_state_given_povm(const std::vector<HermitianMatrix>& x,
                                   const std::vector<HermitianMatrix>& povm,
                                   Index d_in);

struct TesterDiagnostics {
  std::vector<double> min_eigenvalues;
  double marginal_deviation = 0.0;  ///< max-entry |sum T_i - sigma (x) 1|
  double trace_deviation = 0.0;     ///< |tr sigma - 1|
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

TesterDiagnostics verify_tester(const Tester& tester, double tol = 1e-6);

/// sum_i Re tr(X_i T_i).
double tester_score(const std::vector<HermitianMatrix>& x,
                    const Tester& tester);

}  // namespace qmetro
