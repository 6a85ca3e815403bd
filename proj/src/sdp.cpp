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

#include "qmetro/sdp.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qmetro/channels.hpp"

namespace qmetro {

Tester::Tester(std::vector<HermitianMatrix> elements, Index d_in, Index d_out)
    : elements_(std::move(elements)), d_in_(d_in), d_out_(d_out) {
  if (elements_.empty()) throw InvalidArgument("Tester: no elements");
  if (d_in_ < 1 || d_out_ < 1) throw InvalidArgument("Tester: bad dimensions");
  ComplexMatrix sum = ComplexMatrix::Zero(d_in_ * d_out_, d_in_ * d_out_);
  for (const auto& t : elements_) {
    if (t.dim() != d_in_ * d_out_)
      throw DimensionMismatch("Tester: element dimension != d_in * d_out");
    sum += t.matrix();
  }
  sigma_ = partial_trace(HermitianMatrix(sum), dims(), kOutputFactor) *
           (1.0 / static_cast<double>(d_out_));
}

Tester Tester::trivial(Index d_in, Index d_out) {
  return Tester({HermitianMatrix::identity(d_in * d_out) *
                 (1.0 / static_cast<double>(d_in))},
                d_in, d_out);
}

std::string to_string(TesterConstraintSet::Kind kind) {
  switch (kind) {
    case TesterConstraintSet::Kind::General: return "general";
    case TesterConstraintSet::Kind::Ppt: return "ppt";
    case TesterConstraintSet::Kind::ProductFixedState: return "product_fixed_state";
    case TesterConstraintSet::Kind::ProductFixedPovm: return "product_fixed_povm";
  }
  return "unknown";
}

SdpOptions default_sdp_options() {
  SdpOptions options;
  if (const char* env = std::getenv("QMETRO_SOLVER_TOL")) {
    char* end = nullptr;
    const double tol = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(tol > 0.0) || !std::isfinite(tol))
      throw InvalidArgument("QMETRO_SOLVER_TOL must be a positive number");
    options.solver.tolerance = tol;
  }
  return options;
}

// ---------------------------------------------------------------------------

HermitianProgram::HermitianProgram(EmbeddingSymmetry symmetry)
    : symmetry_(symmetry) {}

int HermitianProgram::add_variable(Index n) {
  if (finished_) throw InvalidArgument("HermitianProgram: already finished");
  dims_.push_back(n);
  program_.add_block(2 * n);
  return static_cast<int>(dims_.size()) - 1;
}

void HermitianProgram::add_term(LinearForm& form, int var, Index p, Index q,
                                Complex alpha) const {
  // Re(alpha H_pq) with H = ((A + D) + i (B - B^T)) / 2 read off
  // Y = [[A, B^T], [B, D]].
  const Index n = dims_[var];
  const double a = alpha.real();
  const double b = alpha.imag();
  if (a != 0.0) {
    form.add(var, p, q, 0.5 * a);
    form.add(var, n + p, n + q, 0.5 * a);
  }
  if (b != 0.0 && p != q) {
    form.add(var, n + p, q, -0.5 * b);
    form.add(var, n + q, p, 0.5 * b);
  }
}

void HermitianProgram::add_trace_term(LinearForm& form, int var,
                                      const ComplexMatrix& f) const {
  const Index n = dims_[var];
  if (f.rows() != n || f.cols() != n)
    throw DimensionMismatch("HermitianProgram: trace term dimension");
  // Re tr(F H) = sum_pq Re(F_qp H_pq).
  for (Index p = 0; p < n; ++p)
    for (Index q = 0; q < n; ++q)
      if (f(q, p) != Complex(0.0)) add_term(form, var, p, q, f(q, p));
}

void HermitianProgram::add_objective(const LinearForm& form) {
  for (const auto& e : form.entries())
    objective_.add(e.block, e.row, e.col, e.row == e.col ? e.value : 2 * e.value);
}

void HermitianProgram::add_equality(const LinearForm& form, double value) {
  if (finished_) throw InvalidArgument("HermitianProgram: already finished");
  program_.add_constraint(form, value);
}

const ConicProgram& HermitianProgram::program() {
  if (finished_) return program_;
  finished_ = true;
  program_.set_objective(objective_);
  if (symmetry_ == EmbeddingSymmetry::Constrained) {
    for (std::size_t var = 0; var < dims_.size(); ++var) {
      const Index n = dims_[var];
      const Index blk = static_cast<Index>(var);
      for (Index p = 0; p < n; ++p)
        for (Index q = p; q < n; ++q) {
          LinearForm same;
          same.add(blk, p, q, 1.0);
          same.add(blk, n + p, n + q, -1.0);
          program_.add_constraint(same, 0.0);
          LinearForm skew;
          skew.add(blk, n + p, q, 1.0);
          skew.add(blk, n + q, p, 1.0);
          program_.add_constraint(skew, 0.0);
        }
    }
  }
  return program_;
}

HermitianMatrix HermitianProgram::decode(const ConicSolution& solution,
                                         int var) const {
  const Index n = dims_[var];
  const RealMatrix& y = solution.primal.at(var);
  const RealMatrix re = 0.5 * (y.topLeftCorner(n, n) + y.bottomRightCorner(n, n));
  const RealMatrix b = y.bottomLeftCorner(n, n);
  const RealMatrix im = 0.5 * (b - b.transpose());
  ComplexMatrix h(n, n);
  h.real() = 0.5 * (re + re.transpose());
  h.imag() = im;
  return HermitianMatrix(h);
}

HermitianEquality::HermitianEquality(Index n)
    : n_(n),
      re_(static_cast<std::size_t>(n * (n + 1) / 2)),
      im_(static_cast<std::size_t>(n * (n + 1) / 2)) {}

std::size_t HermitianEquality::slot(Index p, Index q) const {
  // Row-major upper triangle.
  return static_cast<std::size_t>(p * n_ - p * (p - 1) / 2 + (q - p));
}

void HermitianEquality::add(const HermitianProgram& prog, Index p, Index q,
                            int var, Index vp, Index vq, Complex coefficient) {
  const std::size_t s = slot(p, q);
  prog.add_term(re_[s], var, vp, vq, coefficient);
  if (p != q) prog.add_term(im_[s], var, vp, vq, Complex(0.0, -1.0) * coefficient);
}

void HermitianEquality::emit(HermitianProgram& prog, const ComplexMatrix& rhs) {
  for (Index p = 0; p < n_; ++p)
    for (Index q = p; q < n_; ++q) {
      const std::size_t s = slot(p, q);
      auto put = [&](const LinearForm& form, double value) {
        if (form.empty()) {
          if (std::abs(value) > 0.0)
            throw InvalidArgument("HermitianEquality: unsatisfiable row");
          return;
        }
        prog.add_equality(form, value);
      };
      put(re_[s], rhs(p, q).real());
      if (p != q) put(im_[s], rhs(p, q).imag());
    }
}

// ---------------------------------------------------------------------------

namespace {

ConicSolution run_backend(const ConicProgram& program,
                          const SdpOptions& options, const char* what) {
  ConicSolution sol;
  if (options.backend) {
    sol = options.backend->solve(program);
  } else {
    sol = InteriorPointSolver(options.solver).solve(program);
  }
  if (sol.status == SolverStatus::Failed) {
    std::ostringstream msg;
    msg << what << ": solver failed (" << sol.message << ")";
    const double scale =
        1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective);
    throw SolverFailure(msg.str(), sol.primal_residual, sol.dual_residual,
                        sol.gap / scale);
  }
  return sol;
}

void fill_diagnostics(SolveReport& report, const ConicSolution& sol) {
  report.status = sol.status;
  report.primal_residual = sol.primal_residual;
  report.dual_residual = sol.dual_residual;
  report.dual_gap =
      sol.gap / (1.0 + std::abs(sol.primal_objective) + std::abs(sol.dual_objective));
  report.iterations = sol.iterations;
  report.warning = sol.status == SolverStatus::NearOptimal;
}

void check_operators(const std::vector<HermitianMatrix>& x, Index dim) {
  if (x.empty()) throw InvalidArgument("tester program: no X operators");
  for (const auto& xi : x)
    if (xi.dim() != dim)
      throw DimensionMismatch("tester program: X dimension != d_in * d_out");
}

HermitianMatrix transposed_state_tensor(const HermitianMatrix& rho,
                                        const HermitianMatrix& m) {
  return HermitianMatrix(kron(rho.transpose().matrix(), m.matrix()));
}

SolveReport solve_state_by_sdp(const std::vector<HermitianMatrix>& x,
                               const std::vector<HermitianMatrix>& povm,
                               Index d_in, const SdpOptions& options);

}  // namespace

double tester_score(const std::vector<HermitianMatrix>& x,
                    const Tester& tester) {
  if (x.size() != tester.size())
    throw DimensionMismatch("tester_score: X count != tester size");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    s += trace_product(x[i], tester[i]);
  return s;
}

SolveReport solve_tester_sdp(const std::vector<HermitianMatrix>& x, Index d_in,
                             Index d_out, const TesterConstraintSet& constraints,
                             const SdpOptions& options) {
  using Kind = TesterConstraintSet::Kind;
  if (constraints.kind == Kind::ProductFixedState)
    return solve_povm_given_state(x, constraints.state, options);
  if (constraints.kind == Kind::ProductFixedPovm)
    return solve_state_by_sdp(x, constraints.povm, d_in, options);

  const Index dim = d_in * d_out;
  check_operators(x, dim);
  const auto n_out = x.size();

  HermitianProgram hp(options.symmetry);
  std::vector<int> t(n_out);
  for (auto& v : t) v = hp.add_variable(dim);
  const int s = hp.add_variable(d_in);

  LinearForm obj;
  for (std::size_t i = 0; i < n_out; ++i)
    hp.add_trace_term(obj, t[i], x[i].matrix());
  hp.add_objective(obj);

  // sum_i T_i = sigma (x) 1_out.
  HermitianEquality marginal(dim);
  for (Index p = 0; p < dim; ++p)
    for (Index q = p; q < dim; ++q) {
      for (int v : t) marginal.add(hp, p, q, v, p, q, 1.0);
      if (p % d_out == q % d_out)
        marginal.add(hp, p, q, s, p / d_out, q / d_out, -1.0);
    }
  marginal.emit(hp, ComplexMatrix::Zero(dim, dim));

  LinearForm trace;
  for (Index a = 0; a < d_in; ++a) hp.add_term(trace, s, a, a, 1.0);
  hp.add_equality(trace, 1.0);

  if (constraints.kind == Kind::Ppt) {
    // W_i = T_i^{T_in} >= 0, W[(a,o),(a',o')] = T[(a',o),(a,o')].
    for (int v : t) {
      const int w = hp.add_variable(dim);
      HermitianEquality pt(dim);
      for (Index p = 0; p < dim; ++p)
        for (Index q = p; q < dim; ++q) {
          const Index a = p / d_out, o = p % d_out;
          const Index a2 = q / d_out, o2 = q % d_out;
          pt.add(hp, p, q, w, p, q, 1.0);
          pt.add(hp, p, q, v, a2 * d_out + o, a * d_out + o2, -1.0);
        }
      pt.emit(hp, ComplexMatrix::Zero(dim, dim));
    }
  }

  const ConicSolution sol = run_backend(hp.program(), options, "solve_tester_sdp");
  std::vector<HermitianMatrix> elements;
  elements.reserve(n_out);
  for (int v : t) elements.push_back(hp.decode(sol, v));
  SolveReport report;
  report.tester = Tester(std::move(elements), d_in, d_out);
  report.score = tester_score(x, report.tester);
  fill_diagnostics(report, sol);
  return report;
}

SolveReport solve_povm_given_state(const std::vector<HermitianMatrix>& x,
                                   const HermitianMatrix& rho,
                                   const SdpOptions& options) {
  const Index d_in = rho.dim();
  if (x.empty()) throw InvalidArgument("solve_povm_given_state: no X operators");
  if (x.front().dim() % d_in != 0)
    throw DimensionMismatch("solve_povm_given_state: state dimension");
  const Index d_out = x.front().dim() / d_in;
  check_operators(x, d_in * d_out);
  if (!is_psd(rho) || std::abs(rho.trace() - 1.0) > 1e-9)
    throw NotPSD("solve_povm_given_state: rho is not a state",
                 rho.min_eigenvalue());

  // tr(X (rho^T (x) M)) = tr(B M) with B = tr_in(X (rho^T (x) 1)).
  const ComplexMatrix lift =
      kron(rho.transpose().matrix(), ComplexMatrix::Identity(d_out, d_out));
  HermitianProgram hp(options.symmetry);
  std::vector<int> m(x.size());
  LinearForm obj;
  for (std::size_t i = 0; i < x.size(); ++i) {
    m[i] = hp.add_variable(d_out);
    const ComplexMatrix b =
        partial_trace(ComplexMatrix(x[i].matrix() * lift), {d_in, d_out},
                      kInputFactor);
    hp.add_trace_term(obj, m[i], 0.5 * (b + b.adjoint()));
  }
  hp.add_objective(obj);
  HermitianEquality complete(d_out);
  for (Index p = 0; p < d_out; ++p)
    for (Index q = p; q < d_out; ++q)
      for (int v : m) complete.add(hp, p, q, v, p, q, 1.0);
  complete.emit(hp, ComplexMatrix::Identity(d_out, d_out));

  const ConicSolution sol =
      run_backend(hp.program(), options, "solve_povm_given_state");
  SolveReport report;
  std::vector<HermitianMatrix> elements;
  for (int v : m) {
    report.povm.push_back(hp.decode(sol, v));
    elements.push_back(transposed_state_tensor(rho, report.povm.back()));
  }
  report.tester = Tester(std::move(elements), d_in, d_out);
  report.score = tester_score(x, report.tester);
  report.state = rho;
  fill_diagnostics(report, sol);
  return report;
}

namespace {

ComplexMatrix povm_contraction(const std::vector<HermitianMatrix>& x,
                               const std::vector<HermitianMatrix>& povm,
                               Index d_in) {
  if (x.size() != povm.size())
    throw DimensionMismatch("product program: POVM size != X count");
  const Index d_out = povm.front().dim();
  check_operators(x, d_in * d_out);
  ComplexMatrix a = ComplexMatrix::Zero(d_in, d_in);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const ComplexMatrix lift =
        kron(ComplexMatrix::Identity(d_in, d_in), povm[i].matrix());
    a += partial_trace(ComplexMatrix(x[i].matrix() * lift), {d_in, d_out},
                       kOutputFactor);
  }
  return 0.5 * (a + a.adjoint());
}

SolveReport solve_state_by_sdp(const std::vector<HermitianMatrix>& x,
                               const std::vector<HermitianMatrix>& povm,
                               Index d_in, const SdpOptions& options) {
  const ComplexMatrix a = povm_contraction(x, povm, d_in);
  HermitianProgram hp(options.symmetry);
  const int r = hp.add_variable(d_in);
  LinearForm obj;
  // tr(A rho^T) = tr(A^T rho).
  hp.add_trace_term(obj, r, a.transpose());
  hp.add_objective(obj);
  LinearForm trace;
  for (Index k = 0; k < d_in; ++k) hp.add_term(trace, r, k, k, 1.0);
  hp.add_equality(trace, 1.0);
  const ConicSolution sol =
      run_backend(hp.program(), options, "product state program");
  const HermitianMatrix rho = hp.decode(sol, r);
  SolveReport report;
  std::vector<HermitianMatrix> elements;
  for (const auto& m : povm) elements.push_back(transposed_state_tensor(rho, m));
  report.tester = Tester(std::move(elements), d_in, povm.front().dim());
  report.score = tester_score(x, report.tester);
  report.state = rho;
  report.povm = povm;
  fill_diagnostics(report, sol);
  return report;
}

}  // namespace

SolveReport solve_state_given_povm(const std::vector<HermitianMatrix>& x,
                                   const std::vector<HermitianMatrix>& povm,
                                   Index d_in) {
  if (povm.empty()) throw InvalidArgument("solve_state_given_povm: empty POVM");
  const ComplexMatrix a = povm_contraction(x, povm, d_in);
  // max_rho tr(A rho^T): rho^T = |v><v| for the top eigenvector v of A.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  const ComplexVector v = es.eigenvectors().col(d_in - 1);
  const HermitianMatrix rho = HermitianMatrix::projector(v.conjugate());
  SolveReport report;
  std::vector<HermitianMatrix> elements;
  for (const auto& m : povm) elements.push_back(transposed_state_tensor(rho, m));
  report.tester = Tester(std::move(elements), d_in, povm.front().dim());
  report.score = tester_score(x, report.tester);
  report.state = rho;
  report.povm = povm;
  report.status = SolverStatus::Optimal;
  return report;
}

TesterDiagnostics verify_tester(const Tester& tester, double tol) {
  TesterDiagnostics d;
  ComplexMatrix sum = ComplexMatrix::Zero(tester.d_in() * tester.d_out(),
                                          tester.d_in() * tester.d_out());
  for (std::size_t i = 0; i < tester.size(); ++i) {
    const double lmin = tester[i].min_eigenvalue();
    d.min_eigenvalues.push_back(lmin);
    if (lmin < -tol) {
      std::ostringstream msg;
      msg << "element " << i << " has eigenvalue " << lmin;
      d.violations.push_back(msg.str());
    }
    sum += tester[i].matrix();
  }
  const ComplexMatrix marginal =
      kron(tester.sigma().matrix(),
           ComplexMatrix::Identity(tester.d_out(), tester.d_out()));
  d.marginal_deviation = max_abs(sum - marginal);
  d.trace_deviation = std::abs(tester.sigma().trace() - 1.0);
  if (d.marginal_deviation > tol) {
    std::ostringstream msg;
    msg << "sum of elements deviates from sigma (x) 1 by " << d.marginal_deviation;
    d.violations.push_back(msg.str());
  }
  if (d.trace_deviation > tol) {
    std::ostringstream msg;
    msg << "tr(sigma) deviates from 1 by " << d.trace_deviation;
    d.violations.push_back(msg.str());
  }
  return d;
}

}  // namespace qmetro
