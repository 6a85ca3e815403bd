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

#include "qmetro/realization.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace qmetro {

Realization extract_realization(const Tester& tester, double support_tol,
                                double feasibility_tol) {
  const auto diag = verify_tester(tester, feasibility_tol);
  if (!diag.ok())
    throw InfeasibleTester("extract_realization: " + diag.violations.front());
  const Index d = tester.d_in();
  const Index d_out = tester.d_out();
  const HermitianMatrix& sigma = tester.sigma();
  const double cutoff = support_tol * std::max(sigma.max_eigenvalue(), 0.0);

  Realization r;
  r.d_in = d;
  r.d_out = d_out;
  r.support = support_projector(sigma, cutoff);
  const ComplexMatrix s = psd_sqrt(sigma, feasibility_tol).matrix();
  r.psi = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) r.psi.segment(i * d, d) = s.col(i);
  r.rho = HermitianMatrix::projector(r.psi);

  const ComplexMatrix id_out = ComplexMatrix::Identity(d_out, d_out);
  const ComplexMatrix inv =
      kron(psd_pinv_sqrt(sigma, feasibility_tol, cutoff).matrix(), id_out);
  for (const auto& t : tester.elements())
    r.povm.emplace_back(ComplexMatrix(inv * t.matrix() * inv));
  if (!r.povm.empty()) {
    const ComplexMatrix kernel =
        ComplexMatrix::Identity(d, d) - r.support.matrix();
    r.povm.front() = HermitianMatrix(
        ComplexMatrix(r.povm.front().matrix() + kron(kernel, id_out)));
  }
  r.schmidt_p0 = schmidt(r.psi.normalized(), {d, d}).coefficients(0);
  r.schmidt_p0 *= r.schmidt_p0;
  return r;
}

HermitianMatrix reconstruct_element(const Realization& real,
                                    const HermitianMatrix& m) {
  const Index d = real.d_in;
  const Index o = real.d_out;
  if (m.dim() != d * o)
    throw DimensionMismatch("reconstruct_element: POVM element has wrong size");
  const ComplexMatrix rt =
      partial_transpose(real.rho.matrix(), {d, d}, Subsystem::First);
  const ComplexMatrix& mm = m.matrix();
  ComplexMatrix out = ComplexMatrix::Zero(d * o, d * o);
  // out[(i,o),(i',o')] = sum_{a,a'} R[(i,a),(i',a')] M[(a',o),(a,o')]
  for (Index i = 0; i < d; ++i)
    for (Index ip = 0; ip < d; ++ip)
      for (Index a = 0; a < d; ++a)
        for (Index ap = 0; ap < d; ++ap) {
          const Complex w = rt(i * d + a, ip * d + ap);
          if (w == Complex(0.0)) continue;
          out.block(i * o, ip * o, o, o) += w * mm.block(ap * o, a * o, o, o);
        }
  return HermitianMatrix(out);
}

RealizationDiagnostics verify_realization(const Realization& real,
                                          const Tester& tester, double tol) {
  if (real.povm.size() != tester.size())
    throw DimensionMismatch("verify_realization: POVM and tester sizes differ");
  if (real.d_in != tester.d_in() || real.d_out != tester.d_out())
    throw DimensionMismatch("verify_realization: dimensions differ");
  RealizationDiagnostics d;
  const Index dim = real.d_in * real.d_out;
  const ComplexMatrix proj = kron(
      real.support.matrix(), ComplexMatrix::Identity(real.d_out, real.d_out));
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  d.min_povm_eigenvalue = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < tester.size(); ++i) {
    const ComplexMatrix rec = reconstruct_element(real, real.povm[i]).matrix();
    const double err =
        max_abs(proj * (rec - tester[i].matrix()) * proj);
    d.reconstruction_errors.push_back(err);
    d.max_reconstruction_error = std::max(d.max_reconstruction_error, err);
    if (err > tol) {
      std::ostringstream msg;
      msg << "element " << i << " reconstructed with error " << err;
      d.violations.push_back(msg.str());
    }
    d.min_povm_eigenvalue =
        std::min(d.min_povm_eigenvalue, real.povm[i].min_eigenvalue());
    sum += real.povm[i].matrix();
  }
  if (d.min_povm_eigenvalue < -tol) {
    std::ostringstream msg;
    msg << "POVM element with eigenvalue " << d.min_povm_eigenvalue;
    d.violations.push_back(msg.str());
  }
  d.povm_completeness_error = max_abs(sum - ComplexMatrix::Identity(dim, dim));
  if (d.povm_completeness_error > tol) {
    std::ostringstream msg;
    msg << "POVM sums to identity only within " << d.povm_completeness_error;
    d.violations.push_back(msg.str());
  }
  d.state_trace_error = std::abs(real.rho.trace() - 1.0);
  if (d.state_trace_error > tol) {
    std::ostringstream msg;
    msg << "tr(rho) deviates from 1 by " << d.state_trace_error;
    d.violations.push_back(msg.str());
  }
  return d;
}

EntanglementProfile entanglement_profile(const Realization& real) {
  if (real.d_in != 2)
    throw InvalidArgument("entanglement_profile: probe must be a qubit");
  const auto sd = schmidt(real.psi.normalized(), {2, 2});
  EntanglementProfile p;
  p.p0 = sd.coefficients(0) * sd.coefficients(0);
  p.p1 = sd.coefficients.size() > 1 ? sd.coefficients(1) * sd.coefficients(1)
                                    : 0.0;
  const double norm = p.p0 + p.p1;
  p.p0 /= norm;
  p.p1 /= norm;
  p.probe = sd.left.col(0);
  const Complex a = p.probe(0);
  const Complex b = p.probe(1);
  const Complex ab = std::conj(a) * b;
  p.bloch = {2.0 * ab.real(), 2.0 * ab.imag(), std::norm(a) - std::norm(b)};
  return p;
}

std::vector<RealVector> povm_spectra(const Realization& real) {
  std::vector<RealVector> out;
  for (const auto& m : real.povm) out.push_back(m.eigenvalues().reverse());
  return out;
}

std::optional<ProjectiveRefinement> projective_refinement(
    const EstimationProblem& problem, const Protocol& protocol) {
  const Tester& tester = protocol.tester;
  auto real = extract_realization(tester);
  const Index dim = real.d_in * real.d_out;
  const std::size_t n = real.povm.size();

  std::vector<std::size_t> owner;
  std::vector<ComplexVector> vecs;
  for (std::size_t i = 0; i < n; ++i) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(real.povm[i].matrix());
    for (Index k = 0; k < dim; ++k)
      if (es.eigenvalues()(k) > 0.5) {
        owner.push_back(i);
        vecs.push_back(es.eigenvectors().col(k));
      }
  }
  if (static_cast<Index>(vecs.size()) != dim) return std::nullopt;
  ComplexMatrix v(dim, dim);
  for (Index k = 0; k < dim; ++k) v.col(k) = vecs[k];
  // Closest unitary: V (V^dag V)^{-1/2}.
  Eigen::JacobiSVD<ComplexMatrix> svd(v, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues().minCoeff() < 0.5) return std::nullopt;
  const ComplexMatrix q = svd.matrixU() * svd.matrixV().adjoint();

  std::vector<std::size_t> unused;
  for (std::size_t i = 0; i < n; ++i)
    if (std::find(owner.begin(), owner.end(), i) == owner.end()) unused.push_back(i);
  auto estimators = protocol.estimators;
  std::vector<ComplexMatrix> m(n, ComplexMatrix::Zero(dim, dim));
  std::vector<bool> taken(n, false);
  for (Index k = 0; k < dim; ++k) {
    std::size_t i = owner[k];
    if (taken[i] && !unused.empty()) {
      const std::size_t j = unused.back();
      unused.pop_back();
      estimators[j] = estimators[i];
      i = j;
    }
    taken[i] = true;
    m[i] += q.col(k) * q.col(k).adjoint();
  }

  std::vector<HermitianMatrix> elements;
  for (std::size_t i = 0; i < n; ++i) {
    real.povm[i] = HermitianMatrix(m[i]);
    elements.push_back(reconstruct_element(real, real.povm[i]));
  }
  ProjectiveRefinement out;
  out.protocol = protocol;
  out.protocol.tester = Tester(std::move(elements), tester.d_in(), tester.d_out());
  out.protocol.estimators = std::move(estimators);
  out.protocol.score = protocol_score(problem, out.protocol.tester,
                                      out.protocol.estimators);
  out.realization = std::move(real);
  out.signed_score_change =
      problem.to_signed(out.protocol.score) - problem.to_signed(protocol.score);
  return out;
}

}  // namespace qmetro
