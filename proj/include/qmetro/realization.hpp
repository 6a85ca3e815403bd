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

#include <optional>
#include <string>
#include <vector>

#include "qmetro/linalg.hpp"
#include "qmetro/methods.hpp"
#include "qmetro/sdp.hpp"

namespace qmetro {

/// Probe state on H_in (x) H_aux (d_aux = d_in) and POVM on H_aux (x) H_out
/// reproducing a tester.
struct Realization {
  ComplexVector psi;  ///< |Psi> = sum_i |i> (x) sqrt(sigma)|i>
  HermitianMatrix rho;
  std::vector<HermitianMatrix> povm;
  double schmidt_p0 = 1.0;  ///< largest Schmidt weight of psi
  /// Projector onto the support of sigma on the auxiliary factor; the
  /// reconstruction is only meaningful there.
  HermitianMatrix support;
  Index d_in = 1;
  Index d_out = 1;
};

/// Eigenvalues of sigma below support_tol * lambda_max count as kernel. The
/// kernel is given to the first POVM element so the POVM stays complete.
/// Throws InfeasibleTester when verify_tester(tester, feasibility_tol) fails.
Realization extract_realization(const Tester& tester, double support_tol = 1e-6,
                                double feasibility_tol = 1e-6);

struct RealizationDiagnostics {
  std::vector<double> reconstruction_errors;  ///< per element, max-entry
  double max_reconstruction_error = 0.0;
  double povm_completeness_error = 0.0;
  double min_povm_eigenvalue = 0.0;
  double state_trace_error = 0.0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Checks tr_aux((rho^{T_in} (x) 1)(1 (x) M_i)) = T_i on the support of
/// sigma, completeness of the POVM, and the trace of rho.
RealizationDiagnostics verify_realization(const Realization& real,
                                          const Tester& tester,
                                          double tol = 1e-7);

/// tr_aux((rho^{T_in} (x) 1_out)(1_in (x) M)) on H_in (x) H_out.
HermitianMatrix reconstruct_element(const Realization& real,
                                    const HermitianMatrix& m);

struct EntanglementProfile {
  double p0 = 1.0;
  double p1 = 0.0;
  ComplexVector probe;  ///< dominant Schmidt vector on H_in
  Eigen::Vector3d bloch;  ///< Bloch vector n of probe
};

/// Qubit probes only: |Psi> = sqrt(p0)|n>|0> + sqrt(p1)|-n>|1>.
EntanglementProfile entanglement_profile(const Realization& real);

/// Eigenvalues of each POVM element, descending.
std::vector<RealVector> povm_spectra(const Realization& real);

struct ProjectiveRefinement {
  Protocol protocol;
  Realization realization;
  double signed_score_change = 0.0;  ///< new minus old, maximization convention
};

/// Rounds the POVM of a protocol to a projective one on the same probe state.
/// Eigenvectors with eigenvalue above 1/2 are orthonormalized jointly; an
/// element left with rank > 1 hands the extra projectors to unused outcomes,
/// which take over its estimator. The tester is rebuilt from the rounded POVM.
/// Returns nothing when the eigenvectors do not form a basis. Optimal faces
/// of the tester program are often degenerate, and the interior-point solver
/// lands inside them; this picks an extreme point when the score allows it.
std::optional<ProjectiveRefinement> projective_refinement(
    const EstimationProblem& problem, const Protocol& protocol);

}  // namespace qmetro
