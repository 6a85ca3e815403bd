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

#include <stdexcept>
#include <string>

namespace qmetro {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotHermitian : public Error {
 public:
  using Error::Error;
};

class NotPSD : public Error {
 public:
  NotPSD(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Raised for parameters outside an operation's domain (non-unitary input,
/// non-positive temperature, invalid grid bounds, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Conic solver could not reach an acceptable solution.
class SolverFailure : public Error {
 public:
  SolverFailure(const std::string& what, double primal_residual,
                double dual_residual, double gap)
      : Error(what),
        primal_residual_(primal_residual),
        dual_residual_(dual_residual),
        gap_(gap) {}
  double primal_residual() const { return primal_residual_; }
  double dual_residual() const { return dual_residual_; }
  double gap() const { return gap_; }

 private:
  double primal_residual_;
  double dual_residual_;
  double gap_;
};

/// Posterior requested for an outcome that occurs with negligible probability.
class ZeroOutcomeProbability : public Error {
 public:
  ZeroOutcomeProbability(const std::string& what, double probability)
      : Error(what), probability_(probability) {}
  double probability() const { return probability_; }

 private:
  double probability_;
};

/// Seesaw step made the score worse; indicates a broken estimator update.
class InfeasibleTester : public Error {
 public:
  using Error::Error;
};

class NonMonotoneStep : public Error {
 public:
  using Error::Error;
};

}  // namespace qmetro
