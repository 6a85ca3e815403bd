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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qmetro/cases.hpp"
#include "qmetro/errors.hpp"

namespace qmetro {

enum class CaseKind { Phase, Thermometry, Su2 };
enum class MethodKind { M1, M2, M3 };
enum class VariantKind { General, Ppt, Product };

std::string to_string(CaseKind kind);
std::string to_string(MethodKind kind);
std::string to_string(VariantKind kind);

/// Config problem located at a YAML line (1-based; 0 when unknown) and a
/// dotted field path.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& message, std::string field, int line)
      : Error(format(message, field, line)),
        message_(message),
        field_(std::move(field)),
        line_(line) {}
  const std::string& message() const { return message_; }
  const std::string& field() const { return field_; }
  int line() const { return line_; }

 private:
  static std::string format(const std::string& message, const std::string& field,
                            int line);
  std::string message_;
  std::string field_;
  int line_;
};

struct Tolerances {
  double solver = 1e-9;
  double score_gap = 1e-6;
  int max_iters = 200;
};

struct ExperimentConfig {
  std::string name = "experiment";
  CaseKind case_kind = CaseKind::Phase;
  RewardKind reward = RewardKind::Cos2;
  PriorSpec prior;
  double theta_min = 0.0;
  double theta_max = 0.0;
  /// Total hypotheses for phase and thermometry, per axis for su2.
  Index n_hypotheses = 1000;
  /// Total outcomes; perfect cubes for su2.
  std::vector<Index> n_outcomes;
  std::vector<MethodKind> methods;
  std::vector<VariantKind> variants;
  Index qubits = 2;                  ///< phase only
  ThermalChannelParams thermal;      ///< thermometry only; time is ignored
  std::vector<double> times;         ///< thermometry only
  std::uint64_t seed = 0;
  Tolerances tolerances;
};

/// Parses and validates a YAML document. Missing fields take the case
/// defaults; su2 uses 6 hypotheses per axis, or 10 with full_scale.
ExperimentConfig parse_config(const std::string& yaml, bool full_scale = false);
ExperimentConfig load_config(const std::string& path, bool full_scale = false);

/// Throws ConfigError (line 0) when fields are inconsistent.
void validate(const ExperimentConfig& config);

/// Fully resolved YAML; parse_config(to_yaml(c)) reproduces c.
std::string to_yaml(const ExperimentConfig& config);

}  // namespace qmetro
