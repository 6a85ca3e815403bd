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

#include "qmetro/config.hpp"
#include "qmetro/methods.hpp"

namespace qmetro {

struct RunOptions {
  int threads = 1;
  std::optional<std::uint64_t> seed;  ///< overrides the config seed
};

/// One (method, variant, N_O, t) point of a sweep.
struct CellResult {
  MethodKind method = MethodKind::M1;
  VariantKind variant = VariantKind::General;
  Index n_outcomes = 0;
  std::optional<double> time;  ///< thermometry only
  bool ok = false;
  std::string error;
  Direction direction = Direction::Maximize;
  double score = 0.0;  ///< natural units
  std::vector<ParameterPoint> estimators;
  int iterations = 0;
  // Realization summary.
  ComplexMatrix sigma;
  double schmidt_p0 = 0.0;
  std::vector<Index> povm_ranks;
  // Solver diagnostics.
  bool solver_warning = false;
  double max_primal_residual = 0.0;
  double max_dual_gap = 0.0;
  double wall_seconds = 0.0;
};

struct RunResult {
  ExperimentConfig config;
  std::vector<CellResult> cells;
  double wall_seconds = 0.0;
  bool all_ok() const;
};

EstimationProblem build_problem(const ExperimentConfig& config,
                                std::optional<double> time, Index n_hypotheses);

/// Runs every cell of the sweep on a pool of worker threads. Solver and
/// argument errors are recorded per cell and do not stop the run. Cell order
/// and scores do not depend on the thread count.
RunResult run_experiment(const ExperimentConfig& config,
                         const RunOptions& options = {});

/// Flat table: a header plus rows of equal length.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// One row per cell:
///   method, variant, n_outcomes, t, direction, score, normalized_score, status
/// normalized_score divides by the largest score among the successful cells
/// of the same (method, variant) sweep. t is empty outside thermometry.
Table score_table(const RunResult& result);
/// One row per successful cell: method, variant, n_outcomes, t, schmidt_p0.
Table schmidt_table(const RunResult& result);

std::string to_csv(const Table& table);
Table parse_csv(const std::string& text);

/// result.json with the config echo, per-cell results and diagnostics.
std::string to_json(const RunResult& result);

/// Writes result.json, config.yaml, scores.csv and schmidt.csv into dir.
void write_outputs(const RunResult& result, const std::string& dir);

}  // namespace qmetro
