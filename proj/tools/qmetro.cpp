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

// Experiment runner: qmetro run <config.yaml> [--out dir] [--threads n]
//                                [--seed n] [--paper-scale]

#include <cstdint>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "qmetro/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bayesian quantum metrology via tester semidefinite programs"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "run the sweep described by a YAML config");
  std::string config_path;
  std::string out_dir = "results";
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::uint64_t seed = 0;
  bool full_scale = false;
  run->add_option("config", config_path, "YAML config file")->required();
  run->add_option("--out", out_dir, "output directory")->capture_default_str();
  run->add_option("--threads", threads, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  auto* seed_opt = run->add_option("--seed", seed, "override the config seed");
  run->add_flag("--paper-scale", full_scale,
                "use the full hypothesis grids (su2: 10 per axis)");
  CLI11_PARSE(app, argc, argv);

  qmetro::ExperimentConfig config;
  try {
    config = qmetro::load_config(config_path, full_scale);
  } catch (const qmetro::ConfigError& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return 2;
  }
  qmetro::RunOptions options;
  options.threads = threads;
  if (*seed_opt) options.seed = seed;

  const auto result = qmetro::run_experiment(config, options);
  qmetro::write_outputs(result, out_dir);
  std::size_t failed = 0;
  for (const auto& cell : result.cells) {
    if (cell.ok) continue;
    ++failed;
    std::cerr << "failed: " << qmetro::to_string(cell.method) << " "
              << qmetro::to_string(cell.variant) << " N_O=" << cell.n_outcomes;
    if (cell.time) std::cerr << " t=" << *cell.time;
    std::cerr << ": " << cell.error << "\n";
  }
  std::cout << result.cells.size() - failed << "/" << result.cells.size()
            << " cells ok in " << result.wall_seconds << " s, results in "
            << out_dir << "\n";
  return failed == 0 ? 0 : 1;
}
