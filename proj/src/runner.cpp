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

#include "qmetro/runner.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "qmetro/realization.hpp"

namespace qmetro {

bool RunResult::all_ok() const {
  for (const auto& c : cells)
    if (!c.ok) return false;
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

Index cube_root(Index n) { return static_cast<Index>(std::lround(std::cbrt(n))); }

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<ParameterPoint> initial_estimators(const ExperimentConfig& c,
                                               Index n_outcomes) {
  if (c.case_kind == CaseKind::Su2)
    return su2_grid_estimators(c.theta_min, c.theta_max, cube_root(n_outcomes));
  return grid_estimators(c.theta_min, c.theta_max, n_outcomes);
}

TesterConstraintSet constraints_of(VariantKind v) {
  return v == VariantKind::Ppt ? TesterConstraintSet::ppt()
                               : TesterConstraintSet::general();
}

struct Job {
  MethodKind method;
  Index n_outcomes;
  std::optional<double> time;
  std::uint64_t seed;
};

std::vector<std::pair<VariantKind, Protocol>> run_job(const ExperimentConfig& c,
                                                      const Job& job) {
  SdpOptions sdp = default_sdp_options();
  if (!std::getenv("QMETRO_SOLVER_TOL")) sdp.solver.tolerance = c.tolerances.solver;
  std::vector<std::pair<VariantKind, Protocol>> out;

  if (job.method == MethodKind::M1) {
    const Index n_h = c.case_kind == CaseKind::Su2 ? cube_root(job.n_outcomes)
                                                    : job.n_outcomes;
    const auto problem = build_problem(c, job.time, n_h);
    for (VariantKind v : c.variants)
      out.emplace_back(v, method1(problem, constraints_of(v), sdp));
    return out;
  }

  const auto problem = build_problem(c, job.time, c.n_hypotheses);
  const auto est = initial_estimators(c, job.n_outcomes);
  if (job.method == MethodKind::M2) {
    for (VariantKind v : c.variants)
      out.emplace_back(v, method2(problem, est, constraints_of(v), sdp));
    return out;
  }

  SeesawConfig cfg;
  cfg.score_gap_tol = c.tolerances.score_gap;
  cfg.max_iters = c.tolerances.max_iters;
  cfg.seed = job.seed;
  cfg.sdp = sdp;
  bool ladder = false;
  for (VariantKind v : c.variants) ladder |= v != VariantKind::General;
  if (!ladder) {
    out.emplace_back(VariantKind::General,
                     method3(problem, method2(problem, est, cfg.constraints, sdp), cfg));
    return out;
  }
  // The ladder keeps general >= ppt >= product (maximization convention).
  auto bounds = no_entanglement_bounds(problem, est, cfg);
  for (VariantKind v : c.variants) {
    switch (v) {
      case VariantKind::General: out.emplace_back(v, bounds.general); break;
      case VariantKind::Ppt: out.emplace_back(v, bounds.ppt); break;
      case VariantKind::Product: out.emplace_back(v, bounds.product); break;
    }
  }
  return out;
}

void summarize(const Protocol& p, CellResult& cell) {
  cell.score = p.score;
  cell.estimators = p.estimators;
  cell.iterations = p.iterations;
  cell.solver_warning = p.solver_warning;
  cell.max_primal_residual = p.max_primal_residual;
  cell.max_dual_gap = p.max_dual_gap;
  cell.sigma = p.tester.sigma().matrix();
  const auto real = extract_realization(p.tester);
  cell.schmidt_p0 = real.schmidt_p0;
  for (const auto& spectrum : povm_spectra(real)) {
    const double cut = 1e-6 * std::max(1.0, spectrum(0));
    cell.povm_ranks.push_back((spectrum.array() > cut).count());
  }
}

// Shortest text that parses back to the same double.
std::string fmt(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

nlohmann::json matrix_json(const ComplexMatrix& m) {
  nlohmann::json re = nlohmann::json::array(), im = nlohmann::json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    nlohmann::json rr = nlohmann::json::array(), ir = nlohmann::json::array();
    for (Index c = 0; c < m.cols(); ++c) {
      rr.push_back(m(r, c).real());
      ir.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return {{"re", re}, {"im", im}};
}

}  // namespace

EstimationProblem build_problem(const ExperimentConfig& c,
                                std::optional<double> time, Index n_hypotheses) {
  switch (c.case_kind) {
    case CaseKind::Phase: {
      PhaseCase pc;
      pc.qubits = c.qubits;
      pc.theta_min = c.theta_min;
      pc.theta_max = c.theta_max;
      pc.prior = c.prior;
      pc.reward = c.reward;
      return phase_problem(pc, n_hypotheses);
    }
    case CaseKind::Thermometry: {
      ThermometryCase tc;
      tc.channel = c.thermal;
      tc.channel.time = time.value_or(0.0);
      tc.theta_min = c.theta_min;
      tc.theta_max = c.theta_max;
      tc.prior = c.prior;
      tc.reward = c.reward;
      return thermometry_problem(tc, n_hypotheses);
    }
    case CaseKind::Su2: {
      Su2Case sc;
      sc.theta_min = c.theta_min;
      sc.theta_max = c.theta_max;
      sc.prior = c.prior;
      sc.reward = c.reward;
      return su2_problem(sc, n_hypotheses);
    }
  }
  throw InvalidArgument("build_problem: unknown case");
}

RunResult run_experiment(const ExperimentConfig& config, const RunOptions& options) {
  validate(config);
  RunResult result;
  result.config = config;
  if (options.seed) result.config.seed = *options.seed;
  const ExperimentConfig& c = result.config;
  const auto start = Clock::now();

  std::vector<std::optional<double>> times;
  if (c.case_kind == CaseKind::Thermometry) {
    for (double t : c.times) times.emplace_back(t);
  } else {
    times.emplace_back(std::nullopt);
  }
  std::vector<Job> jobs;
  for (MethodKind m : c.methods)
    for (Index n : c.n_outcomes)
      for (const auto& t : times)
        jobs.push_back({m, n, t, splitmix64(c.seed + jobs.size())});

  std::vector<std::vector<CellResult>> cells(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < jobs.size(); j = next++) {
      const Job& job = jobs[j];
      const auto t0 = Clock::now();
      std::vector<CellResult> out;
      for (VariantKind v : c.variants) {
        CellResult cell;
        cell.method = job.method;
        cell.variant = v;
        cell.n_outcomes = job.n_outcomes;
        cell.time = job.time;
        cell.direction = direction_of(c.reward);
        out.push_back(cell);
      }
      try {
        const auto protocols = run_job(c, job);
        for (std::size_t k = 0; k < protocols.size(); ++k) {
          summarize(protocols[k].second, out[k]);
          out[k].ok = true;
        }
      } catch (const std::exception& e) {
        for (auto& cell : out) {
          cell.ok = false;
          cell.error = e.what();
        }
      }
      const double secs = std::chrono::duration<double>(Clock::now() - t0).count();
      for (auto& cell : out) cell.wall_seconds = secs;
      cells[j] = std::move(out);
    }
  };
  const int threads = std::max(1, std::min<int>(options.threads, jobs.size()));
  {
    std::vector<std::jthread> pool;
    for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
    worker();
  }
  for (auto& group : cells)
    for (auto& cell : group) result.cells.push_back(std::move(cell));
  result.wall_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return result;
}

Table score_table(const RunResult& result) {
  std::map<std::pair<MethodKind, VariantKind>, double> peak;
  for (const auto& cell : result.cells) {
    if (!cell.ok) continue;
    const auto key = std::make_pair(cell.method, cell.variant);
    const auto it = peak.find(key);
    if (it == peak.end() || cell.score > it->second) peak[key] = cell.score;
  }
  Table t;
  t.header = {"method", "variant", "n_outcomes", "t", "direction",
              "score", "normalized_score", "status"};
  for (const auto& cell : result.cells) {
    std::string norm;
    if (cell.ok) {
      const double m = peak.at({cell.method, cell.variant});
      norm = m != 0.0 ? fmt(cell.score / m) : "";
    }
    t.rows.push_back({to_string(cell.method), to_string(cell.variant),
                      std::to_string(cell.n_outcomes),
                      cell.time ? fmt(*cell.time) : "", to_string(cell.direction),
                      cell.ok ? fmt(cell.score) : "", norm,
                      cell.ok ? "ok" : "failed"});
  }
  return t;
}

Table schmidt_table(const RunResult& result) {
  Table t;
  t.header = {"method", "variant", "n_outcomes", "t", "schmidt_p0"};
  for (const auto& cell : result.cells) {
    if (!cell.ok) continue;
    t.rows.push_back({to_string(cell.method), to_string(cell.variant),
                      std::to_string(cell.n_outcomes),
                      cell.time ? fmt(*cell.time) : "", fmt(cell.schmidt_p0)});
  }
  return t;
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  auto line = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << "\n";
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out.str();
}

Table parse_csv(const std::string& text) {
  Table t;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> row;
    std::size_t pos = 0;
    while (true) {
      const auto comma = line.find(',', pos);
      row.push_back(line.substr(pos, comma - pos));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (first) {
      t.header = std::move(row);
      first = false;
    } else {
      if (row.size() != t.header.size())
        throw InvalidArgument("parse_csv: ragged row '" + line + "'");
      t.rows.push_back(std::move(row));
    }
  }
  return t;
}

std::string to_json(const RunResult& result) {
  using nlohmann::json;
  const auto& c = result.config;
  json cfg = {
      {"name", c.name},
      {"case", to_string(c.case_kind)},
      {"reward", to_string(c.reward)},
      {"direction", to_string(direction_of(c.reward))},
      {"prior", c.prior.kind == PriorSpec::Kind::Uniform
                    ? json{{"kind", "uniform"}}
                    : json{{"kind", "gaussian"}, {"mu", c.prior.mu},
                           {"sigma", c.prior.sigma}}},
      {"theta_min", c.theta_min},
      {"theta_max", c.theta_max},
      {"n_hypotheses", c.n_hypotheses},
      {"n_outcomes", c.n_outcomes},
      {"seed", c.seed},
      {"tolerances",
       {{"solver", c.tolerances.solver},
        {"score_gap", c.tolerances.score_gap},
        {"max_iters", c.tolerances.max_iters}}},
  };
  for (auto m : c.methods) cfg["methods"].push_back(to_string(m));
  for (auto v : c.variants) cfg["variants"].push_back(to_string(v));
  if (c.case_kind == CaseKind::Phase) cfg["phase"] = {{"qubits", c.qubits}};
  if (c.case_kind == CaseKind::Thermometry)
    cfg["thermometry"] = {
        {"epsilon", c.thermal.epsilon},
        {"coupling", c.thermal.coupling},
        {"statistics",
         c.thermal.statistics == Statistics::Bosonic ? "bosonic" : "fermionic"},
        {"times", c.times}};

  json cells = json::array();
  for (const auto& cell : result.cells) {
    json j = {{"method", to_string(cell.method)},
              {"variant", to_string(cell.variant)},
              {"n_outcomes", cell.n_outcomes},
              {"t", cell.time ? json(*cell.time) : json(nullptr)},
              {"direction", to_string(cell.direction)},
              {"status", cell.ok ? "ok" : "failed"},
              {"wall_seconds", cell.wall_seconds}};
    if (!cell.ok) {
      j["error"] = cell.error;
    } else {
      j["score"] = cell.score;
      j["estimators"] = cell.estimators;
      j["iterations"] = cell.iterations;
      j["realization"] = {{"sigma", matrix_json(cell.sigma)},
                          {"schmidt_p0", cell.schmidt_p0},
                          {"povm_ranks", cell.povm_ranks}};
      j["solver"] = {{"warning", cell.solver_warning},
                     {"max_primal_residual", cell.max_primal_residual},
                     {"max_dual_gap", cell.max_dual_gap}};
    }
    cells.push_back(std::move(j));
  }
  json out = {{"schema", "qmetro-result-1"},
              {"config", cfg},
              {"config_yaml", to_yaml(c)},
              {"cells", cells},
              {"all_ok", result.all_ok()},
              {"wall_seconds", result.wall_seconds}};
  return out.dump(2) + "\n";
}

void write_outputs(const RunResult& result, const std::string& dir) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& text) {
    std::ofstream f(std::filesystem::path(dir) / name);
    if (!f) throw Error("cannot write " + name + " in " + dir);
    f << text;
  };
  write("result.json", to_json(result));
  write("config.yaml", to_yaml(result.config));
  write("scores.csv", to_csv(score_table(result)));
  write("schmidt.csv", to_csv(schmidt_table(result)));
}

}  // namespace qmetro
