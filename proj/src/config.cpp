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

#include "qmetro/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace qmetro {

std::string to_string(CaseKind kind) {
  switch (kind) {
    case CaseKind::Phase: return "phase";
    case CaseKind::Thermometry: return "thermometry";
    case CaseKind::Su2: return "su2";
  }
  return "unknown";
}

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::M1: return "m1";
    case MethodKind::M2: return "m2";
    case MethodKind::M3: return "m3";
  }
  return "unknown";
}

std::string to_string(VariantKind kind) {
  switch (kind) {
    case VariantKind::General: return "general";
    case VariantKind::Ppt: return "ppt";
    case VariantKind::Product: return "product";
  }
  return "unknown";
}

std::string ConfigError::format(const std::string& message,
                                const std::string& field, int line) {
  std::ostringstream out;
  out << "config";
  if (line > 0) out << ":" << line;
  if (!field.empty()) out << ": " << field;
  out << ": " << message;
  return out.str();
}

namespace {

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

// Mapping with a fixed set of keys; anything else is an error.
class Section {
 public:
  Section(const YAML::Node& node, std::string path,
          std::set<std::string> allowed)
      : node_(node), path_(std::move(path)) {
    if (!node_.IsMap())
      throw ConfigError("expected a mapping", path_, line_of(node_));
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key))
        throw ConfigError("unknown field", join(path_, key), line_of(kv.first));
    }
  }

  YAML::Node get(const std::string& key) const { return node_[key]; }
  bool has(const std::string& key) const { return static_cast<bool>(node_[key]); }
  std::string path(const std::string& key) const { return join(path_, key); }

  template <typename T>
  T scalar(const std::string& key, T fallback) const {
    const YAML::Node n = node_[key];
    if (!n) return fallback;
    if (!n.IsScalar())
      throw ConfigError("expected a scalar", path(key), line_of(n));
    try {
      return n.as<T>();
    } catch (const YAML::Exception&) {
      throw ConfigError("cannot read '" + n.Scalar() + "'", path(key), line_of(n));
    }
  }

  double real(const std::string& key, double fallback) const {
    const double v = scalar<double>(key, fallback);
    if (!std::isfinite(v))
      throw ConfigError("must be finite", path(key), line_of(node_[key]));
    return v;
  }

 private:
  YAML::Node node_;
  std::string path_;
};

template <typename T>
std::vector<T> list(const Section& s, const std::string& key,
                    std::vector<T> fallback) {
  const YAML::Node n = s.get(key);
  if (!n) return fallback;
  std::vector<T> out;
  auto read = [&](const YAML::Node& item) {
    try {
      out.push_back(item.as<T>());
    } catch (const YAML::Exception&) {
      throw ConfigError("cannot read '" + item.Scalar() + "'", s.path(key),
                        line_of(item));
    }
  };
  if (n.IsScalar()) {
    read(n);
  } else if (n.IsSequence()) {
    for (const auto& item : n) read(item);
  } else {
    throw ConfigError("expected a list", s.path(key), line_of(n));
  }
  return out;
}

template <typename E>
E parse_enum(const std::string& text, const std::vector<E>& options,
             const std::string& field, int line) {
  for (E e : options)
    if (to_string(e) == text) return e;
  std::string names;
  for (E e : options) names += (names.empty() ? "" : ", ") + to_string(e);
  throw ConfigError("'" + text + "' is not one of " + names, field, line);
}

template <typename E>
std::vector<E> enum_list(const Section& s, const std::string& key,
                         const std::vector<E>& options, std::vector<E> fallback) {
  const YAML::Node n = s.get(key);
  if (!n) return fallback;
  std::vector<E> out;
  const auto names = list<std::string>(s, key, {});
  std::size_t i = 0;
  for (const auto& name : names) {
    const YAML::Node item = n.IsSequence() ? n[i] : n;
    out.push_back(parse_enum(name, options, s.path(key), line_of(item)));
    ++i;
  }
  return out;
}

std::vector<double> linspace(double start, double stop, Index count) {
  std::vector<double> out;
  for (Index k = 0; k < count; ++k)
    out.push_back(count == 1 ? start
                             : start + (stop - start) * static_cast<double>(k) /
                                           static_cast<double>(count - 1));
  return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& yaml, bool full_scale) {
  YAML::Node root;
  try {
    root = YAML::Load(yaml);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, "", e.mark.line + 1);
  }
  if (!root || root.IsNull()) throw ConfigError("empty document", "", 0);
  const Section top(root, "",
                    {"name", "case", "reward", "prior", "theta_min", "theta_max",
                     "n_hypotheses", "n_outcomes", "methods", "variants", "phase",
                     "thermometry", "seed", "tolerances"});
  ExperimentConfig c;
  c.name = top.scalar<std::string>("name", c.name);
  if (!top.has("case")) throw ConfigError("missing", "case", 0);
  c.case_kind = parse_enum<CaseKind>(top.scalar<std::string>("case", ""),
                           {CaseKind::Phase, CaseKind::Thermometry, CaseKind::Su2},
                           "case", line_of(top.get("case")));

  switch (c.case_kind) {
    case CaseKind::Phase: {
      const PhaseCase d;
      c.reward = d.reward;
      c.theta_min = d.theta_min;
      c.theta_max = d.theta_max;
      c.n_outcomes = {2, 3, 4};
      break;
    }
    case CaseKind::Thermometry: {
      const ThermometryCase d;
      c.reward = d.reward;
      c.theta_min = d.theta_min;
      c.theta_max = d.theta_max;
      c.n_outcomes = {4};
      c.times = linspace(0.0, 1.0, 100);
      break;
    }
    case CaseKind::Su2: {
      const Su2Case d;
      c.reward = d.reward;
      c.theta_min = d.theta_min;
      c.theta_max = d.theta_max;
      c.n_hypotheses = full_scale ? 10 : 6;
      c.n_outcomes = {8, 27};
      break;
    }
  }

  if (top.has("reward")) {
    try {
      c.reward = parse_reward_kind(top.scalar<std::string>("reward", ""));
    } catch (const InvalidArgument& e) {
      throw ConfigError(e.what(), "reward", line_of(top.get("reward")));
    }
  }
  if (const YAML::Node p = top.get("prior")) {
    if (p.IsScalar()) {
      const auto kind = p.as<std::string>();
      if (kind != "uniform")
        throw ConfigError("scalar prior must be 'uniform'", "prior", line_of(p));
    } else {
      const Section ps(p, "prior", {"kind", "mu", "sigma"});
      const auto kind = ps.scalar<std::string>("kind", "gaussian");
      if (kind == "gaussian") {
        c.prior = PriorSpec::gaussian(ps.real("mu", 0.0), ps.real("sigma", 1.0));
      } else if (kind != "uniform") {
        throw ConfigError("'" + kind + "' is not one of uniform, gaussian",
                          "prior.kind", line_of(ps.get("kind")));
      }
    }
  }
  c.theta_min = top.real("theta_min", c.theta_min);
  c.theta_max = top.real("theta_max", c.theta_max);
  c.n_hypotheses = top.scalar<Index>("n_hypotheses", c.n_hypotheses);
  c.n_outcomes = list<Index>(top, "n_outcomes", c.n_outcomes);
  c.methods = enum_list<MethodKind>(top, "methods",
                        {MethodKind::M1, MethodKind::M2, MethodKind::M3},
                        {MethodKind::M1, MethodKind::M2, MethodKind::M3});
  c.variants = enum_list<VariantKind>(
      top, "variants",
      {VariantKind::General, VariantKind::Ppt, VariantKind::Product},
      {VariantKind::General});
  c.seed = top.scalar<std::uint64_t>("seed", c.seed);

  if (top.has("phase")) {
    if (c.case_kind != CaseKind::Phase)
      throw ConfigError("only valid for case phase", "phase",
                        line_of(top.get("phase")));
    const Section ps(top.get("phase"), "phase", {"qubits"});
    c.qubits = ps.scalar<Index>("qubits", c.qubits);
  }
  if (top.has("thermometry")) {
    if (c.case_kind != CaseKind::Thermometry)
      throw ConfigError("only valid for case thermometry", "thermometry",
                        line_of(top.get("thermometry")));
    const Section ts(top.get("thermometry"), "thermometry",
                     {"epsilon", "coupling", "statistics", "times"});
    c.thermal.epsilon = ts.real("epsilon", c.thermal.epsilon);
    c.thermal.coupling = ts.real("coupling", c.thermal.coupling);
    if (ts.has("statistics")) {
      const auto s = ts.scalar<std::string>("statistics", "");
      if (s == "bosonic") {
        c.thermal.statistics = Statistics::Bosonic;
      } else if (s == "fermionic") {
        c.thermal.statistics = Statistics::Fermionic;
      } else {
        throw ConfigError("'" + s + "' is not one of bosonic, fermionic",
                          ts.path("statistics"), line_of(ts.get("statistics")));
      }
    }
    if (const YAML::Node t = ts.get("times")) {
      if (t.IsMap()) {
        const Section g(t, ts.path("times"), {"start", "stop", "count"});
        const Index count = g.scalar<Index>("count", 100);
        if (count < 1)
          throw ConfigError("must be at least 1", g.path("count"),
                            line_of(g.get("count")));
        c.times = linspace(g.real("start", 0.0), g.real("stop", 1.0), count);
      } else {
        c.times = list<double>(ts, "times", {});
      }
    }
  }
  if (top.has("tolerances")) {
    const Section ts(top.get("tolerances"), "tolerances",
                     {"solver", "score_gap", "max_iters"});
    c.tolerances.solver = ts.real("solver", c.tolerances.solver);
    c.tolerances.score_gap = ts.real("score_gap", c.tolerances.score_gap);
    c.tolerances.max_iters = ts.scalar<int>("max_iters", c.tolerances.max_iters);
  }

  // Field checks with line numbers, then the cross-field ones.
  auto positive = [&](const std::string& key, double v) {
    if (!(v > 0.0)) {
      const YAML::Node n = top.get(key);
      throw ConfigError("must be positive", key, n ? line_of(n) : 0);
    }
  };
  positive("n_hypotheses", static_cast<double>(c.n_hypotheses));
  for (Index n : c.n_outcomes) positive("n_outcomes", static_cast<double>(n));
  try {
    validate(c);
  } catch (const ConfigError& e) {
    // Point at the offending field when the document has it.
    YAML::Node n = root;
    std::stringstream path(e.field());
    for (std::string key; n && std::getline(path, key, '.');) {
      if (!n.IsMap()) break;
      const YAML::Node& parent = n;
      n.reset(parent[key]);
    }
    if (!n || e.line() > 0) throw;
    throw ConfigError(e.message(), e.field(), line_of(n));
  }
  return c;
}

ExperimentConfig load_config(const std::string& path, bool full_scale) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path, "", 0);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), full_scale);
}

void validate(const ExperimentConfig& c) {
  auto fail = [](const std::string& field, const std::string& msg) {
    throw ConfigError(msg, field, 0);
  };
  if (!(c.theta_min < c.theta_max)) fail("theta_max", "must exceed theta_min");
  if (c.prior.kind == PriorSpec::Kind::Gaussian &&
      !(c.prior.sigma > 0.0 && std::isfinite(c.prior.sigma) &&
        std::isfinite(c.prior.mu)))
    fail("prior.sigma", "must be positive and finite");
  if (c.n_hypotheses < 1) fail("n_hypotheses", "must be at least 1");
  if (c.n_outcomes.empty()) fail("n_outcomes", "must not be empty");
  if (c.methods.empty()) fail("methods", "must not be empty");
  if (c.variants.empty()) fail("variants", "must not be empty");
  for (Index n : c.n_outcomes) {
    if (n < 1) fail("n_outcomes", "entries must be at least 1");
    if (c.case_kind == CaseKind::Su2) {
      const auto side = static_cast<Index>(std::lround(std::cbrt(n)));
      if (side * side * side != n) fail("n_outcomes", "su2 needs perfect cubes");
    }
  }
  for (VariantKind v : c.variants)
    if (v == VariantKind::Product)
      for (MethodKind m : c.methods)
        if (m != MethodKind::M3)
          fail("variants", "product is a seesaw and needs methods: [m3]");
  if (c.reward == RewardKind::Custom) fail("reward", "custom rewards need code");
  if (c.case_kind == CaseKind::Su2 && c.reward != RewardKind::ChoiFidelity)
    fail("reward", "su2 supports fidelity only");
  if (c.case_kind != CaseKind::Su2 && c.reward == RewardKind::ChoiFidelity)
    fail("reward", "fidelity is only wired up for su2");
  if (c.reward == RewardKind::Msle && !(c.theta_min > 0.0))
    fail("theta_min", "msle needs positive parameters");
  if (c.case_kind == CaseKind::Phase && c.qubits < 1)
    fail("phase.qubits", "must be at least 1");
  if (c.case_kind == CaseKind::Thermometry) {
    if (c.times.empty()) fail("thermometry.times", "must not be empty");
    for (double t : c.times)
      if (!(t >= 0.0) || !std::isfinite(t))
        fail("thermometry.times", "must be finite and non-negative");
    if (!(c.thermal.epsilon > 0.0)) fail("thermometry.epsilon", "must be positive");
    if (!(c.thermal.coupling >= 0.0)) fail("thermometry.coupling", "must be non-negative");
    if (!(c.theta_min > 0.0)) fail("theta_min", "temperatures must be positive");
  }
  if (!(c.tolerances.solver > 0.0)) fail("tolerances.solver", "must be positive");
  if (!(c.tolerances.score_gap > 0.0))
    fail("tolerances.score_gap", "must be positive");
  if (c.tolerances.max_iters < 1) fail("tolerances.max_iters", "must be at least 1");
}

std::string to_yaml(const ExperimentConfig& c) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  out << YAML::Key << "name" << YAML::Value << c.name;
  out << YAML::Key << "case" << YAML::Value << to_string(c.case_kind);
  out << YAML::Key << "reward" << YAML::Value << to_string(c.reward);
  out << YAML::Key << "prior" << YAML::Value;
  if (c.prior.kind == PriorSpec::Kind::Uniform) {
    out << "uniform";
  } else {
    out << YAML::BeginMap << YAML::Key << "kind" << YAML::Value << "gaussian"
        << YAML::Key << "mu" << YAML::Value << c.prior.mu << YAML::Key
        << "sigma" << YAML::Value << c.prior.sigma << YAML::EndMap;
  }
  out << YAML::Key << "theta_min" << YAML::Value << c.theta_min;
  out << YAML::Key << "theta_max" << YAML::Value << c.theta_max;
  out << YAML::Key << "n_hypotheses" << YAML::Value << c.n_hypotheses;
  out << YAML::Key << "n_outcomes" << YAML::Value << YAML::Flow << c.n_outcomes;
  out << YAML::Key << "methods" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto m : c.methods) out << to_string(m);
  out << YAML::EndSeq;
  out << YAML::Key << "variants" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (auto v : c.variants) out << to_string(v);
  out << YAML::EndSeq;
  if (c.case_kind == CaseKind::Phase)
    out << YAML::Key << "phase" << YAML::Value << YAML::BeginMap << YAML::Key
        << "qubits" << YAML::Value << c.qubits << YAML::EndMap;
  if (c.case_kind == CaseKind::Thermometry) {
    out << YAML::Key << "thermometry" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "epsilon" << YAML::Value << c.thermal.epsilon;
    out << YAML::Key << "coupling" << YAML::Value << c.thermal.coupling;
    out << YAML::Key << "statistics" << YAML::Value
        << (c.thermal.statistics == Statistics::Bosonic ? "bosonic" : "fermionic");
    out << YAML::Key << "times" << YAML::Value << YAML::Flow << c.times;
    out << YAML::EndMap;
  }
  out << YAML::Key << "seed" << YAML::Value << c.seed;
  out << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "solver" << YAML::Value << c.tolerances.solver;
  out << YAML::Key << "score_gap" << YAML::Value << c.tolerances.score_gap;
  out << YAML::Key << "max_iters" << YAML::Value << c.tolerances.max_iters;
  out << YAML::EndMap << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

}  // namespace qmetro
