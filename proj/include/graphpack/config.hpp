// Copyright 2026 The graphpack Authors.
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

#ifndef GRAPHPACK_CONFIG_HPP_
#define GRAPHPACK_CONFIG_HPP_

#include <cmath>
#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphpack/graph.hpp"
#include "graphpack/instances.hpp"
#include "graphpack/random.hpp"
#include "graphpack/slicer.hpp"

namespace graphpack {

struct RunConfig {
  int n = 200;
  double epsilon = 0.35;
  int max_degree = 3;
  // trees, tpc_sequence, oberwolfach, bounded_components, from_files
  std::string family = "tpc_sequence";

  // Family parameters.
  int count = 0;            // graphs for trees / oberwolfach / bounded_components
  int tree_min_order = 0;   // smallest tree order; 0 means n / 2
  std::vector<int> cycle_lengths;
  int component_order = 8;
  std::vector<std::string> input_files;

  // Constant overrides.
  double gamma = 0.15;
  double delta = 0.02;
  double zeta = 0.05;
  double p0 = 0.3;
  int layers = 8;
  double layer_probability = -1.0;
  int clique_order = 4;
  double factor_epsilon = 0.2;  // factors keep at least (1 - eps) n / l cells

  // Caps and slacks.
  double cap_slack = 2.0;
  bool enforce_caps = false;
  bool use_cliques = true;
  int matchings_wanted = 0;  // 0 means round(gamma^1.2 n)

  // Retry budgets.
  int layer_retries = 3;
  int instance_retries = 5;
  int run_retries = 2;

  std::uint64_t seed = 1;
  bool include_timings = false;

  // Output paths (CLI only).
  std::string report_path;
  std::string dump_path;
  std::string csv_path;

  PipelineConstants constants() const {
    PipelineConstants c;
    c.n = n;
    c.epsilon = epsilon;
    c.max_degree = max_degree;
    c.gamma = gamma;
    c.delta = delta;
    c.zeta = zeta;
    c.p0 = p0;
    c.layers = layers;
    c.layer_probability = layer_probability;
    c.clique_order = clique_order;
    c.seed = seed;
    return c;
  }

  int matchings_target() const {
    if (matchings_wanted > 0) return matchings_wanted;
    return std::max(1, static_cast<int>(std::lround(std::pow(gamma, 1.2) * n)));
  }

  int min_tree_order() const { return tree_min_order > 0 ? tree_min_order : std::max(1, n / 2); }
};

inline const std::set<std::string>& family_names() {
  static const std::set<std::string> names{"trees", "tpc_sequence", "oberwolfach",
                                           "bounded_components", "from_files"};
  return names;
}

// Throws ConfigError on the first invalid field.
inline void validate_config(const RunConfig& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (cfg.n < 2) fail("n must be at least 2");
  if (!(cfg.epsilon > 0 && cfg.epsilon < 1)) fail("epsilon must lie in (0,1)");
  if (cfg.max_degree < 1) fail("max_degree must be at least 1");
  if (!family_names().count(cfg.family)) fail("unknown family '" + cfg.family + "'");
  if (cfg.cap_slack < 1) fail("cap_slack must be at least 1");
  if (cfg.layer_retries < 1 || cfg.instance_retries < 0 || cfg.run_retries < 0) {
    fail("retry budgets must be non-negative (layer_retries at least 1)");
  }
  if (!(cfg.factor_epsilon > 0 && cfg.factor_epsilon < 1)) fail("factor_epsilon must lie in (0,1)");
  if (cfg.count < 0) fail("count must be non-negative");
  if (cfg.family == "oberwolfach") {
    long long total = 0;
    for (int len : cfg.cycle_lengths) total += len;
    if (total != cfg.n) fail("cycle_lengths must sum to n");
  }
  if (cfg.family == "from_files" && cfg.input_files.empty()) fail("from_files needs input_files");
  if (cfg.min_tree_order() > cfg.n) fail("tree_min_order exceeds n");
  validate_constants(cfg.constants());
}

inline nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["epsilon"] = cfg.epsilon;
  j["max_degree"] = cfg.max_degree;
  j["family"] = cfg.family;
  j["count"] = cfg.count;
  j["tree_min_order"] = cfg.tree_min_order;
  j["cycle_lengths"] = cfg.cycle_lengths;
  j["component_order"] = cfg.component_order;
  j["input_files"] = cfg.input_files;
  j["gamma"] = cfg.gamma;
  j["delta"] = cfg.delta;
  j["zeta"] = cfg.zeta;
  j["p0"] = cfg.p0;
  j["layers"] = cfg.layers;
  j["layer_probability"] = cfg.layer_probability;
  j["clique_order"] = cfg.clique_order;
  j["factor_epsilon"] = cfg.factor_epsilon;
  j["cap_slack"] = cfg.cap_slack;
  j["enforce_caps"] = cfg.enforce_caps;
  j["use_cliques"] = cfg.use_cliques;
  j["matchings_wanted"] = cfg.matchings_wanted;
  j["layer_retries"] = cfg.layer_retries;
  j["instance_retries"] = cfg.instance_retries;
  j["run_retries"] = cfg.run_retries;
  j["seed"] = cfg.seed;
  j["include_timings"] = cfg.include_timings;
  j["report_path"] = cfg.report_path;
  j["dump_path"] = cfg.dump_path;
  j["csv_path"] = cfg.csv_path;
  return j;
}

// Missing keys keep their defaults; unknown keys are rejected.
inline RunConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig cfg;
  const nlohmann::json known = config_to_json(cfg);
  for (const auto& [key, value] : j.items()) {
    if (!known.contains(key)) throw ConfigError("unknown config key '" + key + "'");
  }
  auto read = [&](const char* key, auto& field) {
    if (!j.contains(key)) return;
    try {
      j.at(key).get_to(field);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
  };
  read("n", cfg.n);
  read("epsilon", cfg.epsilon);
  read("max_degree", cfg.max_degree);
  read("family", cfg.family);
  read("count", cfg.count);
  read("tree_min_order", cfg.tree_min_order);
  read("cycle_lengths", cfg.cycle_lengths);
  read("component_order", cfg.component_order);
  read("input_files", cfg.input_files);
  read("gamma", cfg.gamma);
  read("delta", cfg.delta);
  read("zeta", cfg.zeta);
  read("p0", cfg.p0);
  read("layers", cfg.layers);
  read("layer_probability", cfg.layer_probability);
  read("clique_order", cfg.clique_order);
  read("factor_epsilon", cfg.factor_epsilon);
  read("cap_slack", cfg.cap_slack);
  read("enforce_caps", cfg.enforce_caps);
  read("use_cliques", cfg.use_cliques);
  read("matchings_wanted", cfg.matchings_wanted);
  read("layer_retries", cfg.layer_retries);
  read("instance_retries", cfg.instance_retries);
  read("run_retries", cfg.run_retries);
  read("seed", cfg.seed);
  read("include_timings", cfg.include_timings);
  read("report_path", cfg.report_path);
  read("dump_path", cfg.dump_path);
  read("csv_path", cfg.csv_path);
  validate_config(cfg);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

// Guest graphs described by the config; deterministic in cfg.seed.
inline std::vector<Graph> build_inputs(const RunConfig& cfg) {
  std::vector<Graph> graphs;
  const std::uint64_t seed = derive_seed(cfg.seed, 0x696e70ULL);
  if (cfg.family == "tpc_sequence") {
    graphs = gen_tpc_sequence(cfg.n, cfg.max_degree, cfg.min_tree_order(), seed);
  } else if (cfg.family == "trees") {
    Rng rng(derive_seed(seed, 0x6f7264ULL));
    for (int i = 0; i < cfg.count; ++i) {
      const int order = uniform_int(rng, cfg.min_tree_order(), cfg.n);
      graphs.push_back(gen_bounded_tree(order, cfg.max_degree, derive_seed(seed, 0x747265ULL, i)));
    }
  } else if (cfg.family == "oberwolfach") {
    const Graph f = gen_oberwolfach(cfg.n, cfg.cycle_lengths);
    graphs.assign(static_cast<std::size_t>(cfg.count), f);
  } else if (cfg.family == "bounded_components") {
    for (int i = 0; i < cfg.count; ++i) {
      graphs.push_back(gen_bounded_components(cfg.n, cfg.component_order, cfg.max_degree,
                                              derive_seed(seed, 0x62636dULL, i)));
    }
  } else if (cfg.family == "from_files") {
    for (const auto& path : cfg.input_files) graphs.push_back(load_graph(path));
  } else {
    throw ConfigError("unknown family '" + cfg.family + "'");
  }
  return graphs;
}

}  // namespace graphpack

#endif  // GRAPHPACK_CONFIG_HPP_
