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

#ifndef GRAPHPACK_PERSIST_HPP_
#define GRAPHPACK_PERSIST_HPP_

// Directory layouts: graph files plus a JSON manifest.

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "graphpack/graph.hpp"
#include "graphpack/instances.hpp"
#include "graphpack/slicer.hpp"

namespace graphpack {

namespace detail {

inline void write_manifest(const std::filesystem::path& dir, const nlohmann::json& j) {
  std::ofstream out(dir / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

inline nlohmann::json read_manifest(const std::filesystem::path& dir) {
  std::ifstream in(dir / "manifest.json");
  if (!in) throw std::runtime_error("cannot read manifest in " + dir.string());
  nlohmann::json j;
  in >> j;
  return j;
}

}  // namespace detail

inline void save_instance_set(const std::filesystem::path& dir, const InstanceSet& set) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["n"] = set.n;
  j["delta_max_degree"] = set.max_degree;
  nlohmann::json list = nlohmann::json::array();
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    const std::string file = "instance_" + std::to_string(i) + ".txt";
    save_graph((dir / file).string(), set.instances[i].graph);
    list.push_back({{"file", file},
                    {"separator", set.instances[i].separator},
                    {"two_independent", set.instances[i].two_independent},
                    {"component_bound", set.instances[i].component_bound}});
  }
  j["instances"] = list;
  detail::write_manifest(dir, j);
}

// Anchors are recomputed; normalization provenance is not persisted.
inline InstanceSet load_instance_set(const std::filesystem::path& dir) {
  const nlohmann::json j = detail::read_manifest(dir);
  InstanceSet set;
  set.n = j.at("n").get<int>();
  set.max_degree = j.at("delta_max_degree").get<int>();
  for (const auto& entry : j.at("instances")) {
    InstanceGraph inst;
    inst.graph = load_graph((dir / entry.at("file").get<std::string>()).string());
    inst.separator = entry.at("separator").get<VertexSet>();
    inst.two_independent = entry.at("two_independent").get<VertexSet>();
    inst.component_bound = entry.value("component_bound", 0);
    compute_anchors(inst);
    set.total_edges += inst.graph.edge_count();
    set.provenance.push_back({static_cast<int>(set.instances.size())});
    set.instances.push_back(std::move(inst));
  }
  return set;
}

inline nlohmann::json constants_to_json(const PipelineConstants& c) {
  return {{"n", c.n},         {"epsilon", c.epsilon},
          {"max_degree", c.max_degree}, {"gamma", c.gamma},
          {"delta", c.delta}, {"zeta", c.zeta},
          {"p0", c.p0},       {"component_bound", c.component_bound},
          {"layers", c.layers}, {"layer_probability", c.layer_probability},
          {"clique_order", c.clique_order}, {"seed", c.seed}};
}

inline PipelineConstants constants_from_json(const nlohmann::json& j) {
  PipelineConstants c;
  c.n = j.at("n").get<int>();
  c.epsilon = j.at("epsilon").get<double>();
  c.max_degree = j.at("max_degree").get<int>();
  c.gamma = j.at("gamma").get<double>();
  c.delta = j.at("delta").get<double>();
  c.zeta = j.at("zeta").get<double>();
  c.p0 = j.at("p0").get<double>();
  c.component_bound = j.at("component_bound").get<int>();
  c.layers = j.at("layers").get<int>();
  c.layer_probability = j.at("layer_probability").get<double>();
  c.clique_order = j.at("clique_order").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  return c;
}

inline void save_sliced_host(const std::filesystem::path& dir, const SlicedHost& host) {
  std::filesystem::create_directories(dir);
  nlohmann::json j;
  j["constants"] = constants_to_json(host.constants);
  j["zones"] = host.zones;
  nlohmann::json files = nlohmann::json::array();
  for (std::size_t k = 0; k < host.layers.size(); ++k) {
    const std::string file = "layer_" + std::to_string(k) + ".txt";
    save_graph((dir / file).string(), host.layers[k]);
    files.push_back(file);
  }
  j["layers"] = files;
  detail::write_manifest(dir, j);
}

inline SlicedHost load_sliced_host(const std::filesystem::path& dir) {
  const nlohmann::json j = detail::read_manifest(dir);
  SlicedHost host;
  host.constants = constants_from_json(j.at("constants"));
  host.zones = j.at("zones").get<std::vector<VertexSet>>();
  for (const auto& file : j.at("layers")) host.layers.push_back(load_graph((dir / file.get<std::string>()).string()));
  const int n = host.constants.n;
  host.layer_of.assign(static_cast<std::size_t>(pair_count(n)), static_cast<std::int8_t>(kUnassigned));
  for (std::size_t k = 0; k < host.layers.size(); ++k) {
    for (const Edge& e : host.layers[k].edges()) {
      host.layer_of[static_cast<std::size_t>(pair_index(n, e.u, e.v))] = static_cast<std::int8_t>(k);
    }
  }
  return host;
}

}  // namespace graphpack

#endif  // GRAPHPACK_PERSIST_HPP_
