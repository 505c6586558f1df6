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

#ifndef GRAPHPACK_SLICER_HPP_
#define GRAPHPACK_SLICER_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpack/graph.hpp"
#include "graphpack/random.hpp"

namespace graphpack {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SlicingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PipelineConstants {
  int n = 200;
  double epsilon = 0.35;
  int max_degree = 3;
  double gamma = 0.15;          // 2-independent fraction
  double delta = 0.02;          // separator fraction
  double zeta = 0.05;           // zone fraction
  double p0 = 0.3;              // completion layer probability
  int component_bound = 0;      // K, filled from the separators found
  int layers = 8;               // M
  double layer_probability = -1.0;  // p; negative means (1 - p0) / M
  int clique_order = 4;         // l
  std::uint64_t seed = 1;

  double p() const {
    if (layer_probability >= 0) return layer_probability;
    return layers > 0 ? (1.0 - p0) / layers : 0.0;
  }
  // 1 - delta - gamma = (1 - xi)(1 - zeta)
  double xi() const { return 1.0 - (1.0 - delta - gamma) / (1.0 - zeta); }
  int zone_size() const { return static_cast<int>(std::floor(zeta * n + 1e-9)); }
  // Phase II cap on how many separator images one zone vertex may carry.
  double zone_cap() const { return zeta * zeta * n; }
};

// Throws ConfigError naming the first violated relation.
inline void validate_constants(const PipelineConstants& c) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (c.n < 1) fail("n must be positive");
  if (!(c.epsilon > 0 && c.epsilon < 1)) fail("epsilon must lie in (0,1)");
  if (c.max_degree < 1) fail("max_degree must be at least 1");
  if (c.layers < 0) fail("layers must be non-negative");
  if (c.clique_order < 2) fail("clique_order must be at least 2");
  for (double x : {c.gamma, c.delta, c.zeta, c.p0}) {
    if (!(x >= 0 && x <= 1)) fail("fractions must lie in [0,1]");
  }
  if (c.zeta >= 1) fail("zeta must be below 1");
  if (c.p0 + c.layers * c.p() > 1.0 + 1e-9) fail("p0 + M p exceeds 1");
  if (static_cast<long long>(c.layers) * c.zone_size() > c.n) fail("zones do not fit");
  const double xi = c.xi();
  if (c.gamma > 0 && !(xi >= c.gamma / 2 - 1e-12 && xi <= 2 * c.gamma + 1e-12)) {
    fail("xi = " + std::to_string(xi) + " outside [gamma/2, 2 gamma]");
  }
}

inline constexpr int kUnassigned = -1;

struct MarginalCheck {
  int layer = 0;
  std::int64_t count = 0;
  double expected = 0.0;
  double sigma = 0.0;
  bool ok = true;
};

// E(K_n) split into Gamma^(0..M) plus unassigned pairs, and zones Z^(1..M)
// (zones[k-1] belongs to layer k).
struct SlicedHost {
  PipelineConstants constants;
  std::vector<Graph> layers;
  std::vector<VertexSet> zones;
  std::vector<std::int8_t> layer_of;  // per pair index; kUnassigned if none

  int n() const { return constants.n; }
  int layer_count() const { return static_cast<int>(layers.size()) - 1; }
  int edge_layer(Vertex a, Vertex b) const {
    return layer_of[static_cast<std::size_t>(pair_index(constants.n, a, b))];
  }
  bool in_zone(int layer, Vertex v) const {
    if (layer < 1 || layer > static_cast<int>(zones.size())) return false;
    const auto& z = zones[static_cast<std::size_t>(layer - 1)];
    return !z.empty() && v >= z.front() && v <= z.back();
  }
};

// Uniform draw X_e for pair e; a pure function of (seed, pair index).
inline double edge_draw(std::uint64_t seed, std::int64_t pair) {
  return to_unit(splitmix64(derive_seed(seed, 0x736c696365ULL) + static_cast<std::uint64_t>(pair)));
}

inline int layer_for_draw(double x, double p0, double p, int layers) {
  if (x <= p0) return 0;
  if (p <= 0) return kUnassigned;
  const double k = std::ceil((x - p0) / p);
  return k >= 1 && k <= layers ? static_cast<int>(k) : kUnassigned;
}

inline std::vector<MarginalCheck> check_marginals(const SlicedHost& host) {
  const auto& c = host.constants;
  const double pairs = static_cast<double>(pair_count(c.n));
  std::vector<MarginalCheck> out;
  for (int k = 0; k < static_cast<int>(host.layers.size()); ++k) {
    const double q = k == 0 ? std::min(1.0, c.p0) : c.p();
    MarginalCheck m;
    m.layer = k;
    m.count = host.layers[static_cast<std::size_t>(k)].edge_count();
    m.expected = pairs * q;
    m.sigma = std::sqrt(pairs * q * (1 - q));
    m.ok = std::abs(static_cast<double>(m.count) - m.expected) <= 5 * m.sigma + 1e-9;
    out.push_back(m);
  }
  return out;
}

// Layers only; zones are left empty. Throws SlicingError when a layer's
// edge count falls outside 5 sigma of its binomial mean.
inline SlicedHost slice_edges(const PipelineConstants& c) {
  validate_constants(c);
  if (c.layers > 120) throw ConfigError("at most 120 layers supported");
  SlicedHost host;
  host.constants = c;
  host.layer_of.assign(static_cast<std::size_t>(pair_count(c.n)), kUnassigned);
  std::vector<std::vector<Edge>> edges(static_cast<std::size_t>(c.layers + 1));
  const double p = c.p();
  for (Vertex u = 0; u < c.n; ++u) {
    for (Vertex v = u + 1; v < c.n; ++v) {
      const std::int64_t idx = pair_index(c.n, u, v);
      const int k = layer_for_draw(edge_draw(c.seed, idx), c.p0, p, c.layers);
      host.layer_of[static_cast<std::size_t>(idx)] = static_cast<std::int8_t>(k);
      if (k != kUnassigned) edges[static_cast<std::size_t>(k)].emplace_back(u, v);
    }
  }
  for (const auto& list : edges) host.layers.emplace_back(c.n, list);
  for (const auto& m : check_marginals(host)) {
    if (!m.ok) {
      throw SlicingError("layer " + std::to_string(m.layer) + " has " + std::to_string(m.count) +
                         " edges, expected " + std::to_string(m.expected) + " +- 5 sigma");
    }
  }
  return host;
}

// Contiguous blocks [k z, (k+1) z) with z = floor(zeta n), k = 0..M-1.
inline std::vector<VertexSet> reserve_zones(const PipelineConstants& c) {
  const int size = c.zone_size();
  if (static_cast<long long>(c.layers) * size > c.n) throw ConfigError("zones do not fit");
  std::vector<VertexSet> zones(static_cast<std::size_t>(c.layers));
  for (int k = 0; k < c.layers; ++k) {
    for (int j = 0; j < size; ++j) zones[static_cast<std::size_t>(k)].push_back(k * size + j);
  }
  return zones;
}

inline SlicedHost slice_host(const PipelineConstants& c) {
  SlicedHost host = slice_edges(c);
  host.zones = reserve_zones(c);
  return host;
}

// ---------------------------------------------------------------------------
// Per-phase edge views. Each phase receives only the edges it may use.

// Gamma^(k) with zone Z^(k) deleted.
struct Phase1View {
  int layer = 0;
  Graph graph;
};

// Gamma^(k) edges with at least one end in Z^(k).
struct Phase2View {
  int layer = 0;
  VertexSet zone;
  Graph graph;
};

// Gamma^(0).
struct Phase3View {
  Graph graph;
};

inline Phase1View phase1_view(const SlicedHost& host, int k) {
  if (k < 1 || k > host.layer_count()) throw std::out_of_range("phase I layer index");
  std::vector<Edge> edges;
  for (const Edge& e : host.layers[static_cast<std::size_t>(k)].edges()) {
    if (!host.in_zone(k, e.u) && !host.in_zone(k, e.v)) edges.push_back(e);
  }
  return {k, Graph(host.n(), edges)};
}

inline Phase2View phase2_view(const SlicedHost& host, int k) {
  if (k < 1 || k > host.layer_count()) throw std::out_of_range("phase II layer index");
  std::vector<Edge> edges;
  for (const Edge& e : host.layers[static_cast<std::size_t>(k)].edges()) {
    if (host.in_zone(k, e.u) || host.in_zone(k, e.v)) edges.push_back(e);
  }
  return {k, host.zones[static_cast<std::size_t>(k - 1)], Graph(host.n(), edges)};
}

inline Phase3View phase3_view(const SlicedHost& host) { return {host.layers.front()}; }

}  // namespace graphpack

#endif  // GRAPHPACK_SLICER_HPP_
