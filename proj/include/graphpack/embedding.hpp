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

#ifndef GRAPHPACK_EMBEDDING_HPP_
#define GRAPHPACK_EMBEDDING_HPP_

#include <string>
#include <vector>

#include "graphpack/graph.hpp"

namespace graphpack {

inline constexpr Vertex kUnmapped = -1;

// Which stage produced the map: bounded-component part, separator
// extension, or the final spanning completion.
enum class Phase { kPhase1, kPhase2, kPhase3 };

inline const char* phase_name(Phase p) {
  switch (p) {
    case Phase::kPhase1: return "phase1";
    case Phase::kPhase2: return "phase2";
    case Phase::kPhase3: return "phase3";
  }
  return "unknown";
}

// Partial injective map from guest vertices to host vertices.
struct Embedding {
  int instance_id = 0;
  std::vector<Vertex> map;  // map[guest] = host or kUnmapped
  Phase phase = Phase::kPhase1;

  Embedding() = default;
  Embedding(int id, int guest_order, Phase ph = Phase::kPhase1)
      : instance_id(id), map(static_cast<std::size_t>(guest_order), kUnmapped), phase(ph) {}

  bool mapped(Vertex g) const { return map[g] != kUnmapped; }
  Vertex operator()(Vertex g) const { return map[g]; }

  int domain_size() const {
    int count = 0;
    for (Vertex h : map) count += h != kUnmapped ? 1 : 0;
    return count;
  }
  bool total() const { return domain_size() == static_cast<int>(map.size()); }

  // Host images of the mapped guest edges.
  std::vector<Edge> image_edges(const Graph& guest) const {
    std::vector<Edge> out;
    for (const Edge& e : guest.edges()) {
      if (mapped(e.u) && mapped(e.v)) out.emplace_back(map[e.u], map[e.v]);
    }
    return out;
  }

  friend bool operator==(const Embedding&, const Embedding&) = default;
};

struct Violation {
  enum class Kind { kOutOfRange, kNotInjective, kMissingHostEdge };
  Kind kind;
  Vertex guest_a;
  Vertex guest_b;  // second guest vertex, or kUnmapped for range errors
  Vertex host_a;
  Vertex host_b;

  std::string describe() const {
    const std::string pair =
        "(" + std::to_string(guest_a) + "," + std::to_string(guest_b) + ")->(" +
        std::to_string(host_a) + "," + std::to_string(host_b) + ")";
    switch (kind) {
      case Kind::kOutOfRange: return "out-of-range " + pair;
      case Kind::kNotInjective: return "non-injective " + pair;
      case Kind::kMissingHostEdge: return "missing host edge " + pair;
    }
    return pair;
  }
};

struct EmbeddingCheck {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks injectivity and that every guest edge with both ends mapped lands
// on a host edge. Never throws; violations are returned as data.
inline EmbeddingCheck validate_embedding(const Graph& guest, const Graph& host,
                                         const Embedding& e) {
  EmbeddingCheck check;
  if (static_cast<int>(e.map.size()) != guest.vertex_count()) {
    check.violations.push_back({Violation::Kind::kOutOfRange, static_cast<Vertex>(e.map.size()),
                                kUnmapped, kUnmapped, kUnmapped});
    return check;
  }
  std::vector<Vertex> preimage(static_cast<std::size_t>(host.vertex_count()), kUnmapped);
  bool range_ok = true;
  for (Vertex g = 0; g < guest.vertex_count(); ++g) {
    const Vertex h = e.map[g];
    if (h == kUnmapped) continue;
    if (h < 0 || h >= host.vertex_count()) {
      check.violations.push_back({Violation::Kind::kOutOfRange, g, kUnmapped, h, kUnmapped});
      range_ok = false;
      continue;
    }
    if (preimage[h] != kUnmapped) {
      check.violations.push_back({Violation::Kind::kNotInjective, preimage[h], g, h, h});
    } else {
      preimage[h] = g;
    }
  }
  if (!range_ok) return check;
  for (const Edge& edge : guest.edges()) {
    const Vertex a = e.map[edge.u];
    const Vertex b = e.map[edge.v];
    if (a == kUnmapped || b == kUnmapped) continue;
    if (!host.has_edge(a, b)) {
      check.violations.push_back({Violation::Kind::kMissingHostEdge, edge.u, edge.v, a, b});
    }
  }
  return check;
}

}  // namespace graphpack

#endif  // GRAPHPACK_EMBEDDING_HPP_
