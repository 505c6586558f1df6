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

#ifndef GRAPHPACK_LEDGER_HPP_
#define GRAPHPACK_LEDGER_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpack/embedding.hpp"
#include "graphpack/graph.hpp"

namespace graphpack {

class LedgerConflict : public std::runtime_error {
 public:
  explicit LedgerConflict(Edge e, bool outside_host = false)
      : std::runtime_error((outside_host ? "edge outside host {" : "edge already used {") +
                           std::to_string(e.u) + "," + std::to_string(e.v) + "}"),
        edge(e),
        outside_host(outside_host) {}

  Edge edge;
  bool outside_host;
};

// Global record of used host edges. Membership is O(1) through a flat
// triangular index over all host pairs.
class PackingLedger {
 public:
  PackingLedger() = default;

  explicit PackingLedger(int host_size)
      : host_size_(host_size),
        used_(static_cast<std::size_t>(pair_count(host_size)), 0),
        used_degree_(static_cast<std::size_t>(host_size), 0) {}

  // Restricts commits to the edges of `host`.
  explicit PackingLedger(const Graph& host) : PackingLedger(host.vertex_count()) {
    allowed_.assign(used_.size(), 0);
    for (const Edge& e : host.edges()) allowed_[index(e)] = 1;
  }

  int host_size() const { return host_size_; }
  std::int64_t used_edge_count() const { return used_count_; }
  int used_degree(Vertex v) const { return used_degree_[v]; }
  std::span<const int> used_degrees() const { return used_degree_; }

  bool is_used(Vertex a, Vertex b) const { return used_[index(Edge(a, b))] != 0; }
  bool is_used(const Edge& e) const { return used_[index(e)] != 0; }

  bool allows(const Edge& e) const { return allowed_.empty() || allowed_[index(e)] != 0; }

  // Inserts all edges or none. Throws LedgerConflict on the first edge that
  // is already used, repeated within `edges`, or outside the host.
  void commit_edges(std::span<const Edge> edges) {
    std::size_t i = 0;
    try {
      for (; i < edges.size(); ++i) {
        const Edge& e = edges[i];
        if (!allows(e)) throw LedgerConflict(e, true);
        auto& slot = used_[index(e)];
        if (slot != 0) throw LedgerConflict(e);
        slot = 1;
      }
    } catch (const LedgerConflict&) {
      for (std::size_t j = 0; j < i; ++j) used_[index(edges[j])] = 0;
      throw;
    }
    for (const Edge& e : edges) {
      ++used_degree_[e.u];
      ++used_degree_[e.v];
    }
    used_count_ += static_cast<std::int64_t>(edges.size());
  }

  // Commits the image of `guest` under `e`.
  void commit(const Graph& guest, const Embedding& e) {
    const auto image = e.image_edges(guest);
    commit_edges(image);
  }

  // Rollback of previously committed edges (retry paths).
  void release_edges(std::span<const Edge> edges) {
    for (const Edge& e : edges) {
      auto& slot = used_[index(e)];
      if (slot == 0) throw std::logic_error("releasing an unused edge");
      slot = 0;
      --used_degree_[e.u];
      --used_degree_[e.v];
    }
    used_count_ -= static_cast<std::int64_t>(edges.size());
  }

  std::vector<Edge> used_edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(used_count_));
    for (Vertex u = 0; u < host_size_; ++u) {
      for (Vertex v = u + 1; v < host_size_; ++v) {
        if (is_used(u, v)) out.emplace_back(u, v);
      }
    }
    return out;
  }

  // Named per-vertex counter families used for spread statistics.
  std::vector<int>& tag_counter(const std::string& name) {
    auto [it, inserted] = tags_.try_emplace(name);
    if (inserted) it->second.assign(static_cast<std::size_t>(host_size_), 0);
    return it->second;
  }
  const std::map<std::string, std::vector<int>>& tag_counters() const { return tags_; }

  friend bool operator==(const PackingLedger&, const PackingLedger&) = default;

 private:
  std::size_t index(const Edge& e) const {
    if (e.u == e.v || e.u < 0 || e.v >= host_size_) {
      throw std::out_of_range("host pair {" + std::to_string(e.u) + "," +
                              std::to_string(e.v) + "} out of range");
    }
    return static_cast<std::size_t>(pair_index(host_size_, e.u, e.v));
  }

  int host_size_ = 0;
  std::vector<std::uint8_t> used_;
  std::vector<std::uint8_t> allowed_;
  std::vector<int> used_degree_;
  std::int64_t used_count_ = 0;
  std::map<std::string, std::vector<int>> tags_;
};

}  // namespace graphpack

#endif  // GRAPHPACK_LEDGER_HPP_
