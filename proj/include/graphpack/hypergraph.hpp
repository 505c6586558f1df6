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

#ifndef GRAPHPACK_HYPERGRAPH_HPP_
#define GRAPHPACK_HYPERGRAPH_HPP_

#include <algorithm>
#include <bit>
#include <cstdint>
#include <iterator>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "graphpack/graph.hpp"
#include "graphpack/random.hpp"

namespace graphpack {

// Uniform hypergraph on ground elements 0..ground_size-1, stored flat with
// a fixed number of elements per hyperedge.
struct Hypergraph {
  int ground_size = 0;
  int arity = 0;
  std::vector<int> flat;

  Hypergraph() = default;
  Hypergraph(int ground, int hyperedge_arity) : ground_size(ground), arity(hyperedge_arity) {}

  std::size_t size() const { return arity == 0 ? 0 : flat.size() / static_cast<std::size_t>(arity); }
  std::span<const int> operator[](std::size_t h) const {
    return {flat.data() + h * static_cast<std::size_t>(arity), static_cast<std::size_t>(arity)};
  }
  void add(std::span<const int> members) {
    if (static_cast<int>(members.size()) != arity) throw std::invalid_argument("arity mismatch");
    flat.insert(flat.end(), members.begin(), members.end());
  }

  std::vector<int> degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(ground_size), 0);
    for (int x : flat) ++deg[static_cast<std::size_t>(x)];
    return deg;
  }
  int max_degree() const {
    const auto deg = degrees();
    return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
  }
  // Minimum over ground elements that lie in at least one hyperedge.
  int min_positive_degree() const {
    int best = 0;
    for (int d : degrees()) {
      if (d > 0 && (best == 0 || d < best)) best = d;
    }
    return best;
  }
  // Largest number of hyperedges sharing one pair of ground elements.
  int codegree() const {
    std::unordered_map<std::uint64_t, int> count;
    int best = 0;
    for (std::size_t h = 0; h < size(); ++h) {
      const auto e = (*this)[h];
      for (int i = 0; i < arity; ++i) {
        for (int j = i + 1; j < arity; ++j) {
          const auto a = static_cast<std::uint64_t>(std::min(e[i], e[j]));
          const auto b = static_cast<std::uint64_t>(std::max(e[i], e[j]));
          best = std::max(best, ++count[(a << 32) | b]);
        }
      }
    }
    return best;
  }
};

// ---------------------------------------------------------------------------
// Clique enumeration.

struct CliqueEnumeration {
  int order = 0;                      // l
  Hypergraph cliques;                 // ground = vertices, sorted members
  std::vector<Edge> edges;            // edges of the source graph
  std::vector<std::int64_t> per_edge;    // cliques containing edges[i]
  std::vector<std::int64_t> per_vertex;  // cliques containing v
  std::int64_t codegree = 0;          // max cliques sharing two edges

  std::size_t count() const { return cliques.size(); }
};

// All l-cliques of g in lexicographic order, with per-edge and per-vertex
// containment counts and the largest number of cliques through two edges.
inline CliqueEnumeration enumerate_cliques(const Graph& g, int order) {
  if (order < 2) throw std::invalid_argument("clique order must be at least 2");
  const int n = g.vertex_count();
  CliqueEnumeration out;
  out.order = order;
  out.cliques = Hypergraph(n, order);
  out.edges = g.edges();
  out.per_edge.assign(out.edges.size(), 0);
  out.per_vertex.assign(static_cast<std::size_t>(n), 0);
  std::vector<int> edge_id(static_cast<std::size_t>(pair_count(n)), -1);
  for (std::size_t i = 0; i < out.edges.size(); ++i) {
    edge_id[static_cast<std::size_t>(pair_index(n, out.edges[i].u, out.edges[i].v))] =
        static_cast<int>(i);
  }

  std::vector<Vertex> current;
  std::vector<std::vector<Vertex>> candidates(static_cast<std::size_t>(order) + 1);
  // Cliques through a triangle bound the codegree of two edges for l >= 4:
  // any two edges of a clique span a triangle of it or all of a K_4.
  std::unordered_map<std::uint64_t, std::int64_t> per_triangle;

  auto record = [&]() {
    out.cliques.add(current);
    for (Vertex v : current) ++out.per_vertex[static_cast<std::size_t>(v)];
    for (int i = 0; i < order; ++i) {
      for (int j = i + 1; j < order; ++j) {
        ++out.per_edge[static_cast<std::size_t>(
            edge_id[static_cast<std::size_t>(pair_index(n, current[i], current[j]))])];
      }
    }
    if (order >= 4) {
      for (int i = 0; i < order; ++i) {
        for (int j = i + 1; j < order; ++j) {
          for (int k = j + 1; k < order; ++k) {
            const std::uint64_t key = (static_cast<std::uint64_t>(current[i]) << 42) |
                                      (static_cast<std::uint64_t>(current[j]) << 21) |
                                      static_cast<std::uint64_t>(current[k]);
            out.codegree = std::max(out.codegree, ++per_triangle[key]);
          }
        }
      }
    }
  };

  auto extend = [&](auto&& self, int depth) -> void {
    if (depth == order) {
      record();
      return;
    }
    const auto& pool = candidates[static_cast<std::size_t>(depth)];
    for (std::size_t idx = 0; idx < pool.size(); ++idx) {
      const Vertex v = pool[idx];
      if (static_cast<int>(pool.size() - idx) < order - depth) break;
      current.push_back(v);
      auto& next = candidates[static_cast<std::size_t>(depth) + 1];
      next.clear();
      const auto nbrs = g.neighbors(v);
      std::set_intersection(pool.begin() + static_cast<std::ptrdiff_t>(idx) + 1, pool.end(),
                            nbrs.begin(), nbrs.end(), std::back_inserter(next));
      self(self, depth + 1);
      current.pop_back();
    }
  };
  candidates[0].resize(static_cast<std::size_t>(n));
  std::iota(candidates[0].begin(), candidates[0].end(), 0);
  extend(extend, 0);
  if (order == 3 && out.count() > 0) out.codegree = 1;
  return out;
}

// Hypergraph whose ground set is the edge list of the enumeration and whose
// hyperedges are the C(l,2) edges of each clique.
inline Hypergraph clique_edge_hypergraph(const CliqueEnumeration& cliques, int n) {
  std::vector<int> edge_id(static_cast<std::size_t>(pair_count(n)), -1);
  for (std::size_t i = 0; i < cliques.edges.size(); ++i) {
    edge_id[static_cast<std::size_t>(pair_index(n, cliques.edges[i].u, cliques.edges[i].v))] =
        static_cast<int>(i);
  }
  const int l = cliques.order;
  Hypergraph h(static_cast<int>(cliques.edges.size()), l * (l - 1) / 2);
  h.flat.reserve(cliques.count() * static_cast<std::size_t>(h.arity));
  for (std::size_t c = 0; c < cliques.count(); ++c) {
    const auto members = cliques.cliques[c];
    for (int i = 0; i < l; ++i) {
      for (int j = i + 1; j < l; ++j) {
        h.flat.push_back(
            edge_id[static_cast<std::size_t>(pair_index(n, members[i], members[j]))]);
      }
    }
  }
  return h;
}

// ---------------------------------------------------------------------------
// Proper hyperedge coloring: hyperedges sharing a ground element get
// distinct colors.

struct Coloring {
  std::vector<int> color;  // per hyperedge
  int colors = 0;
  int first_fit_colors = 0;

  std::vector<std::vector<int>> classes() const {
    std::vector<std::vector<int>> out(static_cast<std::size_t>(colors));
    for (std::size_t h = 0; h < color.size(); ++h) {
      out[static_cast<std::size_t>(color[h])].push_back(static_cast<int>(h));
    }
    return out;
  }
};

struct ColoringOptions {
  std::uint64_t seed = 0;
  // Total min-conflict steps spent trying to delete color classes.
  std::int64_t reduction_steps = 200000;
  // Reduction is skipped when ground_size * colors exceeds this.
  std::int64_t reduction_table_limit = 50'000'000;
};

inline bool is_proper(const Hypergraph& h, const std::vector<int>& color) {
  if (color.size() != h.size()) return false;
  std::unordered_map<std::uint64_t, int> seen;
  for (std::size_t e = 0; e < h.size(); ++e) {
    if (color[e] < 0) return false;
    for (int x : h[e]) {
      const std::uint64_t key =
          (static_cast<std::uint64_t>(x) << 32) | static_cast<std::uint32_t>(color[e]);
      if (!seen.emplace(key, static_cast<int>(e)).second) return false;
    }
  }
  return true;
}

namespace detail {

// Min-conflicts attempt to recolor every hyperedge of color `victim` with
// the other colors. On success colors are compacted and true returned;
// otherwise the coloring is left unchanged.
inline bool eliminate_color(const Hypergraph& h, Coloring& col, int victim, std::int64_t steps,
                            Rng& rng) {
  const int colors = col.colors;
  const auto ground = static_cast<std::size_t>(h.ground_size);
  std::vector<int> owner(ground * static_cast<std::size_t>(colors), -1);
  for (std::size_t e = 0; e < h.size(); ++e) {
    for (int x : h[e]) {
      owner[static_cast<std::size_t>(x) * static_cast<std::size_t>(colors) +
            static_cast<std::size_t>(col.color[e])] = static_cast<int>(e);
    }
  }
  const std::vector<int> backup = col.color;
  std::vector<int> pending;
  auto unset = [&](int e) {
    for (int x : h[static_cast<std::size_t>(e)]) {
      owner[static_cast<std::size_t>(x) * static_cast<std::size_t>(colors) +
            static_cast<std::size_t>(col.color[static_cast<std::size_t>(e)])] = -1;
    }
    col.color[static_cast<std::size_t>(e)] = -1;
    pending.push_back(e);
  };
  for (std::size_t e = 0; e < h.size(); ++e) {
    if (col.color[e] == victim) unset(static_cast<int>(e));
  }
  std::vector<std::int64_t> tabu_until(h.size(), -1);
  std::vector<int> tabu_color(h.size(), -1);
  std::vector<int> conflicts;
  std::vector<int> best_conflicts;
  std::int64_t step = 0;
  while (!pending.empty() && step < steps) {
    ++step;
    const std::size_t pick = uniform_below(rng, pending.size());
    const int e = pending[pick];
    pending[pick] = pending.back();
    pending.pop_back();
    int best_color = -1;
    std::size_t best_size = 0;
    int ties = 0;
    for (int c = 0; c < colors; ++c) {
      if (c == victim) continue;
      if (tabu_color[static_cast<std::size_t>(e)] == c &&
          tabu_until[static_cast<std::size_t>(e)] > step) {
        continue;
      }
      conflicts.clear();
      for (int x : h[static_cast<std::size_t>(e)]) {
        const int o = owner[static_cast<std::size_t>(x) * static_cast<std::size_t>(colors) +
                            static_cast<std::size_t>(c)];
        if (o >= 0 && std::find(conflicts.begin(), conflicts.end(), o) == conflicts.end()) {
          conflicts.push_back(o);
        }
      }
      if (best_color < 0 || conflicts.size() < best_size) {
        best_color = c;
        best_size = conflicts.size();
        best_conflicts = conflicts;
        ties = 1;
      } else if (conflicts.size() == best_size && uniform_below(rng, static_cast<std::uint64_t>(++ties)) == 0) {
        best_color = c;
        best_conflicts = conflicts;
      }
    }
    if (best_color < 0) {
      pending.push_back(e);
      continue;
    }
    for (int o : best_conflicts) {
      tabu_color[static_cast<std::size_t>(o)] = best_color;
      tabu_until[static_cast<std::size_t>(o)] = step + 10;
      unset(o);
    }
    col.color[static_cast<std::size_t>(e)] = best_color;
    for (int x : h[static_cast<std::size_t>(e)]) {
      owner[static_cast<std::size_t>(x) * static_cast<std::size_t>(colors) +
            static_cast<std::size_t>(best_color)] = e;
    }
  }
  if (!pending.empty()) {
    col.color = backup;
    return false;
  }
  // Compact: the last color takes over the victim's label.
  for (int& c : col.color) {
    if (c == colors - 1) c = victim;
  }
  col.colors = colors - 1;
  return true;
}

}  // namespace detail

// First-fit in a seeded random order, then min-conflict passes that try to
// delete the smallest color classes. Always returns a proper coloring.
inline Coloring proper_hyperedge_coloring(const Hypergraph& h, const ColoringOptions& options = {}) {
  Coloring col;
  col.color.assign(h.size(), -1);
  if (h.size() == 0) return col;
  Rng rng(derive_seed(options.seed, 0x636f6cULL));
  std::vector<std::size_t> order(h.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  shuffle(order, rng);

  std::vector<std::vector<std::uint64_t>> used(static_cast<std::size_t>(h.ground_size));
  std::vector<std::uint64_t> merged;
  for (std::size_t e : order) {
    merged.clear();
    for (int x : h[e]) {
      const auto& bits = used[static_cast<std::size_t>(x)];
      if (bits.size() > merged.size()) merged.resize(bits.size(), 0);
      for (std::size_t w = 0; w < bits.size(); ++w) merged[w] |= bits[w];
    }
    int c = 0;
    std::size_t w = 0;
    while (w < merged.size() && merged[w] == ~std::uint64_t{0}) ++w;
    c = static_cast<int>(w * 64);
    if (w < merged.size()) c += std::countr_one(merged[w]);
    col.color[e] = c;
    col.colors = std::max(col.colors, c + 1);
    for (int x : h[e]) {
      auto& bits = used[static_cast<std::size_t>(x)];
      const auto word = static_cast<std::size_t>(c / 64);
      if (bits.size() <= word) bits.resize(word + 1, 0);
      bits[word] |= std::uint64_t{1} << (c % 64);
    }
  }
  col.first_fit_colors = col.colors;

  std::int64_t remaining = options.reduction_steps;
  while (remaining > 0 && col.colors > 1 &&
         static_cast<std::int64_t>(h.ground_size) * col.colors <= options.reduction_table_limit) {
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(col.colors), 0);
    for (int c : col.color) ++sizes[static_cast<std::size_t>(c)];
    const int victim = static_cast<int>(std::min_element(sizes.begin(), sizes.end()) - sizes.begin());
    const std::int64_t budget =
        std::min(remaining, 200 * sizes[static_cast<std::size_t>(victim)] + 2000);
    remaining -= budget;
    if (!detail::eliminate_color(h, col, victim, budget, rng)) break;
  }
  return col;
}

}  // namespace graphpack

#endif  // GRAPHPACK_HYPERGRAPH_HPP_
