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

#ifndef GRAPHPACK_INSTANCES_HPP_
#define GRAPHPACK_INSTANCES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpack/graph.hpp"
#include "graphpack/random.hpp"

namespace graphpack {

// ---------------------------------------------------------------------------
// Generators. All are deterministic functions of their arguments and seed.

// Random labelled tree grown one vertex at a time; each new vertex attaches
// to a uniformly chosen earlier vertex whose degree is still below the cap.
inline Graph gen_bounded_tree(int n, int max_degree, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("tree order must be positive");
  if (n >= 3 && max_degree < 2) {
    throw std::invalid_argument("max degree below 2 admits no tree on 3+ vertices");
  }
  Rng rng(derive_seed(seed, 0x7472656555ULL));
  std::vector<Vertex> label(static_cast<std::size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  shuffle(label, rng);

  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  std::vector<Vertex> open{0};  // growth positions with spare degree
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(n - 1));
  for (Vertex i = 1; i < n; ++i) {
    const std::size_t pick = uniform_below(rng, open.size());
    const Vertex parent = open[pick];
    edges.emplace_back(label[parent], label[i]);
    if (++degree[parent] >= max_degree) {
      open[pick] = open.back();
      open.pop_back();
    }
    if (++degree[i] < max_degree) open.push_back(i);
  }
  return Graph(n, edges);
}

// Trees T_lo, ..., T_n with v(T_i) = i.
inline std::vector<Graph> gen_tpc_sequence(int n, int max_degree, int lo, std::uint64_t seed) {
  if (lo < 1 || lo > n) throw std::invalid_argument("need 1 <= lo <= n");
  std::vector<Graph> trees;
  trees.reserve(static_cast<std::size_t>(n - lo + 1));
  for (int order = lo; order <= n; ++order) {
    trees.push_back(gen_bounded_tree(order, max_degree, derive_seed(seed, 0x747063ULL, order)));
  }
  return trees;
}

// Disjoint cycles occupying consecutive vertex blocks.
inline Graph gen_oberwolfach(int n, const std::vector<int>& cycle_lengths) {
  long long total = 0;
  for (int length : cycle_lengths) {
    if (length < 3) throw std::invalid_argument("cycle length below 3");
    total += length;
  }
  if (total != n) throw std::invalid_argument("cycle lengths do not sum to n");
  std::vector<Edge> edges;
  Vertex start = 0;
  for (int length : cycle_lengths) {
    for (int j = 0; j < length; ++j) edges.emplace_back(start + j, start + (j + 1) % length);
    start += length;
  }
  return Graph(n, edges);
}

// Graph whose components are random trees of the given orders, placed on
// consecutive vertex blocks (a simple bounded-component family).
inline Graph gen_bounded_components(int n, int component_order, int max_degree,
                                    std::uint64_t seed) {
  if (component_order < 1) throw std::invalid_argument("component order must be positive");
  std::vector<Edge> edges;
  int index = 0;
  for (Vertex start = 0; start < n; start += component_order, ++index) {
    const int order = std::min(component_order, n - start);
    const Graph piece = gen_bounded_tree(order, max_degree, derive_seed(seed, 0x6263ULL, index));
    for (const Edge& e : piece.edges()) edges.emplace_back(e.u + start, e.v + start);
  }
  return Graph(n, edges);
}

// ---------------------------------------------------------------------------
// Separators.

class UnsupportedFamily : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SeparatorResult {
  VertexSet separator;  // sorted
  int component_bound = 0;
};

namespace detail {

enum class ComponentShape { kTree, kCycle, kOther };

inline constexpr Vertex kNoParent = -1;

inline ComponentShape classify(const Graph& g, const VertexSet& component) {
  std::int64_t degree_sum = 0;
  bool all_two = true;
  for (Vertex v : component) {
    degree_sum += g.degree(v);
    all_two = all_two && g.degree(v) == 2;
  }
  const std::int64_t edges = degree_sum / 2;
  const auto size = static_cast<std::int64_t>(component.size());
  if (edges == size - 1) return ComponentShape::kTree;
  if (all_two && edges == size) return ComponentShape::kCycle;
  return ComponentShape::kOther;
}

// Greedy leaf-up removal that leaves every piece of a tree with at most
// `bound` vertices; returns the removed vertices.
inline VertexSet tree_cut(const Graph& g, const VertexSet& component, int bound) {
  const Vertex root = component.front();
  std::vector<Vertex> order;  // preorder
  std::vector<Vertex> parent(static_cast<std::size_t>(g.vertex_count()), kNoParent);
  order.reserve(component.size());
  std::vector<Vertex> stack{root};
  parent[root] = root;
  while (!stack.empty()) {
    const Vertex v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (Vertex w : g.neighbors(v)) {
      if (parent[w] == kNoParent) {
        parent[w] = v;
        stack.push_back(w);
      }
    }
  }
  std::vector<int> residual(static_cast<std::size_t>(g.vertex_count()), 0);
  VertexSet removed;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const Vertex v = *it;
    int size = 1;
    for (Vertex w : g.neighbors(v)) {
      if (w != root && parent[w] == v) size += residual[w];
    }
    if (size > bound) {
      removed.push_back(v);
      size = 0;
    }
    residual[v] = size;
  }
  return removed;
}

// Cycle vertices in traversal order starting from the smallest member.
inline VertexSet cycle_order(const Graph& g, const VertexSet& component) {
  VertexSet order{component.front()};
  Vertex previous = -1;
  Vertex current = component.front();
  while (order.size() < component.size()) {
    const auto nbrs = g.neighbors(current);
    const Vertex next = nbrs[0] != previous ? nbrs[0] : nbrs[1];
    previous = current;
    current = next;
    order.push_back(current);
  }
  return order;
}

inline VertexSet cycle_cut(const Graph& g, const VertexSet& component, int bound) {
  const int length = static_cast<int>(component.size());
  if (length <= bound) return {};
  const int cuts = (length + bound) / (bound + 1);  // ceil(L / (K + 1))
  const VertexSet order = cycle_order(g, component);
  VertexSet removed;
  for (int j = 0; j < cuts; ++j) {
    removed.push_back(order[static_cast<std::size_t>(static_cast<long long>(j) * length / cuts)]);
  }
  return removed;
}

}  // namespace detail

// Finds S with |S| <= floor(delta * v(g)) such that g - S has components of
// at most K vertices, minimizing K over supported component shapes (trees,
// cycles; anything else must already be small). Throws UnsupportedFamily if
// the best achievable K exceeds `max_component`.
inline SeparatorResult find_separator(const Graph& g, double delta,
                                      int max_component = std::numeric_limits<int>::max()) {
  if (delta < 0) throw std::invalid_argument("separator fraction must be non-negative");
  const auto budget =
      static_cast<std::int64_t>(std::floor(delta * g.vertex_count() + 1e-9));
  const auto components = connected_components(g);
  if (components.empty()) return {{}, 0};

  std::vector<detail::ComponentShape> shapes;
  int largest = 0;
  int largest_other = 0;
  for (const auto& c : components) {
    shapes.push_back(detail::classify(g, c));
    largest = std::max(largest, static_cast<int>(c.size()));
    if (shapes.back() == detail::ComponentShape::kOther) {
      largest_other = std::max(largest_other, static_cast<int>(c.size()));
    }
  }

  auto cut_at = [&](int bound) {
    VertexSet removed;
    for (std::size_t i = 0; i < components.size(); ++i) {
      if (static_cast<int>(components[i].size()) <= bound) continue;
      VertexSet part = shapes[i] == detail::ComponentShape::kTree
                           ? detail::tree_cut(g, components[i], bound)
                           : detail::cycle_cut(g, components[i], bound);
      removed.insert(removed.end(), part.begin(), part.end());
      if (static_cast<std::int64_t>(removed.size()) > budget) break;
    }
    return removed;
  };

  for (int bound = std::max(1, largest_other); bound <= largest; ++bound) {
    VertexSet removed = cut_at(bound);
    if (static_cast<std::int64_t>(removed.size()) > budget) continue;
    std::sort(removed.begin(), removed.end());
    std::vector<bool> present(static_cast<std::size_t>(g.vertex_count()), true);
    for (Vertex v : removed) present[v] = false;
    int achieved = 0;
    for (const auto& c : connected_components(g, present)) {
      achieved = std::max(achieved, static_cast<int>(c.size()));
    }
    achieved = std::max(achieved, 1);
    if (achieved > max_component) {
      throw UnsupportedFamily("smallest achievable component bound " + std::to_string(achieved) +
                              " exceeds " + std::to_string(max_component));
    }
    return {std::move(removed), achieved};
  }
  throw std::logic_error("separator search exhausted");  // bound == largest always fits
}

// ---------------------------------------------------------------------------
// 2-independent sets.

class TwoIndependentInfeasible : public std::runtime_error {
 public:
  TwoIndependentInfeasible(int wanted, int found)
      : std::runtime_error("greedy 2-independent scan found " + std::to_string(found) + " of " +
                           std::to_string(wanted)),
        wanted(wanted),
        found(found) {}
  int wanted;
  int found;
};

// Greedy scan in `order` (ascending index when empty) that picks a vertex
// unless it is avoided or within distance 2 of an earlier pick. Stops after
// `limit` picks. Result sorted.
inline VertexSet greedy_two_independent(const Graph& g, int limit, const VertexSet& avoid,
                                        const VertexSet& order = {}) {
  const int n = g.vertex_count();
  std::vector<bool> blocked(static_cast<std::size_t>(n), false);
  for (Vertex v : avoid) blocked[v] = true;
  std::vector<bool> near(static_cast<std::size_t>(n), false);
  VertexSet chosen;
  auto consider = [&](Vertex v) {
    if (static_cast<int>(chosen.size()) >= limit || blocked[v] || near[v]) return;
    chosen.push_back(v);
    near[v] = true;
    for (Vertex w : g.neighbors(v)) {
      near[w] = true;
      for (Vertex x : g.neighbors(w)) near[x] = true;
    }
  };
  if (order.empty()) {
    for (Vertex v = 0; v < n; ++v) consider(v);
  } else {
    for (Vertex v : order) consider(v);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

inline VertexSet find_two_independent(const Graph& g, int m, const VertexSet& avoid,
                                      const VertexSet& order = {}) {
  VertexSet chosen = greedy_two_independent(g, m, avoid, order);
  if (static_cast<int>(chosen.size()) < m) {
    throw TwoIndependentInfeasible(m, static_cast<int>(chosen.size()));
  }
  return chosen;
}

// Scan order used by the pipeline: ascending positive degree, then index,
// with isolated vertices last so that completion picks up real edges.
inline VertexSet degree_ascending_order(const Graph& g) {
  VertexSet order(static_cast<std::size_t>(g.vertex_count()));
  std::iota(order.begin(), order.end(), 0);
  auto rank = [&](Vertex v) { return g.degree(v) == 0 ? std::numeric_limits<int>::max() : g.degree(v); };
  std::stable_sort(order.begin(), order.end(), [&](Vertex a, Vertex b) { return rank(a) < rank(b); });
  return order;
}

inline bool is_two_independent(const Graph& g, const VertexSet& set) {
  std::vector<int> owner(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Vertex v = set[i];
    if (owner[v] != -1) return false;
    owner[v] = static_cast<int>(i);
  }
  // Marks each closed neighbourhood; any overlap means distance <= 2.
  std::vector<int> mark(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const Vertex v = set[i];
    for (Vertex w : g.neighbors(v)) {
      if (owner[w] != -1) return false;
      if (mark[w] != -1) return false;
      mark[w] = static_cast<int>(i);
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Instances.

struct InstanceGraph {
  Graph graph;                // exactly n vertices
  VertexSet separator;        // S
  VertexSet two_independent;  // I
  VertexSet anchors_s;        // N(S) minus S and I
  VertexSet anchors_i;        // N(I) minus S
  int component_bound = 0;    // K for graph - S

  // Membership masks over guest vertices.
  std::vector<bool> in_separator() const { return mask(separator); }
  std::vector<bool> in_two_independent() const { return mask(two_independent); }

  // Vertices of graph - S - I.
  std::vector<bool> core_mask() const {
    std::vector<bool> keep(static_cast<std::size_t>(graph.vertex_count()), true);
    for (Vertex v : separator) keep[v] = false;
    for (Vertex v : two_independent) keep[v] = false;
    return keep;
  }

 private:
  std::vector<bool> mask(const VertexSet& set) const {
    std::vector<bool> m(static_cast<std::size_t>(graph.vertex_count()), false);
    for (Vertex v : set) m[v] = true;
    return m;
  }
};

inline VertexSet neighbourhood_outside(const Graph& g, const VertexSet& set,
                                       const std::vector<bool>& excluded) {
  std::vector<bool> hit(static_cast<std::size_t>(g.vertex_count()), false);
  for (Vertex v : set) {
    for (Vertex w : g.neighbors(v)) {
      if (!excluded[w]) hit[w] = true;
    }
  }
  VertexSet out;
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (hit[v]) out.push_back(v);
  }
  return out;
}

// Fills in anchors from graph, separator and two_independent.
inline void compute_anchors(InstanceGraph& inst) {
  std::vector<bool> excluded(static_cast<std::size_t>(inst.graph.vertex_count()), false);
  for (Vertex v : inst.separator) excluded[v] = true;
  for (Vertex v : inst.two_independent) excluded[v] = true;
  inst.anchors_s = neighbourhood_outside(inst.graph, inst.separator, excluded);
  inst.anchors_i = neighbourhood_outside(inst.graph, inst.two_independent, excluded);
}

struct InstanceParams {
  double separator_fraction = 0.02;  // delta
  int two_independent_size = 0;      // |I| target
  int min_two_independent = 0;       // below this the instance is rejected
};

// Separator, 2-independent set (degree-ascending scan avoiding S) and
// anchor sets for one padded graph.
inline InstanceGraph prepare_instance(const Graph& graph, const InstanceParams& params) {
  InstanceGraph inst;
  inst.graph = graph;
  const SeparatorResult sep = find_separator(graph, params.separator_fraction);
  inst.separator = sep.separator;
  inst.component_bound = sep.component_bound;
  inst.two_independent = greedy_two_independent(graph, params.two_independent_size,
                                                inst.separator, degree_ascending_order(graph));
  if (static_cast<int>(inst.two_independent.size()) < params.min_two_independent) {
    throw TwoIndependentInfeasible(params.min_two_independent,
                                   static_cast<int>(inst.two_independent.size()));
  }
  compute_anchors(inst);
  return inst;
}

// ---------------------------------------------------------------------------
// Normalization of an input collection.

struct InstanceSet {
  std::vector<InstanceGraph> instances;
  int n = 0;
  int max_degree = 0;
  std::int64_t total_edges = 0;
  // provenance[j] lists the input indices merged into instance j.
  std::vector<std::vector<int>> provenance;
  // input_instance[i] is the instance holding input i; input_vertex_map[i]
  // maps input i's vertices injectively into that instance.
  std::vector<int> input_instance;
  std::vector<std::vector<Vertex>> input_vertex_map;
};

class NormalizeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Merges graphs with fewer than n/2 non-isolated vertices pairwise (two
// smallest first) until at most one such graph remains, then pads every
// graph to exactly n vertices. Separators are not computed here.
inline InstanceSet normalize_collection(const std::vector<Graph>& graphs, int n) {
  InstanceSet out;
  out.n = n;
  for (const Graph& g : graphs) {
    if (g.vertex_count() > n) {
      throw NormalizeError("input graph has " + std::to_string(g.vertex_count()) +
                           " vertices, more than n = " + std::to_string(n));
    }
  }
  struct Item {
    std::vector<int> members;
    std::vector<Edge> edges;  // on compacted vertices
    int non_isolated = 0;
    bool alive = true;
  };
  std::vector<Item> items;
  // compact[i][v] = position of input i's vertex v inside its item, or -1.
  std::vector<std::vector<Vertex>> compact(graphs.size());
  for (std::size_t i = 0; i < graphs.size(); ++i) {
    const Graph& g = graphs[i];
    Item item;
    item.members = {static_cast<int>(i)};
    item.non_isolated = g.non_isolated_count();
    compact[i].assign(static_cast<std::size_t>(g.vertex_count()), -1);
    items.push_back(std::move(item));
  }
  // Unmerged items keep their labels; merged ones are compacted on demand.
  std::vector<bool> compacted(graphs.size(), false);
  auto small = [&](const Item& it) { return it.alive && 2 * it.non_isolated < n; };

  auto compact_item = [&](std::size_t idx) {
    Item& it = items[idx];
    if (it.members.size() != 1 || compacted[idx]) return;
    const int input = it.members.front();
    const Graph& g = graphs[static_cast<std::size_t>(input)];
    Vertex next = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (g.degree(v) > 0) compact[static_cast<std::size_t>(input)][v] = next++;
    }
    for (const Edge& e : g.edges()) {
      it.edges.emplace_back(compact[static_cast<std::size_t>(input)][e.u],
                            compact[static_cast<std::size_t>(input)][e.v]);
    }
    compacted[idx] = true;
  };

  while (true) {
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (small(items[i])) candidates.push_back(i);
    }
    if (candidates.size() < 2) break;
    std::stable_sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) {
      return items[a].non_isolated < items[b].non_isolated;
    });
    std::size_t a = std::min(candidates[0], candidates[1]);
    std::size_t b = std::max(candidates[0], candidates[1]);
    compact_item(a);
    compact_item(b);
    Item& keep = items[a];
    Item& gone = items[b];
    const int shift = keep.non_isolated;
    for (const Edge& e : gone.edges) keep.edges.emplace_back(e.u + shift, e.v + shift);
    for (int input : gone.members) {
      for (Vertex& pos : compact[static_cast<std::size_t>(input)]) {
        if (pos >= 0) pos += shift;
      }
    }
    keep.members.insert(keep.members.end(), gone.members.begin(), gone.members.end());
    keep.non_isolated += gone.non_isolated;
    gone.alive = false;
  }

  out.input_instance.assign(graphs.size(), -1);
  out.input_vertex_map.resize(graphs.size());
  for (std::size_t idx = 0; idx < items.size(); ++idx) {
    const Item& it = items[idx];
    if (!it.alive) continue;
    const int instance = static_cast<int>(out.instances.size());
    InstanceGraph inst;
    if (it.members.size() == 1 && !compacted[idx]) {
      const int input = it.members.front();
      inst.graph = pad_to(graphs[static_cast<std::size_t>(input)], n);
      auto& vmap = out.input_vertex_map[static_cast<std::size_t>(input)];
      vmap.resize(static_cast<std::size_t>(graphs[static_cast<std::size_t>(input)].vertex_count()));
      std::iota(vmap.begin(), vmap.end(), 0);
    } else {
      inst.graph = Graph(n, it.edges);
      for (int input : it.members) {
        const auto& pos = compact[static_cast<std::size_t>(input)];
        std::vector<bool> taken(static_cast<std::size_t>(n), false);
        for (Vertex p : pos) {
          if (p >= 0) taken[p] = true;
        }
        auto& vmap = out.input_vertex_map[static_cast<std::size_t>(input)];
        vmap.assign(pos.size(), -1);
        Vertex free_slot = 0;
        for (std::size_t v = 0; v < pos.size(); ++v) {
          if (pos[v] >= 0) {
            vmap[v] = pos[v];
            continue;
          }
          while (taken[free_slot]) ++free_slot;
          taken[free_slot] = true;
          vmap[v] = free_slot;
        }
      }
    }
    for (int input : it.members) out.input_instance[static_cast<std::size_t>(input)] = instance;
    out.provenance.push_back(it.members);
    out.total_edges += inst.graph.edge_count();
    out.max_degree = std::max(out.max_degree, inst.graph.max_degree());
    out.instances.push_back(std::move(inst));
  }
  return out;
}

}  // namespace graphpack

#endif  // GRAPHPACK_INSTANCES_HPP_
