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

#ifndef GRAPHPACK_CLIQUE_ENGINE_HPP_
#define GRAPHPACK_CLIQUE_ENGINE_HPP_

#include <algorithm>
#include <limits>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpack/embedding.hpp"
#include "graphpack/graph.hpp"
#include "graphpack/hypergraph.hpp"
#include "graphpack/ledger.hpp"
#include "graphpack/random.hpp"

namespace graphpack {

// ---------------------------------------------------------------------------
// Clique factors.

// b vertex-disjoint cliques of the source layer.
struct CliqueFactor {
  int id = 0;
  std::vector<VertexSet> cells;
};

// FactorOptions::factor_count value keeping floor((1 - eps) n p / (l - 1)) factors.
inline constexpr int kTargetFactors = -1;

struct FactorOptions {
  int clique_order = 4;
  double epsilon = 0.2;
  std::uint64_t seed = 0;
  int min_factors = 0;                 // fewer raises InsufficientFactors
  double keep_fraction = -1.0;         // negative: 1 - epsilon
  std::int64_t reduction_steps = 400000;
  int factor_count = 0;                // kept factors; 0 uses keep_fraction, kTargetFactors the target
  std::int64_t balance_moves = 200000; // maximin repair budget
};

struct FactorCollection {
  std::vector<CliqueFactor> factors;
  std::vector<int> coverage;           // factors containing each vertex
  double min_coverage_fraction = 0.0;  // over non-isolated layer vertices
  double mean_coverage_fraction = 0.0;
  double target_factors = 0.0;         // (1 - eps) n p / (l - 1)
  double target_cells = 0.0;           // (1 - eps) n / l
  std::int64_t cliques_found = 0;
  std::int64_t decomposition_size = 0; // edge-disjoint cliques used
  int edge_colors = 0;
  int vertex_colors = 0;
  int hypergraph_max_degree = 0;       // of the clique-edge hypergraph
  std::int64_t balance_moves = 0;      // repair moves applied
};

class InsufficientFactors : public std::runtime_error {
 public:
  explicit InsufficientFactors(int found)
      : std::runtime_error("only " + std::to_string(found) + " clique factors found"),
        found(found) {}
  int found;
};

// Edge-disjoint clique factors of `layer`: (a) edge-disjoint cliques from
// the largest class of a proper coloring of the clique-edge hypergraph,
// completed greedily; (b) a proper coloring of those cliques as vertex sets,
// whose classes are vertex-disjoint; (c) the largest classes are kept and
// leftover cliques are added to kept classes where they fit.
inline FactorCollection clique_factor_collection(const Graph& layer,
                                                 const FactorOptions& options = {}) {
  const int n = layer.vertex_count();
  const int l = options.clique_order;
  FactorCollection out;
  out.coverage.assign(static_cast<std::size_t>(n), 0);
  const double p = n > 1 ? static_cast<double>(layer.edge_count()) / pair_count(n) : 0.0;
  out.target_factors = (1 - options.epsilon) * n * p / (l - 1);
  out.target_cells = (1 - options.epsilon) * n / l;

  const CliqueEnumeration cliques = enumerate_cliques(layer, l);
  out.cliques_found = static_cast<std::int64_t>(cliques.count());
  std::vector<int> chosen;
  const Hypergraph by_edges = clique_edge_hypergraph(cliques, n);
  if (cliques.count() > 0) {
    out.hypergraph_max_degree = by_edges.max_degree();
    ColoringOptions copt;
    copt.seed = derive_seed(options.seed, 0x61ULL);
    copt.reduction_steps = 0;
    const Coloring col = proper_hyperedge_coloring(by_edges, copt);
    out.edge_colors = col.colors;
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(col.colors), 0);
    for (int c : col.color) ++sizes[static_cast<std::size_t>(c)];
    const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<char> edge_used(static_cast<std::size_t>(by_edges.ground_size), 0);
    for (std::size_t c = 0; c < col.color.size(); ++c) {
      if (col.color[c] != best) continue;
      chosen.push_back(static_cast<int>(c));
      for (int e : by_edges[c]) edge_used[static_cast<std::size_t>(e)] = 1;
    }
    std::vector<int> rest;
    for (std::size_t c = 0; c < col.color.size(); ++c) {
      if (col.color[c] != best) rest.push_back(static_cast<int>(c));
    }
    Rng rng(derive_seed(options.seed, 0x62ULL));
    shuffle(rest, rng);
    for (int c : rest) {
      const auto members = by_edges[static_cast<std::size_t>(c)];
      if (std::any_of(members.begin(), members.end(),
                      [&](int e) { return edge_used[static_cast<std::size_t>(e)] != 0; })) {
        continue;
      }
      for (int e : members) edge_used[static_cast<std::size_t>(e)] = 1;
      chosen.push_back(c);
    }
    std::sort(chosen.begin(), chosen.end());
  }
  out.decomposition_size = static_cast<std::int64_t>(chosen.size());

  // (b) vertex-disjoint grouping.
  Hypergraph by_vertices(n, l);
  for (int c : chosen) by_vertices.add(cliques.cliques[static_cast<std::size_t>(c)]);
  ColoringOptions vopt;
  vopt.seed = derive_seed(options.seed, 0x63ULL);
  vopt.reduction_steps = options.reduction_steps;
  const Coloring vcol = proper_hyperedge_coloring(by_vertices, vopt);
  out.vertex_colors = vcol.colors;
  auto classes = vcol.classes();
  std::stable_sort(classes.begin(), classes.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });

  // (c) keep the largest classes, then top them up with leftovers.
  std::size_t kept = 0;
  if (options.factor_count != 0) {
    const int wanted = options.factor_count > 0
                           ? options.factor_count
                           : std::max(1, static_cast<int>(std::floor(out.target_factors + 1e-9)));
    while (kept < classes.size() && kept < static_cast<std::size_t>(wanted) &&
           !classes[kept].empty()) {
      ++kept;
    }
  } else {
    const double keep_fraction =
        options.keep_fraction < 0 ? 1.0 - options.epsilon : options.keep_fraction;
    while (kept < classes.size() && !classes[kept].empty() &&
           static_cast<double>(classes[kept].size()) >=
               keep_fraction * static_cast<double>(classes.front().size())) {
      ++kept;
    }
  }
  // Cells are identified by their index in the enumeration; edge_owner
  // keeps placed cells pairwise edge-disjoint.
  std::vector<int> in_factor(cliques.count(), -1);
  std::vector<int> edge_owner(cliques.edges.size(), -1);
  std::vector<std::vector<int>> occupant(kept, std::vector<int>(static_cast<std::size_t>(n), -1));
  std::vector<int> cover(static_cast<std::size_t>(n), 0);
  auto place = [&](int c, std::size_t f) {
    in_factor[static_cast<std::size_t>(c)] = static_cast<int>(f);
    for (Vertex v : cliques.cliques[static_cast<std::size_t>(c)]) {
      occupant[f][static_cast<std::size_t>(v)] = c;
      ++cover[static_cast<std::size_t>(v)];
    }
    for (int e : by_edges[static_cast<std::size_t>(c)]) edge_owner[static_cast<std::size_t>(e)] = c;
  };
  auto unplace = [&](int c) {
    const auto f = static_cast<std::size_t>(in_factor[static_cast<std::size_t>(c)]);
    in_factor[static_cast<std::size_t>(c)] = -1;
    for (Vertex v : cliques.cliques[static_cast<std::size_t>(c)]) {
      occupant[f][static_cast<std::size_t>(v)] = -1;
      --cover[static_cast<std::size_t>(v)];
    }
    for (int e : by_edges[static_cast<std::size_t>(c)]) edge_owner[static_cast<std::size_t>(e)] = -1;
  };
  auto members_of = [&](int c) { return cliques.cliques[static_cast<std::size_t>(c)]; };
  std::vector<std::size_t> size_of(kept, 0);
  for (std::size_t s = 0; s < kept; ++s) {
    for (int h : classes[s]) place(chosen[static_cast<std::size_t>(h)], s);
    size_of[s] = classes[s].size();
  }
  std::vector<int> leftovers;
  for (std::size_t s = kept; s < classes.size(); ++s) {
    for (int h : classes[s]) leftovers.push_back(chosen[static_cast<std::size_t>(h)]);
  }
  auto least_cover = [&](int c) {
    int best = std::numeric_limits<int>::max();
    for (Vertex v : members_of(c)) best = std::min(best, cover[static_cast<std::size_t>(v)]);
    return best;
  };
  std::stable_sort(leftovers.begin(), leftovers.end(),
                   [&](int a, int b) { return least_cover(a) < least_cover(b); });
  for (int c : leftovers) {
    const auto members = members_of(c);
    std::size_t target = kept;
    for (std::size_t f = 0; f < kept; ++f) {
      const bool fits = std::none_of(members.begin(), members.end(), [&](Vertex v) {
        return occupant[f][static_cast<std::size_t>(v)] >= 0;
      });
      if (fits && (target == kept || size_of[f] < size_of[target])) target = f;
    }
    if (target == kept) continue;
    place(c, target);
    ++size_of[target];
  }

  // Maximin repair: place an unplaced clique through the least-covered
  // vertex into a factor, evicting only same-factor cells whose vertices
  // stay above the new minimum. Each move raises the sorted cover vector.
  std::vector<std::vector<int>> through;
  auto cliques_through = [&](Vertex v) -> const std::vector<int>& {
    if (through.empty()) {
      through.resize(static_cast<std::size_t>(n));
      for (std::size_t c = 0; c < cliques.count(); ++c) {
        for (Vertex u : cliques.cliques[c]) through[static_cast<std::size_t>(u)].push_back(static_cast<int>(c));
      }
    }
    return through[static_cast<std::size_t>(v)];
  };
  std::int64_t moves = 0;
  for (bool progress = kept > 0; progress && moves < options.balance_moves;) {
    progress = false;
    std::vector<char> stuck(static_cast<std::size_t>(n), 0);
    while (moves < options.balance_moves) {
      Vertex v = -1;
      for (Vertex u = 0; u < n; ++u) {
        if (layer.degree(u) == 0 || stuck[static_cast<std::size_t>(u)]) continue;
        if (v < 0 || cover[static_cast<std::size_t>(u)] < cover[static_cast<std::size_t>(v)]) v = u;
      }
      if (v < 0) break;
      const int floor_after = cover[static_cast<std::size_t>(v)] + 1;
      int best_c = -1;
      std::size_t best_f = 0;
      std::vector<int> best_evict;
      for (int c : cliques_through(v)) {
        if (in_factor[static_cast<std::size_t>(c)] >= 0) continue;
        // Edges held by placed cells pin the factor (or rule the clique out).
        int pinned = -1;
        bool blocked = false;
        for (int e : by_edges[static_cast<std::size_t>(c)]) {
          const int o = edge_owner[static_cast<std::size_t>(e)];
          if (o < 0) continue;
          const int f = in_factor[static_cast<std::size_t>(o)];
          if (pinned >= 0 && pinned != f) blocked = true;
          pinned = f;
        }
        if (blocked) continue;
        const auto members = members_of(c);
        for (std::size_t f = 0; f < kept; ++f) {
          if (pinned >= 0 && f != static_cast<std::size_t>(pinned)) continue;
          if (occupant[f][static_cast<std::size_t>(v)] >= 0) continue;
          std::vector<int> evict;
          for (Vertex u : members) {
            const int o = occupant[f][static_cast<std::size_t>(u)];
            if (o >= 0 && std::find(evict.begin(), evict.end(), o) == evict.end()) evict.push_back(o);
          }
          if (best_c >= 0 && evict.size() >= best_evict.size()) continue;
          const bool allowed = std::all_of(evict.begin(), evict.end(), [&](int o) {
            const auto cell = members_of(o);
            return std::all_of(cell.begin(), cell.end(), [&](Vertex u) {
              const bool stays = std::find(members.begin(), members.end(), u) != members.end();
              return stays || cover[static_cast<std::size_t>(u)] - 1 >= floor_after;
            });
          });
          if (!allowed) continue;
          best_c = c;
          best_f = f;
          best_evict = std::move(evict);
          if (best_evict.empty()) break;
        }
        if (best_c >= 0 && best_evict.empty()) break;
      }
      if (best_c < 0) {
        stuck[static_cast<std::size_t>(v)] = 1;
        continue;
      }
      for (int o : best_evict) unplace(o);
      place(best_c, best_f);
      ++moves;
      progress = true;
    }
  }
  out.balance_moves = moves;

  std::vector<std::vector<int>> cells_of(kept);
  for (std::size_t c = 0; c < cliques.count(); ++c) {
    if (in_factor[c] >= 0) cells_of[static_cast<std::size_t>(in_factor[c])].push_back(static_cast<int>(c));
  }
  for (std::size_t s = 0; s < kept; ++s) {
    CliqueFactor factor;
    factor.id = static_cast<int>(s);
    for (int c : cells_of[s]) {
      const auto members = members_of(c);
      factor.cells.emplace_back(members.begin(), members.end());
    }
    out.factors.push_back(std::move(factor));
  }
  out.coverage = cover;

  int counted = 0;
  double sum = 0.0;
  out.min_coverage_fraction = out.factors.empty() ? 0.0 : 1.0;
  for (Vertex v = 0; v < n; ++v) {
    if (layer.degree(v) == 0 || out.factors.empty()) continue;
    const double frac = static_cast<double>(out.coverage[static_cast<std::size_t>(v)]) /
                        static_cast<double>(out.factors.size());
    out.min_coverage_fraction = std::min(out.min_coverage_fraction, frac);
    sum += frac;
    ++counted;
  }
  out.mean_coverage_fraction = counted > 0 ? sum / counted : 0.0;
  if (static_cast<int>(out.factors.size()) < options.min_factors) {
    throw InsufficientFactors(static_cast<int>(out.factors.size()));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Packing into a single clique.

class CellPackingFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CellPackOptions {
  std::uint64_t seed = 0;
  int restarts = 20;
  std::int64_t node_budget = 4000;  // backtracking nodes per guest
};

namespace detail {

// Guest vertices grouped by component (largest first), BFS inside each.
inline VertexSet placement_order(const Graph& g) {
  auto comps = connected_components(g);
  std::stable_sort(comps.begin(), comps.end(),
                   [](const auto& a, const auto& b) { return a.size() > b.size(); });
  VertexSet order;
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  for (const auto& comp : comps) {
    Vertex root = comp.front();
    for (Vertex v : comp) {
      if (g.degree(v) > g.degree(root)) root = v;
    }
    std::size_t head = order.size();
    order.push_back(root);
    seen[static_cast<std::size_t>(root)] = 1;
    while (head < order.size()) {
      const Vertex v = order[head++];
      for (Vertex w : g.neighbors(v)) {
        if (!seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          order.push_back(w);
        }
      }
    }
  }
  return order;
}

// Backtracking placement of one guest into K_size against `ledger`.
inline bool place_guest(const Graph& guest, int size, const PackingLedger& ledger, Rng& rng,
                        std::int64_t budget, std::vector<Vertex>& map) {
  const VertexSet order = placement_order(guest);
  map.assign(static_cast<std::size_t>(guest.vertex_count()), kUnmapped);
  std::vector<char> taken(static_cast<std::size_t>(size), 0);
  std::vector<std::vector<Vertex>> options(order.size());
  std::vector<std::size_t> cursor(order.size(), 0);
  std::int64_t nodes = 0;

  auto candidates = [&](Vertex v) {
    std::vector<std::pair<std::uint64_t, Vertex>> scored;
    for (Vertex x = 0; x < size; ++x) {
      if (taken[static_cast<std::size_t>(x)]) continue;
      bool ok = true;
      for (Vertex w : guest.neighbors(v)) {
        const Vertex y = map[static_cast<std::size_t>(w)];
        if (y != kUnmapped && ledger.is_used(x, y)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      const auto load = static_cast<std::uint64_t>(ledger.used_degree(x));
      scored.emplace_back((load << 40) | (rng() >> 24), x);
    }
    std::sort(scored.begin(), scored.end());
    std::vector<Vertex> out;
    out.reserve(scored.size());
    for (const auto& [key, x] : scored) out.push_back(x);
    return out;
  };

  std::size_t depth = 0;
  if (order.empty()) return true;
  options[0] = candidates(order[0]);
  while (true) {
    const Vertex v = order[depth];
    if (map[static_cast<std::size_t>(v)] != kUnmapped) {
      taken[static_cast<std::size_t>(map[static_cast<std::size_t>(v)])] = 0;
      map[static_cast<std::size_t>(v)] = kUnmapped;
    }
    if (cursor[depth] >= options[depth].size()) {
      if (depth == 0) return false;
      cursor[depth] = 0;
      --depth;
      continue;
    }
    if (++nodes > budget) return false;
    const Vertex x = options[depth][cursor[depth]++];
    map[static_cast<std::size_t>(v)] = x;
    taken[static_cast<std::size_t>(x)] = 1;
    if (depth + 1 == order.size()) return true;
    ++depth;
    cursor[depth] = 0;
    options[depth] = candidates(order[depth]);
  }
}

}  // namespace detail

// Pairwise edge-disjoint embeddings of `guests` into K_size (vertices
// 0..size-1). Randomized greedy with per-guest backtracking and restarts.
inline std::vector<Embedding> pack_into_clique(int size, const std::vector<Graph>& guests,
                                               const CellPackOptions& options = {}) {
  std::int64_t total = 0;
  for (const Graph& g : guests) {
    if (g.vertex_count() > size) {
      throw CellPackingFailed("guest with " + std::to_string(g.vertex_count()) +
                              " vertices exceeds clique order " + std::to_string(size));
    }
    total += g.edge_count();
  }
  if (total > pair_count(size)) throw CellPackingFailed("guests have more edges than the clique");

  for (int attempt = 0; attempt < std::max(1, options.restarts); ++attempt) {
    Rng rng(derive_seed(options.seed, 0x63656c6cULL, static_cast<std::uint64_t>(attempt)));
    std::vector<int> order(guests.size());
    std::iota(order.begin(), order.end(), 0);
    shuffle(order, rng);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      return guests[static_cast<std::size_t>(a)].edge_count() >
             guests[static_cast<std::size_t>(b)].edge_count();
    });
    PackingLedger ledger(size);
    std::vector<Embedding> result(guests.size());
    bool ok = true;
    for (int gi : order) {
      const Graph& guest = guests[static_cast<std::size_t>(gi)];
      Embedding e(gi, guest.vertex_count());
      if (!detail::place_guest(guest, size, ledger, rng, options.node_budget, e.map)) {
        ok = false;
        break;
      }
      ledger.commit(guest, e);
      result[static_cast<std::size_t>(gi)] = std::move(e);
    }
    if (ok) return result;
  }
  throw CellPackingFailed("cell packing failed after " + std::to_string(options.restarts) +
                          " restarts");
}

// ---------------------------------------------------------------------------
// Merging small guests.

struct MergeResult {
  std::vector<Graph> graphs;
  std::vector<std::vector<int>> provenance;  // inputs per output
  std::vector<int> owner;                    // output per input
  // vertex_map[i][v]: vertex of graphs[owner[i]] hosting input vertex v,
  // kUnmapped for isolated vertices dropped by a merge.
  std::vector<std::vector<Vertex>> vertex_map;
  bool phase_two_skipped = false;  // r < 1 at this clique order
};

class MergeFailed : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct MergeOptions {
  double epsilon = 0.2;
  int component_bound = 1;  // K
  int constant = 8;         // C
  std::uint64_t seed = 0;
};

// Two-phase reduction of a guest collection for a clique of order `l`:
// unions of pairs with at most (1-eps)l/4 edges, then superposition of
// triples with (1-eps)l/4 < e <= 3(1-eps)l/4 edges over r buckets.
inline MergeResult merge_small_graphs(const std::vector<Graph>& guests, int l,
                                      const MergeOptions& options = {}) {
  struct Item {
    std::vector<Edge> edges;
    int order = 0;
    std::vector<int> members;
    bool alive = true;
  };
  MergeResult out;
  std::vector<Item> items;
  out.vertex_map.resize(guests.size());
  std::vector<int> item_of(guests.size());
  for (std::size_t i = 0; i < guests.size(); ++i) {
    items.push_back({guests[i].edges(), guests[i].vertex_count(), {static_cast<int>(i)}, true});
    out.vertex_map[i].resize(static_cast<std::size_t>(guests[i].vertex_count()));
    std::iota(out.vertex_map[i].begin(), out.vertex_map[i].end(), 0);
    item_of[i] = static_cast<int>(i);
  }
  const double eps = options.epsilon;
  const double low = (1 - eps) * l / 4.0;
  const double high = (1 - eps) * 3.0 * l / 4.0;

  // Relabels an item's non-isolated vertices to 0..k-1; returns the map.
  auto compact = [&](Item& it) {
    std::vector<Vertex> relabel(static_cast<std::size_t>(it.order), kUnmapped);
    Vertex next = 0;
    std::vector<char> touched(static_cast<std::size_t>(it.order), 0);
    for (const Edge& e : it.edges) {
      touched[static_cast<std::size_t>(e.u)] = 1;
      touched[static_cast<std::size_t>(e.v)] = 1;
    }
    for (Vertex v = 0; v < it.order; ++v) {
      if (touched[static_cast<std::size_t>(v)]) relabel[static_cast<std::size_t>(v)] = next++;
    }
    for (Edge& e : it.edges) e = Edge(relabel[static_cast<std::size_t>(e.u)], relabel[static_cast<std::size_t>(e.v)]);
    it.order = next;
    for (int input : it.members) {
      for (Vertex& x : out.vertex_map[static_cast<std::size_t>(input)]) {
        if (x != kUnmapped) x = relabel[static_cast<std::size_t>(x)];
      }
    }
  };

  auto alive_with = [&](auto pred) {
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (items[i].alive && pred(static_cast<double>(items[i].edges.size()))) ids.push_back(i);
    }
    std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) {
      return items[a].edges.size() < items[b].edges.size();
    });
    return ids;
  };

  // Phase one.
  while (true) {
    const auto ids = alive_with([&](double e) { return e <= low; });
    if (ids.size() < 2) break;
    Item& a = items[std::min(ids[0], ids[1])];
    Item& b = items[std::max(ids[0], ids[1])];
    compact(a);
    compact(b);
    for (int input : b.members) {
      for (Vertex& x : out.vertex_map[static_cast<std::size_t>(input)]) {
        if (x != kUnmapped) x += a.order;
      }
    }
    for (const Edge& e : b.edges) a.edges.emplace_back(e.u + a.order, e.v + a.order);
    a.order += b.order;
    a.members.insert(a.members.end(), b.members.begin(), b.members.end());
    b.alive = false;
  }

  // Phase two.
  const int bucket_cap = static_cast<int>(std::floor((1 - eps / 4) * options.constant *
                                                     options.component_bound));
  const int block = options.constant * options.component_bound;
  const int r = static_cast<int>(std::floor((1 - eps / 2) * l / block));
  int round = 0;
  while (true) {
    const auto ids = alive_with([&](double e) { return e > low && e <= high; });
    if (ids.size() < 3) break;
    if (r < 1) {
      out.phase_two_skipped = true;
      break;
    }
    std::vector<std::size_t> trio(ids.begin(), ids.begin() + 3);
    std::sort(trio.begin(), trio.end());
    // bucket_of[t][v] and position inside the bucket for each member graph.
    std::vector<std::vector<Graph>> bucket_graphs(3, std::vector<Graph>(static_cast<std::size_t>(r)));
    std::vector<std::vector<std::pair<int, Vertex>>> place(3);
    for (int t = 0; t < 3; ++t) {
      Item& it = items[trio[static_cast<std::size_t>(t)]];
      compact(it);
      const Graph g(it.order, it.edges);
      auto comps = connected_components(g);
      std::stable_sort(comps.begin(), comps.end(),
                       [](const auto& x, const auto& y) { return x.size() > y.size(); });
      std::vector<int> fill(static_cast<std::size_t>(r), 0);
      std::vector<VertexSet> bucket_vertices(static_cast<std::size_t>(r));
      place[static_cast<std::size_t>(t)].assign(static_cast<std::size_t>(it.order), {-1, kUnmapped});
      for (const auto& comp : comps) {
        int target = -1;
        for (int m = 0; m < r; ++m) {
          if (fill[static_cast<std::size_t>(m)] + static_cast<int>(comp.size()) <= bucket_cap) {
            target = m;
            break;
          }
        }
        if (target < 0) throw MergeFailed("components do not fit in the buckets; raise C");
        for (Vertex v : comp) {
          place[static_cast<std::size_t>(t)][static_cast<std::size_t>(v)] = {
              target, static_cast<Vertex>(bucket_vertices[static_cast<std::size_t>(target)].size())};
          bucket_vertices[static_cast<std::size_t>(target)].push_back(v);
        }
        fill[static_cast<std::size_t>(target)] += static_cast<int>(comp.size());
      }
      for (int m = 0; m < r; ++m) {
        bucket_graphs[static_cast<std::size_t>(t)][static_cast<std::size_t>(m)] =
            induced_subgraph(g, bucket_vertices[static_cast<std::size_t>(m)]);
      }
    }
    std::vector<Edge> edges;
    std::vector<std::vector<std::vector<Vertex>>> superposed(3, std::vector<std::vector<Vertex>>(static_cast<std::size_t>(r)));
    for (int m = 0; m < r; ++m) {
      std::vector<Graph> triple;
      for (int t = 0; t < 3; ++t) triple.push_back(bucket_graphs[static_cast<std::size_t>(t)][static_cast<std::size_t>(m)]);
      CellPackOptions copt;
      copt.seed = derive_seed(options.seed, 0x6d657267ULL, static_cast<std::uint64_t>(round * r + m));
      std::vector<Embedding> maps;
      try {
        maps = pack_into_clique(block, triple, copt);
      } catch (const CellPackingFailed&) {
        throw MergeFailed("bucket superposition failed; raise C");
      }
      for (int t = 0; t < 3; ++t) {
        const Graph& bg = triple[static_cast<std::size_t>(t)];
        for (const Edge& e : bg.edges()) {
          edges.emplace_back(m * block + maps[static_cast<std::size_t>(t)].map[static_cast<std::size_t>(e.u)],
                             m * block + maps[static_cast<std::size_t>(t)].map[static_cast<std::size_t>(e.v)]);
        }
        superposed[static_cast<std::size_t>(t)][static_cast<std::size_t>(m)] = maps[static_cast<std::size_t>(t)].map;
      }
    }
    Item merged;
    merged.order = r * block;
    merged.edges = std::move(edges);
    for (int t = 0; t < 3; ++t) {
      Item& it = items[trio[static_cast<std::size_t>(t)]];
      for (int input : it.members) {
        for (Vertex& x : out.vertex_map[static_cast<std::size_t>(input)]) {
          if (x == kUnmapped) continue;
          const auto [m, pos] = place[static_cast<std::size_t>(t)][static_cast<std::size_t>(x)];
          x = m * block + superposed[static_cast<std::size_t>(t)][static_cast<std::size_t>(m)][static_cast<std::size_t>(pos)];
        }
      }
      merged.members.insert(merged.members.end(), it.members.begin(), it.members.end());
      it.alive = false;
    }
    compact(merged);
    items.push_back(std::move(merged));
    ++round;
  }

  for (const Item& it : items) {
    if (!it.alive) continue;
    const int index = static_cast<int>(out.graphs.size());
    out.graphs.emplace_back(it.order, it.edges);
    auto members = it.members;
    std::sort(members.begin(), members.end());
    out.provenance.push_back(members);
    for (int input : members) item_of[static_cast<std::size_t>(input)] = index;
  }
  out.owner = item_of;
  return out;
}

}  // namespace graphpack

#endif  // GRAPHPACK_CLIQUE_ENGINE_HPP_
