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

#ifndef GRAPHPACK_COMPLETION_HPP_
#define GRAPHPACK_COMPLETION_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpack/embedding.hpp"
#include "graphpack/graph.hpp"
#include "graphpack/instances.hpp"
#include "graphpack/ledger.hpp"
#include "graphpack/matching.hpp"
#include "graphpack/random.hpp"
#include "graphpack/slicer.hpp"

namespace graphpack {

// Shared state of Phases II and III.
struct PhaseState {
  const SlicedHost* sliced = nullptr;
  const InstanceSet* instances = nullptr;
  std::vector<Embedding> embeddings;  // per instance
  std::vector<int> layer_of;          // batch (layer) of each instance
  PackingLedger ledger;
  std::vector<int> zone_load;         // separator images per host vertex
  // Runtime assertion counters; both must stay zero.
  std::int64_t zone_cap_breaches = 0;
  std::int64_t eligibility_conflicts = 0;

  PhaseState() = default;
  PhaseState(const SlicedHost& host, const InstanceSet& set)
      : sliced(&host),
        instances(&set),
        layer_of(set.instances.size(), 0),
        ledger(host.n()),
        zone_load(static_cast<std::size_t>(host.n()), 0) {
    for (std::size_t i = 0; i < set.instances.size(); ++i) {
      embeddings.emplace_back(static_cast<int>(i), set.instances[i].graph.vertex_count());
    }
  }
};

// ---------------------------------------------------------------------------
// Phase II.

class NoCandidate : public std::runtime_error {
 public:
  NoCandidate(int instance, Vertex vertex, const std::string& trace)
      : std::runtime_error("no zone candidate for vertex " + std::to_string(vertex) +
                           " of instance " + std::to_string(instance) + " (" + trace + ")"),
        instance(instance),
        vertex(vertex) {}
  int instance;
  Vertex vertex;
};

// Embeds the separator of one instance into the view's zone.
inline void embed_separator(PhaseState& state, const Phase2View& view, int instance) {
  const InstanceGraph& inst = state.instances->instances[static_cast<std::size_t>(instance)];
  Embedding& g = state.embeddings[static_cast<std::size_t>(instance)];
  const double cap = state.sliced->constants.zone_cap();
  std::vector<char> image(static_cast<std::size_t>(state.sliced->n()), 0);
  for (Vertex h : g.map) {
    if (h != kUnmapped) image[static_cast<std::size_t>(h)] = 1;
  }
  for (Vertex v : inst.separator) {
    VertexSet placed;
    for (Vertex w : inst.graph.neighbors(v)) {
      if (g.mapped(w)) placed.push_back(g(w));
    }
    int adjacent = 0;
    int unused = 0;
    int fresh = 0;
    Vertex best = kUnmapped;
    for (Vertex u : view.zone) {
      bool ok = true;
      for (Vertex y : placed) {
        if (!view.graph.has_edge(u, y)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      ++adjacent;
      for (Vertex y : placed) {
        if (state.ledger.is_used(u, y)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      ++unused;
      if (image[static_cast<std::size_t>(u)]) continue;
      ++fresh;
      if (state.zone_load[static_cast<std::size_t>(u)] > cap - 1 + 1e-9) continue;
      if (best == kUnmapped ||
          state.zone_load[static_cast<std::size_t>(u)] < state.zone_load[static_cast<std::size_t>(best)]) {
        best = u;
      }
    }
    if (best == kUnmapped) {
      throw NoCandidate(instance, v,
                        "zone " + std::to_string(view.zone.size()) + ", common neighbours " +
                            std::to_string(adjacent) + ", unused edges " + std::to_string(unused) +
                            ", unoccupied " + std::to_string(fresh) + ", under cap 0");
    }
    std::vector<Edge> edges;
    for (Vertex y : placed) edges.emplace_back(best, y);
    state.ledger.commit_edges(edges);
    g.map[static_cast<std::size_t>(v)] = best;
    image[static_cast<std::size_t>(best)] = 1;
    if (++state.zone_load[static_cast<std::size_t>(best)] > cap + 1e-9) ++state.zone_cap_breaches;
  }
  g.phase = Phase::kPhase2;
}

// Phase II for layer k over `order` (instance indices of that batch).
inline void embed_separators(PhaseState& state, const Phase2View& view,
                             const std::vector<int>& order) {
  for (int i : order) embed_separator(state, view, i);
}

// ---------------------------------------------------------------------------
// Balance after Phase II.

struct BalanceReport {
  std::vector<int> per_vertex;
  int max_vertex = 0;
  int max_pair = 0;
  std::int64_t pairs_checked = 0;
  bool pair_within_vertex = true;  // every pair count <= both vertex counts
  double cap_vertex = 0.0;
  double cap_pair = 0.0;
};

// Counts, for every host vertex x, the instances with x in
// g_i(N(I_i)) or outside Im g_i; pairs are exhaustive up to n = 600 and
// sampled beyond.
inline BalanceReport check_balance(const PhaseState& state, double slack = 2.0,
                                   std::uint64_t seed = 0) {
  const int n = state.sliced->n();
  const double gamma = state.sliced->constants.gamma;
  BalanceReport report;
  report.per_vertex.assign(static_cast<std::size_t>(n), 0);
  report.cap_vertex = slack * std::pow(gamma, 0.9) * n;
  report.cap_pair = slack * std::pow(gamma, 1.9) * n;
  std::vector<std::vector<char>> member;
  for (std::size_t i = 0; i < state.embeddings.size(); ++i) {
    const InstanceGraph& inst = state.instances->instances[i];
    const Embedding& g = state.embeddings[i];
    std::vector<char> in(static_cast<std::size_t>(n), 1);
    for (Vertex h : g.map) {
      if (h != kUnmapped) in[static_cast<std::size_t>(h)] = 0;
    }
    for (Vertex v : inst.two_independent) {
      for (Vertex w : inst.graph.neighbors(v)) {
        if (g.mapped(w)) in[static_cast<std::size_t>(g(w))] = 1;
      }
    }
    for (Vertex x = 0; x < n; ++x) report.per_vertex[static_cast<std::size_t>(x)] += in[static_cast<std::size_t>(x)];
    member.push_back(std::move(in));
  }
  for (int c : report.per_vertex) report.max_vertex = std::max(report.max_vertex, c);
  auto pair_count_of = [&](Vertex x, Vertex y) {
    int c = 0;
    for (const auto& in : member) c += in[static_cast<std::size_t>(x)] && in[static_cast<std::size_t>(y)];
    return c;
  };
  auto visit = [&](Vertex x, Vertex y) {
    const int c = pair_count_of(x, y);
    report.max_pair = std::max(report.max_pair, c);
    if (c > report.per_vertex[static_cast<std::size_t>(x)] || c > report.per_vertex[static_cast<std::size_t>(y)]) {
      report.pair_within_vertex = false;
    }
    ++report.pairs_checked;
  };
  if (n <= 600) {
    for (Vertex x = 0; x < n; ++x) {
      for (Vertex y = x + 1; y < n; ++y) visit(x, y);
    }
  } else {
    Rng rng(derive_seed(seed, 0x62616cULL));
    for (int s = 0; s < 20000; ++s) {
      const Vertex x = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n)));
      Vertex y = static_cast<Vertex>(uniform_below(rng, static_cast<std::uint64_t>(n - 1)));
      if (y >= x) ++y;
      visit(x, y);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Phase III.

class AuxSizeMismatch : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct AuxBipartite {
  int instance_id = 0;
  VertexSet left_vertices;          // v in I_i, parallel to left_sets
  std::vector<VertexSet> left_sets; // X = g_i(N(v)), sorted
  VertexSet right;                  // host vertices outside Im g_i
  BipartiteGraph graph;
};

// Left sets from g_i on N(v) for v in I_i; right side is the complement of
// Im g_i; (X, x) is an edge iff x is adjacent in `completion` to all of X.
inline AuxBipartite build_aux_bipartite(const PhaseState& state, const Phase3View& completion,
                                        int instance) {
  const InstanceGraph& inst = state.instances->instances[static_cast<std::size_t>(instance)];
  const Embedding& g = state.embeddings[static_cast<std::size_t>(instance)];
  const int n = state.sliced->n();
  AuxBipartite aux;
  aux.instance_id = instance;
  std::vector<char> image(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < static_cast<Vertex>(g.map.size()); ++v) {
    if (g.mapped(v)) image[static_cast<std::size_t>(g(v))] = 1;
  }
  for (Vertex x = 0; x < n; ++x) {
    if (!image[static_cast<std::size_t>(x)]) aux.right.push_back(x);
  }
  for (Vertex v : inst.two_independent) {
    VertexSet x;
    for (Vertex w : inst.graph.neighbors(v)) {
      if (!g.mapped(w)) {
        throw AuxSizeMismatch("neighbour " + std::to_string(w) + " of completion vertex " +
                              std::to_string(v) + " is unmapped");
      }
      x.push_back(g(w));
    }
    std::sort(x.begin(), x.end());
    aux.left_vertices.push_back(v);
    aux.left_sets.push_back(std::move(x));
  }
  if (aux.left_sets.size() != aux.right.size()) {
    throw AuxSizeMismatch("aux sides " + std::to_string(aux.left_sets.size()) + " vs " +
                          std::to_string(aux.right.size()));
  }
  aux.graph.left = static_cast<int>(aux.left_sets.size());
  aux.graph.right = static_cast<int>(aux.right.size());
  aux.graph.adj.resize(aux.left_sets.size());
  for (std::size_t a = 0; a < aux.left_sets.size(); ++a) {
    for (std::size_t r = 0; r < aux.right.size(); ++r) {
      const Vertex x = aux.right[r];
      const bool all = std::all_of(aux.left_sets[a].begin(), aux.left_sets[a].end(),
                                   [&](Vertex y) { return completion.graph.has_edge(x, y); });
      if (all) aux.graph.adj[a].push_back(static_cast<int>(r));
    }
  }
  return aux;
}

// Drops (X, x) whenever some {y, x} with y in X is already used.
inline AuxBipartite filter_eligible(const AuxBipartite& aux, const PackingLedger& ledger) {
  AuxBipartite out = aux;
  for (std::size_t a = 0; a < out.left_sets.size(); ++a) {
    auto& list = out.graph.adj[a];
    std::erase_if(list, [&](int r) {
      const Vertex x = out.right[static_cast<std::size_t>(r)];
      return std::any_of(out.left_sets[a].begin(), out.left_sets[a].end(),
                         [&](Vertex y) { return ledger.is_used(x, y); });
    });
  }
  return out;
}

// Host edges realizing `m` on `aux`.
inline std::vector<Edge> realized_edges(const AuxBipartite& aux, const Matching& m) {
  std::vector<Edge> edges;
  for (std::size_t a = 0; a < aux.left_sets.size(); ++a) {
    const Vertex x = aux.right[static_cast<std::size_t>(m.left_to_right[a])];
    for (Vertex y : aux.left_sets[a]) edges.emplace_back(x, y);
  }
  return edges;
}

struct CompletionOptions {
  int matchings_wanted = 1;  // m*
  int retries = 5;           // per instance, through the repair hook
  std::uint64_t seed = 0;
};

struct CompletionStats {
  std::vector<int> collection_size;  // per instance, matchings found
  std::vector<int> attempts;         // per instance
  int repairs = 0;
};

class CompletionFailed : public std::runtime_error {
 public:
  CompletionFailed(int instance, CompletionStats stats)
      : std::runtime_error("completion failed for instance " + std::to_string(instance)),
        instance(instance),
        stats(std::move(stats)) {}
  int instance;
  CompletionStats stats;
};


// Called after a failed attempt for `instance`; may rebuild g_i (releasing
// and recommitting its edges) and returns false when it cannot.
using RepairHook = std::function<bool(PhaseState&, int instance, int attempt)>;

// Phase III over `order`: each instance takes a uniformly chosen member of
// a collection of edge-disjoint eligible perfect matchings.
inline CompletionStats complete_embeddings(PhaseState& state, const Phase3View& completion,
                                           const std::vector<int>& order,
                                           const CompletionOptions& options = {},
                                           const RepairHook& repair = {}) {
  CompletionStats stats;
  stats.collection_size.assign(state.embeddings.size(), 0);
  stats.attempts.assign(state.embeddings.size(), 0);
  for (int i : order) {
    Embedding& g = state.embeddings[static_cast<std::size_t>(i)];
    bool done = false;
    for (int attempt = 0; attempt <= options.retries && !done; ++attempt) {
      ++stats.attempts[static_cast<std::size_t>(i)];
      if (attempt > 0) {
        if (!repair || !repair(state, i, attempt)) break;
        ++stats.repairs;
      }
      const AuxBipartite aux = filter_eligible(build_aux_bipartite(state, completion, i), state.ledger);
      const MatchingCollection coll =
          edge_disjoint_perfect_matchings(aux.graph, std::max(1, options.matchings_wanted));
      stats.collection_size[static_cast<std::size_t>(i)] = static_cast<int>(coll.matchings.size());
      if (coll.matchings.empty()) continue;
      Rng rng(derive_seed(options.seed, 0x6d61746368ULL,
                          static_cast<std::uint64_t>(i) * 64 + static_cast<std::uint64_t>(attempt)));
      const Matching& m = coll.matchings[uniform_below(rng, coll.matchings.size())];
      const std::vector<Edge> edges = realized_edges(aux, m);
      try {
        state.ledger.commit_edges(edges);
      } catch (const LedgerConflict&) {
        ++state.eligibility_conflicts;
        continue;
      }
      for (std::size_t a = 0; a < aux.left_vertices.size(); ++a) {
        g.map[static_cast<std::size_t>(aux.left_vertices[a])] =
            aux.right[static_cast<std::size_t>(m.left_to_right[a])];
      }
      g.phase = Phase::kPhase3;
      done = true;
    }
    if (!done) throw CompletionFailed(i, stats);
  }
  return stats;
}

// ---------------------------------------------------------------------------
// Local resilience lab.

struct ResilienceTrial {
  int trial = 0;
  bool survived = false;
  std::uint64_t seed = 0;
  std::int64_t deleted = 0;
};

struct ResilienceResult {
  int n = 0;
  double p = 0.0;
  double deletion_fraction = 0.0;
  int per_vertex_budget = 0;
  std::vector<ResilienceTrial> trials;

  double survival_rate() const {
    if (trials.empty()) return 0.0;
    int ok = 0;
    for (const auto& t : trials) ok += t.survived ? 1 : 0;
    return static_cast<double>(ok) / static_cast<double>(trials.size());
  }
};

// Samples B(n, p) per trial; an adversary deleting at most
// floor(fraction * n p / 2) edges at every vertex repeatedly removes the
// edge between the currently smallest-degree right vertex and its
// smallest-degree left neighbour; then tests for a perfect matching.
inline ResilienceResult estimate_resilience(int n, double p, double deletion_fraction, int trials,
                                            std::uint64_t seed) {
  if (!(deletion_fraction >= 0 && deletion_fraction < 1)) {
    throw std::invalid_argument("deletion fraction must lie in [0,1)");
  }
  ResilienceResult result;
  result.n = n;
  result.p = p;
  result.deletion_fraction = deletion_fraction;
  result.per_vertex_budget = static_cast<int>(std::floor(deletion_fraction * n * p / 2 + 1e-9));
  const int budget = result.per_vertex_budget;
  for (int t = 0; t < trials; ++t) {
    ResilienceTrial trial;
    trial.trial = t;
    trial.seed = derive_seed(seed, 0x726573ULL, static_cast<std::uint64_t>(t));
    Rng rng(trial.seed);
    // Dense adjacency: adj[l][r].
    std::vector<std::vector<char>> adj(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
    std::vector<int> left_deg(static_cast<std::size_t>(n), 0);
    std::vector<int> right_deg(static_cast<std::size_t>(n), 0);
    for (int l = 0; l < n; ++l) {
      for (int r = 0; r < n; ++r) {
        if (uniform01(rng) < p) {
          adj[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)] = 1;
          ++left_deg[static_cast<std::size_t>(l)];
          ++right_deg[static_cast<std::size_t>(r)];
        }
      }
    }
    std::vector<int> left_del(static_cast<std::size_t>(n), 0);
    std::vector<int> right_del(static_cast<std::size_t>(n), 0);
    std::vector<char> exhausted(static_cast<std::size_t>(n), 0);
    while (true) {
      int target = -1;
      for (int r = 0; r < n; ++r) {
        if (exhausted[static_cast<std::size_t>(r)] || right_del[static_cast<std::size_t>(r)] >= budget) continue;
        if (target < 0 || right_deg[static_cast<std::size_t>(r)] < right_deg[static_cast<std::size_t>(target)]) target = r;
      }
      if (target < 0) break;
      int victim = -1;
      for (int l = 0; l < n; ++l) {
        if (!adj[static_cast<std::size_t>(l)][static_cast<std::size_t>(target)] || left_del[static_cast<std::size_t>(l)] >= budget) continue;
        if (victim < 0 || left_deg[static_cast<std::size_t>(l)] < left_deg[static_cast<std::size_t>(victim)]) victim = l;
      }
      if (victim < 0) {
        exhausted[static_cast<std::size_t>(target)] = 1;
        continue;
      }
      adj[static_cast<std::size_t>(victim)][static_cast<std::size_t>(target)] = 0;
      --left_deg[static_cast<std::size_t>(victim)];
      --right_deg[static_cast<std::size_t>(target)];
      ++left_del[static_cast<std::size_t>(victim)];
      ++right_del[static_cast<std::size_t>(target)];
      ++trial.deleted;
    }
    BipartiteGraph g;
    g.left = n;
    g.right = n;
    g.adj.resize(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
      for (int r = 0; r < n; ++r) {
        if (adj[static_cast<std::size_t>(l)][static_cast<std::size_t>(r)]) g.adj[static_cast<std::size_t>(l)].push_back(r);
      }
    }
    trial.survived = max_matching(g).perfect(g);
    result.trials.push_back(trial);
  }
  return result;
}

}  // namespace graphpack

#endif  // GRAPHPACK_COMPLETION_HPP_
