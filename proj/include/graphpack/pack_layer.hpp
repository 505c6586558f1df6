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

#ifndef GRAPHPACK_PACK_LAYER_HPP_
#define GRAPHPACK_PACK_LAYER_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpack/balance.hpp"
#include "graphpack/clique_engine.hpp"
#include "graphpack/embedding.hpp"
#include "graphpack/graph.hpp"
#include "graphpack/instances.hpp"
#include "graphpack/ledger.hpp"
#include "graphpack/random.hpp"
#include "graphpack/slicer.hpp"

namespace graphpack {

class LayerPackingFailed : public std::runtime_error {
 public:
  LayerPackingFailed(int layer, int instance, const std::string& why)
      : std::runtime_error("layer " + std::to_string(layer) + ", instance " +
                           std::to_string(instance) + ": " + why),
        layer(layer),
        instance(instance) {}
  int layer;
  int instance;
};

class SpreadViolation : public std::runtime_error {
 public:
  SpreadViolation(const std::string& counter, int value, double cap)
      : std::runtime_error("spread counter " + counter + " reached " + std::to_string(value) +
                           " above cap " + std::to_string(cap)),
        counter(counter),
        value(value),
        cap(cap) {}
  std::string counter;
  int value;
  double cap;
};

struct LayerOptions {
  bool use_cliques = true;
  double factor_epsilon = 0.2;
  double cap_slack = 2.0;
  bool enforce_caps = false;
  int component_restarts = 40;
  CellPackOptions cell;
};

// Per-vertex and per-pair counts over the instances of one batch:
// a_hits[x]: instances with x in f_i(A_i);
// b_hits[x]: instances with x in f_i(B_i) or outside Z and Im f_i;
// max_pair: largest count of instances whose B-set contains both ends.
struct SpreadTally {
  std::vector<int> a_hits;
  std::vector<int> b_hits;
  int max_a = 0;
  int max_b = 0;
  int max_pair = 0;
  double cap_a = 0.0;
  double cap_b = 0.0;
  double cap_pair = 0.0;

  bool within_caps() const { return max_a <= cap_a && max_b <= cap_b && max_pair <= cap_pair; }
};

struct LayerPacking {
  int layer = 0;
  std::vector<int> batch;             // instance indices
  std::vector<Embedding> embeddings;  // f_i, parallel to batch
  int factors = 0;
  double factor_min_coverage = 0.0;
  std::int64_t clique_vertices = 0;   // core vertices placed through cells
  std::int64_t residual_vertices = 0; // core vertices placed directly
  std::int64_t clique_edges = 0;
  std::int64_t residual_edges = 0;
  SpreadTally spread;
};

// Spread tallies of Phase I maps; `zone` is Z^(k).
inline SpreadTally phase1_spread(int n, const VertexSet& zone, const InstanceSet& set,
                                 const std::vector<int>& batch,
                                 const std::vector<Embedding>& maps) {
  SpreadTally t;
  t.a_hits.assign(static_cast<std::size_t>(n), 0);
  t.b_hits.assign(static_cast<std::size_t>(n), 0);
  std::vector<char> in_zone(static_cast<std::size_t>(n), 0);
  for (Vertex z : zone) in_zone[static_cast<std::size_t>(z)] = 1;
  std::vector<int> pair_hits(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const InstanceGraph& inst = set.instances[static_cast<std::size_t>(batch[b])];
    const Embedding& f = maps[b];
    std::vector<char> in_set(static_cast<std::size_t>(n), 0);
    for (Vertex v : inst.anchors_s) {
      if (f.mapped(v)) ++t.a_hits[static_cast<std::size_t>(f(v))];
    }
    for (Vertex v : inst.anchors_i) {
      if (f.mapped(v)) in_set[static_cast<std::size_t>(f(v))] = 1;
    }
    std::vector<char> image(static_cast<std::size_t>(n), 0);
    for (Vertex h : f.map) {
      if (h != kUnmapped) image[static_cast<std::size_t>(h)] = 1;
    }
    for (Vertex x = 0; x < n; ++x) {
      if (!in_zone[static_cast<std::size_t>(x)] && !image[static_cast<std::size_t>(x)]) {
        in_set[static_cast<std::size_t>(x)] = 1;
      }
    }
    VertexSet members;
    for (Vertex x = 0; x < n; ++x) {
      if (in_set[static_cast<std::size_t>(x)]) {
        members.push_back(x);
        ++t.b_hits[static_cast<std::size_t>(x)];
      }
    }
    for (std::size_t i = 0; i < members.size(); ++i) {
      for (std::size_t j = i + 1; j < members.size(); ++j) {
        const int c = ++pair_hits[static_cast<std::size_t>(members[i]) * static_cast<std::size_t>(n) +
                                  static_cast<std::size_t>(members[j])];
        t.max_pair = std::max(t.max_pair, c);
      }
    }
  }
  for (Vertex x = 0; x < n; ++x) {
    t.max_a = std::max(t.max_a, t.a_hits[static_cast<std::size_t>(x)]);
    t.max_b = std::max(t.max_b, t.b_hits[static_cast<std::size_t>(x)]);
  }
  return t;
}

// Caps 2 alpha t, 4 (beta + xi) t, 5 (beta + xi)^2 t with alpha = Delta delta,
// beta = Delta gamma and t the batch size, each times `slack`.
inline void set_spread_caps(SpreadTally& t, const PipelineConstants& c, int batch_size,
                            double slack) {
  const double alpha = c.max_degree * c.delta;
  const double beta = c.max_degree * c.gamma;
  const double xi = c.xi();
  t.cap_a = slack * 2 * alpha * batch_size;
  t.cap_b = slack * 4 * (beta + xi) * batch_size;
  t.cap_pair = slack * 5 * (beta + xi) * (beta + xi) * batch_size;
}

namespace detail {

// Greedy randomized embedder for whole components of one guest into the
// free edges of a host view.
class DirectEmbedder {
 public:
  DirectEmbedder(const Graph& view, PackingLedger& ledger, const std::vector<char>& forbidden)
      : view_(view), ledger_(ledger), forbidden_(forbidden) {
    free_degree_.resize(static_cast<std::size_t>(view.vertex_count()));
    for (Vertex x = 0; x < view.vertex_count(); ++x) {
      int free = 0;
      for (Vertex y : view.neighbors(x)) free += ledger.is_used(x, y) ? 0 : 1;
      free_degree_[static_cast<std::size_t>(x)] = free;
    }
  }

  int free_degree(Vertex x) const { return free_degree_[static_cast<std::size_t>(x)]; }

  // Optional score bonus per host vertex, applied to guest vertices with
  // guest_mask[v]; both must outlive the embedder.
  void set_bias(const std::vector<double>* host_bonus, const std::vector<bool>* guest_mask) {
    bonus_ = host_bonus;
    bonus_mask_ = guest_mask;
  }

  void note_commit(const Edge& e) {
    if (view_.has_edge(e.u, e.v)) {
      --free_degree_[static_cast<std::size_t>(e.u)];
      --free_degree_[static_cast<std::size_t>(e.v)];
    }
  }

  // Embeds the component `comp` of `guest` (vertices with keep[v]) into the
  // view, extending `map` and `taken`; returns the committed edges, or
  // false with everything rolled back.
  bool embed_component(const Graph& guest, const VertexSet& comp, const std::vector<bool>& keep,
                       std::vector<Vertex>& map, std::vector<char>& taken, Rng& rng,
                       int restarts, std::vector<Edge>& committed) {
    const VertexSet order = bfs_order(guest, comp, keep);
    for (int attempt = 0; attempt < restarts; ++attempt) {
      std::vector<Edge> edges;
      bool ok = true;
      for (Vertex v : order) {
        const Vertex x = choose(guest, v, keep, map, taken, rng);
        if (x == kUnmapped) {
          ok = false;
          break;
        }
        map[static_cast<std::size_t>(v)] = x;
        taken[static_cast<std::size_t>(x)] = 1;
        for (Vertex w : guest.neighbors(v)) {
          if (!keep[static_cast<std::size_t>(w)]) continue;
          const Vertex y = map[static_cast<std::size_t>(w)];
          if (y == kUnmapped) continue;
          const Edge e(x, y);
          ledger_.commit_edges(std::span<const Edge>(&e, 1));
          note_commit(e);
          edges.push_back(e);
        }
      }
      if (ok) {
        committed.insert(committed.end(), edges.begin(), edges.end());
        return true;
      }
      ledger_.release_edges(edges);
      for (const Edge& e : edges) {
        ++free_degree_[static_cast<std::size_t>(e.u)];
        ++free_degree_[static_cast<std::size_t>(e.v)];
      }
      for (Vertex v : order) {
        const Vertex x = map[static_cast<std::size_t>(v)];
        if (x != kUnmapped) {
          taken[static_cast<std::size_t>(x)] = 0;
          map[static_cast<std::size_t>(v)] = kUnmapped;
        }
      }
    }
    return false;
  }

 private:
  static VertexSet bfs_order(const Graph& guest, const VertexSet& comp,
                             const std::vector<bool>& keep) {
    Vertex root = comp.front();
    for (Vertex v : comp) {
      if (guest.degree(v) > guest.degree(root)) root = v;
    }
    VertexSet order{root};
    std::vector<char> seen(static_cast<std::size_t>(guest.vertex_count()), 0);
    seen[static_cast<std::size_t>(root)] = 1;
    for (std::size_t head = 0; head < order.size(); ++head) {
      for (Vertex w : guest.neighbors(order[head])) {
        if (keep[static_cast<std::size_t>(w)] && !seen[static_cast<std::size_t>(w)]) {
          seen[static_cast<std::size_t>(w)] = 1;
          order.push_back(w);
        }
      }
    }
    return order;
  }

  Vertex choose(const Graph& guest, Vertex v, const std::vector<bool>& keep,
                const std::vector<Vertex>& map, const std::vector<char>& taken, Rng& rng) {
    int need = 0;
    VertexSet placed;
    for (Vertex w : guest.neighbors(v)) {
      if (!keep[static_cast<std::size_t>(w)]) continue;
      ++need;
      if (map[static_cast<std::size_t>(w)] != kUnmapped) placed.push_back(map[static_cast<std::size_t>(w)]);
    }
    const bool leaf = need <= 1;
    const bool biased = bonus_ != nullptr && (*bonus_mask_)[static_cast<std::size_t>(v)];
    auto usable = [&](Vertex x) {
      if (forbidden_[static_cast<std::size_t>(x)] || taken[static_cast<std::size_t>(x)]) return false;
      if (free_degree(x) < need) return false;
      for (Vertex y : placed) {
        if (!view_.has_edge(x, y) || ledger_.is_used(x, y)) return false;
      }
      return true;
    };
    Vertex best = kUnmapped;
    double best_score = 0.0;
    auto consider = [&](Vertex x) {
      if (!usable(x)) return;
      const double slack = free_degree(x) - need;
      // Leaves take the tightest fit; branching vertices the roomiest host.
      double score = (leaf ? -slack : slack) + 0.75 * uniform01(rng);
      if (biased) score += (*bonus_)[static_cast<std::size_t>(x)];
      if (best == kUnmapped || score > best_score) {
        best = x;
        best_score = score;
      }
    };
    if (placed.empty()) {
      for (Vertex x = 0; x < view_.vertex_count(); ++x) consider(x);
    } else {
      Vertex anchor = placed.front();
      for (Vertex y : placed) {
        if (free_degree(y) < free_degree(anchor)) anchor = y;
      }
      for (Vertex x : view_.neighbors(anchor)) consider(x);
    }
    return best;
  }

  const Graph& view_;
  PackingLedger& ledger_;
  const std::vector<char>& forbidden_;
  std::vector<int> free_degree_;
  const std::vector<double>* bonus_ = nullptr;
  const std::vector<bool>* bonus_mask_ = nullptr;
};

}  // namespace detail

// Phase I for one layer: packs G_i - S_i - I_i for every i in `batch` into
// the layer with its zone removed, using only edges of `view` and
// committing them to `ledger`.
inline LayerPacking pack_layer(const Phase1View& view, const VertexSet& zone,
                               const InstanceSet& set, const std::vector<int>& batch,
                               const PipelineConstants& c, PackingLedger& ledger,
                               std::uint64_t seed, const LayerOptions& options = {}) {
  const int n = view.graph.vertex_count();
  const int l = c.clique_order;
  LayerPacking out;
  out.layer = view.layer;
  out.batch = batch;
  std::vector<char> forbidden(static_cast<std::size_t>(n), 0);
  for (Vertex z : zone) forbidden[static_cast<std::size_t>(z)] = 1;

  // Placement state per batch position.
  std::vector<std::vector<char>> taken(batch.size(), std::vector<char>(static_cast<std::size_t>(n), 0));
  for (std::size_t b = 0; b < batch.size(); ++b) {
    out.embeddings.emplace_back(batch[b], n, Phase::kPhase1);
  }
  std::vector<std::vector<bool>> core(batch.size());
  std::vector<std::vector<bool>> small(batch.size());  // eligible for cells
  bool any_small = false;
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const InstanceGraph& inst = set.instances[static_cast<std::size_t>(batch[b])];
    core[b] = inst.core_mask();
    small[b].assign(static_cast<std::size_t>(n), false);
    for (const auto& comp : connected_components(inst.graph, core[b])) {
      if (comp.size() < 2 || static_cast<int>(comp.size()) > l) continue;
      for (Vertex v : comp) small[b][static_cast<std::size_t>(v)] = true;
      any_small = true;
    }
  }

  // Clique route.
  if (options.use_cliques && any_small && !batch.empty()) {
    FactorOptions fopt;
    fopt.clique_order = l;
    fopt.epsilon = options.factor_epsilon;
    fopt.seed = derive_seed(seed, 0x666163ULL);
    const FactorCollection factors = clique_factor_collection(view.graph, fopt);
    out.factors = static_cast<int>(factors.factors.size());
    out.factor_min_coverage = factors.min_coverage_fraction;
    if (!factors.factors.empty()) {
      std::int64_t max_edges = 1;
      std::vector<std::int64_t> small_edges(batch.size(), 0);
      for (std::size_t b = 0; b < batch.size(); ++b) {
        const Graph& g = set.instances[static_cast<std::size_t>(batch[b])].graph;
        for (const Edge& e : g.edges()) {
          if (small[b][static_cast<std::size_t>(e.u)] && small[b][static_cast<std::size_t>(e.v)]) ++small_edges[b];
        }
        max_edges = std::max(max_edges, small_edges[b]);
      }
      std::vector<WeightVector> vectors;
      for (std::size_t b = 0; b < batch.size(); ++b) {
        vectors.push_back({{1.0, static_cast<double>(small_edges[b]) / max_edges}, static_cast<int>(b)});
      }
      BalanceOptions bopt;
      bopt.seed = derive_seed(seed, 0x617373ULL);
      bopt.throw_on_unmet = false;
      const PartitionResult assignment =
          balanced_partition(vectors, static_cast<int>(factors.factors.size()), bopt);

      Rng sigma_rng(derive_seed(seed, 0x7369676dULL));
      for (std::size_t s = 0; s < factors.factors.size(); ++s) {
        const CliqueFactor& factor = factors.factors[s];
        const auto& members = assignment.parts[s];
        if (members.empty()) continue;
        const int cells = static_cast<int>(factor.cells.size());
        // shares[m][j]: guest vertices of member m assigned to cell j.
        std::vector<std::vector<VertexSet>> shares(members.size());
        for (std::size_t m = 0; m < members.size(); ++m) {
          const auto b = static_cast<std::size_t>(members[m]);
          BalanceOptions sopt;
          sopt.seed = derive_seed(seed, 0x73706cULL, b);
          sopt.throw_on_unmet = false;
          const ComponentSplit split = split_components(
              set.instances[static_cast<std::size_t>(batch[b])], cells, sopt, small[b]);
          shares[m].resize(static_cast<std::size_t>(cells));
          for (int j = 0; j < cells; ++j) {
            // Components that overflow the cell are left for the direct route.
            int used = 0;
            for (int ci : split.cells[static_cast<std::size_t>(j)].components) {
              const auto& comp = split.components[static_cast<std::size_t>(ci)];
              if (used + static_cast<int>(comp.size()) > l) continue;
              used += static_cast<int>(comp.size());
              shares[m][static_cast<std::size_t>(j)].insert(shares[m][static_cast<std::size_t>(j)].end(), comp.begin(), comp.end());
            }
          }
        }
        for (int j = 0; j < cells; ++j) {
          std::vector<std::size_t> active;
          for (std::size_t m = 0; m < members.size(); ++m) {
            if (!shares[m][static_cast<std::size_t>(j)].empty()) active.push_back(m);
          }
          std::vector<Embedding> local;
          while (!active.empty()) {
            std::vector<Graph> guests;
            for (std::size_t m : active) {
              const auto b = static_cast<std::size_t>(members[m]);
              guests.push_back(induced_subgraph(set.instances[static_cast<std::size_t>(batch[b])].graph,
                                                shares[m][static_cast<std::size_t>(j)]));
            }
            CellPackOptions copt = options.cell;
            copt.seed = derive_seed(seed, 0x63656cULL, s * 100003 + static_cast<std::size_t>(j));
            try {
              local = pack_into_clique(l, guests, copt);
              break;
            } catch (const CellPackingFailed&) {
              // Drop the guest with most edges to the direct route.
              std::size_t worst = 0;
              for (std::size_t a = 1; a < guests.size(); ++a) {
                if (guests[a].edge_count() > guests[worst].edge_count()) worst = a;
              }
              active.erase(active.begin() + static_cast<std::ptrdiff_t>(worst));
            }
          }
          if (active.empty()) continue;
          // Random relabelling of the cell's clique.
          std::vector<Vertex> sigma(factor.cells[static_cast<std::size_t>(j)]);
          shuffle(sigma, sigma_rng);
          for (std::size_t a = 0; a < active.size(); ++a) {
            const std::size_t m = active[a];
            const auto b = static_cast<std::size_t>(members[m]);
            const Graph& g = set.instances[static_cast<std::size_t>(batch[b])].graph;
            const VertexSet& share = shares[m][static_cast<std::size_t>(j)];
            Embedding& f = out.embeddings[b];
            for (std::size_t q = 0; q < share.size(); ++q) {
              const Vertex host = sigma[static_cast<std::size_t>(local[a].map[q])];
              f.map[static_cast<std::size_t>(share[q])] = host;
              taken[b][static_cast<std::size_t>(host)] = 1;
            }
            std::vector<Edge> edges;
            for (Vertex v : share) {
              for (Vertex w : g.neighbors(v)) {
                if (v < w && f.mapped(w) && small[b][static_cast<std::size_t>(w)] &&
                    std::binary_search(share.begin(), share.end(), w)) {
                  edges.emplace_back(f(v), f(w));
                }
              }
            }
            ledger.commit_edges(edges);
            out.clique_vertices += static_cast<std::int64_t>(share.size());
            out.clique_edges += static_cast<std::int64_t>(edges.size());
          }
        }
      }
    }
  }

  // Direct route for everything else, busiest instances first.
  detail::DirectEmbedder direct(view.graph, ledger, forbidden);
  std::vector<std::size_t> order(batch.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return set.instances[static_cast<std::size_t>(batch[a])].graph.edge_count() >
           set.instances[static_cast<std::size_t>(batch[b])].graph.edge_count();
  });
  for (std::size_t b : order) {
    const InstanceGraph& inst = set.instances[static_cast<std::size_t>(batch[b])];
    Embedding& f = out.embeddings[b];
    std::vector<bool> rest = core[b];
    for (Vertex v = 0; v < n; ++v) {
      if (f.mapped(v)) rest[static_cast<std::size_t>(v)] = false;
    }
    auto comps = connected_components(inst.graph, rest);
    std::stable_sort(comps.begin(), comps.end(),
                     [](const auto& x, const auto& y) { return x.size() > y.size(); });
    Rng rng(derive_seed(seed, 0x646972ULL, static_cast<std::uint64_t>(batch[b])));
    std::vector<Edge> committed;
    VertexSet singles;
    for (const auto& comp : comps) {
      if (comp.size() == 1) {
        singles.push_back(comp.front());
        continue;
      }
      if (!direct.embed_component(inst.graph, comp, rest, f.map, taken[b], rng,
                                  options.component_restarts, committed)) {
        throw LayerPackingFailed(view.layer, batch[b],
                                 "no room for a component of " + std::to_string(comp.size()) +
                                     " vertices");
      }
      out.residual_vertices += static_cast<std::int64_t>(comp.size());
    }
    out.residual_edges += static_cast<std::int64_t>(committed.size());
    // Isolated core vertices go to uniformly random free non-zone vertices.
    VertexSet free_hosts;
    for (Vertex x = 0; x < n; ++x) {
      if (!forbidden[static_cast<std::size_t>(x)] && !taken[b][static_cast<std::size_t>(x)]) free_hosts.push_back(x);
    }
    if (free_hosts.size() < singles.size()) {
      throw LayerPackingFailed(view.layer, batch[b], "not enough free vertices outside the zone");
    }
    shuffle(free_hosts, rng);
    for (std::size_t q = 0; q < singles.size(); ++q) {
      f.map[static_cast<std::size_t>(singles[q])] = free_hosts[q];
      taken[b][static_cast<std::size_t>(free_hosts[q])] = 1;
    }
    out.residual_vertices += static_cast<std::int64_t>(singles.size());
  }

  out.spread = phase1_spread(n, zone, set, batch, out.embeddings);
  set_spread_caps(out.spread, c, static_cast<int>(batch.size()), options.cap_slack);
  if (options.enforce_caps) {
    if (out.spread.max_a > out.spread.cap_a) throw SpreadViolation("A", out.spread.max_a, out.spread.cap_a);
    if (out.spread.max_b > out.spread.cap_b) throw SpreadViolation("B", out.spread.max_b, out.spread.cap_b);
    if (out.spread.max_pair > out.spread.cap_pair) {
      throw SpreadViolation("pair", out.spread.max_pair, out.spread.cap_pair);
    }
  }
  return out;
}

}  // namespace graphpack

#endif  // GRAPHPACK_PACK_LAYER_HPP_
