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

#ifndef GRAPHPACK_VERIFY_HPP_
#define GRAPHPACK_VERIFY_HPP_

// Packing verification kept deliberately separate from the pipeline: no
// ledger, no views, no shared counters.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "graphpack/embedding.hpp"
#include "graphpack/graph.hpp"
#include "graphpack/slicer.hpp"

namespace graphpack {

struct Finding {
  std::string kind;  // totality, injectivity, host, overlap, phase
  int instance = -1;
  int other = -1;
  std::string detail;
};

// Optional structure for phase discipline and spread recomputation.
struct PhasePlan {
  const SlicedHost* host = nullptr;
  std::vector<int> layer;                 // per instance, 1..M
  std::vector<VertexSet> separator;       // S_i
  std::vector<VertexSet> two_independent; // I_i
  std::vector<VertexSet> anchors_s;       // A_i
  std::vector<VertexSet> anchors_i;       // B_i
};

struct RecomputedSpread {
  int layer = 0;
  int max_a = 0;
  int max_b = 0;
  int max_pair = 0;
};

struct VerificationReport {
  bool valid = false;
  std::vector<Finding> findings;
  std::int64_t guest_edges = 0;
  double density = 0.0;
  std::int64_t phase_checked_edges = 0;
  std::vector<RecomputedSpread> spreads;  // per layer, when a plan is given
  int completion_max_vertex = 0;          // Claim-10 style counters
  int completion_max_pair = 0;

  std::int64_t count(const std::string& kind) const {
    return std::count_if(findings.begin(), findings.end(),
                         [&](const Finding& f) { return f.kind == kind; });
  }
};

namespace detail {

inline std::uint64_t edge_key(Vertex a, Vertex b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

// Phase that placed guest edge {a, b}: any end in I is Phase III, else any
// end in S is Phase II, else Phase I.
inline int edge_phase(const std::set<Vertex>& sep, const std::set<Vertex>& ind, Vertex a, Vertex b) {
  if (ind.count(a) || ind.count(b)) return 3;
  if (sep.count(a) || sep.count(b)) return 2;
  return 1;
}

inline void recompute_spreads(const PhasePlan& plan, std::span<const Graph> guests,
                              std::span<const Embedding> embeddings, VerificationReport& report) {
  const int n = plan.host->n();
  const int layers = plan.host->layer_count();
  for (int k = 1; k <= layers; ++k) {
    std::set<Vertex> zone(plan.host->zones[static_cast<std::size_t>(k - 1)].begin(),
                          plan.host->zones[static_cast<std::size_t>(k - 1)].end());
    std::map<Vertex, int> a_count;
    std::map<Vertex, int> b_count;
    std::map<std::pair<Vertex, Vertex>, int> pair_count;
    for (std::size_t i = 0; i < guests.size(); ++i) {
      if (plan.layer[i] != k) continue;
      const std::set<Vertex> sep(plan.separator[i].begin(), plan.separator[i].end());
      const std::set<Vertex> ind(plan.two_independent[i].begin(), plan.two_independent[i].end());
      // Phase I image: the core part of the final map.
      std::set<Vertex> core_image;
      for (Vertex v = 0; v < guests[i].vertex_count(); ++v) {
        if (!sep.count(v) && !ind.count(v)) core_image.insert(embeddings[i].map[static_cast<std::size_t>(v)]);
      }
      for (Vertex v : plan.anchors_s[i]) ++a_count[embeddings[i].map[static_cast<std::size_t>(v)]];
      std::set<Vertex> b_set;
      for (Vertex v : plan.anchors_i[i]) b_set.insert(embeddings[i].map[static_cast<std::size_t>(v)]);
      for (Vertex x = 0; x < n; ++x) {
        if (!zone.count(x) && !core_image.count(x)) b_set.insert(x);
      }
      for (Vertex x : b_set) ++b_count[x];
      for (auto it = b_set.begin(); it != b_set.end(); ++it) {
        for (auto jt = std::next(it); jt != b_set.end(); ++jt) ++pair_count[{*it, *jt}];
      }
    }
    RecomputedSpread s;
    s.layer = k;
    for (const auto& [x, c] : a_count) s.max_a = std::max(s.max_a, c);
    for (const auto& [x, c] : b_count) s.max_b = std::max(s.max_b, c);
    for (const auto& [p, c] : pair_count) s.max_pair = std::max(s.max_pair, c);
    report.spreads.push_back(s);
  }
  // Completion counters: x in g_i(N(I_i)) or outside Im g_i.
  std::vector<std::vector<char>> member(guests.size(), std::vector<char>(static_cast<std::size_t>(n), 1));
  for (std::size_t i = 0; i < guests.size(); ++i) {
    const std::set<Vertex> ind(plan.two_independent[i].begin(), plan.two_independent[i].end());
    for (Vertex v = 0; v < guests[i].vertex_count(); ++v) {
      if (!ind.count(v)) member[i][static_cast<std::size_t>(embeddings[i].map[static_cast<std::size_t>(v)])] = 0;
    }
    for (Vertex v : plan.two_independent[i]) {
      for (Vertex w : guests[i].neighbors(v)) {
        member[i][static_cast<std::size_t>(embeddings[i].map[static_cast<std::size_t>(w)])] = 1;
      }
    }
  }
  for (Vertex x = 0; x < n; ++x) {
    int c = 0;
    for (const auto& m : member) c += m[static_cast<std::size_t>(x)];
    report.completion_max_vertex = std::max(report.completion_max_vertex, c);
  }
  if (n <= 400) {
    for (Vertex x = 0; x < n; ++x) {
      for (Vertex y = x + 1; y < n; ++y) {
        int c = 0;
        for (const auto& m : member) c += m[static_cast<std::size_t>(x)] & m[static_cast<std::size_t>(y)];
        report.completion_max_pair = std::max(report.completion_max_pair, c);
      }
    }
  }
}

}  // namespace detail

// Checks totality, injectivity, homomorphism into `host_edges`, pairwise
// edge-disjointness and, with a plan, phase discipline and spreads.
// Empty `host_edges` means K_{host_n}.
inline VerificationReport verify_packing(int host_n, const std::vector<Edge>& host_edges,
                                         std::span<const Graph> guests,
                                         std::span<const Embedding> embeddings,
                                         const PhasePlan* plan = nullptr) {
  VerificationReport report;
  std::unordered_set<std::uint64_t> host;
  for (const Edge& e : host_edges) host.insert(detail::edge_key(e.u, e.v));
  const bool complete = host_edges.empty();
  std::unordered_map<std::uint64_t, int> owner;
  bool structurally_total = true;
  if (guests.size() != embeddings.size()) {
    report.findings.push_back({"totality", -1, -1,
                               std::to_string(guests.size()) + " guests but " +
                                   std::to_string(embeddings.size()) + " embeddings"});
    return report;
  }
  for (std::size_t i = 0; i < guests.size(); ++i) {
    const Graph& guest = guests[i];
    const std::vector<Vertex>& map = embeddings[i].map;
    const int id = static_cast<int>(i);
    if (static_cast<int>(map.size()) != guest.vertex_count()) {
      report.findings.push_back({"totality", id, -1, "map size differs from guest order"});
      structurally_total = false;
      continue;
    }
    std::unordered_map<Vertex, Vertex> preimage;
    bool total = true;
    for (Vertex v = 0; v < guest.vertex_count(); ++v) {
      const Vertex x = map[static_cast<std::size_t>(v)];
      if (x < 0 || x >= host_n) {
        report.findings.push_back({"totality", id, -1, "vertex " + std::to_string(v) + " unmapped"});
        total = false;
        continue;
      }
      auto [it, fresh] = preimage.emplace(x, v);
      if (!fresh) {
        report.findings.push_back({"injectivity", id, -1,
                                   "vertices " + std::to_string(it->second) + " and " +
                                       std::to_string(v) + " share host vertex " + std::to_string(x)});
      }
    }
    if (!total) {
      structurally_total = false;
      continue;
    }
    for (const Edge& e : guest.edges()) {
      const Vertex a = map[static_cast<std::size_t>(e.u)];
      const Vertex b = map[static_cast<std::size_t>(e.v)];
      ++report.guest_edges;
      if (a == b) continue;  // reported as injectivity
      const std::uint64_t key = detail::edge_key(a, b);
      if (!complete && !host.count(key)) {
        report.findings.push_back({"host", id, -1,
                                   "image {" + std::to_string(a) + "," + std::to_string(b) +
                                       "} is not a host edge"});
      }
      auto [it, fresh] = owner.emplace(key, id);
      if (!fresh) {
        report.findings.push_back({"overlap", it->second, id,
                                   "host edge {" + std::to_string(std::min(a, b)) + "," +
                                       std::to_string(std::max(a, b)) + "} used twice"});
      }
    }
  }
  if (plan != nullptr && plan->host != nullptr && structurally_total) {
    for (std::size_t i = 0; i < guests.size(); ++i) {
      const int k = plan->layer[i];
      const std::set<Vertex> sep(plan->separator[i].begin(), plan->separator[i].end());
      const std::set<Vertex> ind(plan->two_independent[i].begin(), plan->two_independent[i].end());
      const VertexSet& zone_list = plan->host->zones[static_cast<std::size_t>(k - 1)];
      const std::set<Vertex> zone(zone_list.begin(), zone_list.end());
      for (const Edge& e : guests[i].edges()) {
        const Vertex a = embeddings[i].map[static_cast<std::size_t>(e.u)];
        const Vertex b = embeddings[i].map[static_cast<std::size_t>(e.v)];
        if (a == b) continue;
        const int phase = detail::edge_phase(sep, ind, e.u, e.v);
        const int actual = plan->host->edge_layer(a, b);
        const bool zone_incident = zone.count(a) || zone.count(b);
        bool ok = false;
        if (phase == 1) ok = actual == k && !zone_incident;
        if (phase == 2) ok = actual == k && zone_incident;
        if (phase == 3) ok = actual == 0;
        ++report.phase_checked_edges;
        if (!ok) {
          report.findings.push_back({"phase", static_cast<int>(i), -1,
                                     "phase " + std::to_string(phase) + " edge {" + std::to_string(a) +
                                         "," + std::to_string(b) + "} lies in layer " +
                                         std::to_string(actual)});
        }
      }
    }
    detail::recompute_spreads(*plan, guests, embeddings, report);
  }
  const double pairs = static_cast<double>(host_n) * (host_n - 1) / 2.0;
  report.density = pairs > 0 ? static_cast<double>(report.guest_edges) / pairs : 0.0;
  report.valid = report.findings.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Brute-force oracle for tiny hosts.

enum class BruteForceStatus { kPacking, kInfeasible, kBudgetExhausted };

inline const char* status_name(BruteForceStatus s) {
  switch (s) {
    case BruteForceStatus::kPacking:
      return "packing";
    case BruteForceStatus::kInfeasible:
      return "infeasible";
    case BruteForceStatus::kBudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

struct BruteForceResult {
  BruteForceStatus status = BruteForceStatus::kInfeasible;
  std::vector<Embedding> embeddings;  // in input guest order when found
  std::int64_t nodes = 0;
};

namespace detail {

class BruteForce {
 public:
  BruteForce(std::span<const Graph> guests, int host_n, std::int64_t budget)
      : guests_(guests), n_(host_n), budget_(budget),
        used_(static_cast<std::size_t>(host_n) * static_cast<std::size_t>(host_n), 0) {
    order_.resize(guests.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return guests[a].edge_count() > guests[b].edge_count();
    });
    for (std::size_t g : order_) sequences_.push_back(placement(guests[g]));
    maps_.resize(guests.size());
  }

  BruteForceResult run() {
    BruteForceResult result;
    for (const Graph& g : guests_) {
      if (g.vertex_count() > n_) return result;
    }
    std::int64_t total = 0;
    for (const Graph& g : guests_) total += g.edge_count();
    if (total > static_cast<std::int64_t>(n_) * (n_ - 1) / 2) return result;
    const bool found = place_guest(0);
    result.nodes = nodes_;
    if (found) {
      result.status = BruteForceStatus::kPacking;
      for (std::size_t g = 0; g < guests_.size(); ++g) {
        Embedding e(static_cast<int>(g), guests_[g].vertex_count());
        e.map = maps_[g];
        result.embeddings.push_back(std::move(e));
      }
    } else {
      result.status = exhausted_ ? BruteForceStatus::kBudgetExhausted : BruteForceStatus::kInfeasible;
    }
    return result;
  }

 private:
  // Non-isolated vertices in BFS order, each after a neighbour when possible.
  static VertexSet placement(const Graph& g) {
    VertexSet seq;
    std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex root = 0; root < g.vertex_count(); ++root) {
      if (seen[static_cast<std::size_t>(root)] || g.degree(root) == 0) continue;
      seen[static_cast<std::size_t>(root)] = 1;
      std::size_t head = seq.size();
      seq.push_back(root);
      while (head < seq.size()) {
        const Vertex v = seq[head++];
        for (Vertex w : g.neighbors(v)) {
          if (!seen[static_cast<std::size_t>(w)]) {
            seen[static_cast<std::size_t>(w)] = 1;
            seq.push_back(w);
          }
        }
      }
    }
    return seq;
  }

  void set_used(Vertex a, Vertex b, char value) {
    used_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)] = value;
    used_[static_cast<std::size_t>(b) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(a)] = value;
  }

  bool is_used(Vertex a, Vertex b) const {
    return used_[static_cast<std::size_t>(a) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(b)] != 0;
  }

  // Smallest image edge of a placed guest, for ordering identical copies.
  std::uint64_t min_image_edge(std::size_t g) const {
    std::uint64_t best = ~std::uint64_t{0};
    for (const Edge& e : guests_[g].edges()) {
      best = std::min(best, edge_key(maps_[g][static_cast<std::size_t>(e.u)], maps_[g][static_cast<std::size_t>(e.v)]));
    }
    return best;
  }

  bool place_guest(std::size_t slot) {
    if (slot == order_.size()) return true;
    const std::size_t g = order_[slot];
    maps_[g].assign(static_cast<std::size_t>(guests_[g].vertex_count()), kUnmapped);
    taken_.assign(static_cast<std::size_t>(n_), 0);
    const bool ok = place_vertex(slot, 0);
    return ok;
  }

  bool finish_guest(std::size_t slot) {
    const std::size_t g = order_[slot];
    // Identical consecutive guests are taken in increasing min image edge.
    if (slot > 0) {
      const std::size_t prev = order_[slot - 1];
      if (guests_[prev] == guests_[g] && guests_[g].edge_count() > 0 &&
          min_image_edge(prev) > min_image_edge(g)) {
        return false;
      }
    }
    // Isolated vertices take any free host vertices.
    std::vector<char> taken(static_cast<std::size_t>(n_), 0);
    for (Vertex x : maps_[g]) {
      if (x != kUnmapped) taken[static_cast<std::size_t>(x)] = 1;
    }
    Vertex next = 0;
    std::vector<Vertex> filled;
    for (Vertex v = 0; v < guests_[g].vertex_count(); ++v) {
      if (maps_[g][static_cast<std::size_t>(v)] != kUnmapped) continue;
      while (taken[static_cast<std::size_t>(next)]) ++next;
      maps_[g][static_cast<std::size_t>(v)] = next;
      taken[static_cast<std::size_t>(next)] = 1;
      filled.push_back(v);
    }
    const std::vector<char> saved_taken = taken_;
    if (place_guest(slot + 1)) return true;
    taken_ = saved_taken;
    for (Vertex v : filled) maps_[g][static_cast<std::size_t>(v)] = kUnmapped;
    return false;
  }

  bool place_vertex(std::size_t slot, std::size_t depth) {
    if (exhausted_) return false;
    if (++nodes_ > budget_) {
      exhausted_ = true;
      return false;
    }
    const std::size_t g = order_[slot];
    const VertexSet& seq = sequences_[slot];
    if (depth == seq.size()) return finish_guest(slot);
    const Graph& guest = guests_[g];
    const Vertex v = seq[depth];
    // The first guest is fixed up to host symmetry.
    if (slot == 0) {
      const Vertex x = static_cast<Vertex>(depth);
      return try_vertex(slot, depth, v, x);
    }
    for (Vertex x = 0; x < n_; ++x) {
      if (taken_[static_cast<std::size_t>(x)]) continue;
      bool ok = true;
      for (Vertex w : guest.neighbors(v)) {
        const Vertex y = maps_[g][static_cast<std::size_t>(w)];
        if (y != kUnmapped && is_used(x, y)) {
          ok = false;
          break;
        }
      }
      if (ok && try_vertex(slot, depth, v, x)) return true;
      if (exhausted_) return false;
    }
    return false;
  }

  bool try_vertex(std::size_t slot, std::size_t depth, Vertex v, Vertex x) {
    const std::size_t g = order_[slot];
    std::vector<Vertex> placed;
    for (Vertex w : guests_[g].neighbors(v)) {
      const Vertex y = maps_[g][static_cast<std::size_t>(w)];
      if (y != kUnmapped) placed.push_back(y);
    }
    for (Vertex y : placed) set_used(x, y, 1);
    maps_[g][static_cast<std::size_t>(v)] = x;
    taken_[static_cast<std::size_t>(x)] = 1;
    if (place_vertex(slot, depth + 1)) return true;
    taken_[static_cast<std::size_t>(x)] = 0;
    maps_[g][static_cast<std::size_t>(v)] = kUnmapped;
    for (Vertex y : placed) set_used(x, y, 0);
    return false;
  }

  std::span<const Graph> guests_;
  int n_;
  std::int64_t budget_;
  std::vector<char> used_;
  std::vector<std::size_t> order_;
  std::vector<VertexSet> sequences_;
  std::vector<std::vector<Vertex>> maps_;
  std::vector<char> taken_;
  std::int64_t nodes_ = 0;
  bool exhausted_ = false;
};

}  // namespace detail

// Exhaustive backtracking; `budget` bounds search nodes.
inline BruteForceResult brute_force_pack(std::span<const Graph> guests, int host_n,
                                         std::int64_t budget = 10'000'000) {
  if (host_n > 8) throw std::invalid_argument("brute force is limited to hosts of order <= 8");
  return detail::BruteForce(guests, host_n, budget).run();
}

// ---------------------------------------------------------------------------

struct DivisibilityResult {
  bool pass = true;
  std::vector<std::string> reasons;
};

// Necessary conditions for a perfect packing of copies of h into K_n.
inline DivisibilityResult divisibility_check(const Graph& h, int n) {
  DivisibilityResult r;
  if (h.edge_count() == 0) throw std::invalid_argument("divisibility check needs an edge");
  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
  if (pairs % h.edge_count() != 0) {
    r.pass = false;
    r.reasons.push_back("e(h) = " + std::to_string(h.edge_count()) + " does not divide " +
                        std::to_string(pairs));
  }
  int g = 0;
  for (Vertex v = 0; v < h.vertex_count(); ++v) {
    if (h.degree(v) > 0) g = std::gcd(g, h.degree(v));
  }
  if ((n - 1) % g != 0) {
    r.pass = false;
    r.reasons.push_back("degree gcd " + std::to_string(g) + " does not divide " + std::to_string(n - 1));
  }
  return r;
}

}  // namespace graphpack

#endif  // GRAPHPACK_VERIFY_HPP_
