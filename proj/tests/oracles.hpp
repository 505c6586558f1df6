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

#ifndef GRAPHPACK_TESTS_ORACLES_HPP_
#define GRAPHPACK_TESTS_ORACLES_HPP_

// Slow, simple reference implementations used only by tests. None of them
// shares code with the library beyond the Graph container.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "graphpack/graph.hpp"
#include "graphpack/matching.hpp"

namespace graphpack::oracle {

// Dense symmetric adjacency matrix.
inline std::vector<std::vector<char>> adjacency_matrix(const Graph& g) {
  const auto n = static_cast<std::size_t>(g.vertex_count());
  std::vector<std::vector<char>> a(n, std::vector<char>(n, 0));
  for (const Edge& e : g.edges()) {
    a[static_cast<std::size_t>(e.u)][static_cast<std::size_t>(e.v)] = 1;
    a[static_cast<std::size_t>(e.v)][static_cast<std::size_t>(e.u)] = 1;
  }
  return a;
}

// Erdos-Renyi graph from std::mt19937_64, independent of the library RNG.
inline Graph gnp(int n, double p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) {
      if (coin(rng)) edges.emplace_back(u, v);
    }
  }
  return Graph(n, edges);
}

// Component sizes through union-find, sorted descending.
inline std::vector<int> component_sizes(const Graph& g, const std::vector<bool>& removed = {}) {
  const int n = g.vertex_count();
  std::vector<int> parent(static_cast<std::size_t>(n));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  };
  auto gone = [&](Vertex v) { return !removed.empty() && removed[static_cast<std::size_t>(v)]; };
  for (const Edge& e : g.edges()) {
    if (gone(e.u) || gone(e.v)) continue;
    parent[static_cast<std::size_t>(find(e.u))] = find(e.v);
  }
  std::vector<int> count(static_cast<std::size_t>(n), 0);
  for (Vertex v = 0; v < n; ++v) {
    if (!gone(v)) ++count[static_cast<std::size_t>(find(v))];
  }
  std::vector<int> sizes;
  for (int c : count) {
    if (c > 0) sizes.push_back(c);
  }
  std::sort(sizes.rbegin(), sizes.rend());
  return sizes;
}

// BFS distance between two vertices, or -1.
inline int distance(const Graph& g, Vertex a, Vertex b) {
  std::vector<int> dist(static_cast<std::size_t>(g.vertex_count()), -1);
  std::queue<Vertex> q;
  dist[static_cast<std::size_t>(a)] = 0;
  q.push(a);
  while (!q.empty()) {
    const Vertex v = q.front();
    q.pop();
    if (v == b) return dist[static_cast<std::size_t>(v)];
    for (Vertex w : g.neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        q.push(w);
      }
    }
  }
  return -1;
}

// Pairwise distance >= 3.
inline bool two_independent(const Graph& g, const std::vector<Vertex>& set) {
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const int d = distance(g, set[i], set[j]);
      if (d >= 0 && d < 3) return false;
    }
  }
  return true;
}

// Max over parts and coordinates of |part sum - total / m|.
inline double discrepancy(const std::vector<std::vector<double>>& vectors,
                          const std::vector<int>& part_of, int m) {
  const std::size_t dim = vectors.empty() ? 0 : vectors.front().size();
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(m), std::vector<double>(dim, 0.0));
  std::vector<double> total(dim, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t c = 0; c < dim; ++c) {
      sums[static_cast<std::size_t>(part_of[i])][c] += vectors[i][c];
      total[c] += vectors[i][c];
    }
  }
  double worst = 0.0;
  for (const auto& s : sums) {
    for (std::size_t c = 0; c < dim; ++c) worst = std::max(worst, std::abs(s[c] - total[c] / m));
  }
  return worst;
}

// Minimum discrepancy over all m^|A| assignments.
inline double exhaustive_partition_optimum(const std::vector<std::vector<double>>& vectors, int m) {
  std::vector<int> part_of(vectors.size(), 0);
  double best = discrepancy(vectors, part_of, m);
  while (true) {
    std::size_t i = 0;
    while (i < part_of.size() && part_of[i] == m - 1) part_of[i++] = 0;
    if (i == part_of.size()) break;
    ++part_of[i];
    best = std::min(best, discrepancy(vectors, part_of, m));
  }
  return best;
}

// Kuhn's augmenting-path matcher, O(VE).
inline int matching_size(const BipartiteGraph& g) {
  std::vector<int> owner(static_cast<std::size_t>(g.right), -1);
  std::vector<char> seen;
  std::function<bool(int)> augment = [&](int u) {
    for (int r : g.adj[static_cast<std::size_t>(u)]) {
      if (seen[static_cast<std::size_t>(r)]) continue;
      seen[static_cast<std::size_t>(r)] = 1;
      if (owner[static_cast<std::size_t>(r)] < 0 || augment(owner[static_cast<std::size_t>(r)])) {
        owner[static_cast<std::size_t>(r)] = u;
        return true;
      }
    }
    return false;
  };
  int size = 0;
  for (int u = 0; u < g.left; ++u) {
    seen.assign(static_cast<std::size_t>(g.right), 0);
    if (augment(u)) ++size;
  }
  return size;
}

// Circle-method 1-factorization of K_n (n even): n-1 perfect matchings.
inline std::vector<std::vector<Edge>> round_robin(int n) {
  std::vector<std::vector<Edge>> rounds;
  const int m = n - 1;
  for (int r = 0; r < m; ++r) {
    std::vector<Edge> round{Edge(m, r)};
    for (int k = 1; k <= (n - 2) / 2; ++k) round.emplace_back((r + k) % m, (r - k + m) % m);
    rounds.push_back(round);
  }
  return rounds;
}

// Number of triangles through each edge of g, in g.edges() order.
inline std::vector<int> triangles_per_edge(const Graph& g) {
  const auto a = adjacency_matrix(g);
  std::vector<int> out;
  for (const Edge& e : g.edges()) {
    int c = 0;
    for (std::size_t w = 0; w < a.size(); ++w) {
      c += a[static_cast<std::size_t>(e.u)][w] && a[static_cast<std::size_t>(e.v)][w];
    }
    out.push_back(c);
  }
  return out;
}

// Number of l-cliques by plain recursion over the adjacency matrix.
inline std::int64_t clique_count(const Graph& g, int l) {
  const auto a = adjacency_matrix(g);
  const int n = g.vertex_count();
  std::vector<int> chosen;
  std::function<std::int64_t(int)> rec = [&](int from) -> std::int64_t {
    if (static_cast<int>(chosen.size()) == l) return 1;
    std::int64_t total = 0;
    for (int v = from; v < n; ++v) {
      bool ok = true;
      for (int c : chosen) ok = ok && a[static_cast<std::size_t>(c)][static_cast<std::size_t>(v)];
      if (!ok) continue;
      chosen.push_back(v);
      total += rec(v + 1);
      chosen.pop_back();
    }
    return total;
  };
  return rec(0);
}

// Sorted set of host edges covered by all embeddings; returns false on any
// repeated edge.
inline bool edge_disjoint(const std::vector<std::vector<Edge>>& images) {
  std::set<std::pair<int, int>> seen;
  for (const auto& image : images) {
    for (const Edge& e : image) {
      if (!seen.insert({std::min(e.u, e.v), std::max(e.u, e.v)}).second) return false;
    }
  }
  return true;
}

// Whether the guests pack into K_n: every guest tries all n! vertex
// permutations, backtracking on shared host edges.
inline bool packable(const std::vector<Graph>& guests, int n) {
  std::vector<std::vector<char>> used(static_cast<std::size_t>(n), std::vector<char>(static_cast<std::size_t>(n), 0));
  std::function<bool(std::size_t)> place = [&](std::size_t g) -> bool {
    if (g == guests.size()) return true;
    if (guests[g].vertex_count() > n) return false;
    std::vector<int> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      bool clash = false;
      for (const Edge& e : guests[g].edges()) {
        if (used[static_cast<std::size_t>(perm[static_cast<std::size_t>(e.u)])][static_cast<std::size_t>(perm[static_cast<std::size_t>(e.v)])]) {
          clash = true;
          break;
        }
      }
      if (clash) continue;
      auto mark = [&](char value) {
        for (const Edge& e : guests[g].edges()) {
          const auto a = static_cast<std::size_t>(perm[static_cast<std::size_t>(e.u)]);
          const auto b = static_cast<std::size_t>(perm[static_cast<std::size_t>(e.v)]);
          used[a][b] = used[b][a] = value;
        }
      };
      mark(1);
      if (place(g + 1)) return true;
      mark(0);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
  };
  return place(0);
}

}  // namespace graphpack::oracle

#endif  // GRAPHPACK_TESTS_ORACLES_HPP_
