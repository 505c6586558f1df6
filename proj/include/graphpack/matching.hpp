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

#ifndef GRAPHPACK_MATCHING_HPP_
#define GRAPHPACK_MATCHING_HPP_

#include <algorithm>
#include <limits>
#include <queue>
#include <vector>

namespace graphpack {

inline constexpr int kFree = -1;

// Bipartite adjacency: left vertex i is adjacent to right vertices adj[i].
struct BipartiteGraph {
  int left = 0;
  int right = 0;
  std::vector<std::vector<int>> adj;

  std::size_t edge_count() const {
    std::size_t count = 0;
    for (const auto& list : adj) count += list.size();
    return count;
  }
};

struct Matching {
  std::vector<int> left_to_right;  // kFree when unmatched
  std::vector<int> right_to_left;
  int size = 0;

  bool perfect(const BipartiteGraph& g) const { return g.left == g.right && size == g.left; }
};

// Hopcroft-Karp. Deterministic given adjacency order.
inline Matching max_matching(const BipartiteGraph& g) {
  Matching m;
  m.left_to_right.assign(static_cast<std::size_t>(g.left), kFree);
  m.right_to_left.assign(static_cast<std::size_t>(g.right), kFree);
  constexpr int kInf = std::numeric_limits<int>::max();
  std::vector<int> dist(static_cast<std::size_t>(g.left));
  std::vector<std::size_t> it(static_cast<std::size_t>(g.left));

  auto bfs = [&]() {
    std::queue<int> q;
    bool reachable = false;
    for (int u = 0; u < g.left; ++u) {
      if (m.left_to_right[static_cast<std::size_t>(u)] == kFree) {
        dist[static_cast<std::size_t>(u)] = 0;
        q.push(u);
      } else {
        dist[static_cast<std::size_t>(u)] = kInf;
      }
    }
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (int v : g.adj[static_cast<std::size_t>(u)]) {
        const int w = m.right_to_left[static_cast<std::size_t>(v)];
        if (w == kFree) {
          reachable = true;
        } else if (dist[static_cast<std::size_t>(w)] == kInf) {
          dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(u)] + 1;
          q.push(w);
        }
      }
    }
    return reachable;
  };

  // Iterative DFS along the BFS layering.
  auto augment = [&](int root) {
    std::vector<int> stack{root};
    while (!stack.empty()) {
      const int u = stack.back();
      auto& pos = it[static_cast<std::size_t>(u)];
      const auto& list = g.adj[static_cast<std::size_t>(u)];
      bool advanced = false;
      while (pos < list.size()) {
        const int v = list[pos];
        const int w = m.right_to_left[static_cast<std::size_t>(v)];
        if (w == kFree) {
          // Flip the path recorded on the stack.
          int right = v;
          for (auto s = stack.rbegin(); s != stack.rend(); ++s) {
            const int left = *s;
            const int previous = m.left_to_right[static_cast<std::size_t>(left)];
            m.left_to_right[static_cast<std::size_t>(left)] = right;
            m.right_to_left[static_cast<std::size_t>(right)] = left;
            right = previous;
          }
          return true;
        }
        if (dist[static_cast<std::size_t>(w)] == dist[static_cast<std::size_t>(u)] + 1) {
          ++pos;
          stack.push_back(w);
          advanced = true;
          break;
        }
        ++pos;
      }
      if (!advanced) {
        dist[static_cast<std::size_t>(u)] = kInf;
        stack.pop_back();
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (int u = 0; u < g.left; ++u) {
      if (m.left_to_right[static_cast<std::size_t>(u)] == kFree && augment(u)) ++m.size;
    }
  }
  return m;
}

struct MatchingCollection {
  std::vector<Matching> matchings;  // each perfect, pairwise edge-disjoint
  int requested = 0;
  bool shortfall = false;
};

// Extracts perfect matchings one at a time, deleting each one's edges,
// until `count` are found or none remains.
inline MatchingCollection edge_disjoint_perfect_matchings(BipartiteGraph g, int count) {
  MatchingCollection out;
  out.requested = count;
  if (g.left != g.right) {
    out.shortfall = count > 0;
    return out;
  }
  while (static_cast<int>(out.matchings.size()) < count) {
    Matching m = max_matching(g);
    if (!m.perfect(g)) break;
    for (int u = 0; u < g.left; ++u) {
      auto& list = g.adj[static_cast<std::size_t>(u)];
      list.erase(std::find(list.begin(), list.end(), m.left_to_right[static_cast<std::size_t>(u)]));
    }
    out.matchings.push_back(std::move(m));
    if (g.left == 0) break;  // the empty matching cannot be repeated meaningfully
  }
  out.shortfall = static_cast<int>(out.matchings.size()) < count;
  return out;
}

}  // namespace graphpack

#endif  // GRAPHPACK_MATCHING_HPP_
