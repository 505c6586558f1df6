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

#ifndef GRAPHPACK_GRAPH_HPP_
#define GRAPHPACK_GRAPH_HPP_

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace graphpack {

using Vertex = int;
using VertexSet = std::vector<Vertex>;

// Unordered vertex pair, stored with u < v.
struct Edge {
  Vertex u = 0;
  Vertex v = 0;

  Edge() = default;
  Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {}

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Index of the pair {u, v} (u != v) in the row-major upper triangle of an
// n x n matrix. Dense in [0, n(n-1)/2).
inline std::int64_t pair_index(std::int64_t n, Vertex a, Vertex b) {
  std::int64_t u = std::min(a, b);
  std::int64_t v = std::max(a, b);
  return u * (2 * n - u - 1) / 2 + (v - u - 1);
}

inline std::int64_t pair_count(std::int64_t n) { return n * (n - 1) / 2; }

// Undirected simple graph on vertices 0..n-1 with sorted adjacency lists.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int vertex_count) : adjacency_(check_order(vertex_count)) {}

  Graph(int vertex_count, std::span<const Edge> edges)
      : adjacency_(check_order(vertex_count)) {
    for (const Edge& e : edges) {
      if (e.u == e.v) {
        throw GraphError("self-loop at vertex " + std::to_string(e.u));
      }
      if (e.u < 0 || e.v >= vertex_count) {
        throw GraphError("edge {" + std::to_string(e.u) + "," +
                         std::to_string(e.v) + "} out of range");
      }
      adjacency_[e.u].push_back(e.v);
      adjacency_[e.v].push_back(e.u);
    }
    for (auto& list : adjacency_) {
      std::sort(list.begin(), list.end());
      if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
        throw GraphError("parallel edge");
      }
    }
    edge_count_ = static_cast<std::int64_t>(edges.size());
  }

  Graph(int vertex_count, std::initializer_list<Edge> edges)
      : Graph(vertex_count, std::span<const Edge>(edges.begin(), edges.size())) {}

  int vertex_count() const { return static_cast<int>(adjacency_.size()); }
  std::int64_t edge_count() const { return edge_count_; }

  std::span<const Vertex> neighbors(Vertex v) const { return adjacency_[v]; }
  int degree(Vertex v) const { return static_cast<int>(adjacency_[v].size()); }

  bool has_edge(Vertex a, Vertex b) const {
    if (a == b) return false;
    const auto& list = adjacency_[a];
    return std::binary_search(list.begin(), list.end(), b);
  }

  int max_degree() const {
    int best = 0;
    for (const auto& list : adjacency_) best = std::max(best, static_cast<int>(list.size()));
    return best;
  }

  // Edges in lexicographic order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(edge_count_));
    for (Vertex u = 0; u < vertex_count(); ++u) {
      for (Vertex v : adjacency_[u]) {
        if (u < v) out.emplace_back(u, v);
      }
    }
    return out;
  }

  int non_isolated_count() const {
    int count = 0;
    for (const auto& list : adjacency_) count += list.empty() ? 0 : 1;
    return count;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  static int check_order(int vertex_count) {
    if (vertex_count < 0) throw GraphError("negative vertex count");
    return vertex_count;
  }

  std::vector<std::vector<Vertex>> adjacency_;
  std::int64_t edge_count_ = 0;
};

inline Graph complete_graph(int n) {
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(pair_count(n)));
  for (Vertex u = 0; u < n; ++u) {
    for (Vertex v = u + 1; v < n; ++v) edges.emplace_back(u, v);
  }
  return Graph(n, edges);
}

inline Graph path_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v + 1 < n; ++v) edges.emplace_back(v, v + 1);
  return Graph(n, edges);
}

inline Graph cycle_graph(int n) {
  std::vector<Edge> edges;
  for (Vertex v = 0; v < n; ++v) edges.emplace_back(v, (v + 1) % n);
  return Graph(n, edges);
}

inline Graph star_graph(int leaves) {
  std::vector<Edge> edges;
  for (Vertex v = 1; v <= leaves; ++v) edges.emplace_back(0, v);
  return Graph(leaves + 1, edges);
}

// Disjoint union; vertices of `b` are shifted by a.vertex_count().
inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> edges = a.edges();
  const int shift = a.vertex_count();
  for (const Edge& e : b.edges()) edges.emplace_back(e.u + shift, e.v + shift);
  return Graph(a.vertex_count() + b.vertex_count(), edges);
}

// Same edges, vertex_count raised to `n` with isolated vertices.
inline Graph pad_to(const Graph& g, int n) {
  if (n < g.vertex_count()) throw GraphError("cannot pad to a smaller order");
  auto edges = g.edges();
  return Graph(n, edges);
}

// Subgraph induced on `keep` (sorted or not); vertex i of the result is keep[i].
inline Graph induced_subgraph(const Graph& g, std::span<const Vertex> keep) {
  std::vector<int> position(static_cast<std::size_t>(g.vertex_count()), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) position[keep[i]] = static_cast<int>(i);
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    for (Vertex w : g.neighbors(keep[i])) {
      const int j = position[w];
      if (j > static_cast<int>(i)) edges.emplace_back(static_cast<Vertex>(i), j);
    }
  }
  return Graph(static_cast<int>(keep.size()), edges);
}

// Components of g restricted to vertices with present[v] (all when empty),
// ordered by smallest member; members sorted ascending.
inline std::vector<VertexSet> connected_components(const Graph& g,
                                                   const std::vector<bool>& present = {}) {
  const int n = g.vertex_count();
  auto is_present = [&](Vertex v) { return present.empty() || present[v]; };
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  std::vector<VertexSet> components;
  std::vector<Vertex> stack;
  for (Vertex root = 0; root < n; ++root) {
    if (seen[root] || !is_present(root)) continue;
    VertexSet component;
    seen[root] = true;
    stack.push_back(root);
    while (!stack.empty()) {
      const Vertex v = stack.back();
      stack.pop_back();
      component.push_back(v);
      for (Vertex w : g.neighbors(v)) {
        if (!seen[w] && is_present(w)) {
          seen[w] = true;
          stack.push_back(w);
        }
      }
    }
    std::sort(component.begin(), component.end());
    components.push_back(std::move(component));
  }
  return components;
}

inline bool is_forest(const Graph& g) {
  const auto components = connected_components(g);
  return g.edge_count() + static_cast<std::int64_t>(components.size()) == g.vertex_count();
}

// ---------------------------------------------------------------------------
// Text format: "n m" header, then m lines "u v" with 0 <= u < v < n. Lines
// starting with '#' are comments. The file must end with a newline.

inline void write_graph(std::ostream& out, const Graph& g) {
  out << g.vertex_count() << ' ' << g.edge_count() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

inline Graph read_graph(std::istream& in) {
  const std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (text.empty() || text.back() != '\n') {
    throw GraphError("graph file must end with a newline");
  }
  std::istringstream lines(text);
  std::string line;
  bool have_header = false;
  long long n = 0;
  long long m = 0;
  std::vector<Edge> edges;
  int line_number = 0;
  while (std::getline(lines, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream fields(line);
    long long a = 0;
    long long b = 0;
    std::string extra;
    if (!(fields >> a >> b) || (fields >> extra)) {
      throw GraphError("malformed line " + std::to_string(line_number));
    }
    if (!have_header) {
      if (a < 0 || b < 0) throw GraphError("negative header values");
      n = a;
      m = b;
      have_header = true;
      continue;
    }
    if (!(0 <= a && a < b && b < n)) {
      throw GraphError("edge on line " + std::to_string(line_number) +
                       " violates 0 <= u < v < n");
    }
    edges.emplace_back(static_cast<Vertex>(a), static_cast<Vertex>(b));
  }
  if (!have_header) throw GraphError("missing header line");
  if (static_cast<long long>(edges.size()) != m) {
    throw GraphError("header declares " + std::to_string(m) + " edges, found " +
                     std::to_string(edges.size()));
  }
  return Graph(static_cast<int>(n), edges);
}

inline void save_graph(const std::string& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw GraphError("cannot open " + path + " for writing");
  write_graph(out, g);
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GraphError("cannot open " + path);
  return read_graph(in);
}

}  // namespace graphpack

#endif  // GRAPHPACK_GRAPH_HPP_
