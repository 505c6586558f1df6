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

#ifndef GRAPHPACK_BALANCE_HPP_
#define GRAPHPACK_BALANCE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "graphpack/graph.hpp"
#include "graphpack/instances.hpp"
#include "graphpack/random.hpp"

namespace graphpack {

struct WeightVector {
  std::vector<double> coords;  // each in [0, 1]
  int payload_id = 0;
};

struct PartitionResult {
  std::vector<std::vector<int>> parts;          // payload ids
  std::vector<std::vector<double>> part_sums;   // per part, per coordinate
  double discrepancy = 0.0;
};

class ToleranceUnmet : public std::runtime_error {
 public:
  ToleranceUnmet(PartitionResult best, double tolerance)
      : std::runtime_error("balanced partition discrepancy " + std::to_string(best.discrepancy) +
                           " exceeds tolerance " + std::to_string(tolerance)),
        result(std::move(best)) {}
  PartitionResult result;
};

struct BalanceOptions {
  double tolerance = -1.0;  // negative: 3 * dimension
  std::uint64_t seed = 0;
  int restarts = 0;         // 0: 32 for small inputs, 1 otherwise
  bool throw_on_unmet = true;
};

// Max over parts and coordinates of |part sum - total / m|.
inline double partition_discrepancy(std::span<const WeightVector> vectors,
                                    const std::vector<std::vector<int>>& parts) {
  if (parts.empty()) return 0.0;
  const std::size_t dim = vectors.empty() ? 0 : vectors.front().coords.size();
  std::vector<double> total(dim, 0.0);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t c = 0; c < dim; ++c) total[c] += vectors[i].coords[c];
  }
  double worst = 0.0;
  const double m = static_cast<double>(parts.size());
  for (const auto& part : parts) {
    std::vector<double> sum(dim, 0.0);
    for (int id : part) {
      const auto it = std::find_if(vectors.begin(), vectors.end(),
                                   [&](const WeightVector& w) { return w.payload_id == id; });
      if (it == vectors.end()) throw std::invalid_argument("unknown payload id in partition");
      for (std::size_t c = 0; c < dim; ++c) sum[c] += it->coords[c];
    }
    for (std::size_t c = 0; c < dim; ++c) worst = std::max(worst, std::abs(sum[c] - total[c] / m));
  }
  return worst;
}

namespace detail {

// Incremental state for one partition attempt over vector positions.
class BalanceState {
 public:
  BalanceState(std::span<const WeightVector> vectors, int parts)
      : vectors_(vectors),
        dim_(vectors.empty() ? 0 : vectors.front().coords.size()),
        parts_(parts),
        sums_(static_cast<std::size_t>(parts) * dim_, 0.0),
        target_(dim_, 0.0),
        owner_(vectors.size(), -1) {
    for (const auto& w : vectors) {
      for (std::size_t c = 0; c < dim_; ++c) target_[c] += w.coords[c];
    }
    for (double& t : target_) t /= parts;
  }

  double coord(std::size_t item, std::size_t c) const { return vectors_[item].coords[c]; }
  int owner(std::size_t item) const { return owner_[item]; }
  int parts() const { return parts_; }

  void place(std::size_t item, int part) {
    if (owner_[item] >= 0) shift(owner_[item], item, -1.0);
    owner_[item] = part;
    shift(part, item, 1.0);
  }

  // (max deviation, sum of squared deviations); the second breaks plateaus.
  std::pair<double, double> score() const {
    double worst = 0.0;
    double squares = 0.0;
    for (int p = 0; p < parts_; ++p) {
      for (std::size_t c = 0; c < dim_; ++c) {
        const double d = sums_[index(p, c)] - target_[c];
        worst = std::max(worst, std::abs(d));
        squares += d * d;
      }
    }
    return {worst, squares};
  }

  // Part holding the largest absolute deviation.
  int worst_part() const {
    int best = 0;
    double worst = -1.0;
    for (int p = 0; p < parts_; ++p) {
      for (std::size_t c = 0; c < dim_; ++c) {
        const double d = std::abs(sums_[index(p, c)] - target_[c]);
        if (d > worst) {
          worst = d;
          best = p;
        }
      }
    }
    return best;
  }

  // Squared norm of `part`'s sums if `item` were added to it.
  double load_with(int part, std::size_t item) const {
    double norm = 0.0;
    for (std::size_t c = 0; c < dim_; ++c) {
      const double s = sums_[index(part, c)] + coord(item, c);
      norm += s * s;
    }
    return norm;
  }

 private:
  std::size_t index(int part, std::size_t c) const {
    return static_cast<std::size_t>(part) * dim_ + c;
  }
  void shift(int part, std::size_t item, double sign) {
    for (std::size_t c = 0; c < dim_; ++c) sums_[index(part, c)] += sign * coord(item, c);
  }

  std::span<const WeightVector> vectors_;
  std::size_t dim_;
  int parts_;
  std::vector<double> sums_;
  std::vector<double> target_;
  std::vector<int> owner_;
};

inline bool better(const std::pair<double, double>& a, const std::pair<double, double>& b) {
  constexpr double kEps = 1e-12;
  if (a.first < b.first - kEps) return true;
  if (a.first > b.first + kEps) return false;
  return a.second < b.second - kEps;
}

// Moves and swaps touching the worst part, first improvement, until stuck
// or the attempt budget runs out. `pairs` adds 2-for-1 exchanges.
inline void improve(BalanceState& state, std::size_t items, std::int64_t budget, bool pairs) {
  std::int64_t attempts = 0;
  bool improved = true;
  while (improved && attempts < budget) {
    improved = false;
    const int worst = state.worst_part();
    const auto current = state.score();
    for (std::size_t a = 0; a < items && !improved && attempts < budget; ++a) {
      if (state.owner(a) != worst) continue;
      for (int p = 0; p < state.parts() && !improved; ++p) {
        if (p == worst) continue;
        ++attempts;
        state.place(a, p);
        if (better(state.score(), current)) {
          improved = true;
        } else {
          state.place(a, worst);
        }
      }
      for (std::size_t b = 0; b < items && !improved && attempts < budget; ++b) {
        const int other = state.owner(b);
        if (other == worst) continue;
        ++attempts;
        state.place(a, other);
        state.place(b, worst);
        if (better(state.score(), current)) {
          improved = true;
        } else {
          state.place(b, other);
          state.place(a, worst);
        }
      }
      if (!pairs) continue;
      // Two items of the worst part against one item of another part.
      for (std::size_t a2 = a + 1; a2 < items && !improved && attempts < budget; ++a2) {
        if (state.owner(a2) != worst) continue;
        for (std::size_t b = 0; b < items && !improved && attempts < budget; ++b) {
          const int other = state.owner(b);
          if (other == worst) continue;
          ++attempts;
          state.place(a, other);
          state.place(a2, other);
          state.place(b, worst);
          if (better(state.score(), current)) {
            improved = true;
          } else {
            state.place(b, other);
            state.place(a2, worst);
            state.place(a, worst);
          }
        }
      }
    }
  }
}

}  // namespace detail

// Partition of `vectors` into m parts with small coordinate-wise imbalance:
// seeded shuffle, greedy placement into the part whose load the item
// raises least (or a random start on odd restarts), then local moves and
// swaps. Throws
// ToleranceUnmet (carrying the best partition) when the discrepancy stays
// above the tolerance and options.throw_on_unmet is set.
inline PartitionResult balanced_partition(std::span<const WeightVector> vectors, int m,
                                          const BalanceOptions& options = {}) {
  if (m < 1) throw std::invalid_argument("need at least one part");
  const std::size_t dim = vectors.empty() ? 0 : vectors.front().coords.size();
  for (const auto& w : vectors) {
    if (w.coords.size() != dim) throw std::invalid_argument("mixed vector dimensions");
    for (double x : w.coords) {
      if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("coordinate outside [0,1]");
    }
  }
  const double tolerance = options.tolerance < 0 ? 3.0 * static_cast<double>(dim)
                                                 : options.tolerance;
  const bool small = vectors.size() <= 16;
  const int restarts = options.restarts > 0 ? options.restarts : (small ? 32 : 1);
  const auto items = static_cast<std::int64_t>(std::max<std::size_t>(vectors.size(), 1));
  const std::int64_t budget = small ? 64 * items * items * items : 10 * items;

  std::vector<int> best_owner;
  std::pair<double, double> best_score{std::numeric_limits<double>::infinity(), 0.0};
  for (int attempt = 0; attempt < restarts; ++attempt) {
    Rng rng(derive_seed(options.seed, 0x62616cULL, static_cast<std::uint64_t>(attempt)));
    std::vector<std::size_t> order(vectors.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order, rng);
    detail::BalanceState state(vectors, m);
    // Odd restarts start from a uniformly random assignment instead.
    const bool random_start = attempt % 2 == 1;
    for (std::size_t item : order) {
      if (random_start) {
        state.place(item, static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(m))));
        continue;
      }
      int choice = 0;
      double choice_load = std::numeric_limits<double>::infinity();
      for (int p = 0; p < m; ++p) {
        const double d = state.load_with(p, item);
        if (d < choice_load - 1e-12) {
          choice_load = d;
          choice = p;
        }
      }
      state.place(item, choice);
    }
    detail::improve(state, vectors.size(), budget, small);
    const auto score = state.score();
    if (detail::better(score, best_score)) {
      best_score = score;
      best_owner.assign(vectors.size(), 0);
      for (std::size_t i = 0; i < vectors.size(); ++i) best_owner[i] = state.owner(i);
    }
  }

  PartitionResult result;
  result.parts.assign(static_cast<std::size_t>(m), {});
  result.part_sums.assign(static_cast<std::size_t>(m), std::vector<double>(dim, 0.0));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto p = static_cast<std::size_t>(best_owner[i]);
    result.parts[p].push_back(vectors[i].payload_id);
    for (std::size_t c = 0; c < dim; ++c) result.part_sums[p][c] += vectors[i].coords[c];
  }
  std::vector<double> total(dim, 0.0);
  for (const auto& s : result.part_sums) {
    for (std::size_t c = 0; c < dim; ++c) total[c] += s[c];
  }
  result.discrepancy = 0.0;
  for (const auto& s : result.part_sums) {
    for (std::size_t c = 0; c < dim; ++c) {
      result.discrepancy = std::max(result.discrepancy, std::abs(s[c] - total[c] / m));
    }
  }
  for (auto& part : result.parts) std::sort(part.begin(), part.end());
  if (options.throw_on_unmet && result.discrepancy > tolerance + 1e-9) {
    throw ToleranceUnmet(std::move(result), tolerance);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Batches of instances.

struct BatchAssignment {
  std::vector<std::vector<int>> batches;  // instance indices per batch
  std::vector<std::int64_t> edge_sums;
  double discrepancy = 0.0;
  double size_window = 0.0;  // allowed |batch| - t/M
  double edge_window = 0.0;  // allowed edge sum - total/M
};

// Groups instances with vectors (1, 2 e(G_i) / (Delta n)) so that batch
// sizes and edge sums are both near their averages.
inline BatchAssignment group_graphs(const InstanceSet& set, int batches,
                                    const BalanceOptions& options = {}) {
  if (batches < 1) throw std::invalid_argument("need at least one batch");
  const double scale = std::max(1.0, static_cast<double>(set.max_degree) * set.n);
  std::vector<WeightVector> vectors;
  for (std::size_t i = 0; i < set.instances.size(); ++i) {
    const double edges = static_cast<double>(set.instances[i].graph.edge_count());
    vectors.push_back({{1.0, std::min(1.0, 2.0 * edges / scale)}, static_cast<int>(i)});
  }
  const PartitionResult part = balanced_partition(vectors, batches, options);
  BatchAssignment out;
  out.batches = part.parts;
  out.discrepancy = part.discrepancy;
  out.size_window = part.discrepancy;
  out.edge_window = part.discrepancy * scale / 2.0;
  for (const auto& batch : out.batches) {
    std::int64_t sum = 0;
    for (int i : batch) sum += set.instances[static_cast<std::size_t>(i)].graph.edge_count();
    out.edge_sums.push_back(sum);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Splitting one instance's components across the cells of a factor.

struct CellShare {
  VertexSet vertices;               // guest vertices, sorted
  std::vector<int> components;      // indices into ComponentSplit::components
  int vertex_count = 0;
  std::int64_t edge_count = 0;
  int anchors_s = 0;
  int anchors_i = 0;
};

struct ComponentSplit {
  std::vector<VertexSet> components;  // of the split part
  std::vector<CellShare> cells;
  int component_bound = 0;            // K used for scaling
  double discrepancy = 0.0;
  // Per-cell windows: vertices +-(disc K), edges +-(disc K^2), anchors +disc K.
  double vertex_window = 0.0;
  double edge_window = 0.0;
  double anchor_window = 0.0;
};

// Splits the vertices with keep[v] of inst.graph (all non-separator,
// non-I vertices when keep is empty) into `cells` groups of whole
// components, balancing (size, edges, A-anchors, B-anchors) per cell.
inline ComponentSplit split_components(const InstanceGraph& inst, int cells,
                                       const BalanceOptions& options = {},
                                       std::vector<bool> keep = {}) {
  if (cells < 1) throw std::invalid_argument("need at least one cell");
  const Graph& g = inst.graph;
  if (keep.empty()) keep = inst.core_mask();
  std::vector<bool> anchor_s(static_cast<std::size_t>(g.vertex_count()), false);
  std::vector<bool> anchor_i(static_cast<std::size_t>(g.vertex_count()), false);
  for (Vertex v : inst.anchors_s) anchor_s[v] = true;
  for (Vertex v : inst.anchors_i) anchor_i[v] = true;

  ComponentSplit out;
  out.components = connected_components(g, keep);
  int bound = 1;
  for (const auto& c : out.components) bound = std::max(bound, static_cast<int>(c.size()));
  out.component_bound = bound;
  const double k = bound;

  struct Stats {
    int size = 0;
    std::int64_t edges = 0;
    int a = 0;
    int b = 0;
  };
  std::vector<Stats> stats;
  std::vector<WeightVector> vectors;
  for (std::size_t ci = 0; ci < out.components.size(); ++ci) {
    Stats s;
    s.size = static_cast<int>(out.components[ci].size());
    std::int64_t degree_sum = 0;
    for (Vertex v : out.components[ci]) {
      for (Vertex w : g.neighbors(v)) degree_sum += keep[w] ? 1 : 0;
      s.a += anchor_s[v] ? 1 : 0;
      s.b += anchor_i[v] ? 1 : 0;
    }
    s.edges = degree_sum / 2;
    stats.push_back(s);
    vectors.push_back({{s.size / k, std::min(1.0, static_cast<double>(s.edges) / (k * k)),
                        s.a / k, s.b / k},
                       static_cast<int>(ci)});
  }
  const PartitionResult part = balanced_partition(vectors, cells, options);
  out.discrepancy = part.discrepancy;
  out.vertex_window = part.discrepancy * k;
  out.edge_window = part.discrepancy * k * k;
  out.anchor_window = part.discrepancy * k;
  for (const auto& ids : part.parts) {
    CellShare cell;
    for (int ci : ids) {
      const auto& s = stats[static_cast<std::size_t>(ci)];
      cell.components.push_back(ci);
      const auto& comp = out.components[static_cast<std::size_t>(ci)];
      cell.vertices.insert(cell.vertices.end(), comp.begin(), comp.end());
      cell.vertex_count += s.size;
      cell.edge_count += s.edges;
      cell.anchors_s += s.a;
      cell.anchors_i += s.b;
    }
    std::sort(cell.vertices.begin(), cell.vertices.end());
    out.cells.push_back(std::move(cell));
  }
  return out;
}

}  // namespace graphpack

#endif  // GRAPHPACK_BALANCE_HPP_
