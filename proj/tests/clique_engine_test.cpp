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

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "graphpack/clique_engine.hpp"
#include "graphpack/hypergraph.hpp"
#include "graphpack/instances.hpp"
#include "graphpack/pack_layer.hpp"
#include "graphpack/verify.hpp"
#include "oracles.hpp"

namespace graphpack {
namespace {

// Exhaustive properness: every pair of same-colored hyperedges is disjoint.
bool proper_by_pairs(const Hypergraph& h, const std::vector<int>& color) {
  for (std::size_t a = 0; a < h.size(); ++a) {
    if (color[a] < 0) return false;
    const std::set<int> members(h[a].begin(), h[a].end());
    for (std::size_t b = a + 1; b < h.size(); ++b) {
      if (color[a] != color[b]) continue;
      for (int x : h[b]) {
        if (members.count(x)) return false;
      }
    }
  }
  return true;
}

void expect_edge_disjoint_embeddings(const std::vector<Graph>& guests, const std::vector<Embedding>& maps,
                                     int size) {
  ASSERT_EQ(guests.size(), maps.size());
  std::vector<std::vector<Edge>> images;
  for (std::size_t i = 0; i < guests.size(); ++i) {
    EXPECT_TRUE(validate_embedding(guests[i], complete_graph(size), maps[i]).ok());
    EXPECT_TRUE(maps[i].total());
    images.push_back(maps[i].image_edges(guests[i]));
  }
  EXPECT_TRUE(oracle::edge_disjoint(images));
}

TEST(EnumerateCliquesTest, TrianglesOfK4) {
  const CliqueEnumeration e = enumerate_cliques(complete_graph(4), 3);
  EXPECT_EQ(e.count(), 4u);
  for (auto c : e.per_edge) EXPECT_EQ(c, 2);
}

TEST(EnumerateCliquesTest, PentagonHasNoTriangles) {
  EXPECT_EQ(enumerate_cliques(cycle_graph(5), 3).count(), 0u);
}

TEST(EnumerateCliquesTest, CountsMatchRecursion) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const Graph g = oracle::gnp(28, 0.5, seed);
    for (int l : {3, 4, 5}) {
      const CliqueEnumeration e = enumerate_cliques(g, l);
      EXPECT_EQ(static_cast<std::int64_t>(e.count()), oracle::clique_count(g, l));
      std::int64_t vertex_total = 0;
      for (auto c : e.per_vertex) vertex_total += c;
      EXPECT_EQ(vertex_total, l * static_cast<std::int64_t>(e.count()));
    }
  }
}

TEST(EnumerateCliquesTest, PerEdgeTriangleCountsMatchMatrix) {
  const Graph g = oracle::gnp(60, 0.5, 17);
  const CliqueEnumeration e = enumerate_cliques(g, 3);
  const std::vector<int> expected = oracle::triangles_per_edge(g);
  ASSERT_EQ(e.per_edge.size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_EQ(e.per_edge[i], expected[i]);
}

// Per-edge triangle counts of G(60, 1/2) against (n - 2) p^2 +- 40%. The
// common-neighbour count of an edge is Binomial(58, 1/4), whose mass inside
// that window is computed here and used as the floor, less 0.05 of
// sampling slack.
TEST(EnumerateCliquesTest, PerEdgeTriangleCountsConcentrate) {
  const int n = 60;
  const double p = 0.5;
  const double mean = (n - 2) * p * p;
  const double lo = 0.6 * mean;
  const double hi = 1.4 * mean;
  double mass = 0.0;
  for (int k = 0; k <= n - 2; ++k) {
    if (k < lo || k > hi) continue;
    mass += std::exp(std::lgamma(n - 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - 1.0 - k) +
                     k * std::log(p * p) + (n - 2 - k) * std::log(1 - p * p));
  }
  EXPECT_LT(mass, 0.95);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const CliqueEnumeration e = enumerate_cliques(oracle::gnp(n, p, 100 + seed), 3);
    std::size_t inside = 0;
    for (auto c : e.per_edge) inside += (c >= lo && c <= hi) ? 1 : 0;
    EXPECT_GE(static_cast<double>(inside) / static_cast<double>(e.per_edge.size()), mass - 0.05);
  }
}

TEST(ColoringTest, MatchingNeedsOneColor) {
  Hypergraph h(9, 3);
  for (int s = 0; s < 9; s += 3) h.add(std::vector<int>{s, s + 1, s + 2});
  const Coloring c = proper_hyperedge_coloring(h);
  EXPECT_EQ(c.colors, 1);
}

TEST(ColoringTest, SunflowerNeedsAllColors) {
  for (int k : {2, 5, 9}) {
    Hypergraph h(1 + 2 * k, 3);
    for (int j = 0; j < k; ++j) h.add(std::vector<int>{0, 1 + 2 * j, 2 + 2 * j});
    const Coloring c = proper_hyperedge_coloring(h);
    EXPECT_EQ(c.colors, k);
    EXPECT_TRUE(proper_by_pairs(h, c.color));
  }
}

TEST(ColoringTest, AlwaysProperOnRandomHypergraphs) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const CliqueEnumeration e = enumerate_cliques(oracle::gnp(40, 0.4, seed), 3);
    ColoringOptions options;
    options.seed = seed;
    const Coloring c = proper_hyperedge_coloring(e.cliques, options);
    EXPECT_TRUE(proper_by_pairs(e.cliques, c.color));
    EXPECT_TRUE(is_proper(e.cliques, c.color));
    EXPECT_GE(c.colors, e.cliques.max_degree());
    EXPECT_LE(c.colors, c.first_fit_colors);
  }
}

TEST(ColoringTest, TriangleHypergraphOfDenseRandomGraph) {
  const CliqueEnumeration e = enumerate_cliques(oracle::gnp(150, 0.5, 3), 3);
  const Coloring c = proper_hyperedge_coloring(e.cliques);
  EXPECT_TRUE(proper_by_pairs(e.cliques, c.color));
  const int degree = e.cliques.max_degree();
  RecordProperty("colors", c.colors);
  RecordProperty("max_degree", degree);
  if (c.colors > 1.5 * degree) {
    std::cout << "soft target missed: " << c.colors << " colors, max degree " << degree << '\n';
  }
}

TEST(CliqueFactorTest, CompleteSixIntoMatchings) {
  FactorOptions options;
  options.clique_order = 2;
  const FactorCollection f = clique_factor_collection(complete_graph(6), options);
  const auto witness = oracle::round_robin(6);
  ASSERT_TRUE(oracle::edge_disjoint(witness));
  ASSERT_EQ(f.factors.size(), witness.size());
  std::vector<std::vector<Edge>> images;
  for (const auto& factor : f.factors) {
    ASSERT_EQ(factor.cells.size(), 3u);
    std::set<Vertex> covered;
    std::vector<Edge> edges;
    for (const auto& cell : factor.cells) {
      covered.insert(cell.begin(), cell.end());
      edges.emplace_back(cell[0], cell[1]);
    }
    EXPECT_EQ(covered.size(), 6u);
    images.push_back(edges);
  }
  EXPECT_TRUE(oracle::edge_disjoint(images));
  for (int c : f.coverage) EXPECT_EQ(c, 5);
}

TEST(CliqueFactorTest, CompleteFourIsOneCell) {
  FactorOptions options;
  options.clique_order = 4;
  const FactorCollection f = clique_factor_collection(complete_graph(4), options);
  ASSERT_EQ(f.factors.size(), 1u);
  ASSERT_EQ(f.factors[0].cells.size(), 1u);
  EXPECT_EQ(f.factors[0].cells[0], (VertexSet{0, 1, 2, 3}));
}

TEST(CliqueFactorTest, CellsAreEdgeDisjointCliques) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const Graph g = oracle::gnp(90, 0.5, 40 + seed);
    FactorOptions options;
    options.clique_order = 4;
    options.seed = seed;
    const FactorCollection f = clique_factor_collection(g, options);
    EXPECT_FALSE(f.factors.empty());
    std::vector<std::vector<Edge>> images;
    for (const auto& factor : f.factors) {
      std::set<Vertex> seen;
      for (const auto& cell : factor.cells) {
        ASSERT_EQ(cell.size(), 4u);
        std::vector<Edge> edges;
        for (std::size_t a = 0; a < cell.size(); ++a) {
          EXPECT_TRUE(seen.insert(cell[a]).second);
          for (std::size_t b = a + 1; b < cell.size(); ++b) {
            EXPECT_TRUE(g.has_edge(cell[a], cell[b]));
            edges.emplace_back(cell[a], cell[b]);
          }
        }
        images.push_back(edges);
      }
    }
    EXPECT_TRUE(oracle::edge_disjoint(images));
  }
}

TEST(CliqueFactorTest, RepairKeepsFactorsDisjointAndLiftsCoverage) {
  const Graph g = oracle::gnp(90, 0.5, 77);
  FactorOptions options;
  options.clique_order = 3;
  options.seed = 5;
  options.factor_count = 12;
  options.balance_moves = 0;
  const FactorCollection plain = clique_factor_collection(g, options);
  options.balance_moves = 200000;
  const FactorCollection f = clique_factor_collection(g, options);
  ASSERT_EQ(f.factors.size(), 12u);
  ASSERT_EQ(plain.factors.size(), 12u);
  std::vector<int> cover(90, 0);
  std::vector<std::vector<Edge>> images;
  for (const auto& factor : f.factors) {
    std::set<Vertex> seen;
    std::vector<Edge> edges;
    for (const auto& cell : factor.cells) {
      for (std::size_t a = 0; a < cell.size(); ++a) {
        EXPECT_TRUE(seen.insert(cell[a]).second);
        ++cover[static_cast<std::size_t>(cell[a])];
        for (std::size_t b = a + 1; b < cell.size(); ++b) {
          EXPECT_TRUE(g.has_edge(cell[a], cell[b]));
          edges.emplace_back(cell[a], cell[b]);
        }
      }
    }
    images.push_back(edges);
  }
  EXPECT_TRUE(oracle::edge_disjoint(images));
  EXPECT_EQ(cover, f.coverage);
  EXPECT_GE(f.min_coverage_fraction, plain.min_coverage_fraction);
}

TEST(CliqueFactorTest, TooFewFactorsThrows) {
  FactorOptions options;
  options.clique_order = 3;
  options.min_factors = 2;
  EXPECT_THROW(clique_factor_collection(complete_graph(3), options), InsufficientFactors);
}

TEST(PackIntoCliqueTest, NoGuests) {
  EXPECT_TRUE(pack_into_clique(5, {}).empty());
}

TEST(PackIntoCliqueTest, ThreeMatchingsIntoSix) {
  const Graph matching(6, {Edge(0, 1), Edge(2, 3), Edge(4, 5)});
  const std::vector<Graph> guests(3, matching);
  ASSERT_EQ(brute_force_pack(guests, 6).status, BruteForceStatus::kPacking);
  expect_edge_disjoint_embeddings(guests, pack_into_clique(6, guests), 6);
}

TEST(PackIntoCliqueTest, SevenTrianglesOracleFeasible) {
  const std::vector<Graph> guests(7, complete_graph(3));
  const BruteForceResult oracle_result = brute_force_pack(guests, 7);
  ASSERT_EQ(oracle_result.status, BruteForceStatus::kPacking);
  expect_edge_disjoint_embeddings(guests, oracle_result.embeddings, 7);
  try {
    expect_edge_disjoint_embeddings(guests, pack_into_clique(7, guests), 7);
  } catch (const CellPackingFailed&) {
    // Greedy may miss the perfect case.
  }
}

TEST(PackIntoCliqueTest, RandomSmallForestsWithinSlack) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::vector<Graph> guests;
    std::int64_t edges = 0;
    for (int j = 0; j < 4; ++j) {
      guests.push_back(pad_to(gen_bounded_tree(4 + j % 3, 3, seed * 10 + j), 8));
      edges += guests.back().edge_count();
    }
    ASSERT_LE(edges, pair_count(10));
    CellPackOptions options;
    options.seed = seed;
    expect_edge_disjoint_embeddings(guests, pack_into_clique(10, guests, options), 10);
  }
}

TEST(PackIntoCliqueTest, RejectsOversizedInputs) {
  EXPECT_THROW(pack_into_clique(3, {complete_graph(4)}), CellPackingFailed);
  EXPECT_THROW(pack_into_clique(4, {complete_graph(4), complete_graph(4)}), CellPackingFailed);
}

// Each input maps injectively onto a subgraph of its merged output.
void expect_merge_maps(const std::vector<Graph>& guests, const MergeResult& r) {
  std::int64_t in = 0;
  std::int64_t out = 0;
  for (const Graph& g : guests) in += g.edge_count();
  for (const Graph& g : r.graphs) out += g.edge_count();
  EXPECT_EQ(in, out);
  for (std::size_t i = 0; i < guests.size(); ++i) {
    const Graph& host = r.graphs[static_cast<std::size_t>(r.owner[i])];
    std::set<Vertex> used;
    for (const Edge& e : guests[i].edges()) {
      const Vertex a = r.vertex_map[i][static_cast<std::size_t>(e.u)];
      const Vertex b = r.vertex_map[i][static_cast<std::size_t>(e.v)];
      ASSERT_NE(a, kUnmapped);
      ASSERT_NE(b, kUnmapped);
      EXPECT_TRUE(host.has_edge(a, b));
    }
    for (Vertex x : r.vertex_map[i]) {
      if (x != kUnmapped) EXPECT_TRUE(used.insert(x).second);
    }
  }
}

TEST(MergeSmallGraphsTest, TwoSingleEdges) {
  const std::vector<Graph> guests{Graph(2, {Edge(0, 1)}), Graph(2, {Edge(0, 1)})};
  MergeOptions options;
  const MergeResult r = merge_small_graphs(guests, 40, options);
  ASSERT_EQ(r.graphs.size(), 1u);
  EXPECT_EQ(r.graphs[0].edge_count(), 2);
  EXPECT_EQ(r.provenance[0], (std::vector<int>{0, 1}));
  expect_merge_maps(guests, r);
}

TEST(MergeSmallGraphsTest, LargeGuestsUnchanged) {
  const std::vector<Graph> guests{complete_graph(6), complete_graph(6)};
  const MergeResult r = merge_small_graphs(guests, 12, {});
  ASSERT_EQ(r.graphs.size(), 2u);
  EXPECT_EQ(r.graphs[0], guests[0]);
  EXPECT_EQ(r.graphs[1], guests[1]);
}

TEST(MergeSmallGraphsTest, ThreeTriangleFamiliesSuperpose) {
  const Graph five = gen_oberwolfach(15, {3, 3, 3, 3, 3});
  const std::vector<Graph> guests(3, five);
  MergeOptions options;
  options.epsilon = 0.2;
  options.component_bound = 3;
  const MergeResult r = merge_small_graphs(guests, 60, options);
  ASSERT_EQ(r.graphs.size(), 1u);
  EXPECT_EQ(r.graphs[0].edge_count(), 45);
  EXPECT_FALSE(r.phase_two_skipped);
  expect_merge_maps(guests, r);
  const auto sizes = oracle::component_sizes(r.graphs[0]);
  EXPECT_LE(sizes.front(), options.constant * options.component_bound);
}

TEST(MergeSmallGraphsTest, RandomCollectionsPreserveEdges) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    std::vector<Graph> guests;
    for (int j = 0; j < 60; ++j) {
      guests.push_back(gen_bounded_components(4 + static_cast<int>((seed + j) % 17), 2, 2, seed * 31 + j));
    }
    MergeOptions options;
    options.component_bound = 2;
    options.seed = seed;
    const MergeResult r = merge_small_graphs(guests, 400, options);
    EXPECT_LT(r.graphs.size(), guests.size());
    expect_merge_maps(guests, r);
    for (const Graph& g : r.graphs) {
      const auto sizes = oracle::component_sizes(g);
      if (!sizes.empty()) EXPECT_LE(sizes.front(), options.constant * options.component_bound);
    }
  }
}

// ---------------------------------------------------------------------------
// pack_layer on hand-made views.

InstanceSet tree_set(int n, int count, int order, double delta, int two_independent, std::uint64_t seed) {
  std::vector<Graph> graphs;
  for (int i = 0; i < count; ++i) graphs.push_back(gen_bounded_tree(order, 3, seed * 97 + static_cast<std::uint64_t>(i)));
  InstanceSet set = normalize_collection(graphs, n);
  InstanceParams params;
  params.separator_fraction = delta;
  params.two_independent_size = two_independent;
  for (auto& inst : set.instances) inst = prepare_instance(inst.graph, params);
  return set;
}

void expect_core_embedded(const InstanceSet& set, const std::vector<int>& batch, const LayerPacking& out,
                          const Graph& view) {
  for (std::size_t b = 0; b < batch.size(); ++b) {
    const InstanceGraph& inst = set.instances[static_cast<std::size_t>(batch[b])];
    const auto core = inst.core_mask();
    const Embedding& f = out.embeddings[b];
    std::set<Vertex> images;
    for (Vertex v = 0; v < inst.graph.vertex_count(); ++v) {
      EXPECT_EQ(f.mapped(v), static_cast<bool>(core[static_cast<std::size_t>(v)]));
      if (f.mapped(v)) EXPECT_TRUE(images.insert(f(v)).second);
    }
    for (const Edge& e : inst.graph.edges()) {
      if (core[static_cast<std::size_t>(e.u)] && core[static_cast<std::size_t>(e.v)]) {
        EXPECT_TRUE(view.has_edge(f(e.u), f(e.v)));
      }
    }
  }
}

TEST(PackLayerTest, SingleInstanceIntoCompleteLayer) {
  const int n = 60;
  const InstanceSet set = tree_set(n, 1, n, 0.05, 6, 1);
  PipelineConstants c;
  c.n = n;
  c.clique_order = 4;
  const Phase1View view{1, complete_graph(n)};
  PackingLedger ledger(n);
  const LayerPacking out = pack_layer(view, {}, set, {0}, c, ledger, 5);
  expect_core_embedded(set, {0}, out, view.graph);
  EXPECT_LE(out.spread.max_a, 1);
  EXPECT_LE(out.spread.max_b, 1);
  EXPECT_LE(out.spread.max_pair, 1);
}

TEST(PackLayerTest, DeskLayerStaysOffZoneEdges) {
  PipelineConstants c;
  c.n = 300;
  c.seed = 12;
  const SlicedHost host = slice_host(c);
  const InstanceSet set = tree_set(300, 6, 240, c.delta, 45, 3);
  std::vector<int> batch(set.instances.size());
  std::iota(batch.begin(), batch.end(), 0);
  const Phase1View view = phase1_view(host, 1);
  PackingLedger ledger(300);
  const LayerPacking out = pack_layer(view, host.zones[0], set, batch, c, ledger, 8);
  expect_core_embedded(set, batch, out, view.graph);
  for (const Edge& e : ledger.used_edges()) {
    EXPECT_EQ(host.edge_layer(e.u, e.v), 1);
    EXPECT_FALSE(host.in_zone(1, e.u) || host.in_zone(1, e.v));
  }
}

TEST(PackLayerTest, CliqueRouteOnDenseLayer) {
  const int n = 80;
  std::vector<Graph> graphs;
  for (int i = 0; i < 4; ++i) graphs.push_back(gen_bounded_components(n, 3, 2, 70 + i));
  InstanceSet set = normalize_collection(graphs, n);
  InstanceParams params;
  params.separator_fraction = 0.0;
  params.two_independent_size = 4;
  for (auto& inst : set.instances) inst = prepare_instance(inst.graph, params);
  PipelineConstants c;
  c.n = n;
  c.clique_order = 4;
  c.zeta = 0.0;
  const Phase1View view{1, oracle::gnp(n, 0.6, 9)};
  PackingLedger ledger(view.graph);
  const std::vector<int> batch{0, 1, 2, 3};
  const LayerPacking out = pack_layer(view, {}, set, batch, c, ledger, 2);
  expect_core_embedded(set, batch, out, view.graph);
  EXPECT_GT(out.factors, 0);
  EXPECT_GT(out.clique_vertices, 0);
}

// Identical instances: complement hits summed over seeds stay within a
// factor two across non-zone host vertices.
TEST(PackLayerTest, ComplementHitsEqualizeOverSeeds) {
  const int n = 100;
  const int copies = 16;
  std::vector<Graph> graphs(copies, gen_bounded_tree(n, 3, 77));
  InstanceSet set = normalize_collection(graphs, n);
  InstanceParams params;
  params.separator_fraction = 0.0;
  params.two_independent_size = 15;
  for (auto& inst : set.instances) inst = prepare_instance(inst.graph, params);
  std::vector<int> batch(copies);
  std::iota(batch.begin(), batch.end(), 0);
  std::vector<int> hits(static_cast<std::size_t>(n), 0);
  VertexSet zone;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    PipelineConstants c;
    c.n = n;
    c.delta = 0.0;
    c.layers = 1;
    c.p0 = 0.3;
    c.seed = seed;
    const SlicedHost host = slice_host(c);
    zone = host.zones[0];
    PackingLedger ledger(n);
    const LayerPacking out = pack_layer(phase1_view(host, 1), zone, set, batch, c, ledger, seed);
    for (Vertex x = 0; x < n; ++x) hits[static_cast<std::size_t>(x)] += out.spread.b_hits[static_cast<std::size_t>(x)];
  }
  int lo = std::numeric_limits<int>::max();
  int hi = 0;
  for (Vertex x = 0; x < n; ++x) {
    if (std::binary_search(zone.begin(), zone.end(), x)) continue;
    lo = std::min(lo, hits[static_cast<std::size_t>(x)]);
    hi = std::max(hi, hits[static_cast<std::size_t>(x)]);
  }
  EXPECT_GT(lo, 0);
  EXPECT_LE(hi, 2 * lo);
}

}  // namespace
}  // namespace graphpack
