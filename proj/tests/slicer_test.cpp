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

#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "graphpack/slicer.hpp"

namespace graphpack {
namespace {

PipelineConstants small_constants(int n, std::uint64_t seed) {
  PipelineConstants c;
  c.n = n;
  c.layers = 4;
  c.seed = seed;
  return c;
}

TEST(ConstantsTest, DerivedQuantities) {
  PipelineConstants c;
  EXPECT_NEAR(c.p(), 0.7 / 8, 1e-12);
  EXPECT_NEAR(c.xi(), 1.0 - 0.83 / 0.95, 1e-12);
  EXPECT_EQ(c.zone_size(), 10);
  EXPECT_NEAR(c.zone_cap(), 0.5, 1e-12);
  EXPECT_NO_THROW(validate_constants(c));
}

TEST(ConstantsTest, RejectsBrokenRelations) {
  PipelineConstants c;
  c.layer_probability = 0.2;
  EXPECT_THROW(validate_constants(c), ConfigError);
  c = PipelineConstants{};
  c.zeta = 0.2;
  EXPECT_THROW(validate_constants(c), ConfigError);  // 8 zones of 40 exceed n
  c = PipelineConstants{};
  c.delta = 0.3;
  EXPECT_THROW(validate_constants(c), ConfigError);  // xi above 2 gamma
}

TEST(SliceEdgesTest, WholeIntervalIsLayerZero) {
  PipelineConstants c;
  c.n = 30;
  c.p0 = 1.0;
  c.layers = 0;
  const SlicedHost host = slice_edges(c);
  ASSERT_EQ(host.layers.size(), 1u);
  EXPECT_EQ(host.layers[0], complete_graph(30));
}

TEST(SliceEdgesTest, LayersAndUnassignedPartitionPairs) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const SlicedHost host = slice_edges(small_constants(40, seed));
    std::vector<int> owners(static_cast<std::size_t>(pair_count(40)), 0);
    for (std::size_t k = 0; k < host.layers.size(); ++k) {
      for (const Edge& e : host.layers[k].edges()) {
        ++owners[static_cast<std::size_t>(pair_index(40, e.u, e.v))];
        EXPECT_EQ(host.edge_layer(e.u, e.v), static_cast<int>(k));
      }
    }
    for (Vertex u = 0; u < 40; ++u) {
      for (Vertex v = u + 1; v < 40; ++v) {
        const int owner = owners[static_cast<std::size_t>(pair_index(40, u, v))];
        EXPECT_LE(owner, 1);
        EXPECT_EQ(owner == 0, host.edge_layer(u, v) == kUnassigned);
      }
    }
  }
}

TEST(SliceEdgesTest, LayerZeroConcentrates) {
  const double pairs = static_cast<double>(pair_count(100));
  const double sigma = std::sqrt(pairs * 0.3 * 0.7);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    PipelineConstants c = small_constants(100, seed);
    c.p0 = 0.3;
    const SlicedHost host = slice_edges(c);
    EXPECT_LE(std::abs(static_cast<double>(host.layers[0].edge_count()) - 0.3 * pairs), 4 * sigma);
  }
}

TEST(SliceEdgesTest, DeterministicPerSeed) {
  const SlicedHost a = slice_edges(small_constants(60, 5));
  const SlicedHost b = slice_edges(small_constants(60, 5));
  const SlicedHost c = slice_edges(small_constants(60, 6));
  EXPECT_EQ(a.layer_of, b.layer_of);
  EXPECT_NE(a.layer_of, c.layer_of);
}

TEST(SliceEdgesTest, MarginalsPass) {
  const SlicedHost host = slice_edges(small_constants(120, 2));
  for (const auto& m : check_marginals(host)) EXPECT_TRUE(m.ok) << "layer " << m.layer;
}

TEST(ReserveZonesTest, FixedBlocks) {
  PipelineConstants c;
  c.n = 100;
  c.zeta = 0.05;
  c.layers = 4;
  const auto zones = reserve_zones(c);
  ASSERT_EQ(zones.size(), 4u);
  EXPECT_EQ(zones[0], (VertexSet{0, 1, 2, 3, 4}));
  EXPECT_EQ(zones[1], (VertexSet{5, 6, 7, 8, 9}));
  EXPECT_EQ(zones[2], (VertexSet{10, 11, 12, 13, 14}));
  EXPECT_EQ(zones[3], (VertexSet{15, 16, 17, 18, 19}));
}

TEST(ReserveZonesTest, NoLayersNoZones) {
  PipelineConstants c;
  c.layers = 0;
  c.p0 = 1.0;
  EXPECT_TRUE(reserve_zones(c).empty());
}

TEST(ReserveZonesTest, PairwiseDisjoint) {
  for (int layers : {1, 3, 8, 12}) {
    PipelineConstants c;
    c.n = 300;
    c.layers = layers;
    std::set<Vertex> seen;
    std::size_t total = 0;
    for (const auto& z : reserve_zones(c)) {
      seen.insert(z.begin(), z.end());
      total += z.size();
    }
    EXPECT_EQ(seen.size(), total);
  }
}

TEST(PhaseViewTest, ViewsSplitLayerByZone) {
  PipelineConstants c = small_constants(80, 4);
  c.zeta = 0.05;
  const SlicedHost host = slice_host(c);
  ASSERT_EQ(host.layer_count(), 4);
  for (int k = 1; k <= host.layer_count(); ++k) {
    const Phase1View v1 = phase1_view(host, k);
    const Phase2View v2 = phase2_view(host, k);
    EXPECT_EQ(v1.graph.edge_count() + v2.graph.edge_count(), host.layers[static_cast<std::size_t>(k)].edge_count());
    for (const Edge& e : v1.graph.edges()) {
      EXPECT_EQ(host.edge_layer(e.u, e.v), k);
      EXPECT_FALSE(host.in_zone(k, e.u) || host.in_zone(k, e.v));
    }
    for (const Edge& e : v2.graph.edges()) {
      EXPECT_EQ(host.edge_layer(e.u, e.v), k);
      EXPECT_TRUE(host.in_zone(k, e.u) || host.in_zone(k, e.v));
    }
  }
  EXPECT_EQ(phase3_view(host).graph, host.layers[0]);
}

}  // namespace
}  // namespace graphpack
