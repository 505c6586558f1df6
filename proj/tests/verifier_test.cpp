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
#include <random>

#include <gtest/gtest.h>

#include "graphpack/verify.hpp"
#include "oracles.hpp"

namespace graphpack {
namespace {

Embedding embedding_of(int id, std::vector<Vertex> map) {
  Embedding e(id, static_cast<int>(map.size()));
  e.map = std::move(map);
  return e;
}

bool has_finding(const VerificationReport& r, const std::string& kind) {
  return std::any_of(r.findings.begin(), r.findings.end(), [&](const Finding& f) { return f.kind == kind; });
}

TEST(VerifyPackingTest, SmallTreesFillTriangle) {
  const std::vector<Graph> guests{Graph(1), path_graph(2), path_graph(3)};
  const std::vector<Embedding> maps{embedding_of(0, {0}), embedding_of(1, {0, 1}), embedding_of(2, {1, 2, 0})};
  const VerificationReport r = verify_packing(3, {}, guests, maps);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.guest_edges, 3);
  EXPECT_DOUBLE_EQ(r.density, 1.0);
}

TEST(VerifyPackingTest, OverlapIsReported) {
  const std::vector<Graph> guests{star_graph(3), star_graph(3)};
  const std::vector<Embedding> maps{embedding_of(0, {0, 1, 2, 3}), embedding_of(1, {1, 0, 2, 3})};
  const VerificationReport r = verify_packing(4, {}, guests, maps);
  EXPECT_FALSE(r.valid);
  EXPECT_TRUE(has_finding(r, "overlap"));
}

TEST(VerifyPackingTest, InjectivityIsReported) {
  const std::vector<Graph> guests{path_graph(3)};
  const std::vector<Embedding> maps{embedding_of(0, {0, 1, 0})};
  const VerificationReport r = verify_packing(3, {}, guests, maps);
  EXPECT_FALSE(r.valid);
  EXPECT_TRUE(has_finding(r, "injectivity"));
}

TEST(VerifyPackingTest, TotalityIsReported) {
  const std::vector<Graph> guests{path_graph(3)};
  const VerificationReport unmapped = verify_packing(3, {}, guests, std::vector<Embedding>{embedding_of(0, {0, kUnmapped, 2})});
  EXPECT_TRUE(has_finding(unmapped, "totality"));
  const VerificationReport outside = verify_packing(3, {}, guests, std::vector<Embedding>{embedding_of(0, {0, 1, 3})});
  EXPECT_TRUE(has_finding(outside, "totality"));
  const VerificationReport missing = verify_packing(3, {}, guests, std::vector<Embedding>{});
  EXPECT_TRUE(has_finding(missing, "totality"));
}

TEST(VerifyPackingTest, HostEdgesAreChecked) {
  const std::vector<Graph> guests{path_graph(3)};
  const std::vector<Edge> host{Edge(0, 1), Edge(1, 2)};
  EXPECT_TRUE(verify_packing(3, host, guests, std::vector<Embedding>{embedding_of(0, {0, 1, 2})}).valid);
  const VerificationReport r = verify_packing(3, host, guests, std::vector<Embedding>{embedding_of(0, {1, 0, 2})});
  EXPECT_TRUE(has_finding(r, "host"));
}

TEST(BruteForceTest, TwoClawsDoNotPackIntoK4) {
  const std::vector<Graph> guests{star_graph(3), star_graph(3)};
  EXPECT_EQ(brute_force_pack(guests, 4).status, BruteForceStatus::kInfeasible);
  EXPECT_FALSE(oracle::packable(guests, 4));
}

TEST(BruteForceTest, FanoPlaneFromSevenTriangles) {
  const std::vector<Graph> guests(7, complete_graph(3));
  const BruteForceResult r = brute_force_pack(guests, 7);
  ASSERT_EQ(r.status, BruteForceStatus::kPacking);
  const VerificationReport v = verify_packing(7, {}, guests, r.embeddings);
  EXPECT_TRUE(v.valid);
  EXPECT_DOUBLE_EQ(v.density, 1.0);
}

TEST(BruteForceTest, PathAndStarIntoK5) {
  const std::vector<Graph> guests{path_graph(4), star_graph(4)};
  EXPECT_TRUE(oracle::packable(guests, 5));
  // A spanning path cannot avoid the centre of a spanning star.
  EXPECT_FALSE(oracle::packable({path_graph(5), star_graph(4)}, 5));
  EXPECT_EQ(brute_force_pack(std::vector<Graph>{path_graph(5), star_graph(4)}, 5).status, BruteForceStatus::kInfeasible);
  const BruteForceResult r = brute_force_pack(guests, 5);
  ASSERT_EQ(r.status, BruteForceStatus::kPacking);
  EXPECT_TRUE(verify_packing(5, {}, guests, r.embeddings).valid);
}

TEST(BruteForceTest, BudgetExhaustion) {
  const std::vector<Graph> guests(7, complete_graph(3));
  EXPECT_EQ(brute_force_pack(guests, 7, 3).status, BruteForceStatus::kBudgetExhausted);
  EXPECT_THROW(brute_force_pack(guests, 9), std::invalid_argument);
}

TEST(BruteForceTest, AgreesWithPermutationSearch) {
  std::mt19937_64 rng(17);
  int feasible = 0;
  int infeasible = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const int n = 4 + trial % 3;
    const int count = n == 6 ? 2 : 3;
    std::vector<Graph> guests;
    for (int g = 0; g < count; ++g) {
      const int order = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(n - 1));
      guests.push_back(oracle::gnp(order, 0.3 + 0.1 * static_cast<double>(trial % 5), rng()));
    }
    const bool expected = oracle::packable(guests, n);
    const BruteForceResult r = brute_force_pack(guests, n);
    ASSERT_NE(r.status, BruteForceStatus::kBudgetExhausted);
    EXPECT_EQ(r.status == BruteForceStatus::kPacking, expected) << "trial " << trial;
    if (r.status == BruteForceStatus::kPacking) {
      EXPECT_TRUE(verify_packing(n, {}, guests, r.embeddings).valid);
      ++feasible;
    } else {
      ++infeasible;
    }
  }
  EXPECT_GT(feasible, 10);
  EXPECT_GT(infeasible, 10);
}

TEST(DivisibilityTest, Examples) {
  EXPECT_TRUE(divisibility_check(complete_graph(3), 7).pass);
  const DivisibilityResult six = divisibility_check(complete_graph(3), 6);
  EXPECT_FALSE(six.pass);
  EXPECT_FALSE(six.reasons.empty());
  // Necessary only: claws pass on K_4 yet do not pack.
  EXPECT_TRUE(divisibility_check(star_graph(3), 4).pass);
  EXPECT_THROW(divisibility_check(Graph(3), 5), std::invalid_argument);
}

}  // namespace
}  // namespace graphpack
