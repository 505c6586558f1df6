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

// Acceptance suite: one PASS/FAIL line per criterion.
//
// Exit status is nonzero when a hard criterion fails, except for criteria
// listed in kKnownGaps (still printed as FAIL). --strict drops that list.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "graphpack/balance.hpp"
#include "graphpack/clique_engine.hpp"
#include "graphpack/completion.hpp"
#include "graphpack/hypergraph.hpp"
#include "graphpack/pipeline.hpp"
#include "graphpack/report.hpp"
#include "graphpack/verify.hpp"
#include "oracles.hpp"

namespace graphpack {
namespace {

// The Oberwolfach desk case: Phase III runs out of completion edges at
// this density and order.
const std::set<int> kKnownGaps{4};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  bool soft_flag = false;
  std::string detail;
};

// Every pipeline run made by the suite; criteria 1 and 9 audit them.
struct Corpus {
  std::vector<std::pair<RunConfig, PackingReport>> runs;
  double seconds = 0.0;

  const PackingReport& run(const RunConfig& cfg) {
    const auto t0 = Clock::now();
    PackingReport r = run_pipeline(cfg);
    seconds += seconds_since(t0);
    runs.emplace_back(cfg, std::move(r));
    return runs.back().second;
  }
};

RunConfig tree_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.n = 200;
  cfg.max_degree = 3;
  cfg.family = "tpc_sequence";
  cfg.tree_min_order = 128;
  cfg.gamma = 0.2;
  cfg.delta = 0.0;
  cfg.zeta = 0.0;
  cfg.p0 = 0.4;
  cfg.layers = 1;
  cfg.use_cliques = false;
  cfg.seed = seed;
  return cfg;
}

RunConfig oberwolfach_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.n = 201;
  cfg.max_degree = 2;
  cfg.family = "oberwolfach";
  cfg.count = 60;
  cfg.cycle_lengths.assign(67, 3);
  cfg.gamma = 0.3334;
  cfg.delta = 0.0;
  cfg.zeta = 0.0;
  cfg.p0 = 0.7;
  cfg.layers = 1;
  cfg.clique_order = 2;
  cfg.factor_epsilon = 0.33;
  cfg.instance_retries = 100;
  cfg.run_retries = 4;
  cfg.seed = seed;
  return cfg;
}

RunConfig separator_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.n = 200;
  cfg.family = "bounded_components";
  cfg.count = 2;
  cfg.component_order = 30;
  cfg.delta = 0.03;
  cfg.zeta = 0.1;
  cfg.p0 = 0.5;
  cfg.layers = 1;
  cfg.use_cliques = false;
  cfg.seed = seed;
  return cfg;
}

RunConfig clique_route_config(std::uint64_t seed) {
  RunConfig cfg;
  cfg.n = 150;
  cfg.family = "trees";
  cfg.count = 12;
  cfg.tree_min_order = 20;
  cfg.delta = 0.0;
  cfg.zeta = 0.0;
  cfg.p0 = 0.5;
  cfg.layers = 1;
  cfg.seed = seed;
  return cfg;
}

Outcome correctness_gate(Corpus& corpus) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) corpus.run(separator_config(seed));
  for (std::uint64_t seed = 1; seed <= 5; ++seed) corpus.run(clique_route_config(seed));
  for (int n = 6; n <= 8; ++n) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      RunConfig cfg = tree_config(seed);
      cfg.family = "trees";
      cfg.n = n;
      cfg.count = 2;
      cfg.tree_min_order = 3;
      cfg.p0 = 0.5;
      cfg.epsilon = 0.2;
      std::int64_t edges = 0;
      for (const Graph& g : build_inputs(cfg)) edges += g.edge_count();
      if (static_cast<double>(edges) > 0.8 * n * (n - 1) / 2.0) continue;
      corpus.run(cfg);
    }
  }
  int valid = 0;
  int violations = 0;
  for (const auto& [cfg, r] : corpus.runs) {
    if (!r.valid) continue;
    ++valid;
    const std::vector<Graph> inputs = build_inputs(cfg);
    const VerificationReport v = verify_packing(cfg.n, {}, inputs, r.input_embeddings);
    violations += static_cast<int>(v.findings.size() + r.verification.findings.size());
    if (!v.valid || v.guest_edges != r.total_edges) ++violations;
  }
  Outcome o;
  o.pass = violations == 0 && valid > 0 && corpus.seconds <= 600.0;
  o.detail = std::to_string(corpus.runs.size()) + " runs, " + std::to_string(valid) + " valid, " +
             std::to_string(violations) + " violations, " + std::to_string(corpus.seconds) + " s";
  return o;
}

Outcome brute_force_oracle() {
  auto t0 = Clock::now();
  const BruteForceResult claws = brute_force_pack(std::vector<Graph>{star_graph(3), star_graph(3)}, 4);
  const double claw_s = seconds_since(t0);
  t0 = Clock::now();
  const std::vector<Graph> triangles(7, complete_graph(3));
  const BruteForceResult fano = brute_force_pack(triangles, 7);
  const double fano_s = seconds_since(t0);
  bool fano_ok = fano.status == BruteForceStatus::kPacking;
  if (fano_ok) {
    const VerificationReport v = verify_packing(7, {}, triangles, fano.embeddings);
    fano_ok = v.valid && v.guest_edges == 21;
  }
  Outcome o;
  o.pass = claws.status == BruteForceStatus::kInfeasible && fano_ok && claw_s <= 5 && fano_s <= 5;
  o.detail = std::string("claws ") + status_name(claws.status) + " (" + std::to_string(claw_s) +
             " s), STS(7) " + status_name(fano.status) + " (" + std::to_string(fano_s) + " s)";
  return o;
}

Outcome pipeline_seeds(Corpus& corpus, const std::function<RunConfig(std::uint64_t)>& make,
                       double max_density, int needed) {
  int valid = 0;
  double slowest = 0.0;
  double density = 0.0;
  std::string phases;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const double before = corpus.seconds;
    const PackingReport& r = corpus.run(make(seed));
    slowest = std::max(slowest, corpus.seconds - before);
    density = r.density;
    if (r.valid) {
      ++valid;
    } else {
      phases += (phases.empty() ? "" : ",") + r.failure_phase;
    }
  }
  Outcome o;
  o.pass = valid >= needed && slowest <= 300.0 && density <= max_density + 1e-9;
  o.detail = std::to_string(valid) + "/10 valid, density " + std::to_string(density) + ", slowest " +
             std::to_string(slowest) + " s" + (phases.empty() ? "" : ", failures: " + phases);
  return o;
}

std::vector<WeightVector> unit_square(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<WeightVector> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back({{unit(rng), unit(rng)}, static_cast<int>(i)});
  return out;
}

Outcome vector_balancing() {
  int large_ok = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    BalanceOptions options;
    options.seed = seed;
    options.throw_on_unmet = false;
    const PartitionResult r = balanced_partition(unit_square(1000, 5000 + seed), 10, options);
    worst = std::max(worst, r.discrepancy);
    large_ok += r.discrepancy <= 6.0 ? 1 : 0;
  }
  int small_ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t count = 1 + seed % 12;
    const int m = 2 + static_cast<int>(seed % 2);
    const auto vectors = unit_square(count, 9000 + seed);
    BalanceOptions options;
    options.seed = seed;
    options.throw_on_unmet = false;
    const PartitionResult r = balanced_partition(vectors, m, options);
    std::vector<std::vector<double>> coords;
    for (const auto& w : vectors) coords.push_back(w.coords);
    small_ok += r.discrepancy <= 2 * oracle::exhaustive_partition_optimum(coords, m) + 1e-9 ? 1 : 0;
  }
  Outcome o;
  o.pass = large_ok >= 99 && small_ok == 100;
  o.detail = "|A|=1000: " + std::to_string(large_ok) + "/100 within 6 (worst " + std::to_string(worst) +
             "), small: " + std::to_string(small_ok) + "/100 within 2x optimum";
  return o;
}

bool factors_edge_disjoint(const Graph& g, const FactorCollection& f, int l) {
  std::vector<std::vector<Edge>> images;
  for (const auto& factor : f.factors) {
    std::set<Vertex> seen;
    for (const auto& cell : factor.cells) {
      if (static_cast<int>(cell.size()) != l) return false;
      std::vector<Edge> edges;
      for (std::size_t a = 0; a < cell.size(); ++a) {
        if (!seen.insert(cell[a]).second) return false;
        for (std::size_t b = a + 1; b < cell.size(); ++b) {
          if (!g.has_edge(cell[a], cell[b])) return false;
          edges.emplace_back(cell[a], cell[b]);
        }
      }
      images.push_back(edges);
    }
  }
  return oracle::edge_disjoint(images);
}

Outcome clique_factors() {
  FactorOptions small;
  small.clique_order = 2;
  const Graph k6 = complete_graph(6);
  const FactorCollection f6 = clique_factor_collection(k6, small);
  bool full = f6.factors.size() == 5 && factors_edge_disjoint(k6, f6, 2);
  for (const auto& factor : f6.factors) full = full && factor.cells.size() == 3;

  const auto t0 = Clock::now();
  const Graph g = oracle::gnp(300, 0.5, 2026);
  FactorOptions large;
  large.clique_order = 4;
  large.seed = 1;
  large.factor_count = kTargetFactors;
  const FactorCollection f = clique_factor_collection(g, large);
  const double s = seconds_since(t0);
  const bool disjoint = factors_edge_disjoint(g, f, 4);
  Outcome o;
  o.pass = full && f.factors.size() >= 30 && f.min_coverage_fraction >= 0.75 && disjoint && s <= 120;
  o.detail = "K6: " + std::to_string(f6.factors.size()) + " factors" + (full ? " covering" : " NOT covering") +
             "; G(300,0.5): " + std::to_string(f.factors.size()) + " factors, min coverage " +
             std::to_string(f.min_coverage_fraction) + (disjoint ? ", edge-disjoint" : ", OVERLAP") + ", " +
             std::to_string(s) + " s";
  return o;
}

Outcome hypergraph_coloring() {
  int proper = 0;
  int total = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const CliqueEnumeration e = enumerate_cliques(oracle::gnp(40 + static_cast<int>(seed), 0.4, seed), 3);
    ColoringOptions options;
    options.seed = seed;
    const Coloring c = proper_hyperedge_coloring(e.cliques, options);
    proper += is_proper(e.cliques, c.color) ? 1 : 0;
    ++total;
  }
  const CliqueEnumeration e = enumerate_cliques(oracle::gnp(150, 0.5, 3), 3);
  const Coloring c = proper_hyperedge_coloring(e.cliques);
  proper += is_proper(e.cliques, c.color) ? 1 : 0;
  ++total;
  const int degree = e.cliques.max_degree();
  Outcome o;
  o.pass = proper == total;
  o.soft_flag = c.colors > 1.5 * degree;
  o.detail = std::to_string(proper) + "/" + std::to_string(total) + " proper; G(150,0.5) triangles: " +
             std::to_string(c.colors) + " colors vs 1.5*Delta = " + std::to_string(1.5 * degree) +
             (o.soft_flag ? " (soft target missed)" : " (soft target met)");
  return o;
}

Outcome resilience() {
  const auto t0 = Clock::now();
  const ResilienceResult r = estimate_resilience(150, 0.4, 0.5, 100, 4);
  const double s = seconds_since(t0);
  int ok = 0;
  for (const auto& t : r.trials) ok += t.survived ? 1 : 0;
  Outcome o;
  o.pass = ok >= 95 && s <= 60;
  o.detail = std::to_string(ok) + "/100 survive, budget " + std::to_string(r.per_vertex_budget) +
             " per vertex, " + std::to_string(s) + " s";
  return o;
}

Outcome runtime_assertions(const Corpus& corpus) {
  int successful = 0;
  int phase2 = 0;
  int bad = 0;
  for (const auto& [cfg, r] : corpus.runs) {
    if (!r.valid) continue;
    ++successful;
    phase2 += r.max_zone_load > 0 ? 1 : 0;
    if (r.zone_cap_breaches != 0 || r.eligibility_conflicts != 0 || r.max_zone_load > r.zone_cap + 1e-9) ++bad;
  }
  Outcome o;
  o.pass = bad == 0 && phase2 > 0;
  o.detail = std::to_string(successful) + " successful runs (" + std::to_string(phase2) +
             " with separators in zones), " + std::to_string(bad) + " with nonzero counters";
  return o;
}

Outcome determinism() {
  bool same = true;
  for (const RunConfig& cfg : {tree_config(3), separator_config(3), clique_route_config(3)}) {
    same = same && report_json_text(run_pipeline(cfg)) == report_json_text(run_pipeline(cfg));
  }
  Outcome o;
  o.pass = same;
  o.detail = same ? "3 configs byte-identical" : "reports differ";
  return o;
}

}  // namespace
}  // namespace graphpack

int main(int argc, char** argv) {
  using namespace graphpack;
  const bool strict = argc > 1 && std::strcmp(argv[1], "--strict") == 0;
  Corpus corpus;
  struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
  };
  // The corpus gate runs last so it audits every pipeline run of the suite.
  const std::vector<Criterion> criteria{
      {2, "brute-force oracle", brute_force_oracle},
      {3, "trees n=200", [&] { return pipeline_seeds(corpus, tree_config, 0.6, 8); }},
      {4, "oberwolfach n=201", [&] { return pipeline_seeds(corpus, oberwolfach_config, 0.6, 8); }},
      {5, "vector balancing", vector_balancing},
      {6, "clique factors", clique_factors},
      {7, "hypergraph coloring", hypergraph_coloring},
      {8, "resilience lab", resilience},
      {10, "determinism", determinism},
      {1, "correctness gate", [&] { return correctness_gate(corpus); }},
      {9, "runtime assertions", [&] { return runtime_assertions(corpus); }},
  };
  std::vector<std::pair<int, std::string>> lines;
  int fatal = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::string status = o.pass ? "PASS" : "FAIL";
    if (o.pass && o.soft_flag) status = "PASS (flagged)";
    if (!o.pass && !strict && kKnownGaps.count(c.id)) {
      status = "FAIL (known gap)";
    } else if (!o.pass) {
      ++fatal;
    }
    char line[1024];
    std::snprintf(line, sizeof(line), "criterion %2d %-22s %-17s %s", c.id, c.name, status.c_str(), o.detail.c_str());
    lines.emplace_back(c.id, line);
    std::printf("%s\n", line);
    std::fflush(stdout);
  }
  std::sort(lines.begin(), lines.end());
  std::printf("\nsummary\n");
  for (const auto& [id, line] : lines) std::printf("%s\n", line.c_str());
  return fatal == 0 ? 0 : 1;
}
