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

#ifndef GRAPHPACK_PIPELINE_HPP_
#define GRAPHPACK_PIPELINE_HPP_

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "graphpack/balance.hpp"
#include "graphpack/completion.hpp"
#include "graphpack/config.hpp"
#include "graphpack/instances.hpp"
#include "graphpack/pack_layer.hpp"
#include "graphpack/slicer.hpp"
#include "graphpack/verify.hpp"

namespace graphpack {

struct LayerOutcome {
  int layer = 0;
  int batch_size = 0;
  std::int64_t edge_sum = 0;
  int attempts = 0;
  bool packed = false;
  int factors = 0;
  double factor_min_coverage = 0.0;
  std::int64_t clique_vertices = 0;
  std::int64_t residual_vertices = 0;
  std::int64_t clique_edges = 0;
  std::int64_t residual_edges = 0;
  SpreadTally spread;
  std::string last_error;
};

struct InstanceOutcome {
  int instance = 0;
  int layer = 0;
  int order = 0;
  std::int64_t edges = 0;
  int separator_size = 0;
  int two_independent_size = 0;
  int component_bound = 0;
  std::string phase_reached = "none";  // phase1, phase2, phase3
  int matching_collection = 0;
  int completion_attempts = 0;
};

struct PhaseTimings {
  double prepare_ms = 0;
  double phase1_ms = 0;
  double phase2_ms = 0;
  double phase3_ms = 0;
  double verify_ms = 0;
};

struct PackingReport {
  bool valid = false;
  std::string failure_phase;  // empty when valid
  std::string failure_detail;
  RunConfig config;
  std::uint64_t seed = 0;
  int n = 0;
  int input_count = 0;
  int instance_count = 0;
  std::int64_t total_edges = 0;
  double density = 0.0;
  int component_bound = 0;
  int matchings_target = 0;
  double batch_discrepancy = 0.0;
  std::vector<LayerOutcome> layers;
  std::vector<InstanceOutcome> instances;
  // Claim-10 style balance after Phase II.
  int balance_max_vertex = 0;
  int balance_max_pair = 0;
  double balance_cap_vertex = 0.0;
  double balance_cap_pair = 0.0;
  // Runtime assertion counters.
  std::int64_t zone_cap_breaches = 0;
  std::int64_t eligibility_conflicts = 0;
  int max_zone_load = 0;
  double zone_cap = 0.0;
  int run_attempts = 0;
  int layer_retries_used = 0;
  int repairs = 0;
  VerificationReport verification;        // normalized instances with phase plan
  VerificationReport input_verification;  // original inputs in K_n
  std::vector<std::string> constant_notes;
  PhaseTimings timings;
  // Final embeddings of the original inputs (for the dump), and of the
  // normalized instances.
  std::vector<Embedding> input_embeddings;
  std::vector<Embedding> instance_embeddings;
};

namespace detail {

using Clock = std::chrono::steady_clock;

inline double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

// Relations among the desk constants that the literal asymptotic chain
// would require; each failing one is noted in the report.
inline std::vector<std::string> constant_notes(const PipelineConstants& c) {
  std::vector<std::string> notes;
  if (c.gamma > 0) {
    const long literal_m = std::lround(1.0 / (c.gamma * c.gamma));
    if (literal_m != c.layers) {
      notes.push_back("layers M=" + std::to_string(c.layers) + " instead of round(gamma^-2)=" +
                      std::to_string(literal_m));
    }
  }
  if (c.zone_size() > 0 && c.zone_cap() < 1.0) notes.push_back("zone cap zeta^2 n below 1");
  if (!(c.delta < c.gamma * c.gamma)) notes.push_back("delta not below gamma^2");
  if (!(c.zeta * c.zeta < c.gamma)) notes.push_back("zeta^2 not below gamma");
  if (!(c.p0 < c.epsilon)) notes.push_back("p0 not below epsilon");
  return notes;
}

inline std::vector<Edge> placed_edges(const Graph& g, const Embedding& e) {
  std::vector<Edge> edges;
  for (const Edge& edge : g.edges()) {
    if (e.mapped(edge.u) && e.mapped(edge.v)) edges.emplace_back(e(edge.u), e(edge.v));
  }
  return edges;
}

// Rebuilds g_i (core by the direct embedder, then the separator) for one
// instance of `layer` after a failed completion.
class InstanceRepair {
 public:
  InstanceRepair(const SlicedHost& host, std::uint64_t seed, int restarts)
      : host_(host), seed_(seed), restarts_(restarts) {}

  bool operator()(PhaseState& state, int instance, int attempt) {
    const InstanceGraph& inst = state.instances->instances[static_cast<std::size_t>(instance)];
    const int k = state.layer_of[static_cast<std::size_t>(instance)];
    const int n = host_.n();
    Embedding& g = state.embeddings[static_cast<std::size_t>(instance)];
    const Embedding previous = g;
    const std::vector<Edge> old_edges = placed_edges(inst.graph, g);
    state.ledger.release_edges(old_edges);
    for (Vertex v : inst.separator) {
      if (g.mapped(v)) --state.zone_load[static_cast<std::size_t>(g(v))];
    }
    const Phase1View& v1 = phase1(k);
    const Phase2View& v2 = phase2(k);
    const VertexSet& zone = host_.zones[static_cast<std::size_t>(k - 1)];
    std::vector<char> forbidden(static_cast<std::size_t>(n), 0);
    for (Vertex z : zone) forbidden[static_cast<std::size_t>(z)] = 1;
    const std::vector<bool> core = inst.core_mask();
    // Anchors of the completion set lean toward hosts with spare
    // completion-layer edges.
    const Graph& completion = host_.layers.front();
    std::vector<double> room(static_cast<std::size_t>(n), 0.0);
    for (Vertex x = 0; x < n; ++x) {
      int spare = 0;
      for (Vertex y : completion.neighbors(x)) spare += state.ledger.is_used(x, y) ? 0 : 1;
      room[static_cast<std::size_t>(x)] = -spare;
    }
    const double widest = std::max(1.0, -*std::min_element(room.begin(), room.end()));
    for (double& r : room) r = 3.0 * r / widest;
    const std::vector<bool> anchors = core;
    for (int trial = 0; trial < 4; ++trial) {
      Rng rng(derive_seed(seed_, 0x726570ULL,
                          static_cast<std::uint64_t>(instance) * 4096 +
                              static_cast<std::uint64_t>(attempt) * 16 + static_cast<std::uint64_t>(trial)));
      Embedding fresh(instance, n, Phase::kPhase1);
      std::vector<char> taken(static_cast<std::size_t>(n), 0);
      detail::DirectEmbedder direct(v1.graph, state.ledger, forbidden);
      direct.set_bias(&room, &anchors);
      auto comps = connected_components(inst.graph, core);
      std::stable_sort(comps.begin(), comps.end(),
                       [](const auto& a, const auto& b) { return a.size() > b.size(); });
      std::vector<Edge> committed;
      bool ok = true;
      VertexSet singles;
      for (const auto& comp : comps) {
        if (comp.size() == 1) {
          singles.push_back(comp.front());
          continue;
        }
        if (!direct.embed_component(inst.graph, comp, core, fresh.map, taken, rng, restarts_, committed)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        VertexSet free_hosts;
        for (Vertex x = 0; x < n; ++x) {
          if (!forbidden[static_cast<std::size_t>(x)] && !taken[static_cast<std::size_t>(x)]) free_hosts.push_back(x);
        }
        if (free_hosts.size() < singles.size()) {
          ok = false;
        } else {
          shuffle(free_hosts, rng);
          for (std::size_t q = 0; q < singles.size(); ++q) fresh.map[static_cast<std::size_t>(singles[q])] = free_hosts[q];
        }
      }
      if (ok) {
        g = fresh;
        const std::int64_t breaches = state.zone_cap_breaches;
        try {
          embed_separator(state, v2, instance);
          return true;
        } catch (const NoCandidate&) {
          // Undo the partial separator and the core.
          const std::vector<Edge> partial = placed_edges(inst.graph, g);
          std::vector<Edge> separator_edges;
          for (const Edge& e : partial) {
            if (std::find(committed.begin(), committed.end(), e) == committed.end()) separator_edges.push_back(e);
          }
          state.ledger.release_edges(separator_edges);
          for (Vertex v : inst.separator) {
            if (g.mapped(v)) --state.zone_load[static_cast<std::size_t>(g(v))];
          }
          state.zone_cap_breaches = breaches;
        }
      }
      state.ledger.release_edges(committed);
    }
    g = previous;
    state.ledger.commit_edges(old_edges);
    for (Vertex v : inst.separator) {
      if (g.mapped(v)) ++state.zone_load[static_cast<std::size_t>(g(v))];
    }
    return false;
  }

 private:
  const Phase1View& phase1(int k) {
    auto& slot = views1_[k];
    if (!slot) slot = phase1_view(host_, k);
    return *slot;
  }
  const Phase2View& phase2(int k) {
    auto& slot = views2_[k];
    if (!slot) slot = phase2_view(host_, k);
    return *slot;
  }

  const SlicedHost& host_;
  std::uint64_t seed_;
  int restarts_;
  std::map<int, std::optional<Phase1View>> views1_;
  std::map<int, std::optional<Phase2View>> views2_;
};

struct AttemptFailure {
  std::string phase;
  std::string detail;
};

}  // namespace detail

// Normalizes the inputs and computes separators and 2-independent sets.
inline InstanceSet prepare_instances(const std::vector<Graph>& inputs, const RunConfig& cfg) {
  InstanceSet set = normalize_collection(inputs, cfg.n);
  InstanceParams params;
  params.separator_fraction = cfg.delta;
  params.two_independent_size = static_cast<int>(std::floor(cfg.gamma * cfg.n + 1e-9));
  for (InstanceGraph& inst : set.instances) {
    const Graph graph = inst.graph;
    inst = prepare_instance(graph, params);
  }
  return set;
}

// Composes instance embeddings with the normalization maps.
inline std::vector<Embedding> input_embeddings(const InstanceSet& set,
                                               const std::vector<Embedding>& instance_maps) {
  std::vector<Embedding> out;
  for (std::size_t i = 0; i < set.input_vertex_map.size(); ++i) {
    const auto& vmap = set.input_vertex_map[i];
    const Embedding& e = instance_maps[static_cast<std::size_t>(set.input_instance[i])];
    Embedding composed(static_cast<int>(i), static_cast<int>(vmap.size()), e.phase);
    for (std::size_t v = 0; v < vmap.size(); ++v) composed.map[v] = e.map[static_cast<std::size_t>(vmap[v])];
    out.push_back(std::move(composed));
  }
  return out;
}

// Full three-phase run with bounded retries. Throws ConfigError for
// invalid configurations; every other failure is reported.
inline PackingReport run_pipeline(const RunConfig& cfg) {
  validate_config(cfg);
  PackingReport report;
  report.config = cfg;
  report.seed = cfg.seed;
  report.n = cfg.n;
  report.matchings_target = cfg.matchings_target();

  auto t0 = detail::Clock::now();
  const std::vector<Graph> inputs = build_inputs(cfg);
  report.input_count = static_cast<int>(inputs.size());
  std::int64_t input_edges = 0;
  for (const Graph& g : inputs) {
    if (g.max_degree() > cfg.max_degree) {
      throw ConfigError("input graph exceeds max_degree " + std::to_string(cfg.max_degree));
    }
    input_edges += g.edge_count();
  }
  const double pairs = static_cast<double>(cfg.n) * (cfg.n - 1) / 2.0;
  if (static_cast<double>(input_edges) > (1.0 - cfg.epsilon) * pairs + 1e-9) {
    throw ConfigError("inputs have " + std::to_string(input_edges) + " edges, above (1-epsilon) C(n,2)");
  }
  report.total_edges = input_edges;
  report.density = pairs > 0 ? static_cast<double>(input_edges) / pairs : 0.0;

  InstanceSet set;
  try {
    set = prepare_instances(inputs, cfg);
  } catch (const std::exception& e) {
    report.failure_phase = "prepare";
    report.failure_detail = e.what();
    return report;
  }
  report.instance_count = static_cast<int>(set.instances.size());
  PipelineConstants c = cfg.constants();
  for (const auto& inst : set.instances) c.component_bound = std::max(c.component_bound, inst.component_bound);
  report.component_bound = c.component_bound;
  report.constant_notes = detail::constant_notes(c);
  report.zone_cap = c.zone_cap();
  if (cfg.include_timings) report.timings.prepare_ms = detail::elapsed_ms(t0);

  // Phase II/III order: descending edge count, then index.
  std::vector<int> by_edges(set.instances.size());
  std::iota(by_edges.begin(), by_edges.end(), 0);
  std::stable_sort(by_edges.begin(), by_edges.end(), [&](int a, int b) {
    return set.instances[static_cast<std::size_t>(a)].graph.edge_count() >
           set.instances[static_cast<std::size_t>(b)].graph.edge_count();
  });

  LayerOptions lopt;
  lopt.use_cliques = cfg.use_cliques;
  lopt.factor_epsilon = cfg.factor_epsilon;
  lopt.cap_slack = cfg.cap_slack;
  lopt.enforce_caps = cfg.enforce_caps;

  for (int attempt = 0; attempt <= cfg.run_retries; ++attempt) {
    report.run_attempts = attempt + 1;
    const std::uint64_t seed = attempt == 0 ? cfg.seed : derive_seed(cfg.seed, 0x72756eULL, attempt);
    c.seed = seed;
    report.layers.clear();
    report.instances.clear();
    report.layer_retries_used = 0;
    report.repairs = 0;
    report.failure_phase.clear();
    report.failure_detail.clear();

    std::optional<SlicedHost> host;
    try {
      host = slice_host(c);
    } catch (const SlicingError& e) {
      report.failure_phase = "slicing";
      report.failure_detail = e.what();
      continue;
    }
    BalanceOptions bopt;
    bopt.seed = derive_seed(seed, 0x677270ULL);
    bopt.throw_on_unmet = false;
    const BatchAssignment batches = group_graphs(set, c.layers, bopt);
    report.batch_discrepancy = batches.discrepancy;

    PhaseState state(*host, set);
    for (int k = 1; k <= c.layers; ++k) {
      for (int i : batches.batches[static_cast<std::size_t>(k - 1)]) state.layer_of[static_cast<std::size_t>(i)] = k;
    }
    std::optional<detail::AttemptFailure> failure;

    // Phases I and II, layer by layer; a failed layer is rolled back and
    // retried with a fresh sub-seed.
    for (int k = 1; k <= c.layers && !failure; ++k) {
      const std::vector<int>& batch = batches.batches[static_cast<std::size_t>(k - 1)];
      LayerOutcome outcome;
      outcome.layer = k;
      outcome.batch_size = static_cast<int>(batch.size());
      outcome.edge_sum = batches.edge_sums[static_cast<std::size_t>(k - 1)];
      const Phase1View v1 = phase1_view(*host, k);
      const Phase2View v2 = phase2_view(*host, k);
      const VertexSet& zone = host->zones[static_cast<std::size_t>(k - 1)];
      std::vector<int> order;
      for (int i : by_edges) {
        if (state.layer_of[static_cast<std::size_t>(i)] == k) order.push_back(i);
      }
      std::string stage;
      for (int r = 0; r < cfg.layer_retries && !outcome.packed; ++r) {
        ++outcome.attempts;
        if (r > 0) ++report.layer_retries_used;
        const PackingLedger snapshot = state.ledger;
        const std::vector<int> load_snapshot = state.zone_load;
        auto t1 = detail::Clock::now();
        stage = "phase1";
        try {
          LayerPacking packed = pack_layer(v1, zone, set, batch, c, state.ledger,
                                           derive_seed(seed, 0x6c6179ULL, static_cast<std::uint64_t>(k) * 64 + r),
                                           lopt);
          if (cfg.include_timings) report.timings.phase1_ms += detail::elapsed_ms(t1);
          for (std::size_t b = 0; b < batch.size(); ++b) {
            state.embeddings[static_cast<std::size_t>(batch[b])] = packed.embeddings[b];
          }
          outcome.factors = packed.factors;
          outcome.factor_min_coverage = packed.factor_min_coverage;
          outcome.clique_vertices = packed.clique_vertices;
          outcome.residual_vertices = packed.residual_vertices;
          outcome.clique_edges = packed.clique_edges;
          outcome.residual_edges = packed.residual_edges;
          outcome.spread = packed.spread;
          outcome.spread.a_hits.clear();
          outcome.spread.b_hits.clear();
          auto t2 = detail::Clock::now();
          stage = "phase2";
          embed_separators(state, v2, order);
          if (cfg.include_timings) report.timings.phase2_ms += detail::elapsed_ms(t2);
          outcome.packed = true;
        } catch (const std::exception& e) {
          outcome.last_error = e.what();
          state.ledger = snapshot;
          state.zone_load = load_snapshot;
          for (int i : batch) {
            state.embeddings[static_cast<std::size_t>(i)] =
                Embedding(i, set.instances[static_cast<std::size_t>(i)].graph.vertex_count());
          }
        }
      }
      if (!outcome.packed) {
        failure = detail::AttemptFailure{stage,
                                         "layer " + std::to_string(k) + ": " + outcome.last_error};
      }
      report.layers.push_back(std::move(outcome));
    }

    if (!failure) {
      const BalanceReport balance = check_balance(state, cfg.cap_slack, seed);
      report.balance_max_vertex = balance.max_vertex;
      report.balance_max_pair = balance.max_pair;
      report.balance_cap_vertex = balance.cap_vertex;
      report.balance_cap_pair = balance.cap_pair;

      CompletionOptions copt;
      copt.matchings_wanted = report.matchings_target;
      copt.retries = cfg.instance_retries;
      copt.seed = derive_seed(seed, 0x636f6dULL);
      detail::InstanceRepair repair(*host, derive_seed(seed, 0x726570ULL), lopt.component_restarts);
      auto t3 = detail::Clock::now();
      try {
        const CompletionStats stats =
            complete_embeddings(state, phase3_view(*host), by_edges, copt,
                                [&](PhaseState& s, int i, int a) { return repair(s, i, a); });
        report.repairs = stats.repairs;
        for (std::size_t i = 0; i < set.instances.size(); ++i) {
          InstanceOutcome o;
          o.instance = static_cast<int>(i);
          o.matching_collection = stats.collection_size[i];
          o.completion_attempts = stats.attempts[i];
          report.instances.push_back(o);
        }
      } catch (const CompletionFailed& e) {
        report.repairs = e.stats.repairs;
        failure = detail::AttemptFailure{"phase3", e.what()};
      } catch (const AuxSizeMismatch& e) {
        failure = detail::AttemptFailure{"phase3", e.what()};
      }
      if (cfg.include_timings) report.timings.phase3_ms += detail::elapsed_ms(t3);
    }

    report.zone_cap_breaches = state.zone_cap_breaches;
    report.eligibility_conflicts = state.eligibility_conflicts;
    report.max_zone_load = state.zone_load.empty()
                               ? 0
                               : *std::max_element(state.zone_load.begin(), state.zone_load.end());
    if (report.instances.empty()) {
      for (std::size_t i = 0; i < set.instances.size(); ++i) report.instances.push_back({static_cast<int>(i)});
    }
    for (std::size_t i = 0; i < set.instances.size(); ++i) {
      InstanceOutcome& o = report.instances[i];
      const InstanceGraph& inst = set.instances[i];
      o.layer = state.layer_of[i];
      o.order = inst.graph.non_isolated_count();
      o.edges = inst.graph.edge_count();
      o.separator_size = static_cast<int>(inst.separator.size());
      o.two_independent_size = static_cast<int>(inst.two_independent.size());
      o.component_bound = inst.component_bound;
      o.phase_reached = state.embeddings[i].domain_size() == 0 ? "none" : phase_name(state.embeddings[i].phase);
    }
    if (failure) {
      report.failure_phase = failure->phase;
      report.failure_detail = failure->detail;
      report.instance_embeddings = state.embeddings;
      continue;
    }

    // Independent verification decides validity.
    auto t4 = detail::Clock::now();
    PhasePlan plan;
    plan.host = &*host;
    for (std::size_t i = 0; i < set.instances.size(); ++i) {
      const InstanceGraph& inst = set.instances[i];
      plan.layer.push_back(state.layer_of[i]);
      plan.separator.push_back(inst.separator);
      plan.two_independent.push_back(inst.two_independent);
      plan.anchors_s.push_back(inst.anchors_s);
      plan.anchors_i.push_back(inst.anchors_i);
    }
    std::vector<Graph> guests;
    for (const auto& inst : set.instances) guests.push_back(inst.graph);
    report.verification = verify_packing(cfg.n, {}, guests, state.embeddings, &plan);
    report.instance_embeddings = state.embeddings;
    report.input_embeddings = input_embeddings(set, state.embeddings);
    report.input_verification = verify_packing(cfg.n, {}, inputs, report.input_embeddings);
    if (cfg.include_timings) report.timings.verify_ms = detail::elapsed_ms(t4);
    report.valid = report.verification.valid && report.input_verification.valid;
    if (!report.valid) {
      report.failure_phase = "verify";
      report.failure_detail = std::to_string(report.verification.findings.size() +
                                             report.input_verification.findings.size()) +
                              " findings";
    }
    return report;
  }
  return report;
}

}  // namespace graphpack

#endif  // GRAPHPACK_PIPELINE_HPP_
