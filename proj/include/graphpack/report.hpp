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

#ifndef GRAPHPACK_REPORT_HPP_
#define GRAPHPACK_REPORT_HPP_

#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphpack/config.hpp"
#include "graphpack/embedding.hpp"
#include "graphpack/pipeline.hpp"
#include "graphpack/verify.hpp"

namespace graphpack {

inline nlohmann::json verification_to_json(const VerificationReport& v) {
  nlohmann::json j;
  j["valid"] = v.valid;
  j["guest_edges"] = v.guest_edges;
  j["density"] = v.density;
  j["phase_checked_edges"] = v.phase_checked_edges;
  j["completion_max_vertex"] = v.completion_max_vertex;
  j["completion_max_pair"] = v.completion_max_pair;
  nlohmann::json counts = nlohmann::json::object();
  for (const char* kind : {"totality", "injectivity", "host", "overlap", "phase"}) counts[kind] = v.count(kind);
  j["finding_counts"] = counts;
  nlohmann::json findings = nlohmann::json::array();
  for (std::size_t i = 0; i < v.findings.size() && i < 20; ++i) {
    const Finding& f = v.findings[i];
    findings.push_back({{"kind", f.kind}, {"instance", f.instance}, {"other", f.other}, {"detail", f.detail}});
  }
  j["findings"] = findings;
  nlohmann::json spreads = nlohmann::json::array();
  for (const auto& s : v.spreads) {
    spreads.push_back({{"layer", s.layer}, {"max_a", s.max_a}, {"max_b", s.max_b}, {"max_pair", s.max_pair}});
  }
  j["spreads"] = spreads;
  return j;
}

// Canonical JSON: object keys sorted, fixed indentation. Timings appear
// only when the config asks for them.
inline nlohmann::json report_to_json(const PackingReport& r) {
  nlohmann::json j;
  j["valid"] = r.valid;
  j["failure_phase"] = r.failure_phase;
  j["failure_detail"] = r.failure_detail;
  j["config"] = config_to_json(r.config);
  j["seed"] = r.seed;
  j["n"] = r.n;
  j["input_count"] = r.input_count;
  j["instance_count"] = r.instance_count;
  j["total_edges"] = r.total_edges;
  j["density"] = r.density;
  j["component_bound"] = r.component_bound;
  j["matchings_target"] = r.matchings_target;
  j["batch_discrepancy"] = r.batch_discrepancy;
  nlohmann::json layers = nlohmann::json::array();
  for (const auto& l : r.layers) {
    layers.push_back({{"layer", l.layer},
                      {"batch_size", l.batch_size},
                      {"edge_sum", l.edge_sum},
                      {"attempts", l.attempts},
                      {"packed", l.packed},
                      {"factors", l.factors},
                      {"factor_min_coverage", l.factor_min_coverage},
                      {"clique_vertices", l.clique_vertices},
                      {"residual_vertices", l.residual_vertices},
                      {"clique_edges", l.clique_edges},
                      {"residual_edges", l.residual_edges},
                      {"spread",
                       {{"max_a", l.spread.max_a},
                        {"max_b", l.spread.max_b},
                        {"max_pair", l.spread.max_pair},
                        {"cap_a", l.spread.cap_a},
                        {"cap_b", l.spread.cap_b},
                        {"cap_pair", l.spread.cap_pair},
                        {"within_caps", l.spread.within_caps()}}},
                      {"last_error", l.last_error}});
  }
  j["layers"] = layers;
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& o : r.instances) {
    instances.push_back({{"instance", o.instance},
                         {"layer", o.layer},
                         {"order", o.order},
                         {"edges", o.edges},
                         {"separator_size", o.separator_size},
                         {"two_independent_size", o.two_independent_size},
                         {"component_bound", o.component_bound},
                         {"phase_reached", o.phase_reached},
                         {"matching_collection", o.matching_collection},
                         {"completion_attempts", o.completion_attempts}});
  }
  j["instances"] = instances;
  j["balance"] = {{"max_vertex", r.balance_max_vertex},
                  {"max_pair", r.balance_max_pair},
                  {"cap_vertex", r.balance_cap_vertex},
                  {"cap_pair", r.balance_cap_pair}};
  j["assertions"] = {{"zone_cap_breaches", r.zone_cap_breaches},
                     {"eligibility_conflicts", r.eligibility_conflicts},
                     {"max_zone_load", r.max_zone_load},
                     {"zone_cap", r.zone_cap}};
  j["retries"] = {{"run_attempts", r.run_attempts},
                  {"layer_retries_used", r.layer_retries_used},
                  {"repairs", r.repairs}};
  j["verification"] = verification_to_json(r.verification);
  j["input_verification"] = verification_to_json(r.input_verification);
  j["constant_notes"] = r.constant_notes;
  if (r.config.include_timings) {
    j["timings_ms"] = {{"prepare", r.timings.prepare_ms},
                       {"phase1", r.timings.phase1_ms},
                       {"phase2", r.timings.phase2_ms},
                       {"phase3", r.timings.phase3_ms},
                       {"verify", r.timings.verify_ms}};
  }
  return j;
}

inline std::string report_json_text(const PackingReport& r) { return report_to_json(r).dump(2) + "\n"; }

inline std::string csv_header() {
  return "seed,n,family,inputs,instances,valid,failure_phase,density,run_attempts,layer_retries,"
         "repairs,zone_cap_breaches,eligibility_conflicts,findings\n";
}

inline std::string csv_row(const PackingReport& r) {
  std::ostringstream out;
  out << r.seed << ',' << r.n << ',' << r.config.family << ',' << r.input_count << ','
      << r.instance_count << ',' << (r.valid ? 1 : 0) << ',' << r.failure_phase << ',' << r.density
      << ',' << r.run_attempts << ',' << r.layer_retries_used << ',' << r.repairs << ','
      << r.zone_cap_breaches << ',' << r.eligibility_conflicts << ','
      << (r.verification.findings.size() + r.input_verification.findings.size()) << '\n';
  return out.str();
}

enum class ReportFormat { kJson, kCsv };

inline void emit_report(const PackingReport& r, ReportFormat format, std::ostream& out) {
  if (format == ReportFormat::kJson) {
    out << report_json_text(r);
  } else {
    out << csv_header() << csv_row(r);
  }
}

inline void emit_report(const PackingReport& r, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  emit_report(r, format, out);
}

// ---------------------------------------------------------------------------
// Embedding dump: one line per guest, "i: v0→x0 v1→x1 ...".

inline constexpr const char* kArrow = "\xE2\x86\x92";

inline void write_dump(std::ostream& out, const std::vector<Embedding>& embeddings) {
  for (std::size_t i = 0; i < embeddings.size(); ++i) {
    out << i << ':';
    for (std::size_t v = 0; v < embeddings[i].map.size(); ++v) {
      out << ' ' << v << kArrow << embeddings[i].map[v];
    }
    out << '\n';
  }
}

class DumpFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::vector<Embedding> read_dump(std::istream& in) {
  std::vector<Embedding> out;
  std::string line;
  const std::string arrow = kArrow;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw DumpFormatError("missing ':' in dump line");
    const int id = std::stoi(line.substr(0, colon));
    if (id != static_cast<int>(out.size())) throw DumpFormatError("dump lines out of order");
    std::istringstream tokens(line.substr(colon + 1));
    std::vector<Vertex> map;
    std::string token;
    while (tokens >> token) {
      const auto at = token.find(arrow);
      if (at == std::string::npos) throw DumpFormatError("bad pair '" + token + "'");
      const int v = std::stoi(token.substr(0, at));
      const int x = std::stoi(token.substr(at + arrow.size()));
      if (v != static_cast<int>(map.size())) throw DumpFormatError("pairs out of order");
      map.push_back(x);
    }
    Embedding e(id, static_cast<int>(map.size()), Phase::kPhase3);
    e.map = std::move(map);
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace graphpack

#endif  // GRAPHPACK_REPORT_HPP_
