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

// Command-line front end: generate, pack, verify, bench, resilience.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "graphpack/completion.hpp"
#include "graphpack/config.hpp"
#include "graphpack/persist.hpp"
#include "graphpack/pipeline.hpp"
#include "graphpack/report.hpp"
#include "graphpack/verify.hpp"

namespace {

constexpr int kExitValid = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitConfig = 2;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int cmd_generate(const std::string& config_path, const std::string& out_dir) {
  const graphpack::RunConfig cfg = graphpack::load_config(config_path);
  const auto inputs = graphpack::build_inputs(cfg);
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    graphpack::save_graph((std::filesystem::path(out_dir) / ("input_" + std::to_string(i) + ".txt")).string(),
                          inputs[i]);
  }
  graphpack::save_instance_set(std::filesystem::path(out_dir) / "instances",
                               graphpack::prepare_instances(inputs, cfg));
  std::cout << "wrote " << inputs.size() << " graphs to " << out_dir << '\n';
  return kExitValid;
}

int cmd_pack(const std::string& config_path, std::string report_path, std::string dump_path,
             std::string csv_path) {
  const graphpack::RunConfig cfg = graphpack::load_config(config_path);
  if (report_path.empty()) report_path = cfg.report_path;
  if (dump_path.empty()) dump_path = cfg.dump_path;
  if (csv_path.empty()) csv_path = cfg.csv_path;
  const graphpack::PackingReport report = graphpack::run_pipeline(cfg);
  if (report_path.empty()) {
    graphpack::emit_report(report, graphpack::ReportFormat::kJson, std::cout);
  } else {
    graphpack::emit_report(report, graphpack::ReportFormat::kJson, report_path);
  }
  if (!csv_path.empty()) graphpack::emit_report(report, graphpack::ReportFormat::kCsv, csv_path);
  if (!dump_path.empty()) {
    std::ofstream out(dump_path, std::ios::binary);
    graphpack::write_dump(out, report.input_embeddings);
  }
  std::cerr << (report.valid ? "valid" : "invalid: " + report.failure_phase) << '\n';
  return report.valid ? kExitValid : kExitInvalid;
}

int cmd_verify(const std::string& config_path, const std::string& dump_path) {
  const graphpack::RunConfig cfg = graphpack::load_config(config_path);
  const auto inputs = graphpack::build_inputs(cfg);
  std::ifstream in(dump_path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + dump_path);
  const auto embeddings = graphpack::read_dump(in);
  const auto result = graphpack::verify_packing(cfg.n, {}, inputs, embeddings);
  std::cout << graphpack::verification_to_json(result).dump(2) << '\n';
  return result.valid ? kExitValid : kExitInvalid;
}

int cmd_bench(const std::string& config_path, int seeds, std::uint64_t first_seed,
              const std::string& csv_path) {
  graphpack::RunConfig cfg = graphpack::load_config(config_path);
  std::string text = graphpack::csv_header();
  int valid = 0;
  for (int s = 0; s < seeds; ++s) {
    cfg.seed = first_seed + static_cast<std::uint64_t>(s);
    const auto report = graphpack::run_pipeline(cfg);
    valid += report.valid ? 1 : 0;
    text += graphpack::csv_row(report);
  }
  if (csv_path.empty()) {
    std::cout << text;
  } else {
    write_text(csv_path, text);
  }
  std::cerr << valid << " of " << seeds << " runs valid\n";
  return valid == seeds ? kExitValid : kExitInvalid;
}

int cmd_resilience(int n, double p, double fraction, int trials, std::uint64_t seed,
                   const std::string& csv_path) {
  const auto result = graphpack::estimate_resilience(n, p, fraction, trials, seed);
  std::string text = "n,p,deletion_fraction,trial,pm_survived,seed\n";
  for (const auto& t : result.trials) {
    text += std::to_string(n) + ',' + std::to_string(p) + ',' + std::to_string(fraction) + ',' +
            std::to_string(t.trial) + ',' + (t.survived ? "1" : "0") + ',' + std::to_string(t.seed) + '\n';
  }
  if (csv_path.empty()) {
    std::cout << text;
  } else {
    write_text(csv_path, text);
  }
  std::cerr << "survival rate " << result.survival_rate() << '\n';
  return kExitValid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graphpack: edge-disjoint packing of bounded-degree graphs into K_n"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "instances";
  auto* generate = app.add_subcommand("generate", "write the configured input graphs to files");
  generate->add_option("-c,--config", config_path, "run config (JSON)")->required();
  generate->add_option("-o,--out", out_dir, "output directory");

  std::string report_path;
  std::string dump_path;
  std::string csv_path;
  auto* pack = app.add_subcommand("pack", "run the pipeline and write report and dump");
  pack->add_option("-c,--config", config_path, "run config (JSON)")->required();
  pack->add_option("-r,--report", report_path, "JSON report path (stdout when empty)");
  pack->add_option("-d,--dump", dump_path, "embedding dump path");
  pack->add_option("--csv", csv_path, "CSV summary path");

  auto* verify = app.add_subcommand("verify", "verify an embedding dump against the configured inputs");
  verify->add_option("-c,--config", config_path, "run config (JSON)")->required();
  verify->add_option("-d,--dump", dump_path, "embedding dump path")->required();

  int seeds = 10;
  std::uint64_t first_seed = 1;
  auto* bench = app.add_subcommand("bench", "seed sweep, one CSV row per run");
  bench->add_option("-c,--config", config_path, "run config (JSON)")->required();
  bench->add_option("--seeds", seeds, "number of seeds");
  bench->add_option("--first-seed", first_seed, "first seed");
  bench->add_option("--csv", csv_path, "CSV output path (stdout when empty)");

  int n = 150;
  double p = 0.4;
  double fraction = 0.5;
  int trials = 100;
  std::uint64_t seed = 1;
  auto* resilience = app.add_subcommand("resilience", "perfect-matching resilience lab");
  resilience->add_option("-n", n, "part size");
  resilience->add_option("-p", p, "edge probability");
  resilience->add_option("--fraction", fraction, "deletion fraction of np/2 per vertex");
  resilience->add_option("--trials", trials, "trials");
  resilience->add_option("--seed", seed, "seed");
  resilience->add_option("--csv", csv_path, "CSV output path (stdout when empty)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitConfig;
  }

  try {
    if (*generate) return cmd_generate(config_path, out_dir);
    if (*pack) return cmd_pack(config_path, report_path, dump_path, csv_path);
    if (*verify) return cmd_verify(config_path, dump_path);
    if (*bench) return cmd_bench(config_path, seeds, first_seed, csv_path);
    if (*resilience) return cmd_resilience(n, p, fraction, trials, seed, csv_path);
  } catch (const graphpack::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
  return kExitConfig;
}
