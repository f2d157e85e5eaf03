// Copyright 2026 The Authors.
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

// hagopt: build HAGs, compare optimizers, run the experiment sweeps and the
// property suite.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hag/experiments.hpp"
#include "hag/ingest.hpp"
#include "hag/validation.hpp"

namespace {

struct CommonFlags {
  std::string input;
  bool undirected = false;
  hag::NodeId er_n = 0;
  double p = 0.5;
  std::uint64_t seed = 1;
  bool er_undirected = false;
  int k = 1;
  int d = 2;
  bool multi_layer = false;
  int candidate_floor = 2;
  bool no_stop = false;
  std::string completion = "auto";
  std::int64_t budget = 10'000'000;
  std::string report;
};

void add_graph_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--input", f.input, "SNAP edge-list file");
  cmd->add_flag("--undirected", f.undirected, "Treat input edges as undirected");
  cmd->add_option("--er-n", f.er_n,
                  "Without --input: generate G(n, p) with this many nodes");
  cmd->add_option("--p", f.p, "Edge probability for generated graphs");
  cmd->add_option("--seed", f.seed, "Seed for generated graphs");
  cmd->add_flag("--er-undirected", f.er_undirected,
                "Draw generated graphs once per unordered pair");
}

void add_optimizer_flags(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--k", f.k, "Maximum number of intermediate nodes");
  cmd->add_option("--d", f.d, "In-degree of intermediate nodes");
  auto* single = cmd->add_flag("--single-layer", "Intermediates take senders only (default)");
  auto* multi = cmd->add_flag("--multi-layer", f.multi_layer,
                              "Intermediates may take other intermediates");
  single->excludes(multi);
  cmd->add_option("--candidate-floor", f.candidate_floor,
                  "PartialGreedy skips in-sets shared by fewer receivers");
  cmd->add_flag("--no-stop-on-nonpositive", f.no_stop,
                "Keep adding nodes when the best marginal is not positive");
  cmd->add_option("--completion", f.completion, "auto, blossom or bruteforce")
      ->check(CLI::IsMember({"auto", "blossom", "bruteforce"}));
  cmd->add_option("--budget", f.budget, "Subset budget of the optimal solver");
}

hag::GraphInput graph_input(const CommonFlags& f) {
  if (f.input.empty() && f.er_n <= 0) {
    throw hag::Error("give --input FILE or --er-n N");
  }
  hag::GraphInput in;
  in.path = f.input;
  in.directedness =
      f.undirected ? hag::Directedness::kUndirected : hag::Directedness::kDirected;
  in.er = {f.er_n, f.p, f.seed, f.er_undirected};
  return in;
}

hag::OptimizerConfig optimizer_config(const CommonFlags& f) {
  hag::OptimizerConfig cfg;
  cfg.k = f.k;
  cfg.d = f.d;
  cfg.layer_mode = f.multi_layer ? hag::LayerMode::kMulti : hag::LayerMode::kSingle;
  cfg.candidate_floor = f.candidate_floor;
  cfg.stop_on_nonpositive = !f.no_stop;
  static const std::map<std::string, hag::CompletionMode> modes = {
      {"auto", hag::CompletionMode::kAuto},
      {"blossom", hag::CompletionMode::kBlossom},
      {"bruteforce", hag::CompletionMode::kBruteForce}};
  cfg.completion = modes.at(f.completion);
  hag::validate(cfg);
  return cfg;
}

hag::OracleOptions oracle_options(const CommonFlags& f) {
  hag::OracleOptions opts;
  opts.budget = f.budget;
  return opts;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hag::Error("cannot write " + path);
  out << text;
  if (!out) throw hag::Error("error writing " + path);
}

// CSV goes to --report, or to standard output without one.
void emit_report(const hag::ExperimentReport& report, const std::string& path) {
  if (path.empty()) {
    std::cout << report.to_csv();
  } else {
    write_file(path, report.to_csv());
  }
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", x);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical aggregation graph optimizer"};
  app.require_subcommand(1);
  CommonFlags f;

  auto* optimize = app.add_subcommand("optimize", "Build one HAG");
  std::string algo = "full";
  std::string out_path, dot_path;
  add_graph_flags(optimize, f);
  add_optimizer_flags(optimize, f);
  optimize->add_option("--algo", algo, "full, partial, degree, hub or optimal");
  optimize->add_option("--out", out_path, "Write the HAG as JSON");
  optimize->add_option("--report", f.report, "Write the value trace as CSV");
  optimize->add_option("--dot", dot_path, "Write the HAG as Graphviz");

  auto* compare = app.add_subcommand("compare", "Run several algorithms on one graph");
  std::vector<std::string> algos = {"full", "partial"};
  add_graph_flags(compare, f);
  add_optimizer_flags(compare, f);
  compare->add_option("--algo", algos, "Comma-separated algorithms")->delimiter(',');
  compare->add_option("--report", f.report, "CSV report path");

  auto* er = app.add_subcommand("experiment-er",
                                "Greedy optimizers against the optimum on G(n, p)");
  hag::ErExperimentConfig er_cfg;
  std::vector<int> ks = {2, 3};
  er->add_option("--n", er_cfg.n, "Nodes per graph");
  er->add_option("--p", er_cfg.p_grid, "Comma-separated p grid (default 0.1..0.9)")
      ->delimiter(',');
  er->add_option("--trials", er_cfg.trials, "Graphs per p");
  er->add_option("--k", ks, "Comma-separated k values")->delimiter(',');
  er->add_option("--d", f.d, "In-degree of intermediate nodes");
  er->add_option("--seed", f.seed, "Trial t uses seed + t");
  er->add_flag("--er-undirected", f.er_undirected, "Undirected G(n, p)");
  er->add_option("--candidate-floor", f.candidate_floor, "PartialGreedy floor");
  er->add_flag("--no-stop-on-nonpositive", f.no_stop, "Always use all k nodes");
  er->add_option("--budget", f.budget, "Subset budget of the optimal solver");
  er->add_option("--threads", er_cfg.threads, "Worker threads (0: all cores)");
  er->add_option("--report", f.report, "CSV report path");

  auto* layers = app.add_subcommand(
      "experiment-layers", "FullGreedy single- versus multi-layer for k = 1..K");
  hag::LayersConfig layers_cfg;
  layers->add_option("--input", f.input, "SNAP edge-list file")->required();
  layers->add_flag("--undirected", f.undirected, "Treat edges as undirected");
  layers->add_option("--k", layers_cfg.k_max, "Largest k");
  layers->add_option("--d", f.d, "In-degree of intermediate nodes");
  layers->add_flag("--no-stop-on-nonpositive", f.no_stop, "Always use all k nodes");
  layers->add_option("--report", f.report, "CSV report path");

  auto* validate = app.add_subcommand("validate", "Run the property suite");
  hag::ValidateOptions val;
  validate->add_option("--seed", val.seed, "First instance seed");
  validate->add_option("--sizes", val.sizes, "Comma-separated graph sizes")
      ->delimiter(',');
  validate->add_option("--trials", val.instances, "Instances per property");
  validate->add_flag("--inject-fault", val.inject_fault,
                     "Corrupt every HAG before checking paths");

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) {
      auto outcome = hag::cmd_optimize(graph_input(f), hag::parse_algorithm(algo),
                                       optimizer_config(f), oracle_options(f));
      if (!out_path.empty()) {
        write_file(out_path, hag::serialize_hag(outcome.result.final));
      }
      if (!dot_path.empty()) write_file(dot_path, hag::export_dot(outcome.result.final));
      if (!f.report.empty()) write_file(f.report, hag::trace_csv(outcome.result));
      std::cout << outcome.summary << "\n";
    } else if (compare->parsed()) {
      std::vector<hag::Algorithm> list;
      for (const auto& a : algos) list.push_back(hag::parse_algorithm(a));
      auto report = hag::cmd_compare(graph_input(f), list, optimizer_config(f),
                                     oracle_options(f));
      emit_report(report, f.report);
      if (!f.report.empty()) {
        for (const auto& row : report.trials) {
          std::cout << row.algorithm << " value=" << row.value
                    << " elapsed_ms=" << fmt(row.elapsed_ms) << "\n";
        }
        for (const auto& c : report.comparisons) {
          std::cout << c.algorithm << "/" << c.baseline << " value_ratio="
                    << (c.value_ratio ? fmt(*c.value_ratio) : "inf")
                    << " runtime_ratio="
                    << (c.runtime_ratio ? fmt(*c.runtime_ratio) : "inf") << "\n";
        }
      }
    } else if (er->parsed()) {
      er_cfg.ks = ks;
      er_cfg.seed = f.seed;
      er_cfg.undirected = f.er_undirected;
      er_cfg.base.d = f.d;
      er_cfg.base.candidate_floor = f.candidate_floor;
      er_cfg.base.stop_on_nonpositive = !f.no_stop;
      er_cfg.oracle.budget = f.budget;
      auto report = hag::cmd_experiment_er(er_cfg);
      emit_report(report, f.report);
      if (!f.report.empty()) {
        for (const auto& a : report.aggregates) {
          std::cout << a.algorithm << " p=" << fmt(*a.p) << " k=" << *a.k
                    << " mean_one_minus_alpha="
                    << (a.mean_one_minus_alpha ? fmt(*a.mean_one_minus_alpha) : "n/a")
                    << " complete=" << a.complete << "/" << a.trials << "\n";
        }
      }
    } else if (layers->parsed()) {
      layers_cfg.base.d = f.d;
      layers_cfg.base.stop_on_nonpositive = !f.no_stop;
      hag::GraphInput in;
      in.path = f.input;
      in.directedness =
          f.undirected ? hag::Directedness::kUndirected : hag::Directedness::kDirected;
      auto report = hag::cmd_experiment_layers(in, layers_cfg);
      emit_report(report, f.report);
      if (!f.report.empty()) {
        for (const auto& m : report.improvements) {
          std::cout << m.source << " mean_single=" << fmt(m.mean_single)
                    << " mean_multi=" << fmt(m.mean_multi)
                    << " mean_improvement_pct=" << fmt(m.mean_improvement_pct)
                    << " sd_improvement_pct=" << fmt(m.sd_improvement_pct) << "\n";
        }
      }
    } else if (validate->parsed()) {
      auto report = hag::cmd_validate(val);
      std::cout << report.transcript();
      return report.ok() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
