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

// Experiment harness behind the hagopt tool: algorithm dispatch, comparison
// and sweep reports, and the CSV they are written as.

#ifndef HAG_EXPERIMENTS_HPP_
#define HAG_EXPERIMENTS_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hag/exact.hpp"
#include "hag/graph.hpp"
#include "hag/greedy.hpp"
#include "hag/heuristics.hpp"
#include "hag/ingest.hpp"

namespace hag {

enum class Algorithm { kFull, kPartial, kDegree, kHub, kOptimal };

std::string to_string(Algorithm algo);
// Accepts full, partial, degree, hub, optimal; throws Error otherwise.
Algorithm parse_algorithm(const std::string& name);

// Runs one algorithm. The heuristics need d = 2 and take only k and the
// stopping rule from cfg; optimal needs a single-layer config.
HagResult run_algorithm(Algorithm algo, const GnnComputationGraph& g,
                        const OptimizerConfig& cfg,
                        const OracleOptions& oracle = {});

struct TrialRow {
  std::string algorithm;
  std::string source;  // dataset name, or "er" for generated graphs
  NodeId n = 0;
  std::optional<double> p;
  int k = 0;
  int d = 2;
  LayerMode layer_mode = LayerMode::kSingle;
  int trial = 0;
  std::uint64_t seed = 0;
  std::int64_t value = 0;
  std::optional<std::int64_t> optimal;
  std::optional<Rational> alpha;
  double elapsed_ms = 0;
  // False when the oracle ran over budget; optimal and alpha are then empty.
  bool complete = true;

  bool operator==(const TrialRow&) const = default;
};

// Trial rows grouped by everything except trial and seed (and k too when
// pooling over k). Means and sample standard deviations.
struct AggregateRow {
  std::string algorithm;
  std::string source;
  NodeId n = 0;
  std::optional<double> p;
  std::optional<int> k;  // empty when pooled over k
  int d = 2;
  LayerMode layer_mode = LayerMode::kSingle;
  int trials = 0;
  int complete = 0;
  double mean_value = 0;
  double sd_value = 0;
  // Over the complete rows only; empty if there are none.
  std::optional<double> mean_alpha;
  std::optional<double> mean_one_minus_alpha;
  std::optional<double> sd_one_minus_alpha;
  double mean_elapsed_ms = 0;

  bool operator==(const AggregateRow&) const = default;
};

// algorithm versus baseline on the same input.
struct ComparisonRow {
  std::string algorithm;
  std::string baseline;
  std::string source;
  int k = 0;
  // 1 when both values are 0; empty when only the baseline is.
  std::optional<double> value_ratio;
  std::optional<double> runtime_ratio;

  bool operator==(const ComparisonRow&) const = default;
};

// Multi-layer over single-layer FullGreedy, averaged over k = 1..k_max.
// Percent improvement is taken per k and then averaged; k with a zero
// single-layer value are left out.
struct ImprovementRow {
  std::string source;
  int k_max = 0;
  int ks_counted = 0;
  double mean_single = 0;
  double mean_multi = 0;
  double mean_improvement_pct = 0;
  double sd_improvement_pct = 0;

  bool operator==(const ImprovementRow&) const = default;
};

struct ExperimentReport {
  std::string kind;  // optimize, compare, experiment-er, experiment-layers
  bool pool_k = false;
  std::vector<TrialRow> trials;
  std::vector<AggregateRow> aggregates;
  std::vector<ComparisonRow> comparisons;
  std::vector<ImprovementRow> improvements;

  // One header row, then one row per trial, aggregate, comparison and
  // improvement, told apart by the row_type column. Cells that do not apply
  // are empty.
  std::string to_csv() const;
};

std::vector<AggregateRow> aggregate_trials(const std::vector<TrialRow>& rows,
                                           bool pool_k);

std::vector<ImprovementRow> layer_improvements(
    const std::vector<TrialRow>& rows);

// Runs body(0), ..., body(count - 1) on up to `threads` workers (0 means
// hardware concurrency). The first exception thrown is rethrown.
void parallel_for(int count, int threads, const std::function<void(int)>& body);

struct GraphInput {
  // Either an edge-list file or an Erdos-Renyi draw when path is empty.
  std::string path;
  Directedness directedness = Directedness::kDirected;
  ErConfig er;
};

// Loads the graph and a display name for report rows.
std::pair<DirectedGraph, std::string> load_graph(const GraphInput& input);

struct OptimizeOutcome {
  HagResult result;
  DirectedGraph graph;
  std::string summary;  // value=<v> k_used=<k'> elapsed_ms=<t>
};

OptimizeOutcome cmd_optimize(const GraphInput& input, Algorithm algo,
                             const OptimizerConfig& cfg,
                             const OracleOptions& oracle = {});

std::string summary_line(const HagResult& result);

// step,in_set,receivers,marginal,cumulative with in_set as "a b c".
std::string trace_csv(const HagResult& result);

// One trial row per algorithm, then every ordered pair of distinct list
// positions as a comparison row. When optimal is in the list its value
// fills the optimal and alpha columns of the other rows.
ExperimentReport cmd_compare(const GraphInput& input,
                             const std::vector<Algorithm>& algorithms,
                             const OptimizerConfig& cfg,
                             const OracleOptions& oracle = {});

struct ErExperimentConfig {
  NodeId n = 15;
  std::vector<double> p_grid;
  int trials = 50;
  std::vector<int> ks = {2, 3};
  std::uint64_t seed = 1;
  bool undirected = false;
  OptimizerConfig base;  // k is taken from ks
  OracleOptions oracle;
  int threads = 0;
};

// 0.1, 0.2, ..., 0.9.
std::vector<double> default_p_grid();

// FullGreedy and PartialGreedy against the oracle on trials x p_grid
// graphs; trial t of every p uses seed + t.
ExperimentReport cmd_experiment_er(const ErExperimentConfig& cfg);

struct LayersConfig {
  int k_max = 100;
  OptimizerConfig base;  // k and layer_mode are overridden
};

// FullGreedy single- and multi-layer for k = 1..k_max. A greedy run with
// k_max steps passes through the k-step result for every smaller k, so one
// run per layer mode suffices; each row reports that run's elapsed time.
ExperimentReport cmd_experiment_layers(const GraphInput& input,
                                       const LayersConfig& cfg);

}  // namespace hag

#endif  // HAG_EXPERIMENTS_HPP_
