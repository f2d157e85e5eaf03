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

#include "hag/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

namespace hag {
namespace {

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Shortest round-trip form, independent of the locale.
std::string fmt(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

template <typename T>
std::string fmt_opt(const std::optional<T>& x) {
  if (!x) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return fmt(*x);
  } else {
    return std::to_string(*x);
  }
}

std::string fmt_rational(const std::optional<Rational>& r) {
  return r ? fmt(to_double(*r)) : "";
}

// Mean and sample standard deviation, summed in input order.
std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  if (xs.empty()) return {0, 0};
  double sum = 0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0};
  double sq = 0;
  for (double x : xs) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(xs.size() - 1))};
}

std::optional<double> ratio(double num, double den) {
  if (den == 0) return num == 0 ? std::optional<double>(1.0) : std::nullopt;
  return num / den;
}

void fill_alpha(TrialRow& row, std::int64_t optimal) {
  row.optimal = optimal;
  row.alpha = approximation_ratio(row.value, optimal).alpha;
}

}  // namespace

std::string to_string(Algorithm algo) {
  switch (algo) {
    case Algorithm::kFull: return "full";
    case Algorithm::kPartial: return "partial";
    case Algorithm::kDegree: return "degree";
    case Algorithm::kHub: return "hub";
    case Algorithm::kOptimal: return "optimal";
  }
  return "?";
}

Algorithm parse_algorithm(const std::string& name) {
  for (Algorithm a : {Algorithm::kFull, Algorithm::kPartial, Algorithm::kDegree,
                      Algorithm::kHub, Algorithm::kOptimal}) {
    if (to_string(a) == name) return a;
  }
  throw Error("unknown algorithm '" + name +
              "' (expected full, partial, degree, hub or optimal)");
}

HagResult run_algorithm(Algorithm algo, const GnnComputationGraph& g,
                        const OptimizerConfig& cfg, const OracleOptions& oracle) {
  validate(cfg);
  HeuristicOptions heur;
  heur.stop_on_nonpositive = cfg.stop_on_nonpositive;
  switch (algo) {
    case Algorithm::kFull:
      return full_greedy(g, cfg);
    case Algorithm::kPartial:
      return partial_greedy(g, cfg);
    case Algorithm::kDegree:
    case Algorithm::kHub:
      if (cfg.d != 2) throw Error(to_string(algo) + " heuristic needs d = 2");
      return algo == Algorithm::kDegree ? degree_heuristic(g, cfg.k, heur)
                                        : hub_heuristic(g, cfg.k, heur);
    case Algorithm::kOptimal:
      if (cfg.layer_mode != LayerMode::kSingle) {
        throw Error("optimal solver is single-layer only");
      }
      return optimal_single_layer(g, cfg.k, cfg.d, oracle).best;
  }
  throw Error("unknown algorithm");
}

std::vector<AggregateRow> aggregate_trials(const std::vector<TrialRow>& rows,
                                           bool pool_k) {
  using Key = std::tuple<std::string, std::string, NodeId, std::optional<double>,
                         std::optional<int>, int, LayerMode>;
  std::map<Key, std::size_t> index;
  std::vector<std::vector<const TrialRow*>> groups;
  std::vector<Key> keys;
  for (const TrialRow& r : rows) {
    Key key{r.algorithm, r.source, r.n, r.p,
            pool_k ? std::nullopt : std::optional<int>(r.k), r.d, r.layer_mode};
    auto [it, fresh] = index.emplace(key, groups.size());
    if (fresh) {
      groups.emplace_back();
      keys.push_back(key);
    }
    groups[it->second].push_back(&r);
  }
  std::vector<AggregateRow> out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    AggregateRow a;
    std::tie(a.algorithm, a.source, a.n, a.p, a.k, a.d, a.layer_mode) = keys[i];
    std::vector<double> values, alphas, gaps, times;
    for (const TrialRow* r : groups[i]) {
      ++a.trials;
      values.push_back(static_cast<double>(r->value));
      times.push_back(r->elapsed_ms);
      if (r->complete && r->alpha) {
        ++a.complete;
        alphas.push_back(to_double(*r->alpha));
        gaps.push_back(to_double(1 - *r->alpha));
      }
    }
    std::tie(a.mean_value, a.sd_value) = mean_sd(values);
    a.mean_elapsed_ms = mean_sd(times).first;
    if (!alphas.empty()) {
      a.mean_alpha = mean_sd(alphas).first;
      auto [m, s] = mean_sd(gaps);
      a.mean_one_minus_alpha = m;
      a.sd_one_minus_alpha = s;
    }
    out.push_back(a);
  }
  return out;
}

std::vector<ImprovementRow> layer_improvements(const std::vector<TrialRow>& rows) {
  // source -> k -> (single, multi)
  std::map<std::string, std::map<int, std::pair<std::optional<std::int64_t>,
                                                std::optional<std::int64_t>>>>
      by_source;
  std::vector<std::string> order;
  for (const TrialRow& r : rows) {
    if (r.algorithm != to_string(Algorithm::kFull)) continue;
    if (!by_source.count(r.source)) order.push_back(r.source);
    auto& cell = by_source[r.source][r.k];
    (r.layer_mode == LayerMode::kSingle ? cell.first : cell.second) = r.value;
  }
  std::vector<ImprovementRow> out;
  for (const std::string& source : order) {
    ImprovementRow row;
    row.source = source;
    std::vector<double> singles, multis, pcts;
    for (const auto& [k, cell] : by_source[source]) {
      if (!cell.first || !cell.second) continue;
      row.k_max = std::max(row.k_max, k);
      singles.push_back(static_cast<double>(*cell.first));
      multis.push_back(static_cast<double>(*cell.second));
      if (*cell.first != 0) {
        pcts.push_back(100.0 * static_cast<double>(*cell.second - *cell.first) /
                       static_cast<double>(*cell.first));
      }
    }
    if (singles.empty()) continue;
    row.ks_counted = static_cast<int>(pcts.size());
    row.mean_single = mean_sd(singles).first;
    row.mean_multi = mean_sd(multis).first;
    std::tie(row.mean_improvement_pct, row.sd_improvement_pct) = mean_sd(pcts);
    out.push_back(row);
  }
  return out;
}

std::string ExperimentReport::to_csv() const {
  std::string out =
      "row_type,algorithm,baseline,source,n,p,k,d,layer_mode,trial,seed,value,"
      "optimal,alpha,one_minus_alpha,elapsed_ms,complete,trials,mean_value,"
      "sd_value,mean_alpha,mean_one_minus_alpha,sd_one_minus_alpha,"
      "mean_elapsed_ms,value_ratio,runtime_ratio,mean_single,mean_multi,"
      "mean_improvement_pct,sd_improvement_pct\n";
  auto line = [&out](std::initializer_list<std::string> cells) {
    bool first = true;
    for (const std::string& c : cells) {
      if (!first) out += ',';
      out += c;
      first = false;
    }
    out += '\n';
  };
  for (const TrialRow& r : trials) {
    std::optional<Rational> gap;
    if (r.alpha) gap = 1 - *r.alpha;
    line({"trial", r.algorithm, "", r.source, std::to_string(r.n), fmt_opt(r.p),
          std::to_string(r.k), std::to_string(r.d), to_string(r.layer_mode),
          std::to_string(r.trial), std::to_string(r.seed), std::to_string(r.value),
          fmt_opt(r.optimal), fmt_rational(r.alpha), fmt_rational(gap),
          fmt(r.elapsed_ms), r.complete ? "1" : "0", "", "", "", "", "", "", "",
          "", "", "", "", "", ""});
  }
  for (const AggregateRow& a : aggregates) {
    line({"aggregate", a.algorithm, "", a.source, std::to_string(a.n),
          fmt_opt(a.p), fmt_opt(a.k), std::to_string(a.d), to_string(a.layer_mode),
          "", "", "", "", "", "", "", std::to_string(a.complete),
          std::to_string(a.trials), fmt(a.mean_value), fmt(a.sd_value),
          fmt_opt(a.mean_alpha), fmt_opt(a.mean_one_minus_alpha),
          fmt_opt(a.sd_one_minus_alpha), fmt(a.mean_elapsed_ms), "", "", "", "",
          "", ""});
  }
  for (const ComparisonRow& c : comparisons) {
    line({"comparison", c.algorithm, c.baseline, c.source, "", "",
          std::to_string(c.k), "", "", "", "", "", "", "", "", "", "", "", "", "",
          "", "", "", "", fmt_opt(c.value_ratio), fmt_opt(c.runtime_ratio), "",
          "", "", ""});
  }
  for (const ImprovementRow& m : improvements) {
    line({"improvement", to_string(Algorithm::kFull), "single", m.source, "", "",
          std::to_string(m.k_max), "", "multi", "", "", "", "", "", "", "", "",
          std::to_string(m.ks_counted), "", "", "", "", "", "", "", "",
          fmt(m.mean_single), fmt(m.mean_multi), fmt(m.mean_improvement_pct),
          fmt(m.sd_improvement_pct)});
  }
  return out;
}

void parallel_for(int count, int threads, const std::function<void(int)>& body) {
  if (count <= 0) return;
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, count);
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (int i = next++; i < count; i = next++) {
      {
        std::lock_guard lock(error_mu);
        if (error) return;
      }
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mu);
        if (!error) error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::pair<DirectedGraph, std::string> load_graph(const GraphInput& input) {
  if (input.path.empty()) return {gen_erdos_renyi(input.er), "er"};
  auto parsed = read_snap_edge_list(input.path, {input.directedness});
  return {std::move(parsed.graph),
          std::filesystem::path(input.path).stem().string()};
}

std::string summary_line(const HagResult& result) {
  char ms[32];
  std::snprintf(ms, sizeof(ms), "%.3f", result.elapsed_ms);
  return "value=" + std::to_string(result.value()) +
         " k_used=" + std::to_string(result.k_used()) + " elapsed_ms=" + ms;
}

std::string trace_csv(const HagResult& result) {
  std::string out = "step,in_set,receivers,marginal,cumulative\n";
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const TraceStep& s = result.trace[i];
    std::string in;
    for (NodeId v : s.in_set) {
      if (!in.empty()) in += ' ';
      in += std::to_string(v);
    }
    out += std::to_string(i + 1) + ',' + in + ',' + std::to_string(s.receivers) +
           ',' + std::to_string(s.marginal) + ',' + std::to_string(s.cumulative) +
           '\n';
  }
  return out;
}

OptimizeOutcome cmd_optimize(const GraphInput& input, Algorithm algo,
                             const OptimizerConfig& cfg,
                             const OracleOptions& oracle) {
  OptimizeOutcome out;
  out.graph = load_graph(input).first;
  out.result = run_algorithm(algo, GnnComputationGraph(out.graph), cfg, oracle);
  out.summary = summary_line(out.result);
  return out;
}

ExperimentReport cmd_compare(const GraphInput& input,
                             const std::vector<Algorithm>& algorithms,
                             const OptimizerConfig& cfg,
                             const OracleOptions& oracle) {
  auto [graph, source] = load_graph(input);
  GnnComputationGraph g(graph);
  ExperimentReport report;
  report.kind = "compare";
  std::optional<std::int64_t> optimal;
  for (Algorithm algo : algorithms) {
    HagResult res = run_algorithm(algo, g, cfg, oracle);
    TrialRow row;
    row.algorithm = to_string(algo);
    row.source = source;
    row.n = graph.node_count();
    if (input.path.empty()) {
      row.p = input.er.p;
      row.seed = input.er.seed;
    }
    row.k = cfg.k;
    row.d = cfg.d;
    row.layer_mode = algo == Algorithm::kDegree || algo == Algorithm::kHub ||
                             algo == Algorithm::kOptimal
                         ? LayerMode::kSingle
                         : cfg.layer_mode;
    row.value = res.value();
    row.elapsed_ms = res.elapsed_ms;
    if (algo == Algorithm::kOptimal) optimal = row.value;
    report.trials.push_back(row);
  }
  if (optimal) {
    for (TrialRow& row : report.trials) {
      if (row.layer_mode == LayerMode::kSingle) fill_alpha(row, *optimal);
    }
  }
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    for (std::size_t j = 0; j < report.trials.size(); ++j) {
      if (i == j) continue;
      const TrialRow& a = report.trials[i];
      const TrialRow& b = report.trials[j];
      report.comparisons.push_back(
          {a.algorithm, b.algorithm, source, cfg.k,
           ratio(static_cast<double>(a.value), static_cast<double>(b.value)),
           ratio(a.elapsed_ms, b.elapsed_ms)});
    }
  }
  report.aggregates = aggregate_trials(report.trials, false);
  return report;
}

std::vector<double> default_p_grid() {
  std::vector<double> grid;
  for (int i = 1; i <= 9; ++i) grid.push_back(i / 10.0);
  return grid;
}

ExperimentReport cmd_experiment_er(const ErExperimentConfig& cfg) {
  if (cfg.trials < 0 || cfg.n < 0) throw Error("trials and n must be >= 0");
  const auto grid = cfg.p_grid.empty() ? default_p_grid() : cfg.p_grid;
  for (int k : cfg.ks) {
    OptimizerConfig c = cfg.base;
    c.k = k;
    c.layer_mode = LayerMode::kSingle;
    validate(c);
  }
  const int items = static_cast<int>(grid.size()) * cfg.trials;
  std::vector<std::vector<TrialRow>> results(items);
  parallel_for(items, cfg.threads, [&](int item) {
    const double p = grid[item / cfg.trials];
    const int trial = item % cfg.trials;
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(trial);
    DirectedGraph graph = gen_erdos_renyi({cfg.n, p, seed, cfg.undirected});
    GnnComputationGraph g(graph);
    for (int k : cfg.ks) {
      OptimizerConfig c = cfg.base;
      c.k = k;
      c.layer_mode = LayerMode::kSingle;
      std::optional<std::int64_t> optimal;
      try {
        optimal = optimal_single_layer(g, k, c.d, cfg.oracle).optimal_value;
      } catch (const BudgetExceeded&) {
      }
      for (Algorithm algo : {Algorithm::kFull, Algorithm::kPartial}) {
        HagResult res = run_algorithm(algo, g, c);
        TrialRow row;
        row.algorithm = to_string(algo);
        row.source = "er";
        row.n = cfg.n;
        row.p = p;
        row.k = k;
        row.d = c.d;
        row.trial = trial;
        row.seed = seed;
        row.value = res.value();
        row.elapsed_ms = res.elapsed_ms;
        row.complete = optimal.has_value();
        if (optimal) fill_alpha(row, *optimal);
        results[item].push_back(row);
      }
    }
  });
  ExperimentReport report;
  report.kind = "experiment-er";
  for (auto& rows : results) {
    for (auto& r : rows) report.trials.push_back(std::move(r));
  }
  report.aggregates = aggregate_trials(report.trials, false);
  return report;
}

ExperimentReport cmd_experiment_layers(const GraphInput& input,
                                       const LayersConfig& cfg) {
  if (cfg.k_max < 1) throw Error("k_max must be at least 1");
  auto [graph, source] = load_graph(input);
  GnnComputationGraph g(graph);
  ExperimentReport report;
  report.kind = "experiment-layers";
  report.pool_k = true;
  for (LayerMode mode : {LayerMode::kSingle, LayerMode::kMulti}) {
    OptimizerConfig c = cfg.base;
    c.k = cfg.k_max;
    c.layer_mode = mode;
    HagResult res = full_greedy(g, c);
    for (int k = 1; k <= cfg.k_max; ++k) {
      TrialRow row;
      row.algorithm = to_string(Algorithm::kFull);
      row.source = source;
      row.n = graph.node_count();
      row.k = k;
      row.d = c.d;
      row.layer_mode = mode;
      const std::size_t steps = std::min<std::size_t>(k, res.trace.size());
      row.value = steps == 0 ? 0 : res.trace[steps - 1].cumulative;
      row.elapsed_ms = res.elapsed_ms;
      report.trials.push_back(row);
    }
  }
  report.aggregates = aggregate_trials(report.trials, true);
  report.improvements = layer_improvements(report.trials);
  return report;
}

}  // namespace hag
