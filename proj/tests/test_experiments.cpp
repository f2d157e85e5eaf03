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

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "hag/experiments.hpp"
#include "hag/validation.hpp"

using namespace hag;

namespace {

GraphInput file(const std::string& name) {
  GraphInput in;
  in.path = std::string(HAG_TEST_DATA_DIR) + "/" + name;
  return in;
}

GraphInput er(NodeId n, double p, std::uint64_t seed) {
  GraphInput in;
  in.er = {n, p, seed};
  return in;
}

OptimizerConfig config(int k, bool stop = true) {
  OptimizerConfig cfg;
  cfg.k = k;
  cfg.stop_on_nonpositive = stop;
  return cfg;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t columns(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

}  // namespace

TEST_CASE("algorithm names") {
  for (auto a : {Algorithm::kFull, Algorithm::kPartial, Algorithm::kDegree,
                 Algorithm::kHub, Algorithm::kOptimal}) {
    CHECK(parse_algorithm(to_string(a)) == a);
  }
  CHECK_THROWS_AS(parse_algorithm("greedy"), Error);
  GnnComputationGraph g(hag::testing::twin_graph());
  auto cfg = config(1);
  cfg.d = 3;
  CHECK_THROWS_AS(run_algorithm(Algorithm::kDegree, g, cfg), Error);
  cfg = config(1);
  cfg.layer_mode = LayerMode::kMulti;
  CHECK_THROWS_AS(run_algorithm(Algorithm::kOptimal, g, cfg), Error);
}

TEST_CASE("optimize") {
  SUBCASE("twin graph, k = 1") {
    auto out = cmd_optimize(file("twin.txt"), Algorithm::kFull, config(1));
    CHECK(out.summary.rfind("value=2 k_used=1 elapsed_ms=", 0) == 0);
    CHECK(out.graph == hag::testing::twin_graph());
    CHECK(trace_csv(out.result) ==
          "step,in_set,receivers,marginal,cumulative\n1,0 1,3,2,2\n");
  }
  SUBCASE("k = 0 returns the input") {
    for (auto a : {Algorithm::kFull, Algorithm::kPartial, Algorithm::kDegree,
                   Algorithm::kHub, Algorithm::kOptimal}) {
      auto out = cmd_optimize(file("twin.txt"), a, config(0));
      CHECK(out.result.value() == 0);
      CHECK(out.result.final == HagGraph::from_gnn(GnnComputationGraph(out.graph),
                                                   LayerMode::kSingle, 2));
    }
  }
  SUBCASE("regime error names the receiver") {
    auto cfg = config(1);
    cfg.completion = CompletionMode::kBruteForce;
    try {
      cmd_optimize(file("wide_receiver.txt"), Algorithm::kPartial, cfg);
      FAIL("expected RegimeError");
    } catch (const RegimeError& e) {
      CHECK(e.receiver() == 0);
      CHECK(std::string(e.what()).find("receiver 0") != std::string::npos);
    }
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(cmd_optimize(file("absent.txt"), Algorithm::kFull, config(1)),
                    Error);
  }
}

TEST_CASE("compare") {
  SUBCASE("partial beats full on the gap graph") {
    auto report = cmd_compare(file("greedy_gap.txt"),
                              {Algorithm::kFull, Algorithm::kPartial, Algorithm::kOptimal},
                              config(3, false));
    REQUIRE(report.trials.size() == 3);
    CHECK(report.trials[0].value == 1);
    CHECK(report.trials[1].value == 2);
    CHECK(report.trials[2].value == 2);
    CHECK(*report.trials[0].alpha == Rational(1, 2));
    CHECK(*report.trials[1].alpha == Rational(1));
    REQUIRE(report.comparisons.size() == 6);
    const auto& c = report.comparisons[2];  // partial vs full
    CHECK(c.algorithm == "partial");
    CHECK(c.baseline == "full");
    CHECK(*c.value_ratio == 2.0);
  }
  SUBCASE("identical algorithms") {
    auto report = cmd_compare(er(12, 0.4, 3), {Algorithm::kFull, Algorithm::kFull},
                              config(3));
    REQUIRE(report.comparisons.size() == 2);
    for (const auto& c : report.comparisons) CHECK(*c.value_ratio == 1.0);
    CHECK(report.trials[0].value == report.trials[1].value);
  }
  SUBCASE("zero baseline") {
    auto report = cmd_compare(er(6, 0.0, 1), {Algorithm::kFull, Algorithm::kHub},
                              config(2));
    for (const auto& c : report.comparisons) CHECK(*c.value_ratio == 1.0);
  }
}

TEST_CASE("Erdos-Renyi sweep") {
  ErExperimentConfig cfg;
  cfg.n = 8;
  cfg.trials = 4;
  cfg.p_grid = {0.0, 0.5};
  cfg.seed = 11;
  auto report = cmd_experiment_er(cfg);
  REQUIRE(report.trials.size() == 2 * 4 * 2 * 2);
  SUBCASE("p = 0 gives alpha 1") {
    for (const auto& row : report.trials) {
      if (*row.p != 0.0) continue;
      CHECK(row.value == 0);
      CHECK(*row.optimal == 0);
      CHECK(*row.alpha == Rational(1));
    }
  }
  SUBCASE("rows follow trial order with seed + trial") {
    std::size_t i = 0;
    for (double p : cfg.p_grid) {
      for (int t = 0; t < cfg.trials; ++t) {
        for (int k : cfg.ks) {
          for (const char* algo : {"full", "partial"}) {
            const auto& row = report.trials[i++];
            CHECK(*row.p == p);
            CHECK(row.trial == t);
            CHECK(row.seed == cfg.seed + static_cast<std::uint64_t>(t));
            CHECK(row.k == k);
            CHECK(row.algorithm == algo);
          }
        }
      }
    }
  }
  SUBCASE("aggregates recompute from trials") {
    CHECK(report.aggregates == aggregate_trials(report.trials, false));
    CHECK(report.aggregates.size() == 2 * 2 * 2);
    for (const auto& row : report.trials) {
      CHECK(*row.alpha >= Rational(0));
      CHECK(*row.alpha <= Rational(1));
    }
  }
  SUBCASE("deterministic across thread counts") {
    auto strip = [](std::vector<TrialRow> rows) {
      for (auto& r : rows) r.elapsed_ms = 0;
      return rows;
    };
    for (int threads : {1, 3}) {
      auto again = cfg;
      again.threads = threads;
      CHECK(strip(cmd_experiment_er(again).trials) == strip(report.trials));
    }
  }
  SUBCASE("single trial is reproducible") {
    auto one = cfg;
    one.trials = 1;
    one.p_grid = {0.6};
    auto a = cmd_experiment_er(one);
    auto b = cmd_experiment_er(one);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
      CHECK(a.trials[i].value == b.trials[i].value);
      CHECK(a.trials[i].optimal == b.trials[i].optimal);
    }
  }
  SUBCASE("over budget rows are incomplete") {
    auto tight = cfg;
    tight.oracle.budget = 1;
    tight.p_grid = {0.9};
    auto r = cmd_experiment_er(tight);
    for (const auto& row : r.trials) {
      CHECK_FALSE(row.complete);
      CHECK_FALSE(row.alpha.has_value());
    }
    for (const auto& a : r.aggregates) {
      CHECK(a.complete == 0);
      CHECK_FALSE(a.mean_alpha.has_value());
    }
  }
}

TEST_CASE("aggregate statistics") {
  std::vector<TrialRow> rows(3);
  const std::int64_t values[] = {2, 4, 9};
  for (int i = 0; i < 3; ++i) {
    rows[i].algorithm = "full";
    rows[i].trial = i;
    rows[i].value = values[i];
    rows[i].optimal = 9;
    rows[i].alpha = Rational(values[i], 9);
  }
  auto agg = aggregate_trials(rows, false);
  REQUIRE(agg.size() == 1);
  CHECK(agg[0].trials == 3);
  CHECK(agg[0].mean_value == doctest::Approx(5.0));
  CHECK(agg[0].sd_value == doctest::Approx(std::sqrt(13.0)));
  CHECK(*agg[0].mean_alpha == doctest::Approx(15.0 / 27.0));
  CHECK(*agg[0].mean_one_minus_alpha == doctest::Approx(12.0 / 27.0));
  rows[1].k = 5;
  CHECK(aggregate_trials(rows, false).size() == 2);
  CHECK(aggregate_trials(rows, true).size() == 1);
}

TEST_CASE("layer experiment") {
  SUBCASE("disjoint pairs leave nothing for multi-layer") {
    // Receivers 4..9: three hold {0,1}, three hold {2,3}.
    std::string text = "# nodes: 10\n";
    for (int r = 4; r <= 9; ++r) {
      const int base = r < 7 ? 0 : 2;
      text += std::to_string(base) + " " + std::to_string(r) + "\n" +
              std::to_string(base + 1) + " " + std::to_string(r) + "\n";
    }
    const std::string path = "layers_pairs.txt";
    {
      std::ofstream(path) << text;
    }
    GraphInput in;
    in.path = path;
    LayersConfig cfg;
    cfg.k_max = 5;
    auto report = cmd_experiment_layers(in, cfg);
    REQUIRE(report.improvements.size() == 1);
    CHECK(report.improvements[0].mean_improvement_pct == 0.0);
    CHECK(report.improvements[0].mean_single == doctest::Approx(3.6));
    CHECK(report.trials.size() == 10);
    CHECK(report.aggregates == aggregate_trials(report.trials, true));
    CHECK(report.improvements == layer_improvements(report.trials));
    std::remove(path.c_str());
  }
  SUBCASE("prefix values match direct runs") {
    GraphInput in = file("greedy_gap.txt");
    LayersConfig cfg;
    cfg.k_max = 4;
    auto report = cmd_experiment_layers(in, cfg);
    GnnComputationGraph g(load_graph(in).first);
    for (const auto& row : report.trials) {
      auto c = config(row.k);
      c.layer_mode = row.layer_mode;
      CHECK(full_greedy(g, c).value() == row.value);
    }
  }
  SUBCASE("multi-layer helps when covers nest") {
    // Receivers with in-sets {0,1,2} x4 and {0,1} x2.
    std::vector<Edge> edges;
    for (NodeId r = 3; r < 9; ++r) {
      edges.push_back({0, r});
      edges.push_back({1, r});
      if (r < 7) edges.push_back({2, r});
    }
    DirectedGraph g(9, edges);
    const std::string path = "layers_nested.txt";
    {
      std::ofstream(path) << write_edge_list(g);
    }
    GraphInput in;
    in.path = path;
    LayersConfig cfg;
    cfg.k_max = 2;
    auto report = cmd_experiment_layers(in, cfg);
    REQUIRE(report.improvements.size() == 1);
    CHECK(report.improvements[0].mean_multi > report.improvements[0].mean_single);
    std::remove(path.c_str());
  }
}

TEST_CASE("CSV layout") {
  ErExperimentConfig cfg;
  cfg.n = 6;
  cfg.trials = 2;
  cfg.p_grid = {0.5};
  cfg.ks = {2};
  auto report = cmd_experiment_er(cfg);
  auto rows = lines(report.to_csv());
  REQUIRE(rows.size() == 1 + report.trials.size() + report.aggregates.size());
  CHECK(rows[0].rfind("row_type,algorithm,", 0) == 0);
  for (const auto& row : rows) CHECK(columns(row) == columns(rows[0]));
  CHECK(rows[1].rfind("trial,full,,er,6,0.5,2,2,single,0,1,", 0) == 0);
  CHECK(rows.back().rfind("aggregate,partial,,er,6,0.5,2,2,single,", 0) == 0);
}

TEST_CASE("parallel_for") {
  std::vector<int> hit(100, 0);
  parallel_for(100, 4, [&](int i) { hit[i] += 1; });
  CHECK(std::all_of(hit.begin(), hit.end(), [](int h) { return h == 1; }));
  CHECK_THROWS_AS(parallel_for(10, 2,
                               [](int i) {
                                 if (i == 3) throw Error("boom");
                               }),
                  Error);
  parallel_for(0, 2, [](int) { FAIL("no work expected"); });
}

TEST_CASE("validation suite") {
  ValidateOptions opts;
  opts.instances = 12;
  auto report = cmd_validate(opts);
  CHECK(report.ok());
  CHECK(report.properties.size() == 6);
  for (const auto& p : report.properties) {
    CHECK(p.instances == 12);
    CHECK(p.checks > 0);
  }
  opts.inject_fault = true;
  auto faulty = cmd_validate(opts);
  CHECK_FALSE(faulty.ok());
  bool flagged = false;
  for (const auto& p : faulty.properties) {
    if (p.name == "path equivalence") {
      flagged = true;
      CHECK(static_cast<std::int64_t>(p.failures.size()) >= p.checks);
    } else {
      CHECK(p.ok());
    }
  }
  CHECK(flagged);
  CHECK(faulty.transcript().find("FAIL path equivalence") != std::string::npos);
}

TEST_CASE("receiver matching enumeration") {
  ReceiverInstance h;
  h.vertices = {0, 1, 2, 3};
  h.edges = {{0, {0, 1}, 1}, {1, {1, 2}, 1}, {2, {2, 3}, 1}};
  auto all = enumerate_receiver_matchings(h);
  std::vector<std::vector<NodeId>> expect = {{}, {0}, {0, 2}, {1}, {2}};
  CHECK(all == expect);
}
