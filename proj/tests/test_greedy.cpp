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

#include <map>
#include <numeric>
#include <set>

#include "doctest.h"
#include "fixtures.hpp"
#include "hag/combinations.hpp"
#include "hag/exact.hpp"
#include "hag/greedy.hpp"

using namespace hag;
using hag::testing::twin_graph;

namespace {

// Senders A..D = 0..3; receivers 4..7 hold {A,B}, {A,B,C,D}, {A,C}, {B,D}.
DirectedGraph gap_graph() {
  return DirectedGraph(8, {{0, 4}, {0, 5}, {0, 6}, {1, 4}, {1, 5}, {1, 7},
                           {2, 5}, {2, 6}, {3, 5}, {3, 7}});
}

OptimizerConfig config(int k, int d, LayerMode mode = LayerMode::kSingle,
                       bool stop = true) {
  OptimizerConfig cfg;
  cfg.k = k;
  cfg.d = d;
  cfg.layer_mode = mode;
  cfg.stop_on_nonpositive = stop;
  return cfg;
}

// Best completion value by enumerating every subset of hyperedges at every
// receiver.
std::int64_t exhaustive_completion(const PartialHag& p,
                                   const GnnComputationGraph& g) {
  std::int64_t total = 0;
  for (const auto& m : p.intermediates()) {
    total -= static_cast<std::int64_t>(m.in_set.size()) - 1;
  }
  for (NodeId r = 0; r < g.node_count(); ++r) {
    auto in = g.in_neighbors(r);
    std::vector<const IntermediateNode*> fit;
    for (const auto& m : p.intermediates()) {
      if (std::includes(in.begin(), in.end(), m.cover.begin(), m.cover.end())) {
        fit.push_back(&m);
      }
    }
    std::int64_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << fit.size()); ++mask) {
      std::set<NodeId> used;
      std::int64_t w = 0;
      bool ok = true;
      for (std::size_t i = 0; i < fit.size() && ok; ++i) {
        if (!(mask >> i & 1)) continue;
        for (NodeId x : fit[i]->cover) ok = ok && used.insert(x).second;
        w += static_cast<std::int64_t>(fit[i]->cover.size()) - 1;
      }
      if (ok) best = std::max(best, w);
    }
    total += best;
  }
  return total;
}

// Replays a FullGreedy trace against an independent residual simulation and
// checks each choice is the lex-min maximizer of |R_C|.
void check_full_greedy_steps(const GnnComputationGraph& g,
                             const OptimizerConfig& cfg,
                             const HagResult& res) {
  const NodeId n = g.node_count();
  std::vector<std::set<NodeId>> in(n);
  for (NodeId r = 0; r < n; ++r) {
    in[r] = {g.in_neighbors(r).begin(), g.in_neighbors(r).end()};
  }
  std::vector<std::set<NodeId>> covers;
  for (NodeId v = 0; v < n; ++v) covers.push_back({v});
  std::set<std::set<NodeId>> taken;
  for (const TraceStep& step : res.trace) {
    std::vector<NodeId> pool;
    for (NodeId x = 0; x < static_cast<NodeId>(covers.size()); ++x) {
      if (cfg.layer_mode == LayerMode::kMulti || x < n) pool.push_back(x);
    }
    std::int64_t best = -1;
    std::vector<NodeId> best_c;
    for_each_combination(pool, cfg.d, [&](const std::vector<NodeId>& c) {
      std::set<NodeId> u;
      std::size_t total = 0;
      for (NodeId x : c) {
        u.insert(covers[x].begin(), covers[x].end());
        total += covers[x].size();
      }
      if (u.size() != total || taken.count(u)) return true;
      std::int64_t count = 0;
      for (NodeId r = 0; r < n; ++r) {
        count += std::all_of(c.begin(), c.end(),
                             [&](NodeId x) { return in[r].count(x) > 0; });
      }
      if (count > best) {
        best = count;
        best_c = c;
      }
      return true;
    });
    REQUIRE(best >= 0);
    CHECK(step.receivers == best);
    CHECK(step.in_set == best_c);
    CHECK(step.marginal == (best - 1) * (cfg.d - 1));
    const NodeId m = static_cast<NodeId>(covers.size());
    std::set<NodeId> u;
    for (NodeId x : best_c) u.insert(covers[x].begin(), covers[x].end());
    covers.push_back(u);
    taken.insert(u);
    for (NodeId r = 0; r < n; ++r) {
      if (std::all_of(best_c.begin(), best_c.end(),
                      [&](NodeId x) { return in[r].count(x) > 0; })) {
        for (NodeId x : best_c) in[r].erase(x);
        in[r].insert(m);
      }
    }
  }
  for (NodeId r = 0; r < n; ++r) {
    auto got = res.final.receiver_in(r);
    CHECK(std::vector<NodeId>(got.begin(), got.end()) ==
          std::vector<NodeId>(in[r].begin(), in[r].end()));
  }
}

// Each PartialGreedy step must reach the best completion value over all
// candidate in-sets, with ties to the lex-min candidate.
void check_partial_greedy_steps(const GnnComputationGraph& g,
                                const OptimizerConfig& cfg,
                                const HagResult& res) {
  const NodeId n = g.node_count();
  PartialHag p(n, cfg.layer_mode, cfg.d);
  std::int64_t before = 0;
  for (const TraceStep& step : res.trace) {
    std::vector<NodeId> pool;
    for (NodeId x = 0; x < p.next_id(); ++x) {
      if (cfg.layer_mode == LayerMode::kMulti || x < n) pool.push_back(x);
    }
    std::optional<std::int64_t> best;
    std::vector<NodeId> best_c;
    for_each_combination(pool, cfg.d, [&](const std::vector<NodeId>& c) {
      auto u = p.union_cover(c);
      if (!u || p.find_cover(*u)) return true;
      PartialHag q = p;
      q.add(c);
      const std::int64_t v = exhaustive_completion(q, g);
      if (!best || v > *best) {
        best = v;
        best_c = c;
      }
      return true;
    });
    REQUIRE(best);
    CHECK(step.cumulative == *best);
    CHECK(step.marginal == *best - before);
    CHECK(step.in_set == best_c);
    p.add(step.in_set);
    before = *best;
  }
  CHECK(exhaustive_completion(p, g) == res.value());
  CHECK(res.final.partial() == p);
}

}  // namespace

TEST_CASE("k = 0 leaves the graph unchanged") {
  GnnComputationGraph g(twin_graph());
  for (auto* algo : {&full_greedy, &partial_greedy}) {
    auto res = algo(g, config(0, 2));
    CHECK(res.value() == 0);
    CHECK(res.final == HagGraph::from_gnn(g, LayerMode::kSingle, 2));
    CHECK(res.trace.empty());
  }
}

TEST_CASE("config validation") {
  GnnComputationGraph g(twin_graph());
  CHECK_THROWS_AS(full_greedy(g, config(-1, 2)), Error);
  CHECK_THROWS_AS(partial_greedy(g, config(1, 1)), Error);
}

TEST_CASE("twin graph, k = 1") {
  GnnComputationGraph g(twin_graph());
  for (auto* algo : {&full_greedy, &partial_greedy}) {
    auto res = algo(g, config(1, 2));
    REQUIRE(res.trace.size() == 1);
    CHECK(res.trace[0].in_set == std::vector<NodeId>{0, 1});
    CHECK(res.trace[0].receivers == 3);
    CHECK(res.value() == 2);
    CHECK(res.final == hag::testing::twin_hag());
  }
}

TEST_CASE("greedy gap graph") {
  GnnComputationGraph g(gap_graph());
  CHECK(optimal_single_layer(g, 3, 2).optimal_value == 2);
  SUBCASE("inserting every node") {
    auto full = full_greedy(g, config(3, 2, LayerMode::kSingle, false));
    auto partial = partial_greedy(g, config(3, 2, LayerMode::kSingle, false));
    CHECK(full.value() == 1);
    CHECK(full.k_used() == 3);
    CHECK(partial.value() == 2);
    CHECK(full.trace[0].in_set == std::vector<NodeId>{0, 1});
  }
  SUBCASE("stopping at non-positive marginals") {
    auto full = full_greedy(g, config(3, 2));
    auto partial = partial_greedy(g, config(3, 2));
    CHECK(full.value() == 1);
    CHECK(full.k_used() == 1);
    CHECK(partial.value() == 1);
  }
}

TEST_CASE("FullGreedy step optimality") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    const NodeId n = 3 + trial % 7;
    const auto mode = trial % 2 ? LayerMode::kMulti : LayerMode::kSingle;
    const int d = 2 + (trial / 2) % 2;
    const bool stop = trial % 3 != 0;
    auto g = GnnComputationGraph(hag::testing::random_graph(rng, n, 0.6));
    auto cfg = config(1 + trial % 4, d, mode, stop);
    auto res = full_greedy(g, cfg);
    CAPTURE(trial);
    check_full_greedy_steps(g, cfg, res);
    CHECK(verify_equivalence(res.final, g.source_graph()).ok);
    CHECK(check_structure(res.final).empty());
    const std::int64_t last = res.trace.empty() ? 0 : res.trace.back().cumulative;
    CHECK(last == res.value());
    if (stop) {
      for (std::size_t i = 1; i < res.trace.size(); ++i) {
        CHECK(res.trace[i].cumulative >= res.trace[i - 1].cumulative);
      }
    }
  }
}

TEST_CASE("FullGreedy at scale keeps its invariants") {
  std::mt19937_64 rng(8);
  auto dg = hag::testing::random_graph(rng, 60, 0.2);
  GnnComputationGraph g(dg);
  for (auto mode : {LayerMode::kSingle, LayerMode::kMulti}) {
    auto res = full_greedy(g, config(40, 2, mode));
    CHECK(verify_equivalence(res.final, dg).ok);
    CHECK(res.trace.back().cumulative == res.value());
    check_full_greedy_steps(g, config(40, 2, mode), res);
  }
}

TEST_CASE("PartialGreedy step optimality") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 120; ++trial) {
    const NodeId n = 3 + trial % 6;
    const auto mode = trial % 3 == 2 ? LayerMode::kMulti : LayerMode::kSingle;
    const int d = mode == LayerMode::kMulti ? 2 : 2 + trial % 2;
    const bool stop = trial % 4 != 0;
    auto g = GnnComputationGraph(hag::testing::random_graph(rng, n, 0.65));
    auto cfg = config(1 + trial % 3, d, mode, stop);
    auto res = partial_greedy(g, cfg);
    CAPTURE(trial);
    check_partial_greedy_steps(g, cfg, res);
    CHECK(verify_equivalence(res.final, g.source_graph()).ok);
    if (stop) {
      for (const auto& s : res.trace) CHECK(s.marginal > 0);
    }
  }
}

TEST_CASE("PartialGreedy candidate floor") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = GnnComputationGraph(hag::testing::random_graph(rng, 7, 0.5));
    auto cfg = config(3, 2);
    auto a = partial_greedy(g, cfg);
    cfg.candidate_floor = 0;
    auto b = partial_greedy(g, cfg);
    CHECK(a.value() == b.value());
    CHECK(a.trace == b.trace);
  }
}

TEST_CASE("PartialGreedy regime errors") {
  std::vector<Edge> edges;
  for (NodeId u = 1; u <= 25; ++u) edges.push_back({u, 0});
  GnnComputationGraph g(DirectedGraph(26, edges));
  auto cfg = config(1, 2);
  cfg.completion = CompletionMode::kBruteForce;
  try {
    partial_greedy(g, cfg);
    FAIL("expected RegimeError");
  } catch (const RegimeError& e) {
    CHECK(e.receiver() == 0);
  }
  CHECK_NOTHROW(partial_greedy(g, config(1, 2)));
  cfg = config(1, 3);
  cfg.completion = CompletionMode::kBlossom;
  CHECK_THROWS_AS(partial_greedy(g, cfg), RegimeError);
}

TEST_CASE("h and f on small cases") {
  GnnComputationGraph twin(twin_graph());
  CHECK(greedy_sequence_value_h(twin, {}, 2) == 0);
  CHECK(max_matching_value_f(twin, {}, 2) == 0);
  CHECK(greedy_sequence_value_h(twin, {{0, 1}}, 2) == 3);
  CHECK(value(greedy_sequence_hag(twin, {{0, 1}}, 2)) == 2);
  CHECK(max_matching_value_f(twin, {{0, 1}}, 2) == 3);
  CHECK_THROWS_AS(greedy_sequence_value_h(twin, {{0, 1, 2}}, 2), GraphError);

  // One receiver over A..D; B+C first blocks both A+B and C+D.
  GnnComputationGraph path(DirectedGraph(5, {{0, 4}, {1, 4}, {2, 4}, {3, 4}}));
  InSetSequence adversarial = {{1, 2}, {0, 1}, {2, 3}};
  CHECK(greedy_sequence_value_h(path, adversarial, 2) == 1);
  CHECK(max_matching_value_f(path, adversarial, 2) == 2);
}

TEST_CASE("h and f identities on random instances") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 150; ++trial) {
    const NodeId n = 4 + trial % 6;
    const int d = 2 + trial % 2;
    auto g = GnnComputationGraph(hag::testing::random_graph(rng, n, 0.6));
    auto space = candidate_space(g, d, 1);
    if (space.empty()) continue;
    std::shuffle(space.begin(), space.end(), rng);
    const std::size_t j = std::min<std::size_t>(space.size(), 1 + trial % 4);
    InSetSequence seq(space.begin(), space.begin() + j);
    CAPTURE(trial);
    // Value identities for the ordered and the unordered objective.
    const std::int64_t h = greedy_sequence_value_h(g, seq, d);
    HagGraph greedy = greedy_sequence_hag(g, seq, d);
    CHECK(verify_equivalence(greedy, g.source_graph()).ok);
    CHECK(h == value(greedy) + (d - 1) * static_cast<std::int64_t>(j));
    const std::int64_t f = max_matching_value_f(g, seq, d);
    PartialHag p(n, LayerMode::kSingle, d);
    for (const auto& s : seq) p.add(s);
    CHECK(f == exhaustive_completion(p, g) + (d - 1) * static_cast<std::int64_t>(j));
    // Sandwich for several orders.
    for (int o = 0; o < 5; ++o) {
      std::shuffle(seq.begin(), seq.end(), rng);
      const std::int64_t ho = greedy_sequence_value_h(g, seq, d);
      CHECK(f <= d * ho);
      CHECK(ho <= f);
    }
    // Monotone under supersets.
    for (std::size_t i = 0; i < j; ++i) {
      InSetSequence smaller(seq.begin(), seq.begin() + i);
      CHECK(max_matching_value_f(g, smaller, d) <= f);
    }
  }
}

TEST_CASE("prefix bound against an optimal sequence") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 80; ++trial) {
    const NodeId n = 5 + trial % 5;
    const int d = 2 + trial % 2;
    const int k = 1 + trial % 3;
    auto g = GnnComputationGraph(hag::testing::random_graph(rng, n, 0.6));
    auto oracle = optimal_single_layer(g, k, d);
    auto greedy = full_greedy(g, config(k, d, LayerMode::kSingle, false));
    InSetSequence star = oracle.best_set;
    std::shuffle(star.begin(), star.end(), rng);
    const std::int64_t h_star = greedy_sequence_value_h(g, star, d);
    for (std::size_t i = 0; i <= greedy.trace.size(); ++i) {
      InSetSequence joined;
      for (std::size_t t = 0; t < i; ++t) joined.push_back(greedy.trace[t].in_set);
      joined.insert(joined.end(), star.begin(), star.end());
      CAPTURE(trial);
      CAPTURE(i);
      CHECK(d * (greedy_sequence_value_h(g, joined, d) - h_star) >=
            -(d - 1) * h_star);
    }
  }
}

TEST_CASE("greedy values never exceed the optimum") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const NodeId n = 4 + trial % 6;
    const int d = 2 + trial % 2;
    const int k = 1 + trial % 3;
    auto g = GnnComputationGraph(hag::testing::random_graph(rng, n, 0.55));
    const std::int64_t best = optimal_single_layer(g, k, d).optimal_value;
    for (bool stop : {true, false}) {
      auto cfg = config(k, d, LayerMode::kSingle, stop);
      CHECK(full_greedy(g, cfg).value() <= best);
      CHECK(partial_greedy(g, cfg).value() <= best);
    }
  }
}
