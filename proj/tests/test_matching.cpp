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

#include <numeric>

#include "doctest.h"
#include "fixtures.hpp"
#include "hag/matching.hpp"

using namespace hag;
using hag::testing::twin_graph;

namespace {

ReceiverInstance pair_instance(int nv, const std::vector<std::pair<int, int>>& e) {
  ReceiverInstance h;
  h.receiver = 0;
  h.vertices.resize(nv);
  std::iota(h.vertices.begin(), h.vertices.end(), 0);
  NodeId id = 100;
  for (auto [a, b] : e) {
    h.edges.push_back({id++, {std::min(a, b), std::max(a, b)}, 1});
  }
  return h;
}

// Plain enumeration of every edge subset; keeps the lex-min best.
ReceiverMatching enumerate_all(const ReceiverInstance& h) {
  const std::size_t m = h.edges.size();
  ReceiverMatching best;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    std::vector<char> used(h.vertices.size() + 200, 0);
    ReceiverMatching cur;
    bool ok = true;
    for (std::size_t i = 0; i < m && ok; ++i) {
      if (!(mask >> i & 1)) continue;
      for (NodeId v : h.edges[i].vertices) {
        ok = ok && !used[v];
        used[v] = 1;
      }
      cur.selected.push_back(h.edges[i].source);
      cur.value += h.edges[i].weight;
    }
    if (!ok) continue;
    if (cur.value > best.value ||
        (cur.value == best.value && cur.selected < best.selected)) {
      best = cur;
    }
  }
  return best;
}

PartialHag twin_partial() {
  PartialHag p(5, LayerMode::kSingle, 2);
  p.add({0, 1});
  return p;
}

}  // namespace

TEST_CASE("maximum cardinality matching on small graphs") {
  std::vector<std::pair<int, int>> path = {{0, 1}, {1, 2}, {2, 3}};
  CHECK(max_cardinality_matching(4, path) == 2);
  std::vector<std::pair<int, int>> cycle5 = {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {4, 0}};
  CHECK(max_cardinality_matching(5, cycle5) == 2);
  // Two triangles joined by an edge: needs blossom contraction.
  std::vector<std::pair<int, int>> bowtie = {{0, 1}, {1, 2}, {2, 0},
                                             {2, 3}, {3, 4}, {4, 5}, {5, 3}};
  CHECK(max_cardinality_matching(6, bowtie) == 3);
  CHECK(max_cardinality_matching(3, {}) == 0);
}

TEST_CASE("blossom breaks ties toward the smallest ids") {
  // Path 0-1-2-3: edges 100={0,1}, 101={1,2}, 102={2,3}.
  auto h = pair_instance(4, {{0, 1}, {1, 2}, {2, 3}});
  auto m = max_matching_blossom(h);
  CHECK(m.value == 2);
  CHECK(m.selected == std::vector<NodeId>{100, 102});
  // Triangle: any single edge; the smallest wins.
  auto t = max_matching_blossom(pair_instance(3, {{1, 2}, {0, 2}, {0, 1}}));
  CHECK(t.selected == std::vector<NodeId>{100});
}

TEST_CASE("blossom rejects larger hyperedges") {
  ReceiverInstance h;
  h.vertices = {0, 1, 2};
  h.edges.push_back({5, {0, 1, 2}, 2});
  CHECK_THROWS_AS(max_matching_blossom(h), MatchingError);
}

TEST_CASE("brute force tie-break example") {
  // A..D = 0..3; {A,B}=0, {C,D}=1, {A,B,C}=2. Both {0,1} and {2} weigh 2.
  ReceiverInstance h;
  h.receiver = 7;
  h.vertices = {0, 1, 2, 3};
  h.edges = {{0, {0, 1}, 1}, {1, {2, 3}, 1}, {2, {0, 1, 2}, 2}};
  auto m = max_matching_bruteforce(h);
  CHECK(m.value == 2);
  CHECK(m.selected == std::vector<NodeId>{0, 1});
  CHECK(m == enumerate_all(h));
}

TEST_CASE("brute force caps name the receiver") {
  ReceiverInstance h;
  h.receiver = 9;
  h.vertices.resize(21);
  std::iota(h.vertices.begin(), h.vertices.end(), 0);
  try {
    max_matching_bruteforce(h);
    FAIL("expected RegimeError");
  } catch (const RegimeError& e) {
    CHECK(e.receiver() == 9);
    CHECK(std::string(e.what()).find("receiver 9") != std::string::npos);
  }
  ReceiverInstance wide = pair_instance(10, {});
  for (int i = 0; i < 23; ++i) wide.edges.push_back({i, {0, 1}, 1});
  CHECK_THROWS_AS(max_matching_bruteforce(wide), RegimeError);
}

TEST_CASE("blossom agrees with brute force on random graphs") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const int nv = 2 + trial % 11;
    std::bernoulli_distribution coin(0.15 + 0.5 * (trial % 7) / 7.0);
    std::vector<std::pair<int, int>> e;
    for (int a = 0; a < nv; ++a) {
      for (int b = a + 1; b < nv; ++b) {
        if (coin(rng) && e.size() < 22) e.emplace_back(a, b);
      }
    }
    std::shuffle(e.begin(), e.end(), rng);
    auto h = pair_instance(nv, e);
    CAPTURE(trial);
    auto blossom = max_matching_blossom(h);
    auto brute = max_matching_bruteforce(h);
    CHECK(blossom == brute);
    if (e.size() <= 14) CHECK(brute == enumerate_all(h));
  }
}

TEST_CASE("brute force agrees with enumeration on random hypergraphs") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int nv = 3 + trial % 8;
    ReceiverInstance h;
    h.vertices.resize(nv);
    std::iota(h.vertices.begin(), h.vertices.end(), 0);
    std::uniform_int_distribution<int> size(2, std::min(nv, 4));
    const int m = 1 + trial % 12;
    for (int i = 0; i < m; ++i) {
      std::vector<NodeId> all = h.vertices;
      std::shuffle(all.begin(), all.end(), rng);
      std::vector<NodeId> cover(all.begin(), all.begin() + size(rng));
      std::sort(cover.begin(), cover.end());
      h.edges.push_back({i, cover, static_cast<std::int64_t>(cover.size()) - 1});
    }
    CAPTURE(trial);
    CHECK(max_matching_bruteforce(h) == enumerate_all(h));
  }
}

TEST_CASE("phi on the twin graph") {
  auto g = twin_graph();
  GnnComputationGraph gnn(g);
  PartialHag p = twin_partial();
  auto h = build_matching_instance(p, gnn);
  CHECK(h.receivers[2].edges.size() == 1);
  CHECK(h.receivers[0].edges.empty());

  Matching two;
  two.per_receiver = {{}, {}, {5}, {5}, {}};
  two.value = 2;
  auto hag2 = phi(p, gnn, two);
  CHECK(value(hag2) == 1);
  CHECK(verify_equivalence(hag2, g).ok);

  auto best = optimal_matching(p, gnn);
  CHECK(best.value == 3);
  auto hag3 = phi(p, gnn, best);
  CHECK(value(hag3) == 2);
  CHECK(hag3 == hag::testing::twin_hag());
  CHECK(phi_inverse(hag3) == best);
  CHECK(optimal_completion(p, gnn, CompletionMode::kBruteForce) == hag3);

  Matching bad;
  bad.per_receiver = {{5}, {}, {}, {}, {}};
  CHECK_THROWS_AS(phi(p, gnn, bad), MatchingError);
}

TEST_CASE("phi rejects overlapping hyperedges") {
  DirectedGraph g(3, {{0, 2}, {1, 2}, {2, 2}});
  PartialHag p(3, LayerMode::kMulti, std::nullopt);
  NodeId a = p.add({0, 1});
  NodeId b = p.add({a, 2});
  Matching n;
  n.per_receiver = {{}, {}, {a, b}};
  CHECK_THROWS_AS(phi(p, GnnComputationGraph(g), n), MatchingError);
}

TEST_CASE("completion mode resolution") {
  PartialHag pairs = twin_partial();
  CHECK(resolve_completion_mode(pairs, CompletionMode::kAuto) ==
        CompletionMode::kBlossom);
  PartialHag triple(4, LayerMode::kSingle, 3);
  triple.add({0, 1, 2});
  CHECK(resolve_completion_mode(triple, CompletionMode::kAuto) ==
        CompletionMode::kBruteForce);
  CHECK_THROWS_AS(resolve_completion_mode(triple, CompletionMode::kBlossom),
                  RegimeError);
}

TEST_CASE("matching identity and greedy bound on random partial HAGs") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 150; ++trial) {
    const NodeId n = 3 + trial % 8;
    const auto mode = trial % 2 ? LayerMode::kMulti : LayerMode::kSingle;
    const int d = 2 + (trial / 2) % 2;
    auto g = hag::testing::random_graph(rng, n, 0.55, trial % 3 == 0);
    GnnComputationGraph gnn(g);
    const PartialHag p = hag::testing::random_hag(rng, g, mode, d, 8).partial();
    auto h = build_matching_instance(p, gnn);

    std::vector<NodeId> order(p.size());
    std::iota(order.begin(), order.end(), n);
    std::shuffle(order.begin(), order.end(), rng);
    Matching greedy = greedy_matching(h, p, order);
    Matching best = optimal_matching(p, gnn, CompletionMode::kBruteForce);
    CAPTURE(trial);
    CHECK(matching_value(greedy, p) == greedy.value);
    CHECK(matching_value(best, p) == best.value);
    CHECK(greedy.value <= best.value);
    // Uniform hyperedge size d: a maximal matching is within a factor d.
    if (mode == LayerMode::kSingle) CHECK(d * greedy.value >= best.value);

    for (const Matching* m : {&greedy, &best}) {
      HagGraph hag = phi(p, gnn, *m);
      CHECK(verify_equivalence(hag, g).ok);
      CHECK(value(hag) == m->value - partial_cost(p));
      CHECK(phi_inverse(hag) == *m);
    }
    if (mode == LayerMode::kSingle) {
      CHECK(partial_cost(p) == static_cast<std::int64_t>(p.size()) * (d - 1));
      CHECK(optimal_matching(p, gnn, CompletionMode::kAuto).value == best.value);
    }
  }
}

TEST_CASE("greedy order must be a permutation") {
  PartialHag p = twin_partial();
  GnnComputationGraph gnn(twin_graph());
  auto h = build_matching_instance(p, gnn);
  std::vector<NodeId> none;
  CHECK_THROWS_AS(greedy_matching(h, p, none), MatchingError);
  std::vector<NodeId> one = {5};
  CHECK(greedy_matching(h, p, one).value == 3);
}
