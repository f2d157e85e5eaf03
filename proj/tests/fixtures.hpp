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

// Shared test graphs and generators. Independent of the optimizers.

#ifndef HAG_TESTS_FIXTURES_HPP_
#define HAG_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <random>
#include <vector>

#include "hag/graph.hpp"

namespace hag::testing {

// A=0 and B=1 both feed r1=2, r2=3, r3=4.
inline DirectedGraph twin_graph() {
  return DirectedGraph(5, {{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}});
}

// The optimal TwinGraph HAG: A(+)B feeding r1..r3.
inline HagGraph twin_hag() {
  HagGraph hag = HagGraph::from_gnn(GnnComputationGraph(twin_graph()),
                                    LayerMode::kSingle, 2);
  NodeId m = hag.add_intermediate({0, 1});
  for (NodeId r = 2; r <= 4; ++r) hag.set_receiver_in(r, {m});
  return hag;
}

// Two receivers r1=2, r2=3 with in-set {A=0, B=1}.
inline DirectedGraph pair_share_graph() {
  return DirectedGraph(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
}

inline HagGraph pair_share_hag() {
  HagGraph hag = HagGraph::from_gnn(GnnComputationGraph(pair_share_graph()),
                                    LayerMode::kSingle, 2);
  NodeId m = hag.add_intermediate({0, 1});
  hag.set_receiver_in(2, {m});
  hag.set_receiver_in(3, {m});
  return hag;
}

inline DirectedGraph random_graph(std::mt19937_64& rng, NodeId n, double p,
                                  bool self_loops = false) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> edges;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = 0; v < n; ++v) {
      if ((u != v || self_loops) && coin(rng)) edges.push_back({u, v});
    }
  }
  return DirectedGraph(n, std::move(edges));
}

// A random valid HAG for g: repeatedly pick a receiver, group d of its
// current in-neighbors under a new intermediate (covers must be new) and
// attach the intermediate to a random subset of the receivers that still
// hold all of those in-neighbors.
inline HagGraph random_hag(std::mt19937_64& rng, const DirectedGraph& g,
                           LayerMode mode, int d, int attempts) {
  HagGraph hag = HagGraph::from_gnn(GnnComputationGraph(g), mode, d);
  const NodeId n = g.node_count();
  if (n == 0) return hag;
  std::uniform_int_distribution<NodeId> pick_r(0, n - 1);
  std::bernoulli_distribution coin(0.7);
  for (int t = 0; t < attempts; ++t) {
    NodeId r = pick_r(rng);
    std::vector<NodeId> pool;
    for (NodeId u : hag.receiver_in(r)) {
      if (mode == LayerMode::kMulti || u < n) pool.push_back(u);
    }
    if (static_cast<int>(pool.size()) < d) continue;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<NodeId> members(pool.begin(), pool.begin() + d);
    std::sort(members.begin(), members.end());
    auto cover = hag.partial().union_cover(members);
    if (!cover || hag.partial().find_cover(*cover)) continue;
    NodeId m = hag.add_intermediate(members);
    for (NodeId s = 0; s < n; ++s) {
      auto in = hag.receiver_in(s);
      bool holds = std::all_of(members.begin(), members.end(), [&](NodeId x) {
        return std::binary_search(in.begin(), in.end(), x);
      });
      if (!holds || (s != r && !coin(rng))) continue;
      std::vector<NodeId> next;
      for (NodeId x : in) {
        if (!std::binary_search(members.begin(), members.end(), x)) {
          next.push_back(x);
        }
      }
      next.push_back(m);
      hag.set_receiver_in(s, std::move(next));
    }
  }
  return hag;
}

}  // namespace hag::testing

#endif  // HAG_TESTS_FIXTURES_HPP_
