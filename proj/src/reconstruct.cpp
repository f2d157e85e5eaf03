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

#include "hag/reconstruct.hpp"

#include <algorithm>

#include "hag/combinations.hpp"
#include "hag/exact.hpp"
#include "hag/matching.hpp"

namespace hag {
namespace {

constexpr NodeId kSenders = 4;

std::vector<std::vector<NodeId>> sender_subsets() {
  std::vector<std::vector<NodeId>> out;
  for (unsigned mask = 0; mask < (1u << kSenders); ++mask) {
    if (__builtin_popcount(mask) < 2) continue;
    std::vector<NodeId> s;
    for (NodeId x = 0; x < kSenders; ++x) {
      if (mask >> x & 1) s.push_back(x);
    }
    out.push_back(s);
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool visit_multisets(const std::vector<std::vector<NodeId>>& options,
                     std::vector<std::size_t>& pick, std::size_t from,
                     std::size_t size,
                     const std::function<bool(const DirectedGraph&)>& visit) {
  if (pick.size() == size) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < pick.size(); ++i) {
      const NodeId r = kSenders + static_cast<NodeId>(i);
      for (NodeId x : options[pick[i]]) edges.push_back({x, r});
    }
    return visit(DirectedGraph(kSenders + static_cast<NodeId>(size), edges));
  }
  for (std::size_t o = from; o < options.size(); ++o) {
    pick.push_back(o);
    const bool go_on = visit_multisets(options, pick, o, size, visit);
    pick.pop_back();
    if (!go_on) return false;
  }
  return true;
}

}  // namespace

void for_each_small_graph(
    int max_receivers, const std::function<bool(const DirectedGraph&)>& visit) {
  const auto options = sender_subsets();
  for (int size = 1; size <= max_receivers; ++size) {
    std::vector<std::size_t> pick;
    if (!visit_multisets(options, pick, 0, size, visit)) return;
  }
}

std::int64_t completion_value(const GnnComputationGraph& g,
                              const InSetSequence& in_sets, int d) {
  PartialHag p(g.node_count(), LayerMode::kSingle, d);
  for (const auto& s : in_sets) p.add(s);
  return optimal_matching(p, g).value - partial_cost(p);
}

std::optional<GreedyGapWitness> find_greedy_gap(int max_receivers, int k,
                                                std::int64_t greedy_value,
                                                std::int64_t optimal_value,
                                                bool stop_on_nonpositive) {
  std::optional<GreedyGapWitness> found;
  OptimizerConfig cfg;
  cfg.k = k;
  cfg.d = 2;
  cfg.stop_on_nonpositive = stop_on_nonpositive;
  for_each_small_graph(max_receivers, [&](const DirectedGraph& graph) {
    GnnComputationGraph g(graph);
    const std::int64_t full = full_greedy(g, cfg).value();
    if (full != greedy_value) return true;
    const std::int64_t best = optimal_single_layer(g, k, 2).optimal_value;
    if (best != optimal_value) return true;
    const std::int64_t partial = partial_greedy(g, cfg).value();
    if (partial != best) return true;
    found = GreedyGapWitness{graph, k, full, best, partial, stop_on_nonpositive};
    return false;
  });
  return found;
}

std::optional<IncreasingMarginalWitness> find_increasing_marginal(
    int max_receivers, int max_base) {
  std::optional<IncreasingMarginalWitness> found;
  for_each_small_graph(max_receivers, [&](const DirectedGraph& graph) {
    GnnComputationGraph g(graph);
    const auto space = candidate_space(g, 2, 1);
    std::vector<std::size_t> ids(space.size());
    for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
    for (int b = 0; b <= max_base && !found; ++b) {
      for_each_combination(ids, b, [&](const std::vector<std::size_t>& base_ids) {
        InSetSequence base;
        for (std::size_t i : base_ids) base.push_back(space[i]);
        const std::int64_t f_s = completion_value(g, base, 2);
        for (std::size_t y = 0; y < space.size(); ++y) {
          if (std::count(base_ids.begin(), base_ids.end(), y)) continue;
          InSetSequence t = base;
          t.push_back(space[y]);
          const std::int64_t f_t = completion_value(g, t, 2);
          for (std::size_t x = 0; x < space.size(); ++x) {
            if (x == y || std::count(base_ids.begin(), base_ids.end(), x)) {
              continue;
            }
            InSetSequence sx = base;
            sx.push_back(space[x]);
            InSetSequence tx = t;
            tx.push_back(space[x]);
            const std::int64_t early = completion_value(g, sx, 2) - f_s;
            const std::int64_t late = completion_value(g, tx, 2) - f_t;
            if (late > early && late > 0) {
              found = IncreasingMarginalWitness{graph, base, space[y],
                                                space[x], early, late};
              return false;
            }
          }
        }
        return true;
      });
    }
    return !found;
  });
  return found;
}

}  // namespace hag
