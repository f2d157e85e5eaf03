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

//
// Exhaustive searches for small witness graphs. Senders are nodes 0..3 and
// carry no in-edges; receivers are nodes 4, 5, ... whose in-sets are
// subsets of {0, 1, 2, 3} with at least two members. Graphs are visited by
// receiver count, then lexicographically by the sorted list of in-sets.
//

#ifndef HAG_RECONSTRUCT_HPP_
#define HAG_RECONSTRUCT_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "hag/graph.hpp"
#include "hag/greedy.hpp"

namespace hag {

// Calls visit on every witness-family graph with 1..max_receivers receivers
// until it returns false.
void for_each_small_graph(int max_receivers,
                          const std::function<bool(const DirectedGraph&)>& visit);

// Value of the best completion of the single-layer partial HAG with the
// given sender in-sets.
std::int64_t completion_value(const GnnComputationGraph& g,
                              const InSetSequence& in_sets, int d);

struct GreedyGapWitness {
  DirectedGraph graph;
  int k = 0;
  std::int64_t full_greedy_value = 0;
  std::int64_t optimal_value = 0;
  std::int64_t partial_greedy_value = 0;
  bool stop_on_nonpositive = true;
};

// First graph where FullGreedy (d = 2, single layer, k) reaches
// `greedy_value`, the optimum is `optimal_value`, and PartialGreedy reaches
// the optimum. Both greedy runs use the given stopping rule.
std::optional<GreedyGapWitness> find_greedy_gap(int max_receivers, int k,
                                                std::int64_t greedy_value,
                                                std::int64_t optimal_value,
                                                bool stop_on_nonpositive);

struct IncreasingMarginalWitness {
  DirectedGraph graph;
  InSetSequence base;             // S
  std::vector<NodeId> extra;      // T = S + {extra}
  std::vector<NodeId> added;      // x
  std::int64_t marginal_early = 0;  // F(S + x) - F(S)
  std::int64_t marginal_late = 0;   // F(T + x) - F(T)
};

// First graph and sets S subset of T where adding x to T gains strictly
// more completion value than adding it to S (d = 2). S ranges over sets of
// size <= max_base. The later marginal must also be positive.
std::optional<IncreasingMarginalWitness> find_increasing_marginal(
    int max_receivers, int max_base = 1);

}  // namespace hag

#endif  // HAG_RECONSTRUCT_HPP_
