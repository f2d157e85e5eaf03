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

// Fast pair heuristics producing single-layer 2-HAGs. Out-edges are assigned
// greedily in cover order and never revisited.

#ifndef HAG_HEURISTICS_HPP_
#define HAG_HEURISTICS_HPP_

#include "hag/graph.hpp"
#include "hag/greedy.hpp"

namespace hag {

enum class DegreeKind { kOut, kIn, kTotal };

struct HeuristicOptions {
  // Skip covers that would reach fewer than two receivers.
  bool stop_on_nonpositive = true;
  // Ranking key; out-degree unless experimenting.
  DegreeKind ranking = DegreeKind::kOut;
};

// Pairs the senders ranked 1-2, 3-4, ... (degree descending, ties by id,
// senders without out-edges excluded), up to k pairs.
HagResult degree_heuristic(const GnnComputationGraph& g, int k,
                           const HeuristicOptions& opts = {});

// For each of the k highest-degree senders v, pairs v with the
// in-neighbor u (in G) shared by the most receivers.
HagResult hub_heuristic(const GnnComputationGraph& g, int k,
                        const HeuristicOptions& opts = {});

}  // namespace hag

#endif  // HAG_HEURISTICS_HPP_
