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
// Greedy HAG optimizers.
//
// FullGreedy commits to the in-set and the out-edges of every new
// intermediate. PartialGreedy commits only to in-sets and re-solves the
// out-edges by matching after every step.
//

#ifndef HAG_GREEDY_HPP_
#define HAG_GREEDY_HPP_

#include <cstdint>
#include <vector>

#include "hag/graph.hpp"
#include "hag/matching.hpp"

namespace hag {

enum class TieBreak { kLexicographic };

struct OptimizerConfig {
  int k = 0;
  int d = 2;
  LayerMode layer_mode = LayerMode::kSingle;
  // Stop as soon as the best candidate cannot increase the value.
  bool stop_on_nonpositive = true;
  TieBreak tie_break = TieBreak::kLexicographic;
  // PartialGreedy skips in-sets shared by fewer receivers than this.
  int candidate_floor = 2;
  CompletionMode completion = CompletionMode::kAuto;
  BruteForceCap cap;
};

// Throws Error unless k >= 0, d >= 2 and candidate_floor >= 0.
void validate(const OptimizerConfig& cfg);

struct TraceStep {
  std::vector<NodeId> in_set;
  std::int64_t receivers = 0;  // |R_C| when the node was chosen
  std::int64_t marginal = 0;
  std::int64_t cumulative = 0;
  bool operator==(const TraceStep&) const = default;
};

struct HagResult {
  HagGraph final;
  std::vector<TraceStep> trace;
  std::int64_t candidates_evaluated = 0;
  double elapsed_ms = 0;

  std::int64_t value() const { return hag::value(final); }
  std::size_t k_used() const { return final.intermediate_count(); }
};

HagResult full_greedy(const GnnComputationGraph& g, const OptimizerConfig& cfg);

// Throws RegimeError (naming the receiver) when brute-force completion is
// needed and some receiver's in-degree exceeds the cap.
HagResult partial_greedy(const GnnComputationGraph& g,
                         const OptimizerConfig& cfg);

// Ordered list of size-d in-sets over L.
using InSetSequence = std::vector<std::vector<NodeId>>;

// Single-layer HAG obtained by inserting the in-sets in order and linking
// each new node to every receiver whose remaining L in-neighbors still
// contain its cover. Throws GraphError on an invalid sequence.
HagGraph greedy_sequence_hag(const GnnComputationGraph& g,
                             const InSetSequence& seq, int d);

// (d - 1) times the total out-degree of the greedy sequence HAG. Repeated
// in-sets are allowed here; a repeat finds no receiver left.
std::int64_t greedy_sequence_value_h(const GnnComputationGraph& g,
                                     const InSetSequence& seq, int d);

// (d - 1) times the total out-degree of the best completion of the in-sets
// taken as an unordered set.
std::int64_t max_matching_value_f(const GnnComputationGraph& g,
                                  const InSetSequence& s_set, int d,
                                  CompletionMode mode = CompletionMode::kAuto,
                                  const BruteForceCap& cap = {});

}  // namespace hag

#endif  // HAG_GREEDY_HPP_
