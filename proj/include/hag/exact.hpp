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

// Exhaustive optimum for single-layer d-HAGs with at most k intermediates.

#ifndef HAG_EXACT_HPP_
#define HAG_EXACT_HPP_

#include <cstdint>
#include <vector>

#include "hag/graph.hpp"
#include "hag/greedy.hpp"

namespace hag {

// Size-d sender subsets whose members share at least `min_receivers`
// receivers, in lexicographic order. With min_receivers = 2 nothing is lost
// for the value objective: an intermediate feeding at most one receiver
// saves at most d - 1 there and costs d - 1 to build.
std::vector<std::vector<NodeId>> candidate_space(const GnnComputationGraph& g,
                                                 int d, int min_receivers = 2);

struct OracleOptions {
  std::int64_t budget = 10'000'000;  // maximum number of subsets examined
  int min_receivers = 2;
  bool reverse = false;  // enumerate candidates in reverse order
};

struct OracleResult {
  HagResult best;
  std::int64_t optimal_value = 0;
  std::vector<std::vector<NodeId>> best_set;
  // Max over |S| <= k of the matching value of S; exact when
  // min_receivers <= 1.
  std::int64_t max_f = 0;
  std::int64_t subsets_evaluated = 0;
};

// Throws BudgetExceeded before searching when the subset count is over
// budget, RegimeError when there are more than 64 senders.
OracleResult optimal_single_layer(const GnnComputationGraph& g, int k, int d,
                                  const OracleOptions& opts = {});

struct ApproximationRatio {
  Rational alpha;
  Rational one_minus_alpha;
};

// alpha = candidate / optimal, 1 when both are 0. Throws Error when
// candidate > optimal or either is negative.
ApproximationRatio approximation_ratio(std::int64_t candidate_value,
                                       std::int64_t optimal_value);

}  // namespace hag

#endif  // HAG_EXACT_HPP_
