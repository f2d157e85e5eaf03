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

// Property suite over seeded random instances. Instance i of a check uses
// seed + i and the size sizes[i % sizes.size()].

#ifndef HAG_VALIDATION_HPP_
#define HAG_VALIDATION_HPP_

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "hag/graph.hpp"
#include "hag/matching.hpp"

namespace hag {

struct PropertyResult {
  std::string name;
  std::int64_t instances = 0;
  std::int64_t checks = 0;
  std::int64_t skipped = 0;  // oracle over budget
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
};

// All matchings (sets of pairwise disjoint hyperedges, as ascending source
// ids) of one receiver, the empty one first.
std::vector<std::vector<NodeId>> enumerate_receiver_matchings(
    const ReceiverInstance& h);

// A random single-layer partial HAG with up to max_k intermediates whose
// d-element in-sets are drawn from receivers' in-sets.
PartialHag random_partial_hag(std::mt19937_64& rng, const GnnComputationGraph& g,
                              int d, int max_k);

// value(phi(N)) = value(N) - partial cost and phi_inverse(phi(N)) = N, for
// every matching N. The cross product over receivers is enumerated when it
// has at most max_product elements; otherwise each receiver's matchings
// are varied with the other receivers left empty.
PropertyResult check_matching_bijection(int instances, std::uint64_t seed,
                                        const std::vector<NodeId>& sizes,
                                        std::int64_t max_product = 1 << 16);

// d * value_tilde(FullGreedy) >= (1 - 1/e) * max value_tilde over at most k
// intermediates, for k in 1..3 and d in 2..3. FullGreedy runs exactly k
// steps when it can. Compared in exact integer arithmetic against an upper
// bound of 1 - 1/e. Cases where the oracle is over budget are skipped.
PropertyResult check_greedy_bound(int instances, std::uint64_t seed,
                                  const std::vector<NodeId>& sizes);

// f(S) <= d * h(s) and h(s) <= f(S) for `orders` shuffles s of a set S of
// d-subsets made of FullGreedy's choices plus random extras.
PropertyResult check_sandwich(int instances, std::uint64_t seed,
                              const std::vector<NodeId>& sizes, int orders = 5);

// Every optimizer and heuristic output has exactly one path per edge of G
// and none elsewhere. With inject_fault a duplicated path is planted in
// each output first, so every instance must be reported.
PropertyResult check_equivalence(int instances, std::uint64_t seed,
                                 const std::vector<NodeId>& sizes,
                                 bool inject_fault = false);

// run_hag equals run_gnn for K = 1..3 under sum and multiset aggregation,
// and each round saves exactly value(hag) operations.
PropertyResult check_execution(int instances, std::uint64_t seed,
                               const std::vector<NodeId>& sizes);

// Blossom and brute-force matchings agree on random graphs with at most
// max_vertices vertices.
PropertyResult check_matching_oracles(int instances, std::uint64_t seed,
                                      int max_vertices = 8);

struct ValidateOptions {
  std::uint64_t seed = 1;
  std::vector<NodeId> sizes = {6, 8, 10, 12};
  int instances = 200;
  bool inject_fault = false;
};

struct ValidationReport {
  std::vector<PropertyResult> properties;

  bool ok() const;
  // One line per property, then every failure.
  std::string transcript() const;
};

ValidationReport cmd_validate(const ValidateOptions& opts);

}  // namespace hag

#endif  // HAG_VALIDATION_HPP_
