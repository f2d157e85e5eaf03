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
// Completing a partial HAG is a matching problem. For each receiver r the
// hypergraph H_r has vertex set in(r) and one hyperedge cover(v), of weight
// |cover(v)| - 1, for every intermediate v whose cover fits inside in(r).
// A matching of the disjoint union H picks, per receiver, which
// intermediates feed it; phi turns that choice into a HAG whose value is the
// matching value minus sum_M (|in(v)| - 1).
//
// All solvers break ties toward the lexicographically smallest sorted list
// of selected intermediate ids.
//

#ifndef HAG_MATCHING_HPP_
#define HAG_MATCHING_HPP_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hag/graph.hpp"

namespace hag {

struct Hyperedge {
  NodeId source = 0;             // the intermediate this edge stands for
  std::vector<NodeId> vertices;  // its cover
  std::int64_t weight = 0;       // |cover| - 1
};

struct ReceiverInstance {
  NodeId receiver = 0;
  std::vector<NodeId> vertices;  // in(r) in the GNN graph
  std::vector<Hyperedge> edges;  // ascending source id
};

struct HypergraphInstance {
  std::vector<ReceiverInstance> receivers;  // indexed by receiver id
};

struct ReceiverMatching {
  std::vector<NodeId> selected;  // ascending intermediate ids
  std::int64_t value = 0;
  bool operator==(const ReceiverMatching&) const = default;
};

struct Matching {
  std::vector<std::vector<NodeId>> per_receiver;
  std::int64_t value = 0;
  bool operator==(const Matching&) const = default;
};

ReceiverInstance build_receiver_instance(const PartialHag& p,
                                         const GnnComputationGraph& g,
                                         NodeId r);
// Throws GraphError when p and g disagree on |L|.
HypergraphInstance build_matching_instance(const PartialHag& p,
                                           const GnnComputationGraph& g);

// Maximum cardinality matching size of an ordinary graph on vertices
// 0..vertex_count-1 (Edmonds' blossom algorithm).
std::size_t max_cardinality_matching(
    std::size_t vertex_count, std::span<const std::pair<int, int>> edges);

// Exact for instances whose hyperedges all have two vertices (their weights
// are then all 1, so maximum weight is maximum cardinality). Throws
// MatchingError on a larger hyperedge.
ReceiverMatching max_matching_blossom(const ReceiverInstance& h);

struct BruteForceCap {
  std::size_t max_vertices = 20;
  std::size_t max_edges = 22;
};

// Exact maximum-weight hypergraph matching by branch and bound. Throws
// RegimeError naming the receiver when the instance exceeds the cap.
ReceiverMatching max_matching_bruteforce(const ReceiverInstance& h,
                                         const BruteForceCap& cap = {});

// Per receiver, scans `order` and keeps each hyperedge that is disjoint
// from those already kept. `order` must list every intermediate once.
Matching greedy_matching(const HypergraphInstance& h, const PartialHag& p,
                         std::span<const NodeId> order);

// Sum of |cover(v)| - 1 over all selected intermediates.
std::int64_t matching_value(const Matching& n, const PartialHag& p);

// Completes p: in(r) = C_r plus whatever of in_G(r) the selected covers
// leave uncovered. Throws MatchingError if n is not a matching of H(p, g).
HagGraph phi(const PartialHag& p, const GnnComputationGraph& g,
             const Matching& n);

// Per receiver, the intermediates among its in-neighbors.
Matching phi_inverse(const HagGraph& hag);

// sum over M of (|in(v)| - 1); equals k (d - 1) for a d-HAG.
std::int64_t partial_cost(const PartialHag& p);

enum class CompletionMode { kAuto, kBlossom, kBruteForce };

// kAuto uses blossom when every cover has two leaves, brute force otherwise.
// Throws RegimeError when the chosen mode's precondition fails.
CompletionMode resolve_completion_mode(const PartialHag& p, CompletionMode mode);

// Exact maximum matching of one receiver instance under a resolved mode.
ReceiverMatching solve_receiver(const ReceiverInstance& h, CompletionMode mode,
                                const BruteForceCap& cap = {});

Matching optimal_matching(const PartialHag& p, const GnnComputationGraph& g,
                          CompletionMode mode = CompletionMode::kAuto,
                          const BruteForceCap& cap = {});

// The maximum-value completion of p.
HagGraph optimal_completion(const PartialHag& p, const GnnComputationGraph& g,
                            CompletionMode mode = CompletionMode::kAuto,
                            const BruteForceCap& cap = {});

}  // namespace hag

#endif  // HAG_MATCHING_HPP_
