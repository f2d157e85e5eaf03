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
// Graph types for hierarchical aggregation.
//
// A directed graph G = (V, E) is expanded into a bipartite GNN computation
// graph with a left copy L (senders) and a right copy R (receivers) of V.
// A HAG computation graph adds intermediate aggregation nodes M between
// them. Node ids: 0..n-1 name both the L copy and the R copy of a vertex;
// intermediates are numbered n, n+1, ... in creation order. Receivers are
// addressed by their vertex id, so an id < n inside an in-set always means
// the L copy.
//

#ifndef HAG_GRAPH_HPP_
#define HAG_GRAPH_HPP_

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <boost/rational.hpp>

#include "hag/error.hpp"

namespace hag {

using NodeId = std::int32_t;
using Rational = boost::rational<std::int64_t>;

struct Edge {
  NodeId source = 0;
  NodeId target = 0;
  auto operator<=>(const Edge&) const = default;
};

// Unweighted directed graph with dense node ids. Edges are kept sorted and
// unique; self-loops are allowed.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  // Duplicate edges collapse. Throws GraphError on out-of-range endpoints.
  DirectedGraph(NodeId node_count, std::vector<Edge> edges);

  NodeId node_count() const { return node_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  std::span<const Edge> edges() const { return edges_; }
  bool has_edge(NodeId u, NodeId v) const;

  bool operator==(const DirectedGraph&) const = default;

 private:
  NodeId node_count_ = 0;
  std::vector<Edge> edges_;
};

// Bipartite (L, R) expansion: (u_L, v_R) is an edge iff (u, v) is in E.
class GnnComputationGraph {
 public:
  GnnComputationGraph() = default;
  explicit GnnComputationGraph(const DirectedGraph& g);

  NodeId node_count() const { return node_count_; }
  std::size_t edge_count() const { return edge_count_; }
  // Sorted sender ids of receiver r.
  std::span<const NodeId> in_neighbors(NodeId r) const { return in_[r]; }
  // Sorted receiver ids of sender l.
  std::span<const NodeId> out_neighbors(NodeId l) const { return out_[l]; }
  bool has_edge(NodeId l, NodeId r) const;
  DirectedGraph source_graph() const;

 private:
  NodeId node_count_ = 0;
  std::size_t edge_count_ = 0;
  std::vector<std::vector<NodeId>> in_;
  std::vector<std::vector<NodeId>> out_;
};

GnnComputationGraph build_computation_graph(const DirectedGraph& g);

enum class LayerMode { kSingle, kMulti };

std::string to_string(LayerMode mode);
LayerMode parse_layer_mode(const std::string& text);

class HagGraph;

struct IntermediateNode {
  NodeId id = 0;
  std::vector<NodeId> in_set;  // sorted; ids in L or M
  std::vector<NodeId> cover;   // sorted L ids
  bool operator==(const IntermediateNode&) const = default;
};

// The L-and-M part of a HAG: intermediates with their in-sets, no
// receiver edges. Intermediates reference only L nodes and earlier
// intermediates, so the M-internal relation is acyclic by construction.
class PartialHag {
 public:
  PartialHag() = default;
  PartialHag(NodeId node_count, LayerMode mode, std::optional<int> d);

  NodeId node_count() const { return node_count_; }
  LayerMode layer_mode() const { return layer_mode_; }
  std::optional<int> d() const { return d_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<IntermediateNode>& intermediates() const { return nodes_; }
  const IntermediateNode& intermediate(NodeId id) const;

  bool is_left(NodeId v) const { return v >= 0 && v < node_count_; }
  bool is_intermediate(NodeId v) const {
    return v >= node_count_ &&
           v < node_count_ + static_cast<NodeId>(nodes_.size());
  }
  NodeId next_id() const {
    return node_count_ + static_cast<NodeId>(nodes_.size());
  }

  // Cover of an L or M node. Throws GraphError for unknown ids.
  std::span<const NodeId> cover(NodeId v) const;
  // Union of the covers of `members`, or nullopt if two of them overlap.
  std::optional<std::vector<NodeId>> union_cover(
      std::span<const NodeId> members) const;
  // Id of the intermediate whose cover equals `cover`, if any.
  std::optional<NodeId> find_cover(std::span<const NodeId> cover) const;

  // Appends an intermediate; returns its id. Enforces the layer mode, the
  // in-degree bound d, disjoint member covers, |cover| >= 2 and distinct
  // covers.
  NodeId add(std::vector<NodeId> in_set);

  // Recomputes every cover by traversal and compares with the cache.
  bool covers_consistent() const;

  bool operator==(const PartialHag&) const = default;

 private:
  friend class HagGraph;
  friend HagGraph hag_from_parts(NodeId, LayerMode, std::optional<int>,
                                 const std::vector<std::vector<NodeId>>&,
                                 std::vector<std::vector<NodeId>>, bool);
  NodeId add_impl(std::vector<NodeId> in_set, bool allow_duplicate_cover);

  NodeId node_count_ = 0;
  LayerMode layer_mode_ = LayerMode::kSingle;
  std::optional<int> d_;
  std::vector<IntermediateNode> nodes_;
  std::vector<NodeId> left_cover_;  // left_cover_[v] == v
};

// A complete HAG computation graph: a partial HAG plus the in-set of every
// receiver. Edge partitions T(L,M), T(M,M), T(M,R), T(L,R) are derived from
// the in-sets.
class HagGraph {
 public:
  HagGraph() = default;
  HagGraph(PartialHag partial, std::vector<std::vector<NodeId>> receiver_in);

  // The plain GNN graph viewed as a HAG with M empty.
  static HagGraph from_gnn(const GnnComputationGraph& g,
                           LayerMode mode = LayerMode::kSingle,
                           std::optional<int> d = std::nullopt);

  NodeId node_count() const { return partial_.node_count(); }
  LayerMode layer_mode() const { return partial_.layer_mode(); }
  std::optional<int> d() const { return partial_.d(); }
  const PartialHag& partial() const { return partial_; }
  const std::vector<IntermediateNode>& intermediates() const {
    return partial_.intermediates();
  }
  std::size_t intermediate_count() const { return partial_.size(); }
  std::span<const NodeId> receiver_in(NodeId r) const { return receiver_in_[r]; }
  std::span<const NodeId> cover(NodeId v) const { return partial_.cover(v); }

  NodeId add_intermediate(std::vector<NodeId> in_set) {
    return partial_.add(std::move(in_set));
  }
  void set_receiver_in(NodeId r, std::vector<NodeId> in_set);

  // Receivers fed by each intermediate, indexed by id - node_count().
  std::vector<std::vector<NodeId>> intermediate_receivers() const;
  // Intermediates fed by each intermediate (T(M,M) out-edges).
  std::vector<std::vector<NodeId>> intermediate_successors() const;

  std::vector<Edge> edges_left_to_intermediate() const;
  std::vector<Edge> edges_intermediate_to_intermediate() const;
  std::vector<Edge> edges_intermediate_to_receiver() const;
  std::vector<Edge> edges_left_to_receiver() const;

  bool operator==(const HagGraph&) const = default;

 private:
  PartialHag partial_;
  std::vector<std::vector<NodeId>> receiver_in_;
};

struct CostParams {
  Rational c_agg{1};
  Rational c_up{1};
};

// c_agg * sum_w max(|in(w)| - 1, 0) + c_up * |R|.
Rational cost(const GnnComputationGraph& g, const CostParams& p);
Rational cost(const HagGraph& g, const CostParams& p);

// Aggregation savings of the HAG in units of c_agg.
std::int64_t value(const HagGraph& g);
// The tripartite form sum_M (|out| - 1)(|in| - 1); only meaningful for
// single-layer graphs.
std::int64_t value_single_layer(const HagGraph& g);
// value + |M| (d - 1). Throws GraphError if some intermediate's in-degree is
// not d.
std::int64_t value_tilde(const HagGraph& g, int d);

struct PathViolation {
  NodeId sender = 0;
  NodeId receiver = 0;
  std::int64_t path_count = 0;  // expected 1 if (sender, receiver) in E else 0
  bool operator==(const PathViolation&) const = default;
};

struct EquivalenceReport {
  bool ok = true;
  std::vector<PathViolation> violations;
};

// Counts u_L -> v_R paths for every pair and compares against E.
EquivalenceReport verify_equivalence(const HagGraph& hag, const DirectedGraph& g);

// Structural invariants: d-constraint, single-layer tripartiteness,
// |cover| >= 2, distinct covers, cached covers, receiver ids valid.
// Returns a list of human-readable problems (empty when valid).
std::vector<std::string> check_structure(const HagGraph& hag);

// Merges intermediates with identical covers into the one with the smallest
// id, rerouting out-edges, and renumbers the survivors densely.
HagGraph dedupe_intermediates(const HagGraph& hag);

// Builds a HAG from raw in-sets whose M-internal references may point in
// any direction. Intermediates are renumbered in topological order (min-id
// first among ready nodes). Throws GraphError on cycles or invalid refs.
// Duplicate covers are rejected unless `allow_duplicate_covers` is set,
// which exists so that dedupe_intermediates has something to consume.
HagGraph hag_from_parts(NodeId node_count, LayerMode mode,
                        std::optional<int> d,
                        const std::vector<std::vector<NodeId>>& intermediate_in,
                        std::vector<std::vector<NodeId>> receiver_in,
                        bool allow_duplicate_covers = false);

// Intermediate ids in a valid evaluation order: every node after all of its
// M in-neighbors, ties by smallest id.
std::vector<NodeId> topo_order_intermediates(const HagGraph& hag);

}  // namespace hag

#endif  // HAG_GRAPH_HPP_
