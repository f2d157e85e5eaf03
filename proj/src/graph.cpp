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

#include "hag/graph.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <map>
#include <queue>
#include <sstream>

namespace hag {
namespace {

std::string describe(std::span<const NodeId> ids) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i) out << ',';
    out << ids[i];
  }
  out << '}';
  return out.str();
}

std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
  constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
  return a > kMax - b ? kMax : a + b;
}

// Sparse map sender -> number of paths, kept sorted by sender.
using PathCounts = std::vector<std::pair<NodeId, std::int64_t>>;

PathCounts merge_counts(const PathCounts& a, const PathCounts& b) {
  PathCounts out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      out.push_back(b[j++]);
    } else {
      out.emplace_back(a[i].first, saturating_add(a[i].second, b[j].second));
      ++i;
      ++j;
    }
  }
  return out;
}

// Kahn's algorithm over the M-internal relation; ready nodes leave in
// ascending index order.
std::vector<std::size_t> topo_sort(NodeId node_count,
                                   const std::vector<std::vector<NodeId>>& in) {
  const std::size_t k = in.size();
  std::vector<std::size_t> pending(k, 0);
  std::vector<std::vector<std::size_t>> successors(k);
  for (std::size_t i = 0; i < k; ++i) {
    for (NodeId u : in[i]) {
      if (u < 0 || u >= node_count + static_cast<NodeId>(k)) {
        throw GraphError("intermediate " + std::to_string(node_count + i) +
                         " references unknown node " + std::to_string(u));
      }
      if (u >= node_count) {
        successors[u - node_count].push_back(i);
        ++pending[i];
      }
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>>
      ready;
  for (std::size_t i = 0; i < k; ++i) {
    if (pending[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(k);
  while (!ready.empty()) {
    std::size_t i = ready.top();
    ready.pop();
    order.push_back(i);
    for (std::size_t s : successors[i]) {
      if (--pending[s] == 0) ready.push(s);
    }
  }
  if (order.size() != k) throw GraphError("cycle among intermediate nodes");
  return order;
}

}  // namespace

// ---------------------------------------------------------------------------
// DirectedGraph

DirectedGraph::DirectedGraph(NodeId node_count, std::vector<Edge> edges)
    : node_count_(node_count), edges_(std::move(edges)) {
  if (node_count < 0) throw GraphError("negative node count");
  for (const Edge& e : edges_) {
    if (e.source < 0 || e.source >= node_count || e.target < 0 ||
        e.target >= node_count) {
      throw GraphError("edge (" + std::to_string(e.source) + "," +
                       std::to_string(e.target) + ") out of range for " +
                       std::to_string(node_count) + " nodes");
    }
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
}

bool DirectedGraph::has_edge(NodeId u, NodeId v) const {
  return std::binary_search(edges_.begin(), edges_.end(), Edge{u, v});
}

// ---------------------------------------------------------------------------
// GnnComputationGraph

GnnComputationGraph::GnnComputationGraph(const DirectedGraph& g)
    : node_count_(g.node_count()),
      edge_count_(g.edge_count()),
      in_(g.node_count()),
      out_(g.node_count()) {
  // Edges are sorted by (source, target), so both lists come out sorted.
  for (const Edge& e : g.edges()) {
    out_[e.source].push_back(e.target);
    in_[e.target].push_back(e.source);
  }
}

bool GnnComputationGraph::has_edge(NodeId l, NodeId r) const {
  return std::binary_search(in_[r].begin(), in_[r].end(), l);
}

DirectedGraph GnnComputationGraph::source_graph() const {
  std::vector<Edge> edges;
  edges.reserve(edge_count_);
  for (NodeId u = 0; u < node_count_; ++u) {
    for (NodeId v : out_[u]) edges.push_back({u, v});
  }
  return DirectedGraph(node_count_, std::move(edges));
}

GnnComputationGraph build_computation_graph(const DirectedGraph& g) {
  return GnnComputationGraph(g);
}

std::string to_string(LayerMode mode) {
  return mode == LayerMode::kSingle ? "single" : "multi";
}

LayerMode parse_layer_mode(const std::string& text) {
  if (text == "single") return LayerMode::kSingle;
  if (text == "multi") return LayerMode::kMulti;
  throw ParseError("unknown layer mode '" + text + "'");
}

// ---------------------------------------------------------------------------
// PartialHag

PartialHag::PartialHag(NodeId node_count, LayerMode mode, std::optional<int> d)
    : node_count_(node_count), layer_mode_(mode), d_(d) {
  if (node_count < 0) throw GraphError("negative node count");
  if (d && *d < 2) throw GraphError("intermediate in-degree d must be >= 2");
  left_cover_.resize(node_count);
  for (NodeId v = 0; v < node_count; ++v) left_cover_[v] = v;
}

const IntermediateNode& PartialHag::intermediate(NodeId id) const {
  if (!is_intermediate(id)) {
    throw GraphError("unknown intermediate node " + std::to_string(id));
  }
  return nodes_[id - node_count_];
}

std::span<const NodeId> PartialHag::cover(NodeId v) const {
  if (is_left(v)) return {left_cover_.data() + v, 1};
  return intermediate(v).cover;
}

std::optional<std::vector<NodeId>> PartialHag::union_cover(
    std::span<const NodeId> members) const {
  std::vector<NodeId> out;
  for (NodeId m : members) {
    auto c = cover(m);
    out.insert(out.end(), c.begin(), c.end());
  }
  std::sort(out.begin(), out.end());
  if (std::adjacent_find(out.begin(), out.end()) != out.end()) {
    return std::nullopt;
  }
  return out;
}

std::optional<NodeId> PartialHag::find_cover(
    std::span<const NodeId> cover) const {
  for (const IntermediateNode& m : nodes_) {
    if (std::equal(m.cover.begin(), m.cover.end(), cover.begin(), cover.end())) {
      return m.id;
    }
  }
  return std::nullopt;
}

NodeId PartialHag::add(std::vector<NodeId> in_set) {
  return add_impl(std::move(in_set), /*allow_duplicate_cover=*/false);
}

NodeId PartialHag::add_impl(std::vector<NodeId> in_set,
                            bool allow_duplicate_cover) {
  std::sort(in_set.begin(), in_set.end());
  const NodeId id = next_id();
  const std::string name = "intermediate " + std::to_string(id);
  if (std::adjacent_find(in_set.begin(), in_set.end()) != in_set.end()) {
    throw GraphError(name + ": repeated in-neighbor in " + describe(in_set));
  }
  if (d_ && static_cast<int>(in_set.size()) != *d_) {
    throw GraphError(name + ": in-degree " + std::to_string(in_set.size()) +
                     " but d = " + std::to_string(*d_));
  }
  for (NodeId u : in_set) {
    if (!is_left(u) && !is_intermediate(u)) {
      throw GraphError(name + ": unknown in-neighbor " + std::to_string(u));
    }
    if (layer_mode_ == LayerMode::kSingle && !is_left(u)) {
      throw GraphError(name + ": single-layer graph cannot feed from " +
                       std::to_string(u));
    }
  }
  auto merged = union_cover(in_set);
  if (!merged) {
    throw GraphError(name + ": in-neighbors " + describe(in_set) +
                     " have overlapping covers");
  }
  if (merged->size() < 2) {
    throw GraphError(name + ": cover " + describe(*merged) +
                     " has fewer than two leaves");
  }
  if (!allow_duplicate_cover) {
    if (auto dup = find_cover(*merged)) {
      throw GraphError(name + ": cover " + describe(*merged) +
                       " duplicates intermediate " + std::to_string(*dup));
    }
  }
  nodes_.push_back({id, std::move(in_set), std::move(*merged)});
  return id;
}

bool PartialHag::covers_consistent() const {
  for (const IntermediateNode& m : nodes_) {
    // Independent traversal: walk back to the leaves without the cache.
    std::vector<NodeId> stack(m.in_set.begin(), m.in_set.end());
    std::vector<NodeId> leaves;
    while (!stack.empty()) {
      NodeId v = stack.back();
      stack.pop_back();
      if (is_left(v)) {
        leaves.push_back(v);
      } else {
        const auto& in = nodes_[v - node_count_].in_set;
        stack.insert(stack.end(), in.begin(), in.end());
      }
    }
    std::sort(leaves.begin(), leaves.end());
    leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
    if (leaves != m.cover) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// HagGraph

HagGraph::HagGraph(PartialHag partial,
                   std::vector<std::vector<NodeId>> receiver_in)
    : partial_(std::move(partial)), receiver_in_(std::move(receiver_in)) {
  if (static_cast<NodeId>(receiver_in_.size()) != partial_.node_count()) {
    throw GraphError("receiver count " + std::to_string(receiver_in_.size()) +
                     " != node count " +
                     std::to_string(partial_.node_count()));
  }
  for (NodeId r = 0; r < partial_.node_count(); ++r) {
    set_receiver_in(r, std::move(receiver_in_[r]));
  }
}

HagGraph HagGraph::from_gnn(const GnnComputationGraph& g, LayerMode mode,
                            std::optional<int> d) {
  std::vector<std::vector<NodeId>> in(g.node_count());
  for (NodeId r = 0; r < g.node_count(); ++r) {
    auto span = g.in_neighbors(r);
    in[r].assign(span.begin(), span.end());
  }
  return HagGraph(PartialHag(g.node_count(), mode, d), std::move(in));
}

void HagGraph::set_receiver_in(NodeId r, std::vector<NodeId> in_set) {
  if (r < 0 || r >= node_count()) {
    throw GraphError("unknown receiver " + std::to_string(r));
  }
  std::sort(in_set.begin(), in_set.end());
  if (std::adjacent_find(in_set.begin(), in_set.end()) != in_set.end()) {
    throw GraphError("receiver " + std::to_string(r) +
                     ": repeated in-neighbor in " + describe(in_set));
  }
  for (NodeId u : in_set) {
    if (!partial_.is_left(u) && !partial_.is_intermediate(u)) {
      throw GraphError("receiver " + std::to_string(r) +
                       ": unknown in-neighbor " + std::to_string(u));
    }
  }
  receiver_in_[r] = std::move(in_set);
}

std::vector<std::vector<NodeId>> HagGraph::intermediate_receivers() const {
  std::vector<std::vector<NodeId>> out(partial_.size());
  for (NodeId r = 0; r < node_count(); ++r) {
    for (NodeId u : receiver_in_[r]) {
      if (partial_.is_intermediate(u)) out[u - node_count()].push_back(r);
    }
  }
  return out;
}

std::vector<std::vector<NodeId>> HagGraph::intermediate_successors() const {
  std::vector<std::vector<NodeId>> out(partial_.size());
  for (const IntermediateNode& m : intermediates()) {
    for (NodeId u : m.in_set) {
      if (partial_.is_intermediate(u)) out[u - node_count()].push_back(m.id);
    }
  }
  return out;
}

std::vector<Edge> HagGraph::edges_left_to_intermediate() const {
  std::vector<Edge> out;
  for (const IntermediateNode& m : intermediates()) {
    for (NodeId u : m.in_set) {
      if (partial_.is_left(u)) out.push_back({u, m.id});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> HagGraph::edges_intermediate_to_intermediate() const {
  std::vector<Edge> out;
  for (const IntermediateNode& m : intermediates()) {
    for (NodeId u : m.in_set) {
      if (partial_.is_intermediate(u)) out.push_back({u, m.id});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> HagGraph::edges_intermediate_to_receiver() const {
  std::vector<Edge> out;
  for (NodeId r = 0; r < node_count(); ++r) {
    for (NodeId u : receiver_in_[r]) {
      if (partial_.is_intermediate(u)) out.push_back({u, r});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> HagGraph::edges_left_to_receiver() const {
  std::vector<Edge> out;
  for (NodeId r = 0; r < node_count(); ++r) {
    for (NodeId u : receiver_in_[r]) {
      if (partial_.is_left(u)) out.push_back({u, r});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// cost / value

Rational cost(const GnnComputationGraph& g, const CostParams& p) {
  std::int64_t agg = 0;
  for (NodeId r = 0; r < g.node_count(); ++r) {
    agg += std::max<std::int64_t>(
        static_cast<std::int64_t>(g.in_neighbors(r).size()) - 1, 0);
  }
  return p.c_agg * agg + p.c_up * static_cast<std::int64_t>(g.node_count());
}

Rational cost(const HagGraph& g, const CostParams& p) {
  std::int64_t agg = 0;
  for (const IntermediateNode& m : g.intermediates()) {
    agg += static_cast<std::int64_t>(m.in_set.size()) - 1;
  }
  for (NodeId r = 0; r < g.node_count(); ++r) {
    agg += std::max<std::int64_t>(
        static_cast<std::int64_t>(g.receiver_in(r).size()) - 1, 0);
  }
  return p.c_agg * agg + p.c_up * static_cast<std::int64_t>(g.node_count());
}

std::int64_t value(const HagGraph& g) {
  // The out-degree here counts receiver out-edges only: an edge into another
  // intermediate does not save an aggregation at a receiver.
  std::vector<std::int64_t> out_r(g.intermediate_count(), 0);
  for (NodeId r = 0; r < g.node_count(); ++r) {
    for (NodeId u : g.receiver_in(r)) {
      if (g.partial().is_intermediate(u)) ++out_r[u - g.node_count()];
    }
  }
  std::int64_t total = 0;
  for (const IntermediateNode& m : g.intermediates()) {
    const auto cover = static_cast<std::int64_t>(m.cover.size());
    const auto in = static_cast<std::int64_t>(m.in_set.size());
    total += out_r[m.id - g.node_count()] * (cover - 1) - (in - 1);
  }
  return total;
}

std::int64_t value_single_layer(const HagGraph& g) {
  const auto receivers = g.intermediate_receivers();
  const auto successors = g.intermediate_successors();
  std::int64_t total = 0;
  for (const IntermediateNode& m : g.intermediates()) {
    const std::size_t idx = m.id - g.node_count();
    const auto out =
        static_cast<std::int64_t>(receivers[idx].size() + successors[idx].size());
    total += (out - 1) * (static_cast<std::int64_t>(m.in_set.size()) - 1);
  }
  return total;
}

std::int64_t value_tilde(const HagGraph& g, int d) {
  for (const IntermediateNode& m : g.intermediates()) {
    if (static_cast<int>(m.in_set.size()) != d) {
      throw GraphError("intermediate " + std::to_string(m.id) +
                       " has in-degree " + std::to_string(m.in_set.size()) +
                       ", not d = " + std::to_string(d));
    }
  }
  return value(g) +
         static_cast<std::int64_t>(g.intermediate_count()) * (d - 1);
}

// ---------------------------------------------------------------------------
// Equivalence

EquivalenceReport verify_equivalence(const HagGraph& hag,
                                     const DirectedGraph& g) {
  if (hag.node_count() != g.node_count()) {
    throw GraphError("HAG has " + std::to_string(hag.node_count()) +
                     " nodes but source graph has " +
                     std::to_string(g.node_count()));
  }
  const NodeId n = hag.node_count();
  const GnnComputationGraph gnn(g);

  auto counts_of = [&](NodeId v,
                       const std::vector<PathCounts>& m_counts) -> PathCounts {
    if (v < n) return {{v, 1}};
    return m_counts[v - n];
  };

  // In-sets reference only earlier ids, so id order is topological.
  std::vector<PathCounts> m_counts(hag.intermediate_count());
  for (const IntermediateNode& m : hag.intermediates()) {
    PathCounts acc;
    for (NodeId u : m.in_set) acc = merge_counts(acc, counts_of(u, m_counts));
    m_counts[m.id - n] = std::move(acc);
  }

  EquivalenceReport report;
  for (NodeId r = 0; r < n; ++r) {
    PathCounts acc;
    for (NodeId u : hag.receiver_in(r)) {
      acc = merge_counts(acc, counts_of(u, m_counts));
    }
    auto expected = gnn.in_neighbors(r);
    std::size_t i = 0, j = 0;
    while (i < acc.size() || j < expected.size()) {
      if (j == expected.size() ||
          (i < acc.size() && acc[i].first < expected[j])) {
        report.violations.push_back({acc[i].first, r, acc[i].second});
        ++i;
      } else if (i == acc.size() || expected[j] < acc[i].first) {
        report.violations.push_back({expected[j], r, 0});
        ++j;
      } else {
        if (acc[i].second != 1) {
          report.violations.push_back({acc[i].first, r, acc[i].second});
        }
        ++i;
        ++j;
      }
    }
  }
  report.ok = report.violations.empty();
  return report;
}

std::vector<std::string> check_structure(const HagGraph& hag) {
  std::vector<std::string> problems;
  const PartialHag& p = hag.partial();
  std::map<std::vector<NodeId>, NodeId> seen;
  for (const IntermediateNode& m : hag.intermediates()) {
    const std::string name = "intermediate " + std::to_string(m.id);
    if (p.d() && static_cast<int>(m.in_set.size()) != *p.d()) {
      problems.push_back(name + ": in-degree " +
                         std::to_string(m.in_set.size()) + " != d");
    }
    for (NodeId u : m.in_set) {
      if (u >= m.id) problems.push_back(name + ": forward reference");
      if (p.layer_mode() == LayerMode::kSingle && !p.is_left(u)) {
        problems.push_back(name + ": M->M edge in single-layer graph");
      }
    }
    if (m.cover.size() < 2) problems.push_back(name + ": cover smaller than 2");
    auto [it, inserted] = seen.emplace(m.cover, m.id);
    if (!inserted) {
      problems.push_back(name + ": cover duplicates intermediate " +
                         std::to_string(it->second));
    }
  }
  if (!p.covers_consistent()) problems.push_back("cached covers are stale");
  return problems;
}

// ---------------------------------------------------------------------------
// Rewriting

HagGraph hag_from_parts(NodeId node_count, LayerMode mode, std::optional<int> d,
                        const std::vector<std::vector<NodeId>>& intermediate_in,
                        std::vector<std::vector<NodeId>> receiver_in,
                        bool allow_duplicate_covers) {
  const auto order = topo_sort(node_count, intermediate_in);
  std::vector<NodeId> remap(intermediate_in.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) {
    remap[order[pos]] = node_count + static_cast<NodeId>(pos);
  }
  auto translate = [&](NodeId u) -> NodeId {
    if (u < node_count) return u;
    const auto idx = static_cast<std::size_t>(u - node_count);
    if (idx >= remap.size()) {
      throw GraphError("reference to unknown intermediate " + std::to_string(u));
    }
    return remap[idx];
  };
  PartialHag partial(node_count, mode, d);
  for (std::size_t idx : order) {
    std::vector<NodeId> in;
    for (NodeId u : intermediate_in[idx]) in.push_back(translate(u));
    partial.add_impl(std::move(in), allow_duplicate_covers);
  }
  for (auto& in : receiver_in) {
    for (NodeId& u : in) {
      if (u < 0) throw GraphError("negative node id " + std::to_string(u));
      u = translate(u);
    }
  }
  return HagGraph(std::move(partial), std::move(receiver_in));
}

std::vector<NodeId> topo_order_intermediates(const HagGraph& hag) {
  std::vector<std::vector<NodeId>> in;
  in.reserve(hag.intermediate_count());
  for (const IntermediateNode& m : hag.intermediates()) in.push_back(m.in_set);
  std::vector<NodeId> out;
  for (std::size_t idx : topo_sort(hag.node_count(), in)) {
    out.push_back(hag.node_count() + static_cast<NodeId>(idx));
  }
  return out;
}

HagGraph dedupe_intermediates(const HagGraph& hag) {
  const NodeId n = hag.node_count();
  std::map<std::vector<NodeId>, NodeId> first_with_cover;
  // alias[i]: the surviving id (old numbering) for intermediate n + i.
  std::vector<NodeId> alias(hag.intermediate_count());
  for (const IntermediateNode& m : hag.intermediates()) {
    auto [it, inserted] = first_with_cover.emplace(m.cover, m.id);
    alias[m.id - n] = it->second;
  }
  // Dense renumbering of the survivors, in id order.
  std::vector<NodeId> new_id(hag.intermediate_count(), -1);
  NodeId next = n;
  for (const IntermediateNode& m : hag.intermediates()) {
    if (alias[m.id - n] == m.id) new_id[m.id - n] = next++;
  }
  auto translate = [&](NodeId u) {
    return u < n ? u : new_id[alias[u - n] - n];
  };
  std::vector<std::vector<NodeId>> intermediate_in;
  for (const IntermediateNode& m : hag.intermediates()) {
    if (alias[m.id - n] != m.id) continue;
    std::vector<NodeId> in;
    for (NodeId u : m.in_set) in.push_back(translate(u));
    intermediate_in.push_back(std::move(in));
  }
  std::vector<std::vector<NodeId>> receiver_in(n);
  for (NodeId r = 0; r < n; ++r) {
    for (NodeId u : hag.receiver_in(r)) receiver_in[r].push_back(translate(u));
    std::sort(receiver_in[r].begin(), receiver_in[r].end());
    receiver_in[r].erase(
        std::unique(receiver_in[r].begin(), receiver_in[r].end()),
        receiver_in[r].end());
  }
  return hag_from_parts(n, hag.layer_mode(), hag.d(), intermediate_in,
                        std::move(receiver_in));
}

}  // namespace hag
