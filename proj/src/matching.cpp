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

#include "hag/matching.hpp"

#include <algorithm>
#include <queue>
#include <string>

namespace hag {
namespace {

bool is_subset(std::span<const NodeId> small, std::span<const NodeId> big) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

// Edmonds' algorithm for maximum cardinality matching in general graphs,
// O(V^3). Blossoms are contracted implicitly through base[].
class EdmondsMatcher {
 public:
  EdmondsMatcher(std::size_t n, std::span<const std::pair<int, int>> edges)
      : n_(static_cast<int>(n)), adj_(n) {
    for (auto [a, b] : edges) {
      if (a == b) continue;
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
  }

  std::size_t solve() {
    match_.assign(n_, -1);
    std::size_t size = 0;
    for (int v = 0; v < n_; ++v) {
      if (match_[v] != -1) continue;
      int u = find_augmenting_path(v);
      if (u == -1) continue;
      ++size;
      while (u != -1) {
        int pu = parent_[u];
        int next = match_[pu];
        match_[u] = pu;
        match_[pu] = u;
        u = next;
      }
    }
    return size;
  }

 private:
  int lowest_common_base(int a, int b) {
    std::vector<char> seen(n_, 0);
    for (;;) {
      a = base_[a];
      seen[a] = 1;
      if (match_[a] == -1) break;
      a = parent_[match_[a]];
    }
    for (;;) {
      b = base_[b];
      if (seen[b]) return b;
      b = parent_[match_[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base_[v] != b) {
      in_blossom_[base_[v]] = in_blossom_[base_[match_[v]]] = 1;
      parent_[v] = child;
      child = match_[v];
      v = parent_[match_[v]];
    }
  }

  int find_augmenting_path(int root) {
    used_.assign(n_, 0);
    parent_.assign(n_, -1);
    base_.resize(n_);
    for (int i = 0; i < n_; ++i) base_[i] = i;
    used_[root] = 1;
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int to : adj_[v]) {
        if (base_[v] == base_[to] || match_[v] == to) continue;
        if (to == root || (match_[to] != -1 && parent_[match_[to]] != -1)) {
          int b = lowest_common_base(v, to);
          in_blossom_.assign(n_, 0);
          mark_path(v, b, to);
          mark_path(to, b, v);
          for (int i = 0; i < n_; ++i) {
            if (in_blossom_[base_[i]]) {
              base_[i] = b;
              if (!used_[i]) {
                used_[i] = 1;
                q.push(i);
              }
            }
          }
        } else if (parent_[to] == -1) {
          parent_[to] = v;
          if (match_[to] == -1) return to;
          used_[match_[to]] = 1;
          q.push(match_[to]);
        }
      }
    }
    return -1;
  }

  int n_;
  std::vector<std::vector<int>> adj_;
  std::vector<int> match_, parent_, base_;
  std::vector<char> used_, in_blossom_;
};

int local_index(const ReceiverInstance& h, NodeId v) {
  auto it = std::lower_bound(h.vertices.begin(), h.vertices.end(), v);
  if (it == h.vertices.end() || *it != v) {
    throw MatchingError("receiver " + std::to_string(h.receiver) +
                        ": hyperedge vertex " + std::to_string(v) +
                        " outside the instance");
  }
  return static_cast<int>(it - h.vertices.begin());
}

class BranchAndBound {
 public:
  BranchAndBound(std::vector<std::uint64_t> masks,
                 std::vector<std::int64_t> weights)
      : masks_(std::move(masks)),
        weights_(std::move(weights)),
        suffix_(masks_.size() + 1, 0) {
    for (std::size_t i = masks_.size(); i-- > 0;) {
      suffix_[i] = suffix_[i + 1] + weights_[i];
    }
  }

  // Include-first depth-first order visits subsets in lexicographic order of
  // their sorted index lists (among sets that are not prefixes of each
  // other), and positive weights rule out ties between a set and its
  // prefix, so keeping only strict improvements yields the lex-min optimum.
  std::vector<std::size_t> solve() {
    search(0, 0, 0);
    return best_;
  }
  std::int64_t best_value() const { return best_value_; }

 private:
  void search(std::size_t i, std::uint64_t used, std::int64_t current) {
    if (i == masks_.size()) {
      if (current > best_value_) {
        best_value_ = current;
        best_ = chosen_;
      }
      return;
    }
    if (current + suffix_[i] <= best_value_) return;
    if ((masks_[i] & used) == 0) {
      chosen_.push_back(i);
      search(i + 1, used | masks_[i], current + weights_[i]);
      chosen_.pop_back();
    }
    search(i + 1, used, current);
  }

  std::vector<std::uint64_t> masks_;
  std::vector<std::int64_t> weights_;
  std::vector<std::int64_t> suffix_;
  std::vector<std::size_t> chosen_;
  std::vector<std::size_t> best_;
  std::int64_t best_value_ = 0;
};

}  // namespace

ReceiverInstance build_receiver_instance(const PartialHag& p,
                                         const GnnComputationGraph& g,
                                         NodeId r) {
  ReceiverInstance h;
  h.receiver = r;
  auto in = g.in_neighbors(r);
  h.vertices.assign(in.begin(), in.end());
  for (const IntermediateNode& m : p.intermediates()) {
    if (m.cover.size() <= in.size() && is_subset(m.cover, in)) {
      h.edges.push_back(
          {m.id, m.cover, static_cast<std::int64_t>(m.cover.size()) - 1});
    }
  }
  return h;
}

HypergraphInstance build_matching_instance(const PartialHag& p,
                                           const GnnComputationGraph& g) {
  if (p.node_count() != g.node_count()) {
    throw GraphError("partial HAG has " + std::to_string(p.node_count()) +
                     " leaves but the computation graph has " +
                     std::to_string(g.node_count()));
  }
  HypergraphInstance h;
  h.receivers.reserve(g.node_count());
  for (NodeId r = 0; r < g.node_count(); ++r) {
    h.receivers.push_back(build_receiver_instance(p, g, r));
  }
  return h;
}

std::size_t max_cardinality_matching(
    std::size_t vertex_count, std::span<const std::pair<int, int>> edges) {
  return EdmondsMatcher(vertex_count, edges).solve();
}

ReceiverMatching max_matching_blossom(const ReceiverInstance& h) {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(h.edges.size());
  for (const Hyperedge& e : h.edges) {
    if (e.vertices.size() != 2) {
      throw MatchingError("receiver " + std::to_string(h.receiver) +
                          ": hyperedge of intermediate " +
                          std::to_string(e.source) + " has " +
                          std::to_string(e.vertices.size()) + " vertices");
    }
    edges.emplace_back(local_index(h, e.vertices[0]),
                       local_index(h, e.vertices[1]));
  }
  const std::size_t nv = h.vertices.size();
  const std::size_t target = max_cardinality_matching(nv, edges);

  // Lex-min maximum matching: take each edge, in id order, iff a maximum
  // matching still exists that contains it and everything taken so far.
  ReceiverMatching out;
  std::vector<char> removed(nv, 0);
  std::size_t remaining = target;
  for (std::size_t i = 0; i < edges.size() && remaining > 0; ++i) {
    auto [a, b] = edges[i];
    if (removed[a] || removed[b]) continue;
    removed[a] = removed[b] = 1;
    std::vector<std::pair<int, int>> rest;
    for (auto [x, y] : edges) {
      if (!removed[x] && !removed[y]) rest.emplace_back(x, y);
    }
    if (max_cardinality_matching(nv, rest) + 1 == remaining) {
      out.selected.push_back(h.edges[i].source);
      --remaining;
    } else {
      removed[a] = removed[b] = 0;
    }
  }
  out.value = static_cast<std::int64_t>(target);
  return out;
}

ReceiverMatching max_matching_bruteforce(const ReceiverInstance& h,
                                         const BruteForceCap& cap) {
  if (h.vertices.size() > cap.max_vertices) {
    throw RegimeError("receiver " + std::to_string(h.receiver) + " has " +
                          std::to_string(h.vertices.size()) +
                          " in-neighbors, brute-force cap is " +
                          std::to_string(cap.max_vertices),
                      h.receiver);
  }
  if (h.edges.size() > cap.max_edges) {
    throw RegimeError("receiver " + std::to_string(h.receiver) + " has " +
                          std::to_string(h.edges.size()) +
                          " hyperedges, brute-force cap is " +
                          std::to_string(cap.max_edges),
                      h.receiver);
  }
  if (h.vertices.size() > 64) {
    throw RegimeError("brute force supports at most 64 vertices", h.receiver);
  }
  std::vector<std::uint64_t> masks;
  std::vector<std::int64_t> weights;
  for (const Hyperedge& e : h.edges) {
    std::uint64_t mask = 0;
    for (NodeId v : e.vertices) mask |= std::uint64_t{1} << local_index(h, v);
    masks.push_back(mask);
    weights.push_back(e.weight);
  }
  BranchAndBound search(std::move(masks), std::move(weights));
  ReceiverMatching out;
  for (std::size_t i : search.solve()) out.selected.push_back(h.edges[i].source);
  out.value = search.best_value();
  return out;
}

Matching greedy_matching(const HypergraphInstance& h, const PartialHag& p,
                         std::span<const NodeId> order) {
  std::vector<NodeId> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  bool permutation = sorted.size() == p.size();
  for (std::size_t i = 0; permutation && i < sorted.size(); ++i) {
    permutation = sorted[i] == p.node_count() + static_cast<NodeId>(i);
  }
  if (!permutation) {
    throw MatchingError("greedy order must list every intermediate once");
  }
  Matching out;
  out.per_receiver.resize(h.receivers.size());
  for (const ReceiverInstance& hr : h.receivers) {
    std::vector<char> used(hr.vertices.size(), 0);
    auto& chosen = out.per_receiver[hr.receiver];
    for (NodeId v : order) {
      auto it = std::lower_bound(
          hr.edges.begin(), hr.edges.end(), v,
          [](const Hyperedge& e, NodeId id) { return e.source < id; });
      if (it == hr.edges.end() || it->source != v) continue;
      std::vector<int> idx;
      bool free = true;
      for (NodeId x : it->vertices) {
        int i = local_index(hr, x);
        free = free && !used[i];
        idx.push_back(i);
      }
      if (!free) continue;
      for (int i : idx) used[i] = 1;
      chosen.push_back(v);
      out.value += it->weight;
    }
    std::sort(chosen.begin(), chosen.end());
  }
  return out;
}

std::int64_t matching_value(const Matching& n, const PartialHag& p) {
  std::int64_t total = 0;
  for (const auto& chosen : n.per_receiver) {
    for (NodeId v : chosen) {
      total += static_cast<std::int64_t>(p.cover(v).size()) - 1;
    }
  }
  return total;
}

std::int64_t partial_cost(const PartialHag& p) {
  std::int64_t total = 0;
  for (const IntermediateNode& m : p.intermediates()) {
    total += static_cast<std::int64_t>(m.in_set.size()) - 1;
  }
  return total;
}

HagGraph phi(const PartialHag& p, const GnnComputationGraph& g,
             const Matching& n) {
  if (p.node_count() != g.node_count()) {
    throw GraphError("partial HAG and computation graph disagree on |L|");
  }
  if (static_cast<NodeId>(n.per_receiver.size()) != g.node_count()) {
    throw MatchingError("matching covers " +
                        std::to_string(n.per_receiver.size()) +
                        " receivers, expected " +
                        std::to_string(g.node_count()));
  }
  std::vector<std::vector<NodeId>> receiver_in(g.node_count());
  for (NodeId r = 0; r < g.node_count(); ++r) {
    auto in = g.in_neighbors(r);
    std::vector<char> covered(in.size(), 0);
    auto& next = receiver_in[r];
    for (NodeId v : n.per_receiver[r]) {
      if (!p.is_intermediate(v)) {
        throw MatchingError("receiver " + std::to_string(r) +
                            ": matched node " + std::to_string(v) +
                            " is not an intermediate");
      }
      for (NodeId leaf : p.cover(v)) {
        auto it = std::lower_bound(in.begin(), in.end(), leaf);
        if (it == in.end() || *it != leaf) {
          throw MatchingError("receiver " + std::to_string(r) +
                              ": cover of " + std::to_string(v) +
                              " is not inside its in-set");
        }
        auto& mark = covered[it - in.begin()];
        if (mark) {
          throw MatchingError("receiver " + std::to_string(r) +
                              ": overlapping hyperedges at leaf " +
                              std::to_string(leaf));
        }
        mark = 1;
      }
      next.push_back(v);
    }
    for (std::size_t i = 0; i < in.size(); ++i) {
      if (!covered[i]) next.push_back(in[i]);
    }
  }
  return HagGraph(p, std::move(receiver_in));
}

Matching phi_inverse(const HagGraph& hag) {
  Matching out;
  out.per_receiver.resize(hag.node_count());
  for (NodeId r = 0; r < hag.node_count(); ++r) {
    for (NodeId u : hag.receiver_in(r)) {
      if (!hag.partial().is_intermediate(u)) continue;
      out.per_receiver[r].push_back(u);
      out.value += static_cast<std::int64_t>(hag.cover(u).size()) - 1;
    }
  }
  return out;
}

CompletionMode resolve_completion_mode(const PartialHag& p,
                                       CompletionMode mode) {
  const bool all_pairs =
      std::all_of(p.intermediates().begin(), p.intermediates().end(),
                  [](const IntermediateNode& m) { return m.cover.size() == 2; });
  switch (mode) {
    case CompletionMode::kAuto:
      return all_pairs ? CompletionMode::kBlossom : CompletionMode::kBruteForce;
    case CompletionMode::kBlossom:
      if (!all_pairs) {
        throw RegimeError(
            "blossom completion needs every cover to have two leaves "
            "(d = 2, single layer)");
      }
      return mode;
    case CompletionMode::kBruteForce:
      return mode;
  }
  return mode;
}

ReceiverMatching solve_receiver(const ReceiverInstance& h, CompletionMode mode,
                                const BruteForceCap& cap) {
  if (h.edges.empty()) return {};
  return mode == CompletionMode::kBlossom ? max_matching_blossom(h)
                                          : max_matching_bruteforce(h, cap);
}

Matching optimal_matching(const PartialHag& p, const GnnComputationGraph& g,
                          CompletionMode mode, const BruteForceCap& cap) {
  mode = resolve_completion_mode(p, mode);
  if (mode == CompletionMode::kBruteForce) {
    for (NodeId r = 0; r < g.node_count(); ++r) {
      if (g.in_neighbors(r).size() > cap.max_vertices) {
        throw RegimeError("receiver " + std::to_string(r) + " has " +
                              std::to_string(g.in_neighbors(r).size()) +
                              " in-neighbors, brute-force cap is " +
                              std::to_string(cap.max_vertices),
                          r);
      }
    }
  }
  const HypergraphInstance h = build_matching_instance(p, g);
  Matching out;
  out.per_receiver.resize(g.node_count());
  for (const ReceiverInstance& hr : h.receivers) {
    ReceiverMatching m = solve_receiver(hr, mode, cap);
    out.value += m.value;
    out.per_receiver[hr.receiver] = std::move(m.selected);
  }
  return out;
}

HagGraph optimal_completion(const PartialHag& p, const GnnComputationGraph& g,
                            CompletionMode mode, const BruteForceCap& cap) {
  return phi(p, g, optimal_matching(p, g, mode, cap));
}

}  // namespace hag
