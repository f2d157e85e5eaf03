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

#include "hag/heuristics.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>

namespace hag {
namespace {

using Clock = std::chrono::steady_clock;

std::vector<NodeId> ranked_senders(const GnnComputationGraph& g,
                                   DegreeKind kind) {
  const NodeId n = g.node_count();
  std::vector<std::int64_t> key(n);
  for (NodeId v = 0; v < n; ++v) {
    const auto out = static_cast<std::int64_t>(g.out_neighbors(v).size());
    const auto in = static_cast<std::int64_t>(g.in_neighbors(v).size());
    key[v] = kind == DegreeKind::kOut ? out
             : kind == DegreeKind::kIn ? in
                                       : out + in;
  }
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return key[a] > key[b]; });
  return order;
}

// Residual in-sets plus the partial HAG under construction.
class PairBuilder {
 public:
  explicit PairBuilder(const GnnComputationGraph& g)
      : g_(g), partial_(g.node_count(), LayerMode::kSingle, 2), in_(g.node_count()) {
    for (NodeId r = 0; r < g.node_count(); ++r) {
      in_[r].assign(g.in_neighbors(r).begin(), g.in_neighbors(r).end());
    }
  }

  // Receivers whose residual in-set holds both a and b.
  std::vector<NodeId> attachable(NodeId a, NodeId b) const {
    std::vector<NodeId> out;
    for (NodeId r : g_.out_neighbors(a)) {
      const auto& in = in_[r];
      if (std::binary_search(in.begin(), in.end(), a) &&
          std::binary_search(in.begin(), in.end(), b)) {
        out.push_back(r);
      }
    }
    return out;
  }

  bool exists(NodeId a, NodeId b) const {
    std::vector<NodeId> c = {std::min(a, b), std::max(a, b)};
    return partial_.find_cover(c).has_value();
  }

  void add(NodeId a, NodeId b, const std::vector<NodeId>& rs,
           HagResult& result) {
    std::vector<NodeId> c = {std::min(a, b), std::max(a, b)};
    const NodeId m = partial_.add(c);
    for (NodeId r : rs) {
      auto& in = in_[r];
      in.erase(std::remove_if(in.begin(), in.end(),
                              [&](NodeId x) { return x == a || x == b; }),
               in.end());
      in.push_back(m);
    }
    const auto count = static_cast<std::int64_t>(rs.size());
    const std::int64_t before =
        result.trace.empty() ? 0 : result.trace.back().cumulative;
    result.trace.push_back({c, count, count - 1, before + count - 1});
  }

  HagGraph finish() const { return HagGraph(partial_, in_); }

 private:
  const GnnComputationGraph& g_;
  PartialHag partial_;
  std::vector<std::vector<NodeId>> in_;
};

}  // namespace

HagResult degree_heuristic(const GnnComputationGraph& g, int k,
                           const HeuristicOptions& opts) {
  if (k < 0) throw Error("k must be non-negative");
  const auto start = Clock::now();
  std::vector<NodeId> ranked;
  for (NodeId v : ranked_senders(g, opts.ranking)) {
    if (!g.out_neighbors(v).empty()) ranked.push_back(v);
  }
  HagResult result;
  PairBuilder builder(g);
  for (std::size_t i = 0; i + 1 < ranked.size() && i / 2 < static_cast<std::size_t>(k);
       i += 2) {
    const NodeId a = ranked[i];
    const NodeId b = ranked[i + 1];
    ++result.candidates_evaluated;
    auto rs = builder.attachable(a, b);
    if (opts.stop_on_nonpositive && rs.size() < 2) continue;
    builder.add(a, b, rs, result);
  }
  result.final = builder.finish();
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

HagResult hub_heuristic(const GnnComputationGraph& g, int k,
                        const HeuristicOptions& opts) {
  if (k < 0) throw Error("k must be non-negative");
  const auto start = Clock::now();
  const auto ranked = ranked_senders(g, opts.ranking);
  HagResult result;
  PairBuilder builder(g);
  const std::size_t limit = std::min<std::size_t>(k, ranked.size());
  for (std::size_t i = 0; i < limit; ++i) {
    const NodeId v = ranked[i];
    std::optional<NodeId> best_u;
    std::vector<NodeId> best_rs;
    for (NodeId u : g.in_neighbors(v)) {
      if (u == v || builder.exists(u, v)) continue;
      ++result.candidates_evaluated;
      auto rs = builder.attachable(v, u);
      if (!best_u || rs.size() > best_rs.size()) {
        best_u = u;
        best_rs = std::move(rs);
      }
    }
    if (!best_u) continue;
    if (opts.stop_on_nonpositive && best_rs.size() < 2) continue;
    builder.add(v, *best_u, best_rs, result);
  }
  result.final = builder.finish();
  result.elapsed_ms =
      std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  return result;
}

}  // namespace hag
