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
// K rounds of neighborhood aggregation, either straight over the GNN graph
// or through a HAG's intermediate nodes. Every call to combine is one
// aggregation op.
//

#ifndef HAG_EXECUTOR_HPP_
#define HAG_EXECUTOR_HPP_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hag/graph.hpp"

namespace hag {

// combine must be commutative and associative with `identity` as its unit.
// update(a, h) forms the next state from the aggregate and the old state.
template <typename T>
struct AggregateSpec {
  T identity{};
  std::function<T(const T&, const T&)> combine;
  std::function<T(const T&, const T&)> update;
};

template <typename T>
struct RunReport {
  int rounds = 0;
  // states[k][v] is h_v after round k; states[0] is the input.
  std::vector<std::vector<T>> states;
  // aggregates[k - 1][v] is a_v in round k.
  std::vector<std::vector<T>> aggregates;
  std::vector<std::int64_t> ops_per_round;
  std::int64_t total_ops = 0;
};

// Integer sum; update adds the aggregate to the old state.
AggregateSpec<std::int64_t> sum_aggregate();

using Multiset = std::vector<std::int64_t>;  // sorted

// Sorted multiset union; update replaces the state by a one-element multiset
// holding a fingerprint of (a, h), so later rounds stay sensitive to every
// input without the multisets growing.
AggregateSpec<Multiset> multiset_aggregate();

// Intermediate ids in evaluation order (min id first among ready nodes).
// Throws GraphError on a cycle.
std::vector<NodeId> topo_order_m(const HagGraph& hag);

namespace detail {

template <typename T>
T fold(std::span<const NodeId> inputs, const std::function<const T&(NodeId)>& get,
       const AggregateSpec<T>& agg, std::int64_t& ops) {
  if (inputs.empty()) return agg.identity;
  T acc = get(inputs[0]);
  for (std::size_t i = 1; i < inputs.size(); ++i) {
    acc = agg.combine(acc, get(inputs[i]));
    ++ops;
  }
  return acc;
}

inline void check_run_args(int rounds, std::size_t init_size, NodeId n) {
  if (rounds < 1) throw Error("need at least one round");
  if (init_size != static_cast<std::size_t>(n)) {
    throw Error("expected " + std::to_string(n) + " initial states, got " +
                std::to_string(init_size));
  }
}

}  // namespace detail

template <typename T>
RunReport<T> run_gnn(const GnnComputationGraph& g, int rounds,
                     const std::vector<T>& init, const AggregateSpec<T>& agg) {
  const NodeId n = g.node_count();
  detail::check_run_args(rounds, init.size(), n);
  RunReport<T> report;
  report.rounds = rounds;
  report.states.push_back(init);
  for (int k = 1; k <= rounds; ++k) {
    const std::vector<T>& h = report.states.back();
    std::function<const T&(NodeId)> get = [&](NodeId u) -> const T& { return h[u]; };
    std::int64_t ops = 0;
    std::vector<T> a(n);
    std::vector<T> next(n);
    for (NodeId v = 0; v < n; ++v) {
      a[v] = detail::fold<T>(g.in_neighbors(v), get, agg, ops);
      next[v] = agg.update(a[v], h[v]);
    }
    report.aggregates.push_back(std::move(a));
    report.states.push_back(std::move(next));
    report.ops_per_round.push_back(ops);
    report.total_ops += ops;
  }
  return report;
}

template <typename T>
RunReport<T> run_hag(const HagGraph& hag, int rounds, const std::vector<T>& init,
                     const AggregateSpec<T>& agg) {
  const NodeId n = hag.node_count();
  detail::check_run_args(rounds, init.size(), n);
  const std::vector<NodeId> order = topo_order_m(hag);
  RunReport<T> report;
  report.rounds = rounds;
  report.states.push_back(init);
  std::vector<T> mid(hag.intermediate_count());
  for (int k = 1; k <= rounds; ++k) {
    const std::vector<T>& h = report.states.back();
    std::function<const T&(NodeId)> get = [&](NodeId u) -> const T& {
      return u < n ? h[u] : mid[u - n];
    };
    std::int64_t ops = 0;
    for (NodeId m : order) {
      mid[m - n] = detail::fold<T>(hag.partial().intermediate(m).in_set, get, agg, ops);
    }
    std::vector<T> a(n);
    std::vector<T> next(n);
    for (NodeId v = 0; v < n; ++v) {
      a[v] = detail::fold<T>(hag.receiver_in(v), get, agg, ops);
      next[v] = agg.update(a[v], h[v]);
    }
    report.aggregates.push_back(std::move(a));
    report.states.push_back(std::move(next));
    report.ops_per_round.push_back(ops);
    report.total_ops += ops;
  }
  return report;
}

}  // namespace hag

#endif  // HAG_EXECUTOR_HPP_
