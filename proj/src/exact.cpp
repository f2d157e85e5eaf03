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

#include "hag/exact.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <string>

#include "hag/combinations.hpp"
#include "hag/matching.hpp"

namespace hag {
namespace {

// Number of subsets of size <= k drawn from m candidates, saturating at
// limit + 1.
std::int64_t subset_count(std::int64_t m, int k, std::int64_t limit) {
  __int128 total = 0;
  __int128 binom = 1;  // C(m, i)
  for (int i = 0; i <= k && i <= m; ++i) {
    total += binom;
    if (total > limit) return limit + 1;
    binom = binom * (m - i) / (i + 1);
  }
  return static_cast<std::int64_t>(total);
}

class SubsetSearch {
 public:
  SubsetSearch(const GnnComputationGraph& g,
               std::vector<std::vector<NodeId>> space, int k, int d)
      : space_(std::move(space)), k_(k), d_(d) {
    const NodeId n = g.node_count();
    masks_.resize(space_.size());
    receivers_.resize(space_.size());
    for (std::size_t i = 0; i < space_.size(); ++i) {
      for (NodeId x : space_[i]) masks_[i] |= std::uint64_t{1} << x;
    }
    std::vector<std::uint64_t> in_mask(n, 0);
    for (NodeId r = 0; r < n; ++r) {
      for (NodeId x : g.in_neighbors(r)) in_mask[r] |= std::uint64_t{1} << x;
    }
    for (std::size_t i = 0; i < space_.size(); ++i) {
      for (NodeId r = 0; r < n; ++r) {
        if ((masks_[i] & in_mask[r]) == masks_[i]) receivers_[i].push_back(r);
      }
    }
    at_receiver_.resize(n);
  }

  void run() { dfs(0); }

  std::int64_t best_value = 0;
  std::vector<std::size_t> best_set;
  std::int64_t max_matching = 0;
  std::int64_t evaluated = 0;

 private:
  // Largest number of pairwise disjoint covers among `ids`.
  int max_disjoint(const std::vector<std::size_t>& ids, std::size_t from,
                   std::uint64_t used) const {
    int best = 0;
    for (std::size_t i = from; i < ids.size(); ++i) {
      if (masks_[ids[i]] & used) continue;
      best = std::max(best, 1 + max_disjoint(ids, i + 1, used | masks_[ids[i]]));
    }
    return best;
  }

  void evaluate() {
    ++evaluated;
    std::int64_t matched = 0;
    touched_.clear();
    for (std::size_t c : chosen_) {
      for (NodeId r : receivers_[c]) {
        if (at_receiver_[r].empty()) touched_.push_back(r);
        at_receiver_[r].push_back(c);
      }
    }
    for (NodeId r : touched_) {
      matched += max_disjoint(at_receiver_[r], 0, 0);
      at_receiver_[r].clear();
    }
    const std::int64_t f = matched * (d_ - 1);
    const std::int64_t v = f - static_cast<std::int64_t>(chosen_.size()) * (d_ - 1);
    max_matching = std::max(max_matching, f);
    if (v > best_value) {
      best_value = v;
      best_set = chosen_;
    }
  }

  void dfs(std::size_t from) {
    evaluate();
    if (static_cast<int>(chosen_.size()) == k_) return;
    for (std::size_t i = from; i < space_.size(); ++i) {
      chosen_.push_back(i);
      dfs(i + 1);
      chosen_.pop_back();
    }
  }

  std::vector<std::vector<NodeId>> space_;
  int k_;
  int d_;
  std::vector<std::uint64_t> masks_;
  std::vector<std::vector<NodeId>> receivers_;
  std::vector<std::vector<std::size_t>> at_receiver_;
  std::vector<NodeId> touched_;
  std::vector<std::size_t> chosen_;
};

}  // namespace

std::vector<std::vector<NodeId>> candidate_space(const GnnComputationGraph& g,
                                                 int d, int min_receivers) {
  if (d < 2) throw Error("d must be at least 2");
  std::vector<std::vector<NodeId>> out;
  if (min_receivers <= 0) {
    std::vector<NodeId> all(g.node_count());
    for (NodeId x = 0; x < g.node_count(); ++x) all[x] = x;
    for_each_combination(all, d, [&](const std::vector<NodeId>& c) {
      out.push_back(c);
      return true;
    });
    return out;
  }
  std::map<std::vector<NodeId>, int> counts;
  for (NodeId r = 0; r < g.node_count(); ++r) {
    auto in = g.in_neighbors(r);
    std::vector<NodeId> a(in.begin(), in.end());
    for_each_combination(a, d, [&](const std::vector<NodeId>& c) {
      ++counts[c];
      return true;
    });
  }
  for (const auto& [c, count] : counts) {
    if (count >= min_receivers) out.push_back(c);
  }
  return out;
}

OracleResult optimal_single_layer(const GnnComputationGraph& g, int k, int d,
                                  const OracleOptions& opts) {
  if (k < 0) throw Error("k must be non-negative");
  if (g.node_count() > 64) {
    throw RegimeError("exact search supports at most 64 senders");
  }
  const auto start = std::chrono::steady_clock::now();
  auto space = candidate_space(g, d, opts.min_receivers);
  if (opts.reverse) std::reverse(space.begin(), space.end());
  const std::int64_t required =
      subset_count(static_cast<std::int64_t>(space.size()), k, opts.budget);
  if (required > opts.budget) {
    throw BudgetExceeded("exact search needs more than " +
                             std::to_string(opts.budget) + " subsets",
                         required, opts.budget);
  }
  SubsetSearch search(g, space, k, d);
  search.run();

  OracleResult out;
  out.optimal_value = search.best_value;
  out.max_f = search.max_matching;
  out.subsets_evaluated = search.evaluated;
  PartialHag p(g.node_count(), LayerMode::kSingle, d);
  for (std::size_t i : search.best_set) {
    out.best_set.push_back(space[i]);
    p.add(space[i]);
  }
  out.best.final = optimal_completion(p, g);
  out.best.candidates_evaluated = search.evaluated;
  const auto receivers = out.best.final.intermediate_receivers();
  std::int64_t cumulative = 0;
  for (std::size_t i = 0; i < receivers.size(); ++i) {
    const auto out_deg = static_cast<std::int64_t>(receivers[i].size());
    const std::int64_t marginal = (out_deg - 1) * (d - 1);
    cumulative += marginal;
    out.best.trace.push_back({out.best_set[i], out_deg, marginal, cumulative});
  }
  if (value(out.best.final) != out.optimal_value) {
    throw Error("internal: completed optimum disagrees with the search value");
  }
  out.best.elapsed_ms = std::chrono::duration<double, std::milli>(
                            std::chrono::steady_clock::now() - start)
                            .count();
  return out;
}

ApproximationRatio approximation_ratio(std::int64_t candidate_value,
                                       std::int64_t optimal_value) {
  if (candidate_value < 0 || optimal_value < 0) {
    throw Error("approximation ratio needs non-negative values");
  }
  if (candidate_value > optimal_value) {
    throw Error("candidate value " + std::to_string(candidate_value) +
                " exceeds optimal value " + std::to_string(optimal_value));
  }
  if (optimal_value == 0) return {Rational(1), Rational(0)};
  Rational alpha(candidate_value, optimal_value);
  return {alpha, Rational(1) - alpha};
}

}  // namespace hag
