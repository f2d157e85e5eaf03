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

#include "hag/greedy.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <queue>
#include <string>
#include <unordered_map>

#include "hag/combinations.hpp"

namespace hag {
namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start)
      .count();
}

// True iff the members have disjoint covers whose union is not already the
// cover of some intermediate.
bool insertable(const PartialHag& p, std::span<const NodeId> members) {
  auto u = p.union_cover(members);
  return u && !p.find_cover(*u);
}

void erase_sorted(std::vector<NodeId>& v, NodeId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it != v.end() && *it == x) v.erase(it);
}

void insert_sorted(std::vector<NodeId>& v, NodeId x) {
  v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

// Lex-smallest insertable d-subset of `pool`, if any.
std::optional<std::vector<NodeId>> first_insertable(
    const PartialHag& p, const std::vector<NodeId>& pool, int d,
    std::int64_t& evaluated) {
  std::optional<std::vector<NodeId>> found;
  for_each_combination(pool, d, [&](const std::vector<NodeId>& c) {
    ++evaluated;
    if (insertable(p, c)) {
      found = c;
      return false;
    }
    return true;
  });
  return found;
}

// Residual receiver state shared by FullGreedy's two candidate searches.
class GreedyState {
 public:
  GreedyState(const GnnComputationGraph& g, const OptimizerConfig& cfg)
      : n_(g.node_count()),
        cfg_(cfg),
        partial_(n_, cfg.layer_mode, cfg.d),
        in_(n_),
        holders_(n_) {
    for (NodeId r = 0; r < n_; ++r) {
      auto in = g.in_neighbors(r);
      in_[r].assign(in.begin(), in.end());
      for (NodeId l : in) holders_[l].push_back(r);
    }
  }

  NodeId node_count() const { return n_; }
  const PartialHag& partial() const { return partial_; }
  const std::vector<NodeId>& in(NodeId r) const { return in_[r]; }

  bool allowed(NodeId x) const {
    return cfg_.layer_mode == LayerMode::kMulti || x < n_;
  }

  std::vector<NodeId> allowed_in(NodeId r) const {
    std::vector<NodeId> out;
    for (NodeId x : in_[r]) {
      if (allowed(x)) out.push_back(x);
    }
    return out;
  }

  std::vector<NodeId> allowed_nodes() const {
    std::vector<NodeId> out;
    for (NodeId x = 0; x < partial_.next_id(); ++x) {
      if (allowed(x)) out.push_back(x);
    }
    return out;
  }

  // Receivers holding every member of c.
  std::vector<NodeId> shared_receivers(std::span<const NodeId> c) const {
    std::vector<NodeId> acc = holders_[c[0]];
    for (std::size_t i = 1; i < c.size() && !acc.empty(); ++i) {
      std::vector<NodeId> next;
      std::set_intersection(acc.begin(), acc.end(), holders_[c[i]].begin(),
                            holders_[c[i]].end(), std::back_inserter(next));
      acc = std::move(next);
    }
    return acc;
  }

  // Inserts c and reroutes the receivers in rc through it.
  NodeId apply(const std::vector<NodeId>& c, const std::vector<NodeId>& rc) {
    NodeId m = partial_.add(c);
    holders_.emplace_back();
    for (NodeId r : rc) {
      for (NodeId x : c) {
        erase_sorted(in_[r], x);
        erase_sorted(holders_[x], r);
      }
      in_[r].push_back(m);  // m is the largest id so far
      holders_[m].push_back(r);
    }
    return m;
  }

  HagGraph finish() const { return HagGraph(partial_, in_); }

 private:
  NodeId n_;
  OptimizerConfig cfg_;
  PartialHag partial_;
  std::vector<std::vector<NodeId>> in_;
  std::vector<std::vector<NodeId>> holders_;
};

std::uint64_t pair_key(NodeId a, NodeId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

std::vector<NodeId> key_pair(std::uint64_t key) {
  return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)};
}

// Co-occurrence counts of allowed sender pairs with a lazy max-heap. Heap
// entries are (count, key); stale ones are dropped on pop.
class PairCounter {
 public:
  explicit PairCounter(const GreedyState& s) {
    for (NodeId r = 0; r < s.node_count(); ++r) {
      auto a = s.allowed_in(r);
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = i + 1; j < a.size(); ++j) ++counts_[pair_key(a[i], a[j])];
      }
    }
    for (auto [key, c] : counts_) heap_.push({c, key});
  }

  // Best pair whose covers are insertable, with its count; nullopt if no
  // pair co-occurs anywhere.
  std::optional<std::pair<std::uint64_t, std::int64_t>> best(
      const PartialHag& p, std::int64_t& evaluated) {
    while (!heap_.empty()) {
      auto [c, key] = heap_.top();
      auto it = counts_.find(key);
      if (it == counts_.end() || it->second != c) {
        heap_.pop();
        continue;
      }
      ++evaluated;
      if (!insertable(p, key_pair(key))) {
        counts_.erase(it);
        heap_.pop();
        continue;
      }
      return std::make_pair(key, c);
    }
    return std::nullopt;
  }

  void add(NodeId a, NodeId b, std::int64_t delta) {
    const std::uint64_t key = pair_key(a, b);
    std::int64_t& c = counts_[key];
    c += delta;
    if (c <= 0) {
      counts_.erase(key);
    } else {
      heap_.push({c, key});
    }
  }

 private:
  struct Entry {
    std::int64_t count;
    std::uint64_t key;
    // Max count first, then the smallest pair.
    bool operator<(const Entry& o) const {
      return count != o.count ? count < o.count : key > o.key;
    }
  };
  std::unordered_map<std::uint64_t, std::int64_t> counts_;
  std::priority_queue<Entry> heap_;
};

struct Choice {
  std::vector<NodeId> in_set;
  std::int64_t receivers = 0;
};

// Full recount of d-subsets shared by receivers; lex-min among the best.
std::optional<Choice> best_by_recount(const GreedyState& s,
                                      std::int64_t& evaluated) {
  std::map<std::vector<NodeId>, std::int64_t> counts;
  for (NodeId r = 0; r < s.node_count(); ++r) {
    auto a = s.allowed_in(r);
    for_each_combination(a, s.partial().d().value(),
                         [&](const std::vector<NodeId>& c) {
                           ++counts[c];
                           return true;
                         });
  }
  std::optional<Choice> best;
  for (const auto& [c, count] : counts) {
    ++evaluated;
    if (best && count <= best->receivers) continue;
    if (!insertable(s.partial(), c)) continue;
    best = Choice{c, count};
  }
  return best;
}

}  // namespace

void validate(const OptimizerConfig& cfg) {
  if (cfg.k < 0) throw Error("k must be non-negative");
  if (cfg.d < 2) throw Error("d must be at least 2");
  if (cfg.candidate_floor < 0) throw Error("candidate floor must be non-negative");
}

HagResult full_greedy(const GnnComputationGraph& g, const OptimizerConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  HagResult result;
  GreedyState state(g, cfg);
  std::optional<PairCounter> pairs;
  if (cfg.d == 2) pairs.emplace(state);
  std::int64_t cumulative = 0;

  for (int step = 0; step < cfg.k; ++step) {
    std::optional<Choice> choice;
    if (pairs) {
      if (auto b = pairs->best(state.partial(), result.candidates_evaluated)) {
        choice = Choice{key_pair(b->first), b->second};
      }
    } else {
      choice = best_by_recount(state, result.candidates_evaluated);
    }
    if (cfg.stop_on_nonpositive && (!choice || choice->receivers <= 1)) break;
    if (!choice) {
      auto c = first_insertable(state.partial(), state.allowed_nodes(), cfg.d,
                                result.candidates_evaluated);
      if (!c) break;
      choice = Choice{*c, 0};
    }

    const std::vector<NodeId> rc = state.shared_receivers(choice->in_set);
    if (static_cast<std::int64_t>(rc.size()) != choice->receivers) {
      throw Error("internal: co-occurrence count disagrees with receivers");
    }
    const NodeId m = state.apply(choice->in_set, rc);
    if (pairs) {
      const auto& c = choice->in_set;
      for (NodeId r : rc) {
        pairs->add(c[0], c[1], -1);
        for (NodeId z : state.in(r)) {
          if (z == m || !state.allowed(z)) continue;
          pairs->add(c[0], z, -1);
          pairs->add(c[1], z, -1);
          if (state.allowed(m)) pairs->add(m, z, 1);
        }
      }
    }
    const std::int64_t marginal = (choice->receivers - 1) * (cfg.d - 1);
    cumulative += marginal;
    result.trace.push_back({choice->in_set, choice->receivers, marginal, cumulative});
  }
  result.final = state.finish();
  result.elapsed_ms = ms_since(start);
  return result;
}

namespace {

CompletionMode partial_greedy_mode(const GnnComputationGraph& g,
                                   const OptimizerConfig& cfg) {
  const bool pairs_only = cfg.d == 2 && cfg.layer_mode == LayerMode::kSingle;
  CompletionMode mode = cfg.completion;
  if (mode == CompletionMode::kAuto) {
    mode = pairs_only ? CompletionMode::kBlossom : CompletionMode::kBruteForce;
  }
  if (mode == CompletionMode::kBlossom && !pairs_only) {
    throw RegimeError(
        "blossom completion needs d = 2 and a single-layer graph");
  }
  if (mode == CompletionMode::kBruteForce) {
    for (NodeId r = 0; r < g.node_count(); ++r) {
      const std::size_t deg = g.in_neighbors(r).size();
      if (deg > cfg.cap.max_vertices) {
        throw RegimeError("receiver " + std::to_string(r) + " has in-degree " +
                              std::to_string(deg) + ", brute-force cap is " +
                              std::to_string(cfg.cap.max_vertices),
                          r);
      }
    }
  }
  return mode;
}

struct Evaluated {
  std::vector<NodeId> in_set;
  std::vector<NodeId> receivers;
  std::int64_t marginal = 0;
};

}  // namespace

HagResult partial_greedy(const GnnComputationGraph& g,
                         const OptimizerConfig& cfg) {
  validate(cfg);
  const auto start = Clock::now();
  const CompletionMode mode = partial_greedy_mode(g, cfg);
  const NodeId n = g.node_count();
  HagResult result;
  PartialHag p(n, cfg.layer_mode, cfg.d);
  std::vector<ReceiverInstance> inst(n);
  std::vector<std::int64_t> best(n, 0);
  for (NodeId r = 0; r < n; ++r) inst[r] = build_receiver_instance(p, g, r);
  std::int64_t cost_m = 0;

  auto evaluate = [&](const std::vector<NodeId>& c,
                      const std::vector<NodeId>& rc) {
    ++result.candidates_evaluated;
    auto cover = p.union_cover(c);
    const Hyperedge e{p.next_id(), *cover,
                      static_cast<std::int64_t>(cover->size()) - 1};
    std::int64_t gain = 0;
    for (NodeId r : rc) {
      ReceiverInstance h = inst[r];
      h.edges.push_back(e);
      gain += solve_receiver(h, mode, cfg.cap).value - best[r];
    }
    return gain - (cfg.d - 1);
  };

  for (int step = 0; step < cfg.k; ++step) {
    // Every insertable d-subset of some receiver's eligible nodes, with the
    // receivers whose in-set contains its cover.
    std::map<std::vector<NodeId>, std::vector<NodeId>> candidates;
    for (NodeId r = 0; r < n; ++r) {
      std::vector<NodeId> eligible(inst[r].vertices);
      if (cfg.layer_mode == LayerMode::kMulti) {
        for (const Hyperedge& e : inst[r].edges) eligible.push_back(e.source);
      }
      for_each_combination(eligible, cfg.d, [&](const std::vector<NodeId>& c) {
        if (p.union_cover(c)) candidates[c].push_back(r);
        return true;
      });
    }
    for (auto it = candidates.begin(); it != candidates.end();) {
      it = p.find_cover(*p.union_cover(it->first)) ? candidates.erase(it)
                                                    : std::next(it);
    }

    std::optional<Evaluated> chosen;
    auto consider = [&](bool above_floor) {
      for (const auto& [c, rc] : candidates) {
        const bool meets = static_cast<int>(rc.size()) >= cfg.candidate_floor;
        if (meets != above_floor) continue;
        const std::int64_t m = evaluate(c, rc);
        if (!chosen || m > chosen->marginal ||
            (m == chosen->marginal && c < chosen->in_set)) {
          chosen = Evaluated{c, rc, m};
        }
      }
    };
    consider(true);
    if (!chosen || chosen->marginal <= 0) {
      if (cfg.stop_on_nonpositive) break;
      // Without the stopping rule the argmax ranges over every candidate.
      consider(false);
      // In-sets shared by no receiver score -(d - 1), the lowest possible
      // marginal, so they only matter for ties at that level.
      if (!chosen || chosen->marginal == -(cfg.d - 1)) {
        std::vector<NodeId> pool;
        for (NodeId x = 0; x < p.next_id(); ++x) {
          if (cfg.layer_mode == LayerMode::kMulti || x < n) pool.push_back(x);
        }
        auto c = first_insertable(p, pool, cfg.d, result.candidates_evaluated);
        if (!c && !chosen) break;
        if (c && (!chosen || *c < chosen->in_set)) {
          auto it = candidates.find(*c);
          chosen = Evaluated{*c, it == candidates.end() ? std::vector<NodeId>{}
                                                        : it->second,
                             -(cfg.d - 1)};
        }
      }
    }

    auto cover = p.union_cover(chosen->in_set);
    const NodeId m = p.add(chosen->in_set);
    const Hyperedge e{m, *cover, static_cast<std::int64_t>(cover->size()) - 1};
    for (NodeId r : chosen->receivers) {
      inst[r].edges.push_back(e);
      best[r] = solve_receiver(inst[r], mode, cfg.cap).value;
    }
    cost_m += cfg.d - 1;
    std::int64_t total = -cost_m;
    for (std::int64_t b : best) total += b;
    result.trace.push_back({chosen->in_set,
                            static_cast<std::int64_t>(chosen->receivers.size()),
                            chosen->marginal, total});
  }
  result.final = optimal_completion(p, g, mode, cfg.cap);
  result.elapsed_ms = ms_since(start);
  return result;
}

namespace {

PartialHag sequence_partial(const GnnComputationGraph& g,
                            const InSetSequence& seq, int d) {
  if (d < 2) throw GraphError("d must be at least 2");
  PartialHag p(g.node_count(), LayerMode::kSingle, d);
  for (const auto& s : seq) {
    for (NodeId x : s) {
      if (!p.is_left(x)) {
        throw GraphError("in-set member " + std::to_string(x) +
                         " is not a sender");
      }
    }
    p.add(s);
  }
  return p;
}

}  // namespace

HagGraph greedy_sequence_hag(const GnnComputationGraph& g,
                             const InSetSequence& seq, int d) {
  PartialHag p = sequence_partial(g, seq, d);
  const NodeId n = g.node_count();
  std::vector<std::vector<NodeId>> in(n);
  for (NodeId r = 0; r < n; ++r) {
    auto a = g.in_neighbors(r);
    in[r].assign(a.begin(), a.end());
  }
  for (const IntermediateNode& m : p.intermediates()) {
    for (NodeId r = 0; r < n; ++r) {
      // L ids sort before M ids, so the remaining L part is a prefix.
      if (!std::includes(in[r].begin(), in[r].end(), m.cover.begin(),
                         m.cover.end())) {
        continue;
      }
      for (NodeId x : m.cover) erase_sorted(in[r], x);
      insert_sorted(in[r], m.id);
    }
  }
  return HagGraph(std::move(p), std::move(in));
}

std::int64_t greedy_sequence_value_h(const GnnComputationGraph& g,
                                     const InSetSequence& seq, int d) {
  if (d < 2) throw GraphError("d must be at least 2");
  const NodeId n = g.node_count();
  std::vector<std::vector<NodeId>> left(n);
  for (NodeId r = 0; r < n; ++r) {
    auto a = g.in_neighbors(r);
    left[r].assign(a.begin(), a.end());
  }
  std::int64_t out = 0;
  for (auto s : seq) {
    std::sort(s.begin(), s.end());
    if (static_cast<int>(s.size()) != d ||
        std::adjacent_find(s.begin(), s.end()) != s.end() ||
        std::any_of(s.begin(), s.end(), [&](NodeId x) { return x < 0 || x >= n; })) {
      throw GraphError("in-set must hold d distinct senders");
    }
    for (NodeId r = 0; r < n; ++r) {
      if (!std::includes(left[r].begin(), left[r].end(), s.begin(), s.end())) {
        continue;
      }
      for (NodeId x : s) erase_sorted(left[r], x);
      ++out;
    }
  }
  return (d - 1) * out;
}

std::int64_t max_matching_value_f(const GnnComputationGraph& g,
                                  const InSetSequence& s_set, int d,
                                  CompletionMode mode,
                                  const BruteForceCap& cap) {
  PartialHag p = sequence_partial(g, s_set, d);
  return optimal_matching(p, g, mode, cap).value;
}

}  // namespace hag
