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

#include "hag/validation.hpp"

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>

#include "hag/exact.hpp"
#include "hag/executor.hpp"
#include "hag/greedy.hpp"
#include "hag/heuristics.hpp"
#include "hag/ingest.hpp"

namespace hag {
namespace {

// 1 - 1/e = 0.6321205588285576784..., rounded up.
constexpr std::int64_t kFloorNum = 632120558828557679;
constexpr std::int64_t kFloorDen = 1000000000000000000;

std::string describe(const std::vector<NodeId>& xs) {
  std::string out = "{";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(xs[i]);
  }
  return out + "}";
}

struct Instance {
  std::mt19937_64 rng;
  DirectedGraph graph;
  std::string label;
};

Instance make_instance(std::uint64_t seed, int i, const std::vector<NodeId>& sizes) {
  if (sizes.empty()) throw Error("validation needs at least one size");
  const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
  Instance inst{std::mt19937_64(s), {}, {}};
  const NodeId n = sizes[static_cast<std::size_t>(i) % sizes.size()];
  const double p = static_cast<double>(2 + inst.rng() % 7) / 10.0;
  inst.graph = gen_erdos_renyi({n, p, s});
  std::ostringstream label;
  label << "instance " << i << " (n=" << n << ", p=" << p << ", seed=" << s << ")";
  inst.label = label.str();
  return inst;
}

using NamedHag = std::pair<std::string, HagGraph>;

// Every optimizer and heuristic with d = 2, skipping those whose regime
// the instance is outside of.
std::vector<NamedHag> all_outputs(const GnnComputationGraph& g, int k) {
  std::vector<NamedHag> out;
  OptimizerConfig cfg;
  cfg.k = k;
  for (LayerMode mode : {LayerMode::kSingle, LayerMode::kMulti}) {
    cfg.layer_mode = mode;
    const std::string suffix = "/" + to_string(mode);
    out.emplace_back("full" + suffix, full_greedy(g, cfg).final);
    try {
      out.emplace_back("partial" + suffix, partial_greedy(g, cfg).final);
    } catch (const RegimeError&) {
    }
  }
  cfg.stop_on_nonpositive = false;
  out.emplace_back("full/no-stop", full_greedy(g, cfg).final);
  out.emplace_back("degree", degree_heuristic(g, k).final);
  out.emplace_back("hub", hub_heuristic(g, k).final);
  if (g.node_count() <= 64) {
    OracleOptions opts;
    opts.budget = 2'000'000;
    try {
      out.emplace_back("optimal", optimal_single_layer(g, k, 2, opts).best.final);
    } catch (const BudgetExceeded&) {
    }
  }
  return out;
}

// Plants a second path (or removes the only one) for some pair.
HagGraph corrupt(const HagGraph& hag) {
  HagGraph bad = hag;
  for (NodeId r = 0; r < bad.node_count(); ++r) {
    std::vector<NodeId> in(bad.receiver_in(r).begin(), bad.receiver_in(r).end());
    for (NodeId u : in) {
      if (bad.partial().is_intermediate(u)) {
        in.push_back(bad.cover(u).front());
        bad.set_receiver_in(r, in);
        return bad;
      }
    }
  }
  for (NodeId r = 0; r < bad.node_count(); ++r) {
    std::vector<NodeId> in(bad.receiver_in(r).begin(), bad.receiver_in(r).end());
    if (!in.empty()) {
      in.pop_back();
      bad.set_receiver_in(r, in);
      return bad;
    }
  }
  if (bad.node_count() > 0) bad.set_receiver_in(0, {0});
  return bad;
}

bool at_least_floor(std::int64_t d, std::int64_t greedy_tilde,
                    std::int64_t best_tilde) {
  return static_cast<__int128>(d) * greedy_tilde * kFloorDen >=
         static_cast<__int128>(kFloorNum) * best_tilde;
}

}  // namespace

std::vector<std::vector<NodeId>> enumerate_receiver_matchings(
    const ReceiverInstance& h) {
  std::vector<std::vector<NodeId>> out;
  std::vector<NodeId> chosen;
  std::vector<NodeId> used;
  std::function<void(std::size_t)> rec = [&](std::size_t start) {
    out.push_back(chosen);
    for (std::size_t j = start; j < h.edges.size(); ++j) {
      const auto& verts = h.edges[j].vertices;
      bool clash = std::any_of(verts.begin(), verts.end(), [&](NodeId v) {
        return std::find(used.begin(), used.end(), v) != used.end();
      });
      if (clash) continue;
      chosen.push_back(h.edges[j].source);
      used.insert(used.end(), verts.begin(), verts.end());
      rec(j + 1);
      used.resize(used.size() - verts.size());
      chosen.pop_back();
    }
  };
  rec(0);
  return out;
}

PartialHag random_partial_hag(std::mt19937_64& rng, const GnnComputationGraph& g,
                              int d, int max_k) {
  PartialHag p(g.node_count(), LayerMode::kSingle, d);
  std::vector<NodeId> wide;
  for (NodeId r = 0; r < g.node_count(); ++r) {
    if (static_cast<int>(g.in_neighbors(r).size()) >= d) wide.push_back(r);
  }
  if (wide.empty()) return p;
  const int target = static_cast<int>(rng() % static_cast<std::uint64_t>(max_k + 1));
  for (int attempt = 0; attempt < 20 && static_cast<int>(p.size()) < target;
       ++attempt) {
    auto in = g.in_neighbors(wide[rng() % wide.size()]);
    std::vector<NodeId> pick(in.begin(), in.end());
    std::shuffle(pick.begin(), pick.end(), rng);
    pick.resize(d);
    std::sort(pick.begin(), pick.end());
    if (!p.find_cover(pick)) p.add(pick);
  }
  return p;
}

PropertyResult check_matching_bijection(int instances, std::uint64_t seed,
                                        const std::vector<NodeId>& sizes,
                                        std::int64_t max_product) {
  PropertyResult res;
  res.name = "matching bijection";
  for (int i = 0; i < instances; ++i) {
    Instance inst = make_instance(seed, i, sizes);
    GnnComputationGraph g(inst.graph);
    PartialHag p = random_partial_hag(inst.rng, g, 2, 3);
    HypergraphInstance h = build_matching_instance(p, g);
    const std::size_t n = h.receivers.size();
    std::vector<std::vector<std::vector<NodeId>>> options(n);
    std::int64_t product = 1;
    for (std::size_t r = 0; r < n; ++r) {
      options[r] = enumerate_receiver_matchings(h.receivers[r]);
      product = std::min<std::int64_t>(
          max_product + 1, product * static_cast<std::int64_t>(options[r].size()));
    }
    const std::int64_t cost = partial_cost(p);
    auto check = [&](const std::vector<std::size_t>& pick) {
      Matching m;
      m.per_receiver.resize(n);
      for (std::size_t r = 0; r < n; ++r) m.per_receiver[r] = options[r][pick[r]];
      m.value = matching_value(m, p);
      HagGraph out = phi(p, g, m);
      ++res.checks;
      if (value(out) != m.value - cost) {
        res.failures.push_back(inst.label + ": value " + std::to_string(value(out)) +
                               " != " + std::to_string(m.value - cost));
      }
      if (!(phi_inverse(out) == m)) {
        res.failures.push_back(inst.label + ": phi_inverse(phi(N)) != N");
      }
    };
    std::vector<std::size_t> pick(n, 0);
    if (product <= max_product) {
      while (true) {
        check(pick);
        std::size_t r = 0;
        while (r < n && ++pick[r] == options[r].size()) pick[r++] = 0;
        if (r == n) break;
      }
    } else {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < options[r].size(); ++j) {
          pick[r] = j;
          check(pick);
        }
        pick[r] = 0;
      }
    }
    ++res.instances;
  }
  return res;
}

PropertyResult check_greedy_bound(int instances, std::uint64_t seed,
                                  const std::vector<NodeId>& sizes) {
  PropertyResult res;
  res.name = "greedy bound";
  for (int i = 0; i < instances; ++i) {
    Instance inst = make_instance(seed, i, sizes);
    GnnComputationGraph g(inst.graph);
    for (int d = 2; d <= 3; ++d) {
      for (int k = 1; k <= 3; ++k) {
        OptimizerConfig cfg;
        cfg.k = k;
        cfg.d = d;
        cfg.stop_on_nonpositive = false;
        const std::int64_t greedy = value_tilde(full_greedy(g, cfg).final, d);
        OracleOptions opts;
        opts.min_receivers = 1;
        OracleResult oracle;
        try {
          oracle = optimal_single_layer(g, k, d, opts);
        } catch (const BudgetExceeded&) {
          ++res.skipped;
          continue;
        }
        const std::int64_t best =
            std::max(oracle.max_f, value_tilde(oracle.best.final, d));
        ++res.checks;
        if (!at_least_floor(d, greedy, best)) {
          res.failures.push_back(inst.label + ": d=" + std::to_string(d) +
                                 " k=" + std::to_string(k) + " greedy " +
                                 std::to_string(greedy) + " vs best " +
                                 std::to_string(best));
        }
      }
    }
    ++res.instances;
  }
  return res;
}

PropertyResult check_sandwich(int instances, std::uint64_t seed,
                              const std::vector<NodeId>& sizes, int orders) {
  PropertyResult res;
  res.name = "matching sandwich";
  for (int i = 0; i < instances; ++i) {
    Instance inst = make_instance(seed, i, sizes);
    GnnComputationGraph g(inst.graph);
    const int d = 2 + i % 2;
    OptimizerConfig cfg;
    cfg.k = 3;
    cfg.d = d;
    cfg.stop_on_nonpositive = false;
    InSetSequence set;
    for (const TraceStep& s : full_greedy(g, cfg).trace) set.push_back(s.in_set);
    PartialHag extras = random_partial_hag(inst.rng, g, d, 2);
    for (const auto& node : extras.intermediates()) {
      if (std::find(set.begin(), set.end(), node.in_set) == set.end()) {
        set.push_back(node.in_set);
      }
    }
    const std::int64_t f = max_matching_value_f(g, set, d);
    for (int o = 0; o < orders; ++o) {
      InSetSequence seq = set;
      std::shuffle(seq.begin(), seq.end(), inst.rng);
      const std::int64_t h = greedy_sequence_value_h(g, seq, d);
      ++res.checks;
      if (f > d * h || h > f) {
        res.failures.push_back(inst.label + ": f=" + std::to_string(f) +
                               " h=" + std::to_string(h) + " d=" + std::to_string(d));
      }
    }
    ++res.instances;
  }
  return res;
}

PropertyResult check_equivalence(int instances, std::uint64_t seed,
                                 const std::vector<NodeId>& sizes,
                                 bool inject_fault) {
  PropertyResult res;
  res.name = "path equivalence";
  for (int i = 0; i < instances; ++i) {
    Instance inst = make_instance(seed, i, sizes);
    GnnComputationGraph g(inst.graph);
    for (auto& [name, hag] : all_outputs(g, 1 + i % 3)) {
      if (inject_fault) hag = corrupt(hag);
      ++res.checks;
      auto report = verify_equivalence(hag, inst.graph);
      if (!report.ok) {
        std::string msg = inst.label + ": " + name + ": ";
        for (std::size_t v = 0; v < report.violations.size() && v < 3; ++v) {
          const auto& bad = report.violations[v];
          msg += "(" + std::to_string(bad.sender) + "->" +
                 std::to_string(bad.receiver) + " has " +
                 std::to_string(bad.path_count) + " paths) ";
        }
        res.failures.push_back(msg);
      }
      for (const std::string& problem : check_structure(hag)) {
        res.failures.push_back(inst.label + ": " + name + ": " + problem);
      }
    }
    ++res.instances;
  }
  return res;
}

PropertyResult check_execution(int instances, std::uint64_t seed,
                               const std::vector<NodeId>& sizes) {
  PropertyResult res;
  res.name = "execution equality";
  for (int i = 0; i < instances; ++i) {
    Instance inst = make_instance(seed, i, sizes);
    GnnComputationGraph g(inst.graph);
    const NodeId n = g.node_count();
    std::vector<Multiset> sets(n);
    std::vector<std::int64_t> ints(n);
    for (NodeId v = 0; v < n; ++v) {
      sets[v] = {v};
      ints[v] = static_cast<std::int64_t>(inst.rng() % 1000);
    }
    for (const auto& [name, hag] : all_outputs(g, 1 + i % 5)) {
      for (int rounds = 1; rounds <= 3; ++rounds) {
        auto gm = run_gnn(g, rounds, sets, multiset_aggregate());
        auto hm = run_hag(hag, rounds, sets, multiset_aggregate());
        auto gs = run_gnn(g, rounds, ints, sum_aggregate());
        auto hs = run_hag(hag, rounds, ints, sum_aggregate());
        ++res.checks;
        const std::string where =
            inst.label + ": " + name + " K=" + std::to_string(rounds) + ": ";
        if (hm.states != gm.states || hm.aggregates != gm.aggregates) {
          res.failures.push_back(where + "multiset results differ");
        }
        if (hs.states != gs.states) res.failures.push_back(where + "sums differ");
        for (int r = 0; r < rounds; ++r) {
          if (gm.ops_per_round[r] - hm.ops_per_round[r] != value(hag)) {
            res.failures.push_back(where + "round " + std::to_string(r + 1) +
                                   " saves " +
                                   std::to_string(gm.ops_per_round[r] -
                                                  hm.ops_per_round[r]) +
                                   ", value is " + std::to_string(value(hag)));
          }
        }
      }
    }
    ++res.instances;
  }
  return res;
}

PropertyResult check_matching_oracles(int instances, std::uint64_t seed,
                                      int max_vertices) {
  PropertyResult res;
  res.name = "blossom vs brute force";
  BruteForceCap cap;
  cap.max_vertices = static_cast<std::size_t>(max_vertices);
  cap.max_edges = static_cast<std::size_t>(max_vertices * (max_vertices - 1) / 2);
  for (int i = 0; i < instances; ++i) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(i));
    const int n = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_vertices));
    const double p = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    ReceiverInstance h;
    for (NodeId v = 0; v < n; ++v) h.vertices.push_back(v);
    std::bernoulli_distribution keep(p);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (keep(rng)) {
          h.edges.push_back({static_cast<NodeId>(h.edges.size()), {u, v}, 1});
        }
      }
    }
    auto blossom = max_matching_blossom(h);
    auto brute = max_matching_bruteforce(h, cap);
    ++res.checks;
    if (blossom.value != brute.value) {
      res.failures.push_back("graph " + std::to_string(i) + ": blossom " +
                             std::to_string(blossom.value) + " vs brute force " +
                             std::to_string(brute.value));
    } else if (blossom.selected != brute.selected) {
      res.failures.push_back("graph " + std::to_string(i) + ": tie broken to " +
                             describe(blossom.selected) + " vs " +
                             describe(brute.selected));
    }
    ++res.instances;
  }
  return res;
}

bool ValidationReport::ok() const {
  return std::all_of(properties.begin(), properties.end(),
                     [](const PropertyResult& p) { return p.ok(); });
}

std::string ValidationReport::transcript() const {
  std::ostringstream out;
  for (const PropertyResult& p : properties) {
    out << (p.ok() ? "ok   " : "FAIL ") << p.name << ": " << p.instances
        << " instances, " << p.checks << " checks, " << p.failures.size()
        << " failures";
    if (p.skipped) out << ", " << p.skipped << " skipped";
    out << "\n";
  }
  for (const PropertyResult& p : properties) {
    for (const std::string& f : p.failures) out << p.name << ": " << f << "\n";
  }
  return out.str();
}

ValidationReport cmd_validate(const ValidateOptions& opts) {
  std::vector<NodeId> small;
  for (NodeId n : opts.sizes) {
    if (n <= 8) small.push_back(n);
  }
  if (small.empty()) small.push_back(8);
  ValidationReport report;
  report.properties.push_back(
      check_matching_bijection(opts.instances, opts.seed, small));
  report.properties.push_back(check_greedy_bound(opts.instances, opts.seed, opts.sizes));
  report.properties.push_back(check_sandwich(opts.instances, opts.seed, opts.sizes));
  report.properties.push_back(
      check_equivalence(opts.instances, opts.seed, opts.sizes, opts.inject_fault));
  report.properties.push_back(check_execution(opts.instances, opts.seed, opts.sizes));
  report.properties.push_back(check_matching_oracles(opts.instances, opts.seed));
  return report;
}

}  // namespace hag
