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

#include "hag/executor.hpp"

#include <algorithm>
#include <iterator>

#include <boost/container_hash/hash.hpp>

namespace hag {

AggregateSpec<std::int64_t> sum_aggregate() {
  return {0, [](std::int64_t a, std::int64_t b) { return a + b; },
          [](std::int64_t a, std::int64_t h) { return a + h; }};
}

AggregateSpec<Multiset> multiset_aggregate() {
  AggregateSpec<Multiset> spec;
  spec.combine = [](const Multiset& a, const Multiset& b) {
    Multiset out;
    out.reserve(a.size() + b.size());
    std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  };
  spec.update = [](const Multiset& a, const Multiset& h) {
    std::size_t seed = 0x9e3779b97f4a7c15ull;
    boost::hash_combine(seed, a.size());
    boost::hash_range(seed, a.begin(), a.end());
    boost::hash_combine(seed, h.size());
    boost::hash_range(seed, h.begin(), h.end());
    return Multiset{static_cast<std::int64_t>(seed)};
  };
  return spec;
}

std::vector<NodeId> topo_order_m(const HagGraph& hag) {
  return topo_order_intermediates(hag);
}

}  // namespace hag
