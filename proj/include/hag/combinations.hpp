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

#ifndef HAG_COMBINATIONS_HPP_
#define HAG_COMBINATIONS_HPP_

#include <cstddef>
#include <vector>

namespace hag {

// Calls f on every size-d subset of `items` in lexicographic index order.
// Stops early when f returns false; returns false in that case.
template <typename T, typename F>
bool for_each_combination(const std::vector<T>& items, int d, F&& f) {
  const std::size_t n = items.size();
  if (d < 0 || static_cast<std::size_t>(d) > n) return true;
  std::vector<std::size_t> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  std::vector<T> pick(d);
  for (;;) {
    for (int i = 0; i < d; ++i) pick[i] = items[idx[i]];
    if (!f(pick)) return false;
    int i = d - 1;
    while (i >= 0 && idx[i] == n - d + i) --i;
    if (i < 0) return true;
    ++idx[i];
    for (int j = i + 1; j < d; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace hag

#endif  // HAG_COMBINATIONS_HPP_
