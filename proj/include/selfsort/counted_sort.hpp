// Copyright 2026 The selfsort Authors.
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

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "selfsort/core.hpp"

namespace selfsort {

/// Stable insertion sort of positions by value.
inline void insertion_sort_counted(std::span<const double> values, std::span<std::uint32_t> idx,
                                   ComparisonCounter& counter) {
  for (std::size_t k = 1; k < idx.size(); ++k) {
    const std::uint32_t item = idx[k];
    std::size_t j = k;
    while (j > 0 && counter.less(values[item], values[idx[j - 1]])) {
      idx[j] = idx[j - 1];
      --j;
    }
    idx[j] = item;
  }
}

namespace detail {

inline void merge_runs_counted(std::span<const double> values, std::span<const std::uint32_t> left,
                               std::span<const std::uint32_t> right, std::uint32_t* out,
                               ComparisonCounter& counter) {
  std::size_t a = 0;
  std::size_t b = 0;
  while (a < left.size() && b < right.size()) {
    // Ties go left, which keeps the sort stable.
    if (counter.less(values[right[b]], values[left[a]])) {
      *out++ = right[b++];
    } else {
      *out++ = left[a++];
    }
  }
  out = std::copy(left.begin() + static_cast<std::ptrdiff_t>(a), left.end(), out);
  std::copy(right.begin() + static_cast<std::ptrdiff_t>(b), right.end(), out);
}

}  // namespace detail

/// Bottom-up merge sort of positions by value; stable. The scratch buffer
/// is resized as needed and may be reused across calls.
inline void merge_sort_counted(std::span<const double> values, std::span<std::uint32_t> idx,
                               ComparisonCounter& counter, std::vector<std::uint32_t>& scratch) {
  const std::size_t n = idx.size();
  if (n < 2) return;
  scratch.resize(n);
  std::uint32_t* src = idx.data();
  std::uint32_t* dst = scratch.data();
  for (std::size_t width = 1; width < n; width *= 2) {
    for (std::size_t lo = 0; lo < n; lo += 2 * width) {
      const std::size_t mid = std::min(lo + width, n);
      const std::size_t hi = std::min(lo + 2 * width, n);
      detail::merge_runs_counted(values, {src + lo, mid - lo}, {src + mid, hi - mid}, dst + lo, counter);
    }
    std::swap(src, dst);
  }
  if (src != idx.data()) std::copy(src, src + n, idx.data());
}

inline constexpr std::size_t kInsertionSortLimit = 16;

/// Insertion sort for short lists, merge sort above the limit.
inline void sort_small_counted(std::span<const double> values, std::span<std::uint32_t> idx,
                               ComparisonCounter& counter, std::vector<std::uint32_t>& scratch) {
  if (idx.size() <= kInsertionSortLimit) {
    insertion_sort_counted(values, idx, counter);
  } else {
    merge_sort_counted(values, idx, counter, scratch);
  }
}

/// Baseline comparator: bottom-up merge sort of the whole instance.
inline std::vector<std::uint32_t> baseline_merge_sort(std::span<const double> values, ComparisonCounter& counter) {
  std::vector<std::uint32_t> order(values.size());
  std::iota(order.begin(), order.end(), 0u);
  std::vector<std::uint32_t> scratch;
  merge_sort_counted(values, order, counter, scratch);
  return order;
}

/// Tournament (winner) tree over k sorted runs. Each emitted element costs
/// at most ceil(log2 k) counted comparisons; comparisons against exhausted
/// runs are free. Ties resolve to the lower run id.
class TournamentMerger {
 public:
  void merge(std::span<const double> values, std::span<const std::span<const std::uint32_t>> runs,
             std::vector<std::uint32_t>& out, ComparisonCounter& counter) {
    const std::size_t k = runs.size();
    if (k == 0) return;
    if (k == 1) {
      out.insert(out.end(), runs[0].begin(), runs[0].end());
      return;
    }
    leaves_ = std::bit_ceil(k);
    heads_.assign(leaves_, 0);
    tree_.assign(2 * leaves_, kNone);
    runs_ = runs;
    values_ = values;
    for (std::size_t leaf = 0; leaf < leaves_; ++leaf) {
      tree_[leaves_ + leaf] = leaf < k && !runs[leaf].empty() ? static_cast<std::uint32_t>(leaf) : kNone;
    }
    for (std::size_t node = leaves_ - 1; node >= 1; --node) {
      tree_[node] = play(tree_[2 * node], tree_[2 * node + 1], counter);
    }
    while (tree_[1] != kNone) {
      const std::uint32_t run = tree_[1];
      out.push_back(runs_[run][heads_[run]]);
      ++heads_[run];
      std::size_t node = leaves_ + run;
      tree_[node] = heads_[run] < runs_[run].size() ? run : kNone;
      for (node /= 2; node >= 1; node /= 2) {
        tree_[node] = play(tree_[2 * node], tree_[2 * node + 1], counter);
      }
    }
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t play(std::uint32_t a, std::uint32_t b, ComparisonCounter& counter) const {
    if (a == kNone) return b;
    if (b == kNone) return a;
    const double va = values_[runs_[a][heads_[a]]];
    const double vb = values_[runs_[b][heads_[b]]];
    // a always holds the lower run id here.
    return counter.less(vb, va) ? b : a;
  }

  std::size_t leaves_ = 0;
  std::vector<std::size_t> heads_;
  std::vector<std::uint32_t> tree_;
  std::span<const std::span<const std::uint32_t>> runs_;
  std::span<const double> values_;
};

}  // namespace selfsort
