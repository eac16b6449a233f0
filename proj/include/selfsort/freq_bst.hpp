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
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "selfsort/core.hpp"

namespace selfsort {

/// A key of a frequency tree: an id covering the x-range [low, high).
struct WeightedKey {
  std::uint32_t id = 0;
  double low = -std::numeric_limits<double>::infinity();
  double high = std::numeric_limits<double>::infinity();
  std::uint64_t weight = 1;
};

struct LookupResult {
  bool hit = false;
  std::uint32_t id = 0;
  std::size_t depth = 0;
};

/// Whether a hit exactly at the cutoff depth counts.
enum class CutoffRule { kInclusive, kStrict };
inline constexpr CutoffRule kDefaultCutoffRule = CutoffRule::kInclusive;

/// Weight-balanced search tree over disjoint ordered x-ranges. The root of
/// every subtree is the first key whose prefix weight reaches half of the
/// subtree total, so a key of weight w sits at depth <= log2(W / w).
class FreqBST {
 public:
  FreqBST() = default;

  /// keys must be ordered by x and carry positive weights.
  FreqBST(std::vector<WeightedKey> keys, std::size_t cutoff, CutoffRule rule = kDefaultCutoffRule)
      : keys_(std::move(keys)), cutoff_(cutoff), rule_(rule) {
    const std::size_t k = keys_.size();
    left_.assign(k, kNone);
    right_.assign(k, kNone);
    depth_.assign(k, 0);
    prefix_.assign(k + 1, 0);
    for (std::size_t i = 0; i < k; ++i) prefix_[i + 1] = prefix_[i] + keys_[i].weight;
    root_ = build(0, k, 0);
    prefix_.clear();
    prefix_.shrink_to_fit();
  }

  bool empty() const noexcept { return keys_.empty(); }
  std::size_t size() const noexcept { return keys_.size(); }
  std::size_t cutoff() const noexcept { return cutoff_; }
  std::span<const WeightedKey> keys() const noexcept { return keys_; }
  std::size_t depth_at(std::size_t slot) const noexcept { return depth_[slot]; }
  std::size_t max_depth() const noexcept {
    return keys_.empty() ? 0 : *std::max_element(depth_.begin(), depth_.end());
  }

  std::uint64_t total_weight() const noexcept {
    std::uint64_t w = 0;
    for (const auto& key : keys_) w += key.weight;
    return w;
  }

  /// Mean depth under the recorded weights.
  double expected_depth() const noexcept {
    if (keys_.empty()) return 0.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < keys_.size(); ++i) acc += static_cast<double>(keys_[i].weight * depth_[i]);
    return acc / static_cast<double>(total_weight());
  }

  /// Descends toward x. Comparisons whose outcome already follows from the
  /// path taken are skipped; the rest are charged.
  LookupResult lookup(double x, ComparisonCounter& counter) const noexcept {
    const std::size_t limit = rule_ == CutoffRule::kInclusive ? cutoff_ : (cutoff_ == 0 ? 0 : cutoff_ - 1);
    if (rule_ == CutoffRule::kStrict && cutoff_ == 0) return {};
    double known_low = -std::numeric_limits<double>::infinity();
    double known_high = std::numeric_limits<double>::infinity();
    std::uint32_t node = root_;
    std::size_t depth = 0;
    while (node != kNone && depth <= limit) {
      const WeightedKey& key = keys_[node];
      if (key.low > known_low && counter.less(x, key.low)) {
        known_high = key.low;
        node = left_[node];
      } else {
        known_low = std::max(known_low, key.low);
        if (key.high < known_high && !counter.less(x, key.high)) {
          known_low = key.high;
          node = right_[node];
        } else {
          return {true, key.id, depth};
        }
      }
      ++depth;
    }
    return {};
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;

  std::uint32_t build(std::size_t lo, std::size_t hi, std::size_t depth) {
    if (lo >= hi) return kNone;
    const std::uint64_t base = prefix_[lo];
    const std::uint64_t total = prefix_[hi] - base;
    // First slot whose inclusive prefix reaches half the total.
    const auto it = std::lower_bound(prefix_.begin() + static_cast<std::ptrdiff_t>(lo) + 1,
                                     prefix_.begin() + static_cast<std::ptrdiff_t>(hi) + 1, base,
                                     [total](std::uint64_t p, std::uint64_t b) { return 2 * (p - b) < total; });
    const std::size_t root = static_cast<std::size_t>(it - prefix_.begin()) - 1;
    depth_[root] = depth;
    left_[root] = build(lo, root, depth + 1);
    right_[root] = build(root + 1, hi, depth + 1);
    return static_cast<std::uint32_t>(root);
  }

  std::vector<WeightedKey> keys_;
  std::vector<std::uint32_t> left_;
  std::vector<std::uint32_t> right_;
  std::vector<std::size_t> depth_;
  std::vector<std::uint64_t> prefix_;
  std::uint32_t root_ = kNone;
  std::size_t cutoff_ = 0;
  CutoffRule rule_ = kDefaultCutoffRule;
};

}  // namespace selfsort
