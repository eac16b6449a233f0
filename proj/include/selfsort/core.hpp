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

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "selfsort/error.hpp"

namespace selfsort {

/// One input instance: n finite reals, addressed by position 0..n-1.
using Instance = std::vector<double>;

/// Counts key comparisons on input values. Index arithmetic and
/// comparisons between learned boundaries are not charged.
struct ComparisonCounter {
  std::uint64_t count = 0;

  bool less(double a, double b) noexcept {
    ++count;
    return a < b;
  }
  bool less_equal(double a, double b) noexcept {
    ++count;
    return a <= b;
  }
};

/// y = slope * x + intercept.
struct Line {
  double slope = 1.0;
  double intercept = 0.0;

  double at(double x) const noexcept { return slope * x + intercept; }
  friend bool operator==(const Line&, const Line&) = default;
};

/// Boundaries v_1 <= ... <= v_M splitting the line into M + 1 half-open
/// intervals [v_r, v_{r+1}), r = 0..M, with v_0 = -inf and v_{M+1} = +inf.
class VList {
 public:
  VList() = default;
  explicit VList(std::vector<double> boundaries) : boundaries_(std::move(boundaries)) {}

  std::size_t size() const noexcept { return boundaries_.size(); }
  std::size_t interval_count() const noexcept { return boundaries_.size() + 1; }
  std::span<const double> boundaries() const noexcept { return boundaries_; }

  /// v_r with the implicit sentinels; r in [0, M + 1].
  double value(std::size_t r) const noexcept {
    if (r == 0) return -std::numeric_limits<double>::infinity();
    if (r > boundaries_.size()) return std::numeric_limits<double>::infinity();
    return boundaries_[r - 1];
  }
  double interval_low(std::size_t r) const noexcept { return value(r); }
  double interval_high(std::size_t r) const noexcept { return value(r + 1); }

  /// Largest r with v_r <= x. Binary search, every probe charged.
  std::size_t predecessor_index(double x, ComparisonCounter& counter) const noexcept {
    std::size_t lo = 0;
    std::size_t hi = boundaries_.size();
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (counter.less_equal(boundaries_[mid], x)) {
        lo = mid + 1;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

  std::size_t predecessor_index(double x) const noexcept {
    ComparisonCounter scratch;
    return predecessor_index(x, scratch);
  }

  friend bool operator==(const VList&, const VList&) = default;

 private:
  std::vector<double> boundaries_;
};

/// Picks every stride-th sample (1-based ranks stride, 2*stride, ...).
inline VList build_vlist(std::span<const double> sorted_samples, std::size_t stride) {
  if (sorted_samples.empty()) throw Error(ErrorKind::EmptyTraining, "no samples for the V-list");
  if (stride == 0) throw Error(ErrorKind::EmptyTraining, "V-list stride must be positive");
  std::vector<double> boundaries;
  boundaries.reserve(sorted_samples.size() / stride);
  for (std::size_t rank = stride; rank <= sorted_samples.size(); rank += stride) {
    boundaries.push_back(sorted_samples[rank - 1]);
  }
  return VList(std::move(boundaries));
}

/// Pull-based stream of instances; returns nullopt when exhausted.
using InstanceSource = std::function<std::optional<Instance>()>;

inline InstanceSource source_from(std::span<const Instance> instances) {
  return [instances, next = std::size_t{0}]() mutable -> std::optional<Instance> {
    if (next >= instances.size()) return std::nullopt;
    return instances[next++];
  };
}

/// Pulls exactly count instances of length n (n = 0 adopts the first
/// instance's length) or throws InsufficientTraining / LengthMismatch.
inline std::vector<Instance> take_batch(InstanceSource& source, std::size_t count, std::size_t& n,
                                        std::size_t& consumed, std::size_t needed_total) {
  std::vector<Instance> batch;
  batch.reserve(count);
  while (batch.size() < count) {
    auto x = source();
    if (!x) {
      throw Error(ErrorKind::InsufficientTraining, "needed " + std::to_string(needed_total) +
                                                       " training instances, got " + std::to_string(consumed));
    }
    if (n == 0) n = x->size();
    if (x->size() != n) {
      throw Error(ErrorKind::LengthMismatch,
                  "instance of length " + std::to_string(x->size()) + ", expected " + std::to_string(n));
    }
    ++consumed;
    batch.push_back(std::move(*x));
  }
  return batch;
}

// Training batch sizes. Natural-log quantities are rounded up and clamped
// to at least one so that tiny n still yields a usable model.

inline std::size_t ceil_positive(double x) {
  const double c = std::ceil(x - 1e-12);
  return c < 1.0 ? std::size_t{1} : static_cast<std::size_t>(c);
}

inline std::size_t ln_stride(double n) { return ceil_positive(std::log(n)); }

inline std::size_t class_learning_batch(std::size_t n) {
  const double ln = std::log(static_cast<double>(n));
  const std::size_t t = ceil_positive(3.0 * ln * ln);
  return t < 3 ? 3 : t;
}

inline std::size_t frequency_batch(double universe, double epsilon, double multiplier = 1.0) {
  return ceil_positive(multiplier * std::pow(universe, epsilon));
}

/// floor((epsilon / 3) * log2(universe)).
inline std::size_t depth_cutoff(double universe, double epsilon) {
  const double d = std::floor(epsilon / 3.0 * std::log2(universe) + 1e-12);
  return d < 0.0 ? 0 : static_cast<std::size_t>(d);
}

inline bool is_sorted_by_value(std::span<const double> values, std::span<const std::uint32_t> order,
                               ComparisonCounter& counter) {
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (counter.less(values[order[k]], values[order[k - 1]])) return false;
  }
  return true;
}

}  // namespace selfsort
