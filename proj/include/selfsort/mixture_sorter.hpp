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
#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "selfsort/core.hpp"
#include "selfsort/counted_sort.hpp"
#include "selfsort/error.hpp"
#include "selfsort/freq_bst.hpp"
#include "selfsort/report.hpp"
#include "selfsort/veb.hpp"

namespace selfsort {

struct MixtureTrainOptions {
  std::size_t m = 1;
  double epsilon = 0.5;
  double frequency_multiplier = 1.0;
};

struct MixtureBatchPlan {
  std::size_t stride = 0;       // ceil(ln(mn))
  std::size_t block = 0;        // instances per index for the V-list: m * stride
  std::size_t vlist = 0;        // n * block
  std::size_t frequencies = 0;  // ceil((mn)^epsilon)

  std::size_t total() const noexcept { return vlist + frequencies; }
};

inline MixtureBatchPlan mixture_batch_plan(std::size_t n, std::size_t m, double epsilon,
                                           double frequency_multiplier = 1.0) {
  const double mn = static_cast<double>(m) * static_cast<double>(n);
  MixtureBatchPlan plan;
  plan.stride = ln_stride(mn);
  plan.block = m * plan.stride;
  plan.vlist = n * plan.block;
  plan.frequencies = frequency_batch(mn, epsilon, frequency_multiplier);
  return plan;
}

/// mn + 1 intervals grouped into n buckets of m intervals; the last bucket
/// also takes every interval past (n - 1) m.
struct MixtureSorterModel {
  std::size_t n = 0;
  std::size_t m = 1;
  double epsilon = 0.5;
  VList vlist;
  std::vector<FreqBST> trees;  // one per input position, keyed by interval

  std::size_t interval_count() const noexcept { return vlist.interval_count(); }
  std::size_t cutoff() const noexcept {
    return depth_cutoff(static_cast<double>(m) * static_cast<double>(n), epsilon);
  }
  std::size_t bucket_of(std::size_t r) const noexcept { return std::min(r / m, n - 1); }
  std::size_t bucket_first(std::size_t b) const noexcept { return b * m; }
  std::size_t bucket_size(std::size_t b) const noexcept {
    return b + 1 < n ? m : interval_count() - bucket_first(b);
  }
};

inline FreqBST interval_tree(const VList& vlist, const std::map<std::uint32_t, std::uint64_t>& counts,
                             std::size_t cutoff) {
  std::vector<WeightedKey> keys;
  keys.reserve(counts.size());
  for (const auto& [r, f] : counts) keys.push_back({r, vlist.interval_low(r), vlist.interval_high(r), f});
  return FreqBST(std::move(keys), cutoff);
}

inline MixtureSorterModel assemble_mixture_model(std::size_t n, std::size_t m, double epsilon, VList vlist,
                                                 std::span<const std::map<std::uint32_t, std::uint64_t>> counts) {
  MixtureSorterModel model;
  model.n = n;
  model.m = m;
  model.epsilon = epsilon;
  model.vlist = std::move(vlist);
  if (model.interval_count() < (n - 1) * m + 1) {
    throw Error(ErrorKind::DimensionMismatch, "V-list too short for n buckets of m intervals");
  }
  const std::size_t cutoff = model.cutoff();
  model.trees.reserve(n);
  for (std::size_t i = 0; i < n; ++i) model.trees.push_back(interval_tree(model.vlist, counts[i], cutoff));
  return model;
}

/// Training: the V-list samples x_i from its own block of m * ceil(ln(mn))
/// instances, for every i; a further batch records per-position interval
/// frequencies for the trees.
inline MixtureSorterModel train_mixture(InstanceSource source, const MixtureTrainOptions& options) {
  if (!(options.epsilon > 0.0 && options.epsilon < 1.0)) {
    throw Error(ErrorKind::SpecError, "epsilon: must lie in (0,1)");
  }
  if (options.m == 0) throw Error(ErrorKind::SpecError, "m: must be positive");
  auto first = source();
  if (!first) throw Error(ErrorKind::InsufficientTraining, "needed training instances, got 0");
  std::size_t n = first->size();
  if (n == 0) throw Error(ErrorKind::EmptyTraining, "instances must not be empty");
  const MixtureBatchPlan plan = mixture_batch_plan(n, options.m, options.epsilon, options.frequency_multiplier);
  InstanceSource chained = [&first, &source]() -> std::optional<Instance> {
    if (first) {
      auto x = std::move(first);
      first.reset();
      return x;
    }
    return source();
  };
  std::size_t consumed = 0;

  std::vector<double> samples;
  samples.reserve(plan.vlist);
  for (std::size_t i = 0; i < n; ++i) {
    const auto block = take_batch(chained, plan.block, n, consumed, plan.total());
    for (const auto& x : block) samples.push_back(x[i]);
  }
  std::sort(samples.begin(), samples.end());
  VList vlist = build_vlist(samples, plan.stride);

  std::vector<std::map<std::uint32_t, std::uint64_t>> counts(n);
  const auto freq_batch = take_batch(chained, plan.frequencies, n, consumed, plan.total());
  for (const auto& x : freq_batch) {
    for (std::size_t i = 0; i < n; ++i) ++counts[i][static_cast<std::uint32_t>(vlist.predecessor_index(x[i]))];
  }
  return assemble_mixture_model(n, options.m, options.epsilon, std::move(vlist), counts);
}

inline MixtureSorterModel train_mixture(std::span<const Instance> instances, const MixtureTrainOptions& options) {
  return train_mixture(source_from(instances), options);
}

/// Interval lists and one van Emde Boas tree per bucket. Empty between calls.
class MixtureScratch {
 public:
  explicit MixtureScratch(const MixtureSorterModel& model) : lists_(model.interval_count()) {
    buckets_.reserve(model.n);
    for (std::size_t b = 0; b < model.n; ++b) buckets_.emplace_back(model.bucket_size(b));
  }

  /// True when every list and every bucket tree is empty.
  bool is_clean() const {
    return touched_.empty() && std::all_of(lists_.begin(), lists_.end(), [](const auto& l) { return l.empty(); }) &&
           std::all_of(buckets_.begin(), buckets_.end(), [](const VebTree& t) { return t.empty(); });
  }

  /// Deepest vEB recursion seen since the last reset.
  unsigned max_veb_depth() const {
    unsigned d = 0;
    for (const auto& t : buckets_) d = std::max(d, t.max_depth_seen());
    return d;
  }
  void reset_veb_probe() {
    for (auto& t : buckets_) t.reset_depth_probe();
  }

 private:
  std::vector<std::vector<std::uint32_t>> lists_;
  std::vector<std::uint32_t> touched_;
  std::vector<VebTree> buckets_;
  std::vector<std::uint32_t> sort_buffer_;

  friend std::vector<std::uint32_t> sort_mixture(const MixtureSorterModel&, MixtureScratch&, std::span<const double>,
                                                 SortReport&, const SortOptions&);
};

/// Operation phase. Returns input positions in non-decreasing value order.
inline std::vector<std::uint32_t> sort_mixture(const MixtureSorterModel& model, MixtureScratch& scratch,
                                               std::span<const double> instance, SortReport& report,
                                               const SortOptions& options = {}) {
  if (instance.size() != model.n) {
    throw Error(ErrorKind::DimensionMismatch,
                "instance length " + std::to_string(instance.size()) + " but model n = " + std::to_string(model.n));
  }
  const auto started = std::chrono::steady_clock::now();
  report = SortReport{};
  ComparisonCounter lookup;
  ComparisonCounter merge;
  ComparisonCounter verify;
  auto& lists = scratch.lists_;
  auto& touched = scratch.touched_;

  for (std::size_t i = 0; i < model.n; ++i) {
    const double x = instance[i];
    const LookupResult hit = model.trees[i].lookup(x, lookup);
    std::size_t r = hit.id;
    if (!hit.hit) {
      ++report.tree_fallbacks;
      r = model.vlist.predecessor_index(x, lookup);
    }
    const std::size_t b = model.bucket_of(r);
    const auto local = static_cast<VebTree::Key>(r - model.bucket_first(b));
    VebTree& tree = scratch.buckets_[b];
    ++report.veb_operations;
    if (!tree.contains(local)) {
      tree.insert(local);
      ++report.veb_operations;
      touched.push_back(static_cast<std::uint32_t>(r));
    }
    lists[r].push_back(static_cast<std::uint32_t>(i));
  }

  for (const std::uint32_t r : touched) {
    auto& list = lists[r];
    sort_small_counted(instance, list, merge, scratch.sort_buffer_);
    const auto size = static_cast<std::uint32_t>(list.size());
    ++report.nonempty_intervals;
    report.max_occupancy = std::max(report.max_occupancy, size);
    report.occupancy_sum += size;
    report.occupancy_nlogn += size * std::log2(std::max<double>(size, 2.0));
    if (options.record_occupancy) report.occupancy.emplace_back(r, size);
  }

  std::vector<std::uint32_t> out;
  out.reserve(model.n);
  for (std::size_t b = 0; b < model.n; ++b) {
    VebTree& tree = scratch.buckets_[b];
    if (tree.empty()) continue;
    const std::size_t base = model.bucket_first(b);
    for (auto key = tree.min(); key; key = tree.successor(*key)) {
      const auto& list = lists[base + *key];
      out.insert(out.end(), list.begin(), list.end());
    }
    tree.clear();
  }
  for (const std::uint32_t r : touched) lists[r].clear();
  touched.clear();

  report.lookup_comparisons = lookup.count;
  report.merge_comparisons = merge.count;
  if (out.size() != model.n || !is_sorted_by_value(instance, out, verify)) {
    report.correctness_fallback = true;
    ComparisonCounter fallback;
    out = baseline_merge_sort(instance, fallback);
    report.fallback_comparisons = fallback.count;
  }
  report.verify_comparisons = verify.count;
  report.wall_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - started).count());
  return out;
}

inline std::vector<std::uint32_t> sort_mixture(const MixtureSorterModel& model, std::span<const double> instance) {
  MixtureScratch scratch(model);
  SortReport report;
  return sort_mixture(model, scratch, instance, report);
}

}  // namespace selfsort
