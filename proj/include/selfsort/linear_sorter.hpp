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
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "selfsort/core.hpp"
#include "selfsort/counted_sort.hpp"
#include "selfsort/error.hpp"
#include "selfsort/freq_bst.hpp"
#include "selfsort/linear_learner.hpp"
#include "selfsort/report.hpp"
#include "selfsort/slab_index.hpp"

namespace selfsort {

struct LinearTrainOptions {
  double epsilon = 0.5;
  double collinear_tolerance = kDefaultCollinearTolerance;
  double frequency_multiplier = 1.0;
};

/// Training batch sizes for the hidden-linear-classes sorter.
struct LinearBatchPlan {
  std::size_t classes = 0;      // degenerates, classes and lines
  std::size_t vlist = 0;        // V-list samples
  std::size_t frequencies = 0;  // slab frequencies

  std::size_t total() const noexcept { return classes + vlist + frequencies; }
};

inline LinearBatchPlan linear_batch_plan(std::size_t n, double epsilon, double frequency_multiplier = 1.0) {
  return {class_learning_batch(n), ln_stride(static_cast<double>(n)),
          frequency_batch(static_cast<double>(n), epsilon, frequency_multiplier)};
}

struct LinearSorterModel {
  std::size_t n = 0;
  double epsilon = 0.5;
  ClassPartition partition;
  VList vlist;
  /// (interval r, degenerate index), sorted by r then index.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> marks;
  std::vector<SlabIndex> slabs;  // one per class
  std::vector<FreqBST> trees;    // one per class, keyed by slab id

  std::size_t class_count() const noexcept { return partition.classes.size(); }
  std::size_t cutoff() const noexcept { return depth_cutoff(static_cast<double>(n), epsilon); }
};

namespace detail {

inline std::vector<std::pair<std::uint32_t, std::uint32_t>> mark_degenerates(const ClassPartition& partition,
                                                                             const VList& vlist) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> marks;
  for (const auto& [index, value] : partition.degenerates) {
    marks.emplace_back(static_cast<std::uint32_t>(vlist.predecessor_index(value)), static_cast<std::uint32_t>(index));
  }
  std::sort(marks.begin(), marks.end());
  return marks;
}

inline std::vector<ClassLine> class_lines(const ClassPartition& partition, std::size_t k) {
  std::vector<ClassLine> lines;
  for (const std::size_t i : partition.classes[k]) lines.push_back({i, partition.lines[i]});
  return lines;
}

inline FreqBST slab_tree(const SlabIndex& slabs, std::span<const std::uint64_t> counts, std::size_t cutoff) {
  std::vector<WeightedKey> keys;
  for (std::size_t s = 0; s < counts.size(); ++s) {
    if (counts[s] == 0) continue;
    keys.push_back({static_cast<std::uint32_t>(s), slabs.slab_low(s), slabs.slab_high(s), counts[s]});
  }
  return FreqBST(std::move(keys), cutoff);
}

}  // namespace detail

/// Assembles a model from a learned partition, a V-list and slab
/// frequencies, one count vector per class.
inline LinearSorterModel assemble_linear_model(std::size_t n, double epsilon, ClassPartition partition, VList vlist,
                                               std::vector<SlabIndex> slabs,
                                               std::span<const std::vector<std::uint64_t>> slab_counts) {
  LinearSorterModel model;
  model.n = n;
  model.epsilon = epsilon;
  model.partition = std::move(partition);
  model.vlist = std::move(vlist);
  model.marks = detail::mark_degenerates(model.partition, model.vlist);
  model.slabs = std::move(slabs);
  const std::size_t cutoff = model.cutoff();
  for (std::size_t k = 0; k < model.slabs.size(); ++k) {
    model.trees.push_back(detail::slab_tree(model.slabs[k], slab_counts[k], cutoff));
  }
  return model;
}

/// Training: learn classes and lines, then the V-list, then the per-class
/// slab indexes and their frequency trees.
inline LinearSorterModel train_linear(InstanceSource source, const LinearTrainOptions& options = {}) {
  if (!(options.epsilon > 0.0 && options.epsilon < 1.0)) {
    throw Error(ErrorKind::SpecError, "epsilon: must lie in (0,1)");
  }
  auto first = source();
  if (!first) throw Error(ErrorKind::InsufficientTraining, "needed training instances, got 0");
  std::size_t n = first->size();
  if (n == 0) throw Error(ErrorKind::EmptyTraining, "instances must not be empty");
  const LinearBatchPlan plan = linear_batch_plan(n, options.epsilon, options.frequency_multiplier);
  InstanceSource chained = [&first, &source]() -> std::optional<Instance> {
    if (first) {
      auto x = std::move(first);
      first.reset();
      return x;
    }
    return source();
  };
  std::size_t consumed = 0;

  const auto learn_batch = take_batch(chained, plan.classes, n, consumed, plan.total());
  auto partition = learn_classes(learn_batch, detect_degenerates(learn_batch), options.collinear_tolerance);
  partition = fit_lines(std::move(partition), learn_batch);

  const auto vlist_batch = take_batch(chained, plan.vlist, n, consumed, plan.total());
  std::vector<double> samples;
  samples.reserve(n * plan.vlist);
  for (const auto& x : vlist_batch) samples.insert(samples.end(), x.begin(), x.end());
  std::sort(samples.begin(), samples.end());
  VList vlist = build_vlist(samples, plan.vlist);

  std::vector<SlabIndex> slabs;
  slabs.reserve(partition.classes.size());
  for (std::size_t k = 0; k < partition.classes.size(); ++k) {
    slabs.push_back(build_slab_index(detail::class_lines(partition, k), vlist));
  }

  const auto freq_batch = take_batch(chained, plan.frequencies, n, consumed, plan.total());
  std::vector<std::vector<std::uint64_t>> counts(slabs.size());
  for (std::size_t k = 0; k < slabs.size(); ++k) {
    counts[k].assign(slabs[k].slab_count(), 0);
    const std::size_t s = partition.representative(k);
    for (const auto& x : freq_batch) ++counts[k][slabs[k].locate_slab(x[s])];
  }
  return assemble_linear_model(n, options.epsilon, std::move(partition), std::move(vlist), std::move(slabs), counts);
}

inline LinearSorterModel train_linear(std::span<const Instance> instances, const LinearTrainOptions& options = {}) {
  return train_linear(source_from(instances), options);
}

/// Per-call buffers for sort_linear; one per thread.
class LinearScratch {
 public:
  explicit LinearScratch(const LinearSorterModel& model)
      : run_count_(model.vlist.interval_count() + 1, 0) {
    class_order_.reserve(model.n);
  }

 private:
  struct Run {
    std::uint32_t interval;
    std::uint32_t begin;
    std::uint32_t end;
  };

  std::vector<std::uint32_t> class_order_;
  std::vector<Run> runs_;
  std::vector<Run> runs_by_interval_;
  std::vector<std::uint32_t> run_count_;
  std::vector<std::span<const std::uint32_t>> merge_inputs_;
  std::vector<std::uint32_t> sort_buffer_;
  TournamentMerger merger_;

  friend std::vector<std::uint32_t> sort_linear(const LinearSorterModel&, std::span<const double>, LinearScratch&,
                                                SortReport&, const SortOptions&);
};

/// Operation phase. Returns input positions in non-decreasing value order.
inline std::vector<std::uint32_t> sort_linear(const LinearSorterModel& model, std::span<const double> instance,
                                              LinearScratch& scratch, SortReport& report,
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

  // Sorted order of each class with interval labels, split into runs.
  auto& order = scratch.class_order_;
  auto& runs = scratch.runs_;
  order.clear();
  runs.clear();
  for (std::size_t k = 0; k < model.class_count(); ++k) {
    const double x = instance[model.partition.representative(k)];
    const LookupResult hit = model.trees[k].lookup(x, lookup);
    std::size_t slab = hit.id;
    if (!hit.hit) {
      ++report.tree_fallbacks;
      slab = model.slabs[k].locate_slab(x, lookup);
    }
    const std::size_t start = runs.size();
    model.slabs[k].for_each_entry(slab, [&](std::size_t index, std::size_t label) {
      const auto r = static_cast<std::uint32_t>(label);
      const auto at = static_cast<std::uint32_t>(order.size());
      if (runs.size() == start || runs.back().interval != r) runs.push_back({r, at, at});
      order.push_back(static_cast<std::uint32_t>(index));
      runs.back().end = at + 1;
    });
  }

  // Bucket runs by interval; stable, so class order is kept within Z_r.
  auto& count = scratch.run_count_;
  std::fill(count.begin(), count.end(), 0u);
  for (const auto& run : runs) ++count[run.interval + 1];
  for (std::size_t r = 1; r < count.size(); ++r) count[r] += count[r - 1];
  auto& grouped = scratch.runs_by_interval_;
  grouped.resize(runs.size());
  for (const auto& run : runs) grouped[count[run.interval]++] = run;

  std::vector<std::uint32_t> out;
  out.reserve(model.n);
  const std::size_t intervals = model.vlist.interval_count();
  std::size_t mark = 0;
  std::size_t g = 0;
  for (std::uint32_t r = 0; r < intervals; ++r) {
    while (mark < model.marks.size() && model.marks[mark].first == r) out.push_back(model.marks[mark++].second);
    const std::size_t first_run = g;
    while (g < grouped.size() && grouped[g].interval == r) ++g;
    const std::size_t z = g - first_run;
    if (z == 0) continue;
    auto& inputs = scratch.merge_inputs_;
    inputs.clear();
    std::uint32_t members = 0;
    for (std::size_t q = first_run; q < g; ++q) {
      inputs.emplace_back(order.data() + grouped[q].begin, grouped[q].end - grouped[q].begin);
      members += grouped[q].end - grouped[q].begin;
    }
    scratch.merger_.merge(instance, inputs, out, merge);
    ++report.nonempty_intervals;
    report.max_occupancy = std::max(report.max_occupancy, static_cast<std::uint32_t>(z));
    report.occupancy_sum += z;
    report.occupancy_nlogn += members * std::log2(std::max<double>(static_cast<double>(z), 2.0));
    if (options.record_occupancy) report.occupancy.emplace_back(r, static_cast<std::uint32_t>(z));
  }
  while (mark < model.marks.size()) out.push_back(model.marks[mark++].second);

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

inline std::vector<std::uint32_t> sort_linear(const LinearSorterModel& model, std::span<const double> instance) {
  LinearScratch scratch(model);
  SortReport report;
  return sort_linear(model, instance, scratch, report);
}

}  // namespace selfsort
