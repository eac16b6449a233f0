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

#include <algorithm>
#include <bit>
#include <numeric>
#include <vector>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "selfsort/generators.hpp"
#include "selfsort/linear_sorter.hpp"

namespace selfsort {
namespace {

bool sorts(const Instance& x, const std::vector<std::uint32_t>& order) {
  std::vector<std::uint32_t> seen(order);
  std::sort(seen.begin(), seen.end());
  for (std::uint32_t k = 0; k < seen.size(); ++k) {
    if (seen[k] != k) return false;
  }
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (x[order[k]] < x[order[k - 1]]) return false;
  }
  return order.size() == x.size();
}

// Source that records how many instances were pulled.
InstanceSource counting(Sampler& s, std::size_t& pulled) {
  return [&s, &pulled]() -> std::optional<Instance> {
    ++pulled;
    return s.next();
  };
}

TEST(LinearTraining, BatchPlanForEight) {
  const auto plan = linear_batch_plan(8, 0.5);
  EXPECT_EQ(plan.classes, 13u);
  EXPECT_EQ(plan.vlist, 3u);
  EXPECT_EQ(plan.frequencies, 3u);
  EXPECT_EQ(plan.total(), 19u);
}

TEST(LinearTraining, ConsumesExactlyThePlan) {
  const auto spec = fixtures::random_linear(1, 2, 3, 2);
  Sampler s(spec, 2);
  std::size_t pulled = 0;
  const auto model = train_linear(counting(s, pulled), LinearTrainOptions{0.5});
  EXPECT_EQ(pulled, linear_batch_plan(8, 0.5).total());
  EXPECT_EQ(model.vlist.size(), 8u);
}

TEST(LinearTraining, ShortStreamReportsNeededAndGot) {
  const auto spec = fixtures::random_linear(1, 2, 3, 2);
  Sampler s(spec, 2);
  const auto batch = s.take(18);
  try {
    train_linear(std::span<const Instance>(batch), LinearTrainOptions{0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientTraining);
    EXPECT_NE(std::string(e.what()).find("needed 19"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("got 18"), std::string::npos);
  }
}

TEST(LinearTraining, RejectsBadEpsilon) {
  const std::vector<Instance> batch(30, Instance{1.0});
  EXPECT_THROW(train_linear(std::span<const Instance>(batch), LinearTrainOptions{1.0}), Error);
  EXPECT_THROW(train_linear(std::span<const Instance>(batch), LinearTrainOptions{0.0}), Error);
}

TEST(LinearSorter, AllDegenerate) {
  const std::vector<Instance> batch(40, Instance{3.0, 1.0, 2.0, 1.0});
  const auto model = train_linear(std::span<const Instance>(batch));
  EXPECT_EQ(model.class_count(), 0u);
  EXPECT_EQ(model.marks.size(), 4u);
  SortReport report;
  LinearScratch scratch(model);
  const auto order = sort_linear(model, batch[0], scratch, report);
  EXPECT_EQ(order, (std::vector<std::uint32_t>{1, 3, 2, 0}));
  EXPECT_FALSE(report.correctness_fallback);
}

TEST(LinearSorter, SingleIndex) {
  LinearClassSpec spec;
  spec.n = 1;
  spec.classes.push_back({{0}, {Line{1.0, 0.0}}, UniformDist{0, 1}});
  Sampler s(spec, 3);
  const auto model = train_linear(s.take(linear_batch_plan(1, 0.5).total()));
  EXPECT_EQ(model.class_count(), 1u);
  EXPECT_EQ(sort_linear(model, s.next()), (std::vector<std::uint32_t>{0}));
}

TEST(LinearSorter, RejectsWrongLength) {
  const auto spec = fixtures::random_linear(3, 2, 3, 1);
  Sampler s(spec, 3);
  const auto model = train_linear(s.take(linear_batch_plan(spec.n, 0.5).total()));
  try {
    sort_linear(model, Instance(3, 0.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(LinearSorter, SortsSeededSpecs) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto spec = fixtures::random_linear(seed, 2 + seed % 4, 3 + seed % 5, seed % 3);
    Sampler s(spec, seed * 7 + 1);
    const auto model = train_linear(s.take(linear_batch_plan(spec.n, 0.5).total()));
    LinearScratch scratch(model);
    for (int t = 0; t < 100; ++t) {
      const Instance x = s.next();
      SortReport report;
      const auto order = sort_linear(model, x, scratch, report);
      ASSERT_TRUE(sorts(x, order)) << "seed " << seed;
      ASSERT_EQ(report.total_comparisons(), report.lookup_comparisons + report.merge_comparisons +
                                                report.verify_comparisons + report.fallback_comparisons);
    }
  }
}

TEST(LinearSorter, MergeCostWithinHeapBound) {
  const auto spec = fixtures::random_linear(40, 6, 6, 2);
  Sampler s(spec, 41);
  const auto model = train_linear(s.take(linear_batch_plan(spec.n, 0.5).total()));
  LinearScratch scratch(model);
  for (int t = 0; t < 500; ++t) {
    const Instance x = s.next();
    SortReport report;
    sort_linear(model, x, scratch, report, SortOptions{true});
    // Per interval: each emitted element costs at most ceil(log2 |Z_r|),
    // plus |Z_r| - 1 to seed the tournament.
    std::uint64_t bound = 0;
    std::uint64_t members_total = 0;
    for (const auto& [r, z] : report.occupancy) {
      const std::uint64_t ceil_log = std::bit_width(std::uint64_t{z} - 1);
      std::uint64_t members = 0;
      for (std::size_t k = 0; k < model.class_count(); ++k) {
        for (const std::size_t i : model.partition.classes[k]) {
          if (model.vlist.predecessor_index(x[i]) == r) ++members;
        }
      }
      members_total += members;
      bound += members * ceil_log + (z - 1);
    }
    ASSERT_LE(report.merge_comparisons, bound);
    ASSERT_EQ(members_total, spec.n - spec.degenerates.size());
  }
}

TEST(LinearSorter, SingletonIntervalsNeedNoMerging) {
  const auto spec = fixtures::banded_linear(64, 4);
  Sampler s(spec, 5);
  const auto model = train_linear(s.take(linear_batch_plan(spec.n, 0.5).total()));
  LinearScratch scratch(model);
  int singleton_instances = 0;
  for (int t = 0; t < 300; ++t) {
    SortReport report;
    const Instance x = s.next();
    EXPECT_TRUE(sorts(x, sort_linear(model, x, scratch, report)));
    if (report.max_occupancy <= 1) {
      ++singleton_instances;
      EXPECT_EQ(report.merge_comparisons, 0u);
    }
  }
  EXPECT_GT(singleton_instances, 0);
}

TEST(LinearSorter, WithinClassOrderMatchesClassSort) {
  const auto spec = fixtures::random_linear(50, 4, 6, 0);
  Sampler s(spec, 51);
  const auto model = train_linear(s.take(linear_batch_plan(spec.n, 0.5).total()));
  for (int t = 0; t < 200; ++t) {
    const Instance x = s.next();
    const auto order = sort_linear(model, x);
    std::vector<std::size_t> rank(x.size());
    for (std::size_t k = 0; k < order.size(); ++k) rank[order[k]] = k;
    for (const auto& cls : model.partition.classes) {
      std::vector<std::size_t> by_value(cls);
      std::stable_sort(by_value.begin(), by_value.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
      std::vector<std::size_t> by_output(cls);
      std::sort(by_output.begin(), by_output.end(), [&](std::size_t a, std::size_t b) { return rank[a] < rank[b]; });
      for (std::size_t q = 0; q < cls.size(); ++q) ASSERT_EQ(x[by_value[q]], x[by_output[q]]);
    }
  }
}

TEST(LinearSorter, CorruptModelFallsBackToMergeSort) {
  const auto spec = fixtures::random_linear(60, 3, 4, 0);
  Sampler s(spec, 61);
  auto model = train_linear(s.take(linear_batch_plan(spec.n, 0.5).total()));
  // Point every class at a wrong slab by shifting the representative line.
  for (auto& line : model.partition.lines) line.intercept += 100.0;
  std::vector<SlabIndex> slabs;
  for (std::size_t k = 0; k < model.class_count(); ++k) {
    std::vector<ClassLine> lines;
    for (const std::size_t i : model.partition.classes[k]) {
      lines.push_back({i, Line{-model.partition.lines[i].slope, model.partition.lines[i].intercept}});
    }
    slabs.push_back(build_slab_index(lines, model.vlist));
  }
  std::vector<std::vector<std::uint64_t>> counts;
  for (const auto& sl : slabs) counts.emplace_back(sl.slab_count(), 1);
  const auto broken = assemble_linear_model(model.n, model.epsilon, model.partition, model.vlist, std::move(slabs), counts);
  int fallbacks = 0;
  LinearScratch scratch(broken);
  for (int t = 0; t < 50; ++t) {
    const Instance x = s.next();
    SortReport report;
    const auto order = sort_linear(broken, x, scratch, report);
    ASSERT_TRUE(sorts(x, order));
    fallbacks += report.correctness_fallback ? 1 : 0;
    if (report.correctness_fallback) EXPECT_GT(report.fallback_comparisons, 0u);
  }
  EXPECT_GT(fallbacks, 0);
}

}  // namespace
}  // namespace selfsort
