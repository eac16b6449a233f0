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

#include <cstdint>
#include <utility>
#include <vector>

namespace selfsort {

/// Per-instance accounting of one operation-phase sort.
struct SortReport {
  std::uint64_t lookup_comparisons = 0;  // tree descents plus fallback binary searches
  std::uint64_t merge_comparisons = 0;   // heap merging of runs, or sorting each interval list
  std::uint64_t verify_comparisons = 0;  // final sortedness check
  std::uint64_t fallback_comparisons = 0;  // standard sort after a failed check
  std::uint32_t tree_fallbacks = 0;        // lookups answered by binary search
  bool correctness_fallback = false;
  std::uint64_t wall_ns = 0;

  std::uint32_t nonempty_intervals = 0;
  std::uint32_t max_occupancy = 0;     // max |Z_r| or |N_r|
  std::uint64_t occupancy_sum = 0;     // sum of |Z_r| or |N_r| over non-empty intervals
  double occupancy_nlogn = 0.0;        // sum |N_r| * log2(max(|N_r|, 2))
  std::uint64_t veb_operations = 0;    // mixture sorter only

  /// (interval r, occupancy) for non-empty intervals; filled on request.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> occupancy;

  std::uint64_t total_comparisons() const noexcept {
    return lookup_comparisons + merge_comparisons + verify_comparisons + fallback_comparisons;
  }
};

struct SortOptions {
  bool record_occupancy = false;
};

}  // namespace selfsort
