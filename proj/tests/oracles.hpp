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
#include <cmath>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "selfsort/core.hpp"
#include "selfsort/freq_bst.hpp"
#include "selfsort/slab_index.hpp"
#include "selfsort/veb.hpp"

// Brute-force references shared by the unit tests and the acceptance run.
// Each check returns an empty string on agreement, otherwise a description
// of the first disagreement.
namespace selfsort::oracles {

using Entries = std::vector<std::pair<std::size_t, std::size_t>>;

/// Largest r with v_r <= x by scanning every boundary.
inline std::size_t predecessor_scan(std::span<const double> b, double x) {
  std::size_t r = 0;
  for (std::size_t k = 1; k <= b.size(); ++k) {
    if (b[k - 1] <= x) r = k;
  }
  return r;
}

/// An x strictly inside the slab.
inline double probe_x(const SlabIndex& s, std::size_t slab) {
  const auto b = s.boundaries();
  if (b.empty()) return 0.0;
  if (slab == 0) return b.front() - std::max(1.0, std::abs(b.front()));
  if (slab == b.size()) return b.back() + std::max(1.0, std::abs(b.back()));
  return b[slab - 1] + (b[slab] - b[slab - 1]) / 2;
}

/// Sorts the lines by height at x and labels each with its interval.
inline Entries midpoint_entries(const std::vector<ClassLine>& lines, const VList& v, double x) {
  std::vector<std::size_t> order(lines.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t p, std::size_t q) {
    return lines[p].line.at(x) < lines[q].line.at(x);
  });
  Entries out;
  for (const std::size_t k : order) out.emplace_back(lines[k].index, v.predecessor_index(lines[k].line.at(x)));
  return out;
}

/// x-coordinates of line-line and line-horizontal intersections.
inline std::size_t distinct_vertices(const std::vector<ClassLine>& lines, const VList& v) {
  std::set<double> xs;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (const double h : v.boundaries()) xs.insert((h - lines[i].line.intercept) / lines[i].line.slope);
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      if (lines[i].line.slope == lines[j].line.slope) continue;
      xs.insert((lines[j].line.intercept - lines[i].line.intercept) / (lines[i].line.slope - lines[j].line.slope));
    }
  }
  return xs.size();
}

/// Random arrangement of at most 6 lines and 12 boundaries. Integer
/// coefficients force shared vertices, parallel lines, equal intercepts,
/// duplicate boundaries and concurrent crossings.
inline void random_arrangement(std::mt19937_64& rng, bool integer, std::vector<ClassLine>& lines, VList& v) {
  const std::size_t line_count = 1 + rng() % 6;
  const std::size_t bound_count = rng() % 13;
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> small(-3, 3);
  lines.clear();
  std::set<std::pair<double, double>> used;
  while (lines.size() < line_count) {
    double slope = integer ? small(rng) : u(rng);
    const double intercept = integer ? small(rng) : u(rng);
    if (slope == 0.0) slope = 1.0;
    if (!used.emplace(slope, intercept).second) continue;
    lines.push_back({lines.size() * 3 + 1, Line{slope, intercept}});
  }
  std::vector<double> b(bound_count);
  for (auto& x : b) x = integer ? small(rng) : u(rng);
  std::sort(b.begin(), b.end());
  v = VList(b);
}

/// Every slab of one arrangement against the midpoint evaluation.
inline std::string check_slabs(const std::vector<ClassLine>& lines, const VList& v) {
  const auto s = build_slab_index(lines, v);
  if (s.slab_count() != distinct_vertices(lines, v) + 1) return "slab count differs from vertex count + 1";
  for (std::size_t slab = 0; slab < s.slab_count(); ++slab) {
    if (s.slab_entries(slab) != midpoint_entries(lines, v, probe_x(s, slab))) {
      return "slab " + std::to_string(slab) + " differs from midpoint order";
    }
  }
  return {};
}

/// Random insert, erase, successor and membership operations replayed on a
/// vEB tree and a std::set.
inline std::string check_veb(std::uint64_t universe, std::uint64_t seed, int ops) {
  VebTree t(universe);
  std::set<std::uint64_t> oracle;
  std::mt19937_64 rng(seed);
  for (int op = 0; op < ops; ++op) {
    const std::uint64_t x = rng() % universe;
    const std::string where = "op " + std::to_string(op);
    switch (rng() % 5) {
      case 0:
      case 1:
        t.insert(x);
        oracle.insert(x);
        break;
      case 2:
        t.erase(x);
        oracle.erase(x);
        break;
      case 3: {
        const auto it = oracle.upper_bound(x);
        const auto s = t.successor(x);
        if (s.has_value() != (it != oracle.end()) || (s && *s != *it)) return where + ": successor";
        break;
      }
      default:
        if (t.contains(x) != (oracle.count(x) == 1)) return where + ": contains";
        break;
    }
    if (t.empty() != oracle.empty()) return where + ": empty";
    if (!oracle.empty() && (t.min() != *oracle.begin() || t.max() != *oracle.rbegin())) return where + ": min/max";
  }
  return {};
}

/// Keys [k, k + 1) for k = 0 .. weights.size() - 1.
inline std::vector<WeightedKey> unit_keys(const std::vector<std::uint64_t>& weights) {
  std::vector<WeightedKey> keys;
  for (std::size_t k = 0; k < weights.size(); ++k) {
    keys.push_back({static_cast<std::uint32_t>(k), double(k), double(k + 1), weights[k]});
  }
  return keys;
}

/// Random weight vector; even trials draw powers of two up to 2^19.
inline std::vector<std::uint64_t> random_weights(std::mt19937_64& rng, int trial) {
  const std::size_t k = 1 + rng() % 200;
  std::vector<std::uint64_t> w(k);
  const bool heavy_tail = trial % 2 == 0;
  for (auto& x : w) x = heavy_tail ? (std::uint64_t{1} << (rng() % 20)) : 1 + rng() % 100;
  return w;
}

/// Per-key depth against log2(W / w) + 2.
inline std::string check_depths(const FreqBST& t, const std::vector<std::uint64_t>& w) {
  const double total = static_cast<double>(t.total_weight());
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (static_cast<double>(t.depth_at(i)) > std::log2(total / static_cast<double>(w[i])) + 2.0 + 1e-9) {
      return "key " + std::to_string(i) + " too deep";
    }
  }
  return {};
}

}  // namespace selfsort::oracles
