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
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "selfsort/core.hpp"
#include "selfsort/error.hpp"

namespace selfsort {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// Hidden-class structure recovered from training instances.
struct ClassPartition {
  std::size_t n = 0;
  /// (index, fixed value), ascending by index.
  std::vector<std::pair<std::size_t, double>> degenerates;
  /// Disjoint index sets, each ascending; the representative is front().
  std::vector<std::vector<std::size_t>> classes;
  /// lines[i] maps the representative's value to x_i. Empty until fit_lines.
  std::vector<Line> lines;

  std::size_t representative(std::size_t k) const { return classes[k].front(); }
};

inline constexpr double kDefaultCollinearTolerance = 1e-9;

/// Three points are collinear iff det [x y 1] vanishes. The determinant is
/// evaluated on differences against p1 and compared with the rounding error
/// it could carry: products of the differences plus the coordinate
/// magnitude times the differences, scaled by tol.
inline bool collinear(Point2 p1, Point2 p2, Point2 p3, double tol = kDefaultCollinearTolerance) {
  const double dx2 = p2.x - p1.x;
  const double dy2 = p2.y - p1.y;
  const double dx3 = p3.x - p1.x;
  const double dy3 = p3.y - p1.y;
  const double det = dx2 * dy3 - dy2 * dx3;
  const double scale = std::max({std::abs(p1.x), std::abs(p1.y), std::abs(p2.x), std::abs(p2.y), std::abs(p3.x),
                                 std::abs(p3.y)});
  const double bound = std::abs(dx2 * dy3) + std::abs(dy2 * dx3) +
                       scale * (std::abs(dx2) + std::abs(dy2) + std::abs(dx3) + std::abs(dy3));
  return std::abs(det) <= tol * bound;
}

namespace detail {

inline std::size_t common_length(std::span<const Instance> instances) {
  const std::size_t n = instances.front().size();
  for (std::size_t a = 1; a < instances.size(); ++a) {
    if (instances[a].size() != n) {
      throw Error(ErrorKind::LengthMismatch, "instance " + std::to_string(a) + " has length " +
                                                 std::to_string(instances[a].size()) + ", expected " +
                                                 std::to_string(n));
    }
  }
  return n;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  // The smaller root wins so that roots are the smallest member.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

/// Indices whose value is identical in every supplied instance.
inline std::vector<std::pair<std::size_t, double>> detect_degenerates(std::span<const Instance> instances) {
  if (instances.empty()) throw Error(ErrorKind::InsufficientTraining, "no instances for degenerate detection");
  const std::size_t n = detail::common_length(instances);
  std::vector<std::pair<std::size_t, double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = instances.front()[i];
    const bool fixed = std::all_of(instances.begin(), instances.end(), [&](const Instance& x) { return x[i] == c; });
    if (fixed) out.emplace_back(i, c);
  }
  return out;
}

/// Groups non-degenerate indices whose value pairs stay collinear over every
/// consecutive triple of instances. Classes are the connected components of
/// the passing pairs; lines are left empty.
inline ClassPartition learn_classes(std::span<const Instance> instances,
                                    std::span<const std::pair<std::size_t, double>> degenerates,
                                    double tol = kDefaultCollinearTolerance) {
  if (instances.size() < 3) {
    throw Error(ErrorKind::InsufficientTraining,
                "class learning needs 3 instances, got " + std::to_string(instances.size()));
  }
  const std::size_t n = detail::common_length(instances);
  ClassPartition out;
  out.n = n;
  out.degenerates.assign(degenerates.begin(), degenerates.end());
  std::sort(out.degenerates.begin(), out.degenerates.end());

  std::vector<char> is_degenerate(n, 0);
  for (const auto& [index, value] : out.degenerates) is_degenerate[index] = 1;
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_degenerate[i]) active.push_back(i);
  }

  auto pair_collinear = [&](std::size_t i, std::size_t j) {
    for (std::size_t a = 2; a < instances.size(); ++a) {
      const Point2 p1{instances[a - 2][i], instances[a - 2][j]};
      const Point2 p2{instances[a - 1][i], instances[a - 1][j]};
      const Point2 p3{instances[a][i], instances[a][j]};
      if (!collinear(p1, p2, p3, tol)) return false;
    }
    return true;
  };

  detail::UnionFind uf(n);
  for (std::size_t u = 0; u < active.size(); ++u) {
    for (std::size_t w = u + 1; w < active.size(); ++w) {
      const std::size_t i = active[u];
      const std::size_t j = active[w];
      // An edge inside an existing component cannot change the components.
      if (uf.find(i) == uf.find(j)) continue;
      if (pair_collinear(i, j)) uf.unite(i, j);
    }
  }

  std::vector<std::size_t> class_of(n, SIZE_MAX);
  for (const std::size_t i : active) {
    const std::size_t root = uf.find(i);
    if (class_of[root] == SIZE_MAX) {
      class_of[root] = out.classes.size();
      out.classes.emplace_back();
    }
    out.classes[class_of[root]].push_back(i);
  }
  return out;
}

/// Fits x_i = slope * x_s + intercept for every class member i, where s is
/// the class representative. Uses the two instances where x_s is smallest
/// and largest.
inline ClassPartition fit_lines(ClassPartition partition, std::span<const Instance> instances) {
  if (instances.size() < 2) {
    throw Error(ErrorKind::InsufficientTraining, "line fitting needs 2 instances, got " + std::to_string(instances.size()));
  }
  detail::common_length(instances);
  partition.lines.assign(partition.n, Line{});
  for (std::size_t k = 0; k < partition.classes.size(); ++k) {
    const std::size_t s = partition.representative(k);
    std::size_t lo = 0;
    std::size_t hi = 0;
    for (std::size_t a = 1; a < instances.size(); ++a) {
      if (instances[a][s] < instances[lo][s]) lo = a;
      if (instances[a][s] > instances[hi][s]) hi = a;
    }
    const double xs_lo = instances[lo][s];
    const double xs_hi = instances[hi][s];
    if (!(xs_lo != xs_hi)) {
      throw Error(ErrorKind::RepresentativeDegenerate,
                  "representative " + std::to_string(s) + " of class " + std::to_string(k) + " never varies");
    }
    for (const std::size_t i : partition.classes[k]) {
      if (i == s) {
        partition.lines[i] = Line{1.0, 0.0};
        continue;
      }
      const double slope = (instances[hi][i] - instances[lo][i]) / (xs_hi - xs_lo);
      if (slope == 0.0 || !std::isfinite(slope)) {
        throw Error(ErrorKind::ZeroSlopeLine, "index " + std::to_string(i) + " is flat against its representative");
      }
      partition.lines[i] = Line{slope, instances[lo][i] - slope * xs_lo};
    }
  }
  return partition;
}

}  // namespace selfsort
