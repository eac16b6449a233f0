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
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "selfsort/core.hpp"
#include "selfsort/error.hpp"
#include "selfsort/persistent_array.hpp"

namespace selfsort {

/// Line of one class member in the (x_rep, x_i) plane.
struct ClassLine {
  std::size_t index = 0;
  Line line;
};

/// One element of a slab version: which line sits at this rank and the
/// V-list interval that line occupies throughout the slab.
struct SlabEntry {
  std::uint32_t line = 0;   // position in SlabIndex::lines()
  std::uint32_t label = 0;  // predecessor interval r

  friend bool operator==(const SlabEntry&, const SlabEntry&) = default;
};

/// A single position update between two adjacent slab versions.
struct SlabDelta {
  std::uint32_t position = 0;
  SlabEntry entry;
};

/// Arrangement of one class's lines against the V-list horizontals, swept
/// into vertical slabs. Slab 0 is (-inf, b_0), slab s is [b_{s-1}, b_s),
/// the last slab is unbounded above. Each slab owns one persistent version
/// listing the lines bottom to top with their interval labels.
class SlabIndex {
 public:
  SlabIndex() = default;

  std::span<const ClassLine> lines() const noexcept { return lines_; }
  std::span<const double> boundaries() const noexcept { return boundaries_; }
  std::size_t slab_count() const noexcept { return versions_.size(); }
  std::size_t stored_nodes() const noexcept { return store_.node_count(); }

  double slab_low(std::size_t slab) const noexcept {
    return slab == 0 ? -std::numeric_limits<double>::infinity() : boundaries_[slab - 1];
  }
  double slab_high(std::size_t slab) const noexcept {
    return slab >= boundaries_.size() ? std::numeric_limits<double>::infinity() : boundaries_[slab];
  }

  /// Slab whose half-open x-range contains x. Counted binary search.
  std::size_t locate_slab(double x, ComparisonCounter& counter) const noexcept {
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
  std::size_t locate_slab(double x) const noexcept {
    ComparisonCounter scratch;
    return locate_slab(x, scratch);
  }

  /// Visits (input index, interval label) bottom to top.
  template <typename F>
  void for_each_entry(std::size_t slab, F&& visit) const {
    store_.for_each(versions_[slab], [&](const SlabEntry& e) { visit(lines_[e.line].index, std::size_t{e.label}); });
  }

  std::vector<std::pair<std::size_t, std::size_t>> slab_entries(std::size_t slab) const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    out.reserve(lines_.size());
    for_each_entry(slab, [&out](std::size_t index, std::size_t label) { out.emplace_back(index, label); });
    return out;
  }

  std::vector<SlabEntry> raw_entries(std::size_t slab) const { return store_.materialize(versions_[slab]); }

  /// Updates that turn slab s - 1 into slab s, for s >= 1.
  std::span<const SlabDelta> deltas(std::size_t slab) const noexcept {
    return {deltas_.data() + delta_offsets_[slab - 1], delta_offsets_[slab] - delta_offsets_[slab - 1]};
  }

  /// Rebuilds the persistent versions from a first slab and the per-slab
  /// updates, as written by a model file.
  static SlabIndex from_deltas(std::vector<ClassLine> lines, std::span<const SlabEntry> first,
                               std::vector<double> boundaries, std::span<const std::vector<SlabDelta>> per_slab) {
    if (per_slab.size() != boundaries.size()) {
      throw Error(ErrorKind::ParseError, "slab update count does not match boundary count");
    }
    SlabIndex out;
    out.lines_ = std::move(lines);
    out.boundaries_ = std::move(boundaries);
    if (first.size() != out.lines_.size()) throw Error(ErrorKind::ParseError, "first slab has wrong length");
    out.versions_.push_back(out.store_.build(first));
    out.delta_offsets_.push_back(0);
    for (const auto& updates : per_slab) {
      auto version = out.store_.begin_version(out.versions_.back());
      for (const SlabDelta& d : updates) {
        if (d.position >= out.lines_.size() || d.entry.line >= out.lines_.size()) {
          throw Error(ErrorKind::ParseError, "slab update out of range");
        }
        version = out.store_.set(version, d.position, d.entry);
        out.deltas_.push_back(d);
      }
      out.versions_.push_back(version);
      out.delta_offsets_.push_back(out.deltas_.size());
    }
    return out;
  }

  friend SlabIndex build_slab_index(std::vector<ClassLine> lines, const VList& vlist);

 private:
  std::vector<ClassLine> lines_;
  std::vector<double> boundaries_;
  PersistentArray<SlabEntry> store_;
  std::vector<PersistentArray<SlabEntry>::Version> versions_;
  std::vector<SlabDelta> deltas_;
  std::vector<std::size_t> delta_offsets_;
};

namespace detail {

struct SweepEvent {
  double x;
  std::uint32_t a;  // line
  std::uint32_t b;  // other line, or horizontal rank r (1-based) when horizontal
  bool horizontal;
};

}  // namespace detail

/// Plane sweep over the class lines and the V-list horizontals. The first
/// slab orders lines by decreasing slope, labelling rising lines 0 and
/// falling lines M. At each vertex x: a line crossing horizontals there is
/// relabelled (rising: the highest r crossed, falling: the lowest r crossed
/// minus one); lines crossing each other are re-ranked within the block of
/// positions they span, by their height just right of x.
inline SlabIndex build_slab_index(std::vector<ClassLine> lines, const VList& vlist) {
  if (lines.empty()) throw Error(ErrorKind::EmptyTraining, "slab index needs at least one line");
  for (const auto& cl : lines) {
    if (cl.line.slope == 0.0 || !std::isfinite(cl.line.slope) || !std::isfinite(cl.line.intercept)) {
      throw Error(ErrorKind::ZeroSlopeLine, "line for index " + std::to_string(cl.index) + " has zero slope");
    }
  }
  const std::size_t count = lines.size();
  const std::size_t bands = vlist.size();

  SlabIndex out;
  out.lines_ = std::move(lines);
  const auto& ls = out.lines_;

  // Bottom-to-top order at x -> -inf.
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&ls](std::uint32_t p, std::uint32_t q) {
    const Line& a = ls[p].line;
    const Line& b = ls[q].line;
    if (a.slope != b.slope) return a.slope > b.slope;
    if (a.intercept != b.intercept) return a.intercept < b.intercept;
    return ls[p].index < ls[q].index;
  });
  std::vector<std::uint32_t> label(count);
  std::vector<std::uint32_t> pos(count);
  std::vector<SlabEntry> first(count);
  for (std::size_t p = 0; p < count; ++p) {
    const std::uint32_t line = order[p];
    label[line] = ls[line].line.slope > 0.0 ? 0u : static_cast<std::uint32_t>(bands);
    pos[line] = static_cast<std::uint32_t>(p);
    first[p] = SlabEntry{line, label[line]};
  }
  out.versions_.push_back(out.store_.build(std::span<const SlabEntry>(first)));
  out.delta_offsets_.push_back(0);

  std::vector<detail::SweepEvent> events;
  events.reserve(count * bands + count * (count - 1) / 2);
  for (std::uint32_t i = 0; i < count; ++i) {
    const Line& l = ls[i].line;
    for (std::size_t r = 1; r <= bands; ++r) {
      const double x = (vlist.value(r) - l.intercept) / l.slope;
      if (std::isfinite(x)) events.push_back({x, i, static_cast<std::uint32_t>(r), true});
    }
    for (std::uint32_t j = i + 1; j < count; ++j) {
      const Line& o = ls[j].line;
      if (l.slope == o.slope) continue;
      const double x = (o.intercept - l.intercept) / (l.slope - o.slope);
      if (std::isfinite(x)) events.push_back({x, i, j, false});
    }
  }
  std::sort(events.begin(), events.end(), [](const detail::SweepEvent& p, const detail::SweepEvent& q) {
    if (p.x != q.x) return p.x < q.x;
    if (p.horizontal != q.horizontal) return p.horizontal;
    if (p.a != q.a) return p.a < q.a;
    return p.b < q.b;
  });

  std::vector<std::pair<std::uint32_t, std::uint32_t>> relabels;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> spans;
  std::vector<std::uint32_t> block;
  std::size_t e = 0;
  while (e < events.size()) {
    const double x = events[e].x;
    std::size_t end = e;
    while (end < events.size() && events[end].x == x) ++end;
    const double right = end < events.size() ? x + (events[end].x - x) / 2 : x + std::max(1.0, std::abs(x));

    auto version = out.store_.begin_version(out.versions_.back());
    auto write = [&](std::uint32_t p) {
      const SlabEntry entry{order[p], label[order[p]]};
      version = out.store_.set(version, p, entry);
      out.deltas_.push_back(SlabDelta{p, entry});
    };

    relabels.clear();
    spans.clear();
    for (std::size_t k = e; k < end; ++k) {
      const auto& ev = events[k];
      if (ev.horizontal) {
        relabels.emplace_back(ev.a, ev.b);
      } else {
        spans.emplace_back(std::min(pos[ev.a], pos[ev.b]), std::max(pos[ev.a], pos[ev.b]));
      }
    }

    // Horizontal events arrive grouped by line, ranks ascending.
    for (std::size_t k = 0; k < relabels.size();) {
      const std::uint32_t line = relabels[k].first;
      std::uint32_t low = relabels[k].second;
      std::uint32_t high = low;
      while (k < relabels.size() && relabels[k].first == line) {
        low = std::min(low, relabels[k].second);
        high = std::max(high, relabels[k].second);
        ++k;
      }
      label[line] = ls[line].line.slope > 0.0 ? high : low - 1;
      write(pos[line]);
    }

    std::sort(spans.begin(), spans.end());
    for (std::size_t k = 0; k < spans.size();) {
      std::uint32_t lo = spans[k].first;
      std::uint32_t hi = spans[k].second;
      while (k < spans.size() && spans[k].first <= hi) {
        hi = std::max(hi, spans[k].second);
        ++k;
      }
      block.assign(order.begin() + lo, order.begin() + hi + 1);
      std::sort(block.begin(), block.end(), [&ls, right](std::uint32_t p, std::uint32_t q) {
        const double yp = ls[p].line.at(right);
        const double yq = ls[q].line.at(right);
        if (yp != yq) return yp < yq;
        if (ls[p].line.slope != ls[q].line.slope) return ls[p].line.slope < ls[q].line.slope;
        return ls[p].index < ls[q].index;
      });
      for (std::uint32_t p = lo; p <= hi; ++p) {
        const std::uint32_t line = block[p - lo];
        if (order[p] == line) continue;
        order[p] = line;
        pos[line] = p;
        write(p);
      }
    }

    out.versions_.push_back(version);
    out.boundaries_.push_back(x);
    out.delta_offsets_.push_back(out.deltas_.size());
    e = end;
  }
  return out;
}

}  // namespace selfsort
