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

#include <cassert>
#include <cstdint>
#include <span>
#include <vector>

namespace selfsort {

/// Fixed-length sequence with full persistence by path copying. Elements
/// live in a balanced tree whose inorder is the sequence; an update copies
/// the root-to-node path, so every earlier version stays readable.
///
/// Updates made while a version is open (between begin_version and the
/// next begin_version) touch nodes created for that version in place, so a
/// version built from several updates shares one copied path per node.
template <typename T>
class PersistentArray {
 public:
  using Version = std::uint32_t;
  static constexpr Version kEmpty = 0xffffffffu;

  PersistentArray() = default;

  /// Builds the first version holding items in order.
  Version build(std::span<const T> items) {
    length_ = items.size();
    open_floor_ = static_cast<std::uint32_t>(nodes_.size());
    return build_range(items, 0, items.size());
  }

  std::size_t length() const noexcept { return length_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }

  /// Starts a new version derived from base; later set() calls on the
  /// returned handle mutate only nodes created after this call.
  Version begin_version(Version base) {
    open_floor_ = static_cast<std::uint32_t>(nodes_.size());
    return base;
  }

  /// Returns a version equal to v except position pos holds value.
  Version set(Version v, std::size_t pos, const T& value) {
    assert(pos < length_);
    return set_range(v, 0, length_, pos, value);
  }

  const T& get(Version v, std::size_t pos) const {
    std::size_t lo = 0;
    std::size_t hi = length_;
    for (;;) {
      const std::size_t mid = lo + (hi - lo) / 2;
      const Node& node = nodes_[v];
      if (pos == mid) return node.value;
      if (pos < mid) {
        hi = mid;
        v = node.left;
      } else {
        lo = mid + 1;
        v = node.right;
      }
    }
  }

  /// Inorder walk, O(length).
  template <typename F>
  void for_each(Version v, F&& visit) const {
    walk(v, visit);
  }

  std::vector<T> materialize(Version v) const {
    std::vector<T> out;
    out.reserve(length_);
    for_each(v, [&out](const T& x) { out.push_back(x); });
    return out;
  }

 private:
  struct Node {
    T value;
    std::uint32_t left = kEmpty;
    std::uint32_t right = kEmpty;
  };

  Version build_range(std::span<const T> items, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return kEmpty;
    const std::size_t mid = lo + (hi - lo) / 2;
    const Version left = build_range(items, lo, mid);
    const Version right = build_range(items, mid + 1, hi);
    nodes_.push_back(Node{items[mid], left, right});
    return static_cast<Version>(nodes_.size() - 1);
  }

  Version own(Version v) {
    if (v >= open_floor_) return v;
    nodes_.push_back(nodes_[v]);
    return static_cast<Version>(nodes_.size() - 1);
  }

  Version set_range(Version v, std::size_t lo, std::size_t hi, std::size_t pos, const T& value) {
    const std::size_t mid = lo + (hi - lo) / 2;
    const Version copy = own(v);
    if (pos == mid) {
      nodes_[copy].value = value;
    } else if (pos < mid) {
      const Version child = set_range(nodes_[copy].left, lo, mid, pos, value);
      nodes_[copy].left = child;
    } else {
      const Version child = set_range(nodes_[copy].right, mid + 1, hi, pos, value);
      nodes_[copy].right = child;
    }
    return copy;
  }

  template <typename F>
  void walk(Version v, F& visit) const {
    if (v == kEmpty) return;
    walk(nodes_[v].left, visit);
    visit(nodes_[v].value);
    walk(nodes_[v].right, visit);
  }

  std::vector<Node> nodes_;
  std::size_t length_ = 0;
  std::uint32_t open_floor_ = 0;
};

}  // namespace selfsort
