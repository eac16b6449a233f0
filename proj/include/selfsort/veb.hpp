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
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "selfsort/error.hpp"

namespace selfsort {

/// van Emde Boas tree over keys [0, U). The minimum of every node lives
/// outside its clusters, giving O(1) min and O(log log U) insert, delete and
/// successor. All clusters are allocated up front: O(U) space.
class VebTree {
 public:
  using Key = std::uint64_t;

  VebTree() : VebTree(2) {}

  explicit VebTree(Key universe) : requested_(universe) {
    if (universe == 0) throw Error(ErrorKind::UniverseOverflow, "universe must be positive");
    unsigned bits = 1;
    while ((Key{1} << bits) < universe) ++bits;
    root_ = std::make_unique<Node>(bits);
  }

  VebTree(const VebTree& other) : VebTree(other.requested_) {
    for (auto key = other.min(); key; key = other.successor(*key)) insert(*key);
  }
  VebTree& operator=(const VebTree& other) {
    if (this != &other) *this = VebTree(other);
    return *this;
  }
  VebTree(VebTree&&) noexcept = default;
  VebTree& operator=(VebTree&&) noexcept = default;

  Key universe() const noexcept { return requested_; }
  Key capacity() const noexcept { return Key{1} << root_->bits; }
  unsigned bits() const noexcept { return root_->bits; }
  bool empty() const noexcept { return root_->min == kNil; }

  void insert(Key x) {
    check(x);
    if (!root_->contains(x, 0, probe_)) root_->insert(x, 0, probe_);
  }

  void erase(Key x) {
    check(x);
    if (root_->contains(x, 0, probe_)) root_->erase(x, 0, probe_);
  }

  bool contains(Key x) const {
    check(x);
    return root_->contains(x, 0, probe_);
  }

  std::optional<Key> min() const noexcept {
    return root_->min == kNil ? std::nullopt : std::optional<Key>(root_->min);
  }
  std::optional<Key> max() const noexcept {
    return root_->max == kNil ? std::nullopt : std::optional<Key>(root_->max);
  }

  /// Smallest member strictly greater than x.
  std::optional<Key> successor(Key x) const {
    check(x);
    const Key s = root_->successor(x, 0, probe_);
    return s == kNil ? std::nullopt : std::optional<Key>(s);
  }

  /// Deletes members one by one; cost follows the membership, not U.
  void clear() {
    while (root_->min != kNil) root_->erase(root_->min, 0, probe_);
  }

  /// Deepest recursion level reached since the last reset (root is 0).
  unsigned max_depth_seen() const noexcept { return probe_; }
  void reset_depth_probe() noexcept { probe_ = 0; }

 private:
  static constexpr Key kNil = ~Key{0};

  struct Node {
    unsigned bits;
    Key min = kNil;
    Key max = kNil;
    std::unique_ptr<Node> summary;
    std::vector<Node> clusters;

    explicit Node(unsigned b) : bits(b) {
      if (bits > 1) {
        const unsigned high_bits = bits - bits / 2;
        summary = std::make_unique<Node>(high_bits);
        clusters.reserve(std::size_t{1} << high_bits);
        for (std::size_t c = 0; c < (std::size_t{1} << high_bits); ++c) clusters.emplace_back(bits / 2);
      }
    }

    unsigned low_bits() const noexcept { return bits / 2; }
    Key high(Key x) const noexcept { return x >> low_bits(); }
    Key low(Key x) const noexcept { return x & ((Key{1} << low_bits()) - 1); }
    Key index(Key h, Key l) const noexcept { return (h << low_bits()) | l; }

    static void note(unsigned depth, unsigned& probe) noexcept {
      if (depth > probe) probe = depth;
    }

    bool contains(Key x, unsigned depth, unsigned& probe) const noexcept {
      note(depth, probe);
      if (x == min || x == max) return true;
      if (bits == 1 || min == kNil) return false;
      return clusters[high(x)].contains(low(x), depth + 1, probe);
    }

    void insert(Key x, unsigned depth, unsigned& probe) {
      note(depth, probe);
      if (min == kNil) {
        min = max = x;
        return;
      }
      if (x < min) std::swap(x, min);
      if (bits > 1) {
        Node& c = clusters[high(x)];
        if (c.min == kNil) {
          summary->insert(high(x), depth + 1, probe);
          c.min = c.max = low(x);
        } else {
          c.insert(low(x), depth + 1, probe);
        }
      }
      if (x > max) max = x;
    }

    void erase(Key x, unsigned depth, unsigned& probe) {
      note(depth, probe);
      if (min == max) {
        min = max = kNil;
        return;
      }
      if (bits == 1) {
        min = x == 0 ? 1 : 0;
        max = min;
        return;
      }
      if (x == min) {
        const Key first = summary->min;
        x = index(first, clusters[first].min);
        min = x;
      }
      const Key h = high(x);
      clusters[h].erase(low(x), depth + 1, probe);
      if (clusters[h].min == kNil) {
        summary->erase(h, depth + 1, probe);
        if (x == max) {
          const Key last = summary->max;
          max = last == kNil ? min : index(last, clusters[last].max);
        }
      } else if (x == max) {
        max = index(h, clusters[h].max);
      }
    }

    Key successor(Key x, unsigned depth, unsigned& probe) const noexcept {
      note(depth, probe);
      if (bits == 1) {
        if (x == 0 && max == 1) return 1;
        return kNil;
      }
      if (min != kNil && x < min) return min;
      const Key h = high(x);
      const Key l = low(x);
      const Node& c = clusters[h];
      if (c.max != kNil && l < c.max) return index(h, c.successor(l, depth + 1, probe));
      const Key next = summary->successor(h, depth + 1, probe);
      if (next == kNil) return kNil;
      return index(next, clusters[next].min);
    }
  };

  void check(Key x) const {
    if (x >= requested_) {
      throw Error(ErrorKind::UniverseOverflow,
                  "key " + std::to_string(x) + " outside universe " + std::to_string(requested_));
    }
  }

  Key requested_;
  std::unique_ptr<Node> root_;
  mutable unsigned probe_ = 0;
};

}  // namespace selfsort
