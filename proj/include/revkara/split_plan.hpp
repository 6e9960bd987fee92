// Copyright 2026 The revkara Authors
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
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "revkara/errors.hpp"
#include "revkara/recurrence.hpp"

namespace revkara {

/// Recursion tree of a Karatsuba multiplier. Choices depend only on the
/// subproblem size, so the tree is stored as a size -> split table over the
/// sizes reachable from the root. Split 0 marks a naive leaf.
///
/// A node of size s with split m has three children, in emission order:
/// the low product (m bits), the high product (s-m bits) and the middle
/// product of the (m+1)-bit sums.
class SplitPlan {
 public:
  SplitPlan(std::size_t n, std::size_t cutoff, std::map<std::size_t, std::size_t> splits)
      : n_(n), cutoff_(cutoff), split_(std::move(splits)) {
    validate();
  }

  /// Always splits at ceil(s/2) above the cutoff.
  static SplitPlan even(std::size_t n, std::size_t cutoff) {
    if (n == 0 || cutoff == 0) throw std::domain_error("plan needs n >= 1 and cutoff >= 1");
    std::map<std::size_t, std::size_t> table;
    std::vector<std::size_t> todo{n};
    while (!todo.empty()) {
      const std::size_t s = todo.back();
      todo.pop_back();
      if (table.contains(s)) continue;
      const std::size_t m = (s + 1) / 2;
      if (s <= cutoff || !valid_split(s, m)) {
        table[s] = 0;
      } else {
        table[s] = m;
        todo.insert(todo.end(), {m, s - m, m + 1});
      }
    }
    return SplitPlan(n, cutoff, std::move(table));
  }

  std::size_t n() const { return n_; }
  std::size_t cutoff() const { return cutoff_; }
  const std::map<std::size_t, std::size_t>& table() const { return split_; }

  std::size_t split(std::size_t size) const {
    auto it = split_.find(size);
    if (it == split_.end()) throw ContractError("plan does not cover size " + std::to_string(size));
    return it->second;
  }
  bool is_leaf(std::size_t size) const { return split(size) == 0; }

  std::array<std::size_t, 3> children(std::size_t size) const {
    const std::size_t m = split(size);
    if (m == 0) throw ContractError("leaf has no children");
    return {m, size - m, m + 1};
  }

  /// Depth of the deepest leaf below `size` (0 for a leaf).
  std::size_t height(std::size_t size) const {
    std::map<std::size_t, std::size_t> memo;
    return height_impl(size, memo);
  }
  std::size_t height() const { return height(n_); }

  /// Every reachable size has an entry; internal splits are valid; leaves are
  /// at or below the cutoff unless the size is too small to split.
  void validate() const {
    if (n_ == 0 || cutoff_ == 0) throw ContractError("plan needs n >= 1 and cutoff >= 1");
    std::vector<std::size_t> todo{n_};
    std::map<std::size_t, bool> seen;
    while (!todo.empty()) {
      const std::size_t s = todo.back();
      todo.pop_back();
      if (seen[s]) continue;
      seen[s] = true;
      const std::size_t m = split(s);
      if (m == 0) {
        if (s > cutoff_ && s >= kMinKaratsubaSize) {
          throw ContractError("leaf of size " + std::to_string(s) + " exceeds cutoff");
        }
        continue;
      }
      if (s <= cutoff_) throw ContractError("size " + std::to_string(s) + " is below cutoff but split");
      if (!valid_split(s, m)) {
        throw ContractError("invalid split " + std::to_string(m) + " for size " + std::to_string(s));
      }
      todo.insert(todo.end(), {m, s - m, m + 1});
    }
  }

  friend bool operator==(const SplitPlan&, const SplitPlan&) = default;

 private:
  std::size_t height_impl(std::size_t s, std::map<std::size_t, std::size_t>& memo) const {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    std::size_t h = 0;
    if (!is_leaf(s)) {
      for (std::size_t c : children(s)) h = std::max(h, 1 + height_impl(c, memo));
    }
    memo[s] = h;
    return h;
  }

  std::size_t n_;
  std::size_t cutoff_;
  std::map<std::size_t, std::size_t> split_;
};

/// Dynamic program over subproblem sizes: the cheapest garbage-mode Toffoli
/// count for every size up to a limit, with the split achieving it. Ties go to
/// the smallest split. Sizes at or below the cutoff are naive leaves.
class SplitOptimizer {
 public:
  explicit SplitOptimizer(std::size_t cutoff) : cutoff_(cutoff) {
    if (cutoff == 0) throw std::domain_error("cutoff must be >= 1");
    cost_.push_back(0);
    best_.push_back(0);
  }

  std::size_t cutoff() const { return cutoff_; }

  std::uint64_t garbage_cost(std::size_t n) {
    extend(n);
    return cost_[n];
  }

  std::size_t best_split(std::size_t n) {
    extend(n);
    return best_[n];
  }

  SplitPlan plan(std::size_t n) {
    if (n == 0) throw std::domain_error("plan needs n >= 1");
    extend(n);
    std::map<std::size_t, std::size_t> table;
    std::vector<std::size_t> todo{n};
    while (!todo.empty()) {
      const std::size_t s = todo.back();
      todo.pop_back();
      if (table.contains(s)) continue;
      const std::size_t m = best_[s];
      table[s] = m;
      if (m != 0) todo.insert(todo.end(), {m, s - m, m + 1});
    }
    return SplitPlan(n, cutoff_, std::move(table));
  }

 private:
  void extend(std::size_t n) {
    for (std::size_t s = cost_.size(); s <= n; ++s) {
      std::uint64_t best = std::numeric_limits<std::uint64_t>::max();
      std::size_t arg = 0;
      if (s <= cutoff_ || s < kMinKaratsubaSize) {
        best = naive_count(s);
      } else {
        for (std::size_t m = (s + 1) / 2; m + 2 <= s; ++m) {
          const std::uint64_t c = cost_[m] + cost_[s - m] + cost_[m + 1] + karatsuba_node_toffolis(s, m);
          if (c < best) {
            best = c;
            arg = m;
          }
        }
      }
      cost_.push_back(best);
      best_.push_back(arg);
    }
  }

  std::size_t cutoff_;
  std::vector<std::uint64_t> cost_;
  std::vector<std::size_t> best_;
};

inline SplitPlan optimize_splits(std::size_t n, std::size_t cutoff) { return SplitOptimizer(cutoff).plan(n); }

/// Fraction of the recursion height pebbled from the bottom, 1/(2 - log 2/log 3).
inline double default_level_fraction() { return 1.0 / (2.0 - std::log(2.0) / std::log(3.0)); }

/// Depth (from the root) of the subtrees that the pebbled variant computes,
/// copies out and uncomputes on the spot: N - floor(fraction * N) for a
/// recursion tree of height N.
inline std::size_t pebble_clean_depth(const SplitPlan& plan, double level_fraction) {
  if (!(level_fraction > 0.0 && level_fraction < 1.0)) {
    throw std::domain_error("level fraction must lie in (0, 1)");
  }
  const std::size_t height = plan.height();
  const auto k = static_cast<std::size_t>(std::floor(level_fraction * static_cast<double>(height)));
  return height - k;
}

}  // namespace revkara
