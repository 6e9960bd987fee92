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

#include <gtest/gtest.h>

#include <map>

#include "revkara.hpp"

namespace revkara {
namespace {

struct Oracle {
  std::size_t cutoff;
  std::map<std::size_t, std::pair<std::uint64_t, std::size_t>> memo;

  // Top-down minimum over every legal split, smallest split on ties.
  std::pair<std::uint64_t, std::size_t> best(std::size_t s) {
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    std::pair<std::uint64_t, std::size_t> r{4 * s * s - 3 * s, 0};
    if (s > cutoff) {
      bool first = true;
      for (std::size_t m = 1; m < s; ++m) {
        if (!valid_split(s, m)) continue;
        const std::size_t h = s - m;
        const std::uint64_t own = 8 * m + 2 * 2 * s + 2 * (m + 2 * h - 1);
        const std::uint64_t c = best(m).first + best(h).first + best(m + 1).first + own;
        if (first || c < r.first) r = {c, m};
        first = false;
      }
    }
    memo[s] = r;
    return r;
  }
};

TEST(SplitPlan, EvenSplitsHalve) {
  const SplitPlan p = SplitPlan::even(16, 1);
  EXPECT_EQ(p.split(16), 8u);
  EXPECT_EQ(p.split(9), 5u);
  EXPECT_EQ(p.children(16), (std::array<std::size_t, 3>{8, 8, 9}));
  EXPECT_TRUE(p.is_leaf(3));
  EXPECT_TRUE(p.is_leaf(2));
  EXPECT_EQ(p.height(3), 0u);
}

TEST(SplitPlan, AtOrBelowCutoffIsLeaf) {
  for (std::size_t n = 1; n <= 11; ++n) {
    EXPECT_TRUE(SplitPlan::even(n, 11).is_leaf(n));
    EXPECT_TRUE(optimize_splits(n, 11).is_leaf(n));
    EXPECT_EQ(karatsuba_count(n, 11).garbage, naive_count(n));
  }
  EXPECT_FALSE(SplitPlan::even(12, 11).is_leaf(12));
}

TEST(SplitPlan, Validation) {
  EXPECT_THROW(SplitPlan(8, 1, {{8, 3}}), ContractError);
  EXPECT_THROW(SplitPlan(8, 1, {{8, 0}}), ContractError);
  EXPECT_THROW(SplitPlan(8, 8, {{8, 4}, {4, 0}, {5, 0}}), ContractError);
  EXPECT_THROW(SplitPlan(8, 1, {{8, 4}}), ContractError);
  EXPECT_THROW(SplitPlan(0, 1, {}), ContractError);
  EXPECT_THROW(SplitPlan::even(8, 0), std::domain_error);
  EXPECT_NO_THROW(SplitPlan(8, 6, {{8, 5}, {5, 0}, {3, 0}, {6, 0}}));
  EXPECT_THROW(SplitPlan::even(8, 1).split(7), ContractError);
}

TEST(SplitPlan, Height) {
  EXPECT_EQ(SplitPlan::even(1, 1).height(), 0u);
  EXPECT_EQ(SplitPlan::even(4, 1).height(), 1u);
  EXPECT_EQ(SplitPlan::even(256, 11).height(), 5u);
  // The (m+1)-bit middle product keeps 2^k + 1 sizes alive one level longer.
  EXPECT_GE(SplitPlan::even(1024, 1).height(), 9u);
}

TEST(SplitOptimizer, MatchesTopDownOracle) {
  for (std::size_t cut : {1u, 2u, 4u, 7u, 11u, 20u}) {
    Oracle o{cut, {}};
    SplitOptimizer dp(cut);
    for (std::size_t n = 1; n <= 160; ++n) {
      const auto [cost, m] = o.best(n);
      EXPECT_EQ(dp.garbage_cost(n), cost) << n << '/' << cut;
      EXPECT_EQ(dp.best_split(n), m) << n << '/' << cut;
    }
  }
}

TEST(SplitOptimizer, NeverWorseThanEven) {
  for (std::size_t cut : {1u, 4u, 11u}) {
    SplitOptimizer dp(cut);
    for (std::size_t n = 1; n <= 300; ++n) {
      EXPECT_LE(dp.garbage_cost(n), karatsuba_count(SplitPlan::even(n, cut)).garbage) << n;
      EXPECT_EQ(dp.garbage_cost(n), karatsuba_count(dp.plan(n)).garbage);
    }
  }
}

TEST(SplitOptimizer, PlansValidate) {
  SplitOptimizer dp(3);
  for (std::size_t n = 1; n <= 200; ++n) EXPECT_NO_THROW(dp.plan(n).validate());
  EXPECT_THROW(SplitOptimizer(0), std::domain_error);
  EXPECT_THROW(dp.plan(0), std::domain_error);
}

TEST(LevelFraction, Default) {
  EXPECT_NEAR(default_level_fraction(), 0.7304, 1e-4);
  const SplitPlan p = SplitPlan::even(1024, 1);
  const std::size_t h = p.height();
  EXPECT_EQ(pebble_clean_depth(p, default_level_fraction()),
            h - static_cast<std::size_t>(std::floor(default_level_fraction() * h)));
}

}  // namespace
}  // namespace revkara
