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

#include <cmath>
#include <sstream>

#include "revkara.hpp"

namespace revkara {
namespace {

std::vector<double> powers_of_two(int lo, int hi) {
  std::vector<double> out;
  for (int k = lo; k <= hi; ++k) out.push_back(std::ldexp(1.0, k));
  return out;
}

TEST(Count, NaiveValues) {
  EXPECT_EQ(naive_count(1), 1u);
  EXPECT_EQ(naive_count(2), 10u);
  EXPECT_EQ(naive_count(4), 52u);
  EXPECT_EQ(naive_count(400), 638800u);
}

TEST(Count, OneBitKaratsuba) {
  EXPECT_EQ(karatsuba_count(1, 1), (KaratsubaCount{1, 2}));
}

TEST(Count, MatchesBuiltCircuits) {
  for (std::size_t cut : {1u, 4u, 11u}) {
    for (SplitMode mode : {SplitMode::Even, SplitMode::Optimal}) {
      for (std::size_t n = 1; n <= 64; ++n) {
        const SplitPlan p = make_plan(n, cut, mode);
        const KaratsubaCount k = karatsuba_count(p);
        EXPECT_EQ(build_karatsuba_garbage(n, p).counts().toffoli, k.garbage) << n << '/' << cut;
        EXPECT_EQ(build_karatsuba_clean(n, p).counts().toffoli, k.clean) << n << '/' << cut;
        EXPECT_EQ(k.clean, 2 * k.garbage);
      }
    }
  }
}

TEST(Count, PebbledMatchesBuiltCircuits) {
  for (std::size_t cut : {1u, 4u, 11u}) {
    for (std::size_t n : {1u, 4u, 7u, 16u, 33u, 64u, 90u}) {
      const SplitPlan p = optimize_splits(n, cut);
      for (double f : {0.3, default_level_fraction(), 0.9})
        EXPECT_EQ(build_karatsuba_pebbled(n, p, f).counts().toffoli, pebbled_count(p, f)) << n << '/' << cut;
    }
  }
}

TEST(Count, BoundHoldsOnPowersOfTwo) {
  for (std::size_t n = 1; n <= 1024; n *= 2) {
    const double bound = 98.0 * std::pow(static_cast<double>(n), std::log2(3.0));
    EXPECT_LE(static_cast<double>(karatsuba_count(n, 1).clean), bound) << n;
  }
}

TEST(Count, CutoffAboveSizeIsNaive) {
  for (std::size_t n = 1; n <= 40; ++n) EXPECT_EQ(karatsuba_count(n, n).garbage, naive_count(n));
}

TEST(Estimate, Examples) {
  const Estimate e = space_estimate(1024, false);
  EXPECT_FALSE(e.rounded);
  EXPECT_NEAR(e.value, 1024 * 2 * (std::pow(1.5, 10) - 1), 1e-6);
  EXPECT_TRUE(space_estimate(1000, true).rounded);
  EXPECT_DOUBLE_EQ(space_estimate(1000, true).value, space_estimate(1000, true).value);
  EXPECT_THROW(space_estimate(0.5, true), std::domain_error);
  EXPECT_NEAR(depth_estimate(1).value, 1.0, 1e-12);
  EXPECT_NEAR(space_estimate(2, false).value, 2.0, 1e-12);
  EXPECT_FALSE(depth_estimate(2).rounded);
}

TEST(Estimate, Exponents) {
  const auto ns = powers_of_two(10, 20);
  std::vector<double> peb, unpeb, depth, volume;
  for (double n : ns) {
    peb.push_back(space_estimate(n, true).value);
    unpeb.push_back(space_estimate(n, false).value);
    depth.push_back(depth_estimate(n).value);
    volume.push_back(depth.back() * peb.back());
  }
  EXPECT_NEAR(fit_loglog(ns, peb).slope, 1.427, 0.01);
  EXPECT_NEAR(fit_loglog(ns, unpeb).slope, 1.585, 0.01);
  EXPECT_NEAR(fit_loglog(ns, depth).slope, 1.158, 0.01);
  EXPECT_NEAR(fit_loglog(ns, volume).slope, 1.0 + std::log2(3.0), 0.02);
}

TEST(Estimate, LevelFraction) {
  EXPECT_NEAR(*level_fraction({3, 2, 1}), 0.7304, 1e-4);
  EXPECT_NEAR(*level_fraction({3, 1.0 + 1e-9, 1}), 0.5, 1e-6);
  EXPECT_FALSE(level_fraction({2, 2, 1}));
  EXPECT_THROW(level_fraction({3, 1, 1}), std::domain_error);
  const RecursionShape kara{3, 2, 1};
  EXPECT_NEAR(pebbled_space_exponent(kara, *level_fraction(kara)), 1.427, 0.001);
  EXPECT_NEAR(unpebbled_space_exponent(kara), std::log2(3.0), 1e-12);
  EXPECT_DOUBLE_EQ(unpebbled_space_exponent({2, 2, 1}), 1.0);
}

TEST(Estimate, SchedulePeakEndpoints) {
  // k = 0 and k = height pebble the whole tree.
  const double whole = schedule_weighted_peak(4, 0, 16, true);
  EXPECT_DOUBLE_EQ(whole, (std::pow(3.0, 5) - 1) / 2);
  EXPECT_DOUBLE_EQ(schedule_weighted_peak(4, 4, 16, true), whole);
  EXPECT_LT(schedule_weighted_peak(4, 2, 16, true), whole);
  EXPECT_THROW(schedule_weighted_peak(4, 5, 16), std::domain_error);
}

TEST(Sweep, ShapeAndOrder) {
  std::vector<std::size_t> ns;
  for (std::size_t n = 50; n <= 500; ++n) ns.push_back(n);
  const auto rows = sweep(ns, {1, 5, 11, 20}, {SweepVariant::Akara});
  ASSERT_EQ(rows.size(), 4 * ns.size());
  EXPECT_EQ(rows.front().n, 50u);
  EXPECT_EQ(rows.front().cutoff, 1u);
  EXPECT_EQ(rows.back().cutoff, 20u);
  EXPECT_EQ(rows.back().n, 500u);
  const auto naive = sweep({4, 8}, {1, 2}, {SweepVariant::Naive});
  ASSERT_EQ(naive.size(), 2u);
  EXPECT_EQ(naive[0].cutoff, 0u);
  EXPECT_EQ(naive[1].toffoli, naive_count(8));
  EXPECT_THROW(sweep({4}, {0}, {SweepVariant::Skara}), std::domain_error);
  EXPECT_THROW(sweep({}, {1}, {SweepVariant::Skara}), std::domain_error);
}

TEST(Sweep, Deterministic) {
  const auto a = sweep({10, 20, 30}, {1, 4}, {SweepVariant::Skara, SweepVariant::Pkara}, {true});
  const auto b = sweep({10, 20, 30}, {1, 4}, {SweepVariant::Skara, SweepVariant::Pkara}, {true});
  EXPECT_EQ(a, b);
  for (const auto& r : a) EXPECT_GT(r.qubits, 0u);
}

TEST(Sweep, CutoffExperiment) {
  std::vector<std::size_t> cuts;
  for (std::size_t c = 1; c <= 30; ++c) cuts.push_back(c);
  const CutoffChoice best = best_cutoff(50, 500, cuts);
  EXPECT_GE(best.cutoff, 8u);
  EXPECT_LE(best.cutoff, 16u);
  EXPECT_EQ(best.means.size(), cuts.size());
  const auto at400 = sweep({400}, {11}, {SweepVariant::Akara});
  EXPECT_NEAR(static_cast<double>(at400[0].toffoli), 422000.0, 0.15 * 422000.0);
}

TEST(Csv, RoundTrip) {
  const auto rows = sweep({8, 16, 32}, {1, 11}, {SweepVariant::Naive, SweepVariant::Skara, SweepVariant::Pkara}, {true});
  std::stringstream ss;
  write_csv(ss, rows);
  EXPECT_EQ(read_csv(ss), rows);
}

TEST(Csv, Errors) {
  auto read = [](const std::string& text) {
    std::istringstream is(text);
    return read_csv(is);
  };
  EXPECT_THROW(read(""), ParseError);
  EXPECT_THROW(read("n,toffoli\n"), ParseError);
  try {
    read(std::string(kSweepCsvHeader) + "\n8,1,skara,10,0,0\n8,1,skara,x,0,0\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  EXPECT_THROW(read(std::string(kSweepCsvHeader) + "\n8,1,skara\n"), ParseError);
  EXPECT_EQ(read(std::string(kSweepCsvHeader) + "\r\n8,1,skara,10,0,0\r\n").size(), 1u);
}

TEST(Fit, ExactPowerLaws) {
  std::vector<double> xs, sq, lin;
  for (double x = 2; x <= 1024; x *= 2) {
    xs.push_back(x);
    sq.push_back(3 * x * x);
    lin.push_back(5 * x);
  }
  const FitResult f = fit_loglog(xs, sq);
  EXPECT_NEAR(f.slope, 2.0, 1e-12);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-9);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.rows, xs.size());
  EXPECT_NEAR(fit_loglog(xs, lin).slope, 1.0, 1e-12);
}

TEST(Fit, Errors) {
  EXPECT_THROW(fit_loglog({1, 2}, {1, 2}), std::domain_error);
  EXPECT_THROW(fit_loglog({1, 2, 3}, {1, 2}), DimensionError);
  EXPECT_THROW(fit_loglog({1, 2, 3}, {1, 0, 3}), std::domain_error);
  EXPECT_THROW(fit_loglog({2, 2, 2}, {1, 2, 3}), std::domain_error);
  EXPECT_THROW(column_value(SweepRow{}, "width"), std::domain_error);
}

TEST(Fit, Counts) {
  std::vector<std::size_t> ns;
  for (std::size_t k = 4; k <= 16; ++k) ns.push_back(std::size_t{1} << k);
  const auto naive = sweep(ns, {1}, {SweepVariant::Naive});
  EXPECT_NEAR(fit_exponent(naive, "toffoli").slope, 2.0, 0.01);
  const auto kara = sweep(ns, {1}, {SweepVariant::Skara});
  EXPECT_NEAR(fit_exponent(kara, "toffoli").slope, std::log2(3.0), 0.05);
}

TEST(Fit, SelectRows) {
  const auto rows = sweep({8, 16, 32}, {1, 11}, {SweepVariant::Naive, SweepVariant::Skara});
  EXPECT_EQ(select_rows(rows, "skara").size(), 6u);
  EXPECT_EQ(select_rows(rows, "skara11").size(), 3u);
  EXPECT_EQ(select_rows(rows, "naive").size(), 3u);
  EXPECT_TRUE(select_rows(rows, "akara").empty());
  EXPECT_EQ(sweep_variant_from_string("pkara"), SweepVariant::Pkara);
  EXPECT_FALSE(sweep_variant_from_string("tkara"));
}

}  // namespace
}  // namespace revkara
