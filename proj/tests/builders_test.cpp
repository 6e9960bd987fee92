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

#include <fstream>

#include "json.hpp"
#include "revkara.hpp"
#include "test_util.hpp"

namespace revkara {
namespace {

TEST(WirePool, LifoReuse) {
  WirePool p(10);
  EXPECT_EQ(p.alloc(), 10u);
  const auto span = p.alloc(3);
  EXPECT_EQ(span, (std::vector<Wire>{11, 12, 13}));
  p.release(span);
  EXPECT_EQ(p.free_count(), 3u);
  EXPECT_EQ(p.alloc(3), span);
  p.release(Wire{11});
  EXPECT_EQ(p.alloc(), 11u);
  EXPECT_EQ(p.alloc(), 14u);
  EXPECT_EQ(p.high_water(), 15u);
}

// Exhaustive check of a two-register block emitted by `emit`.
template <typename Emit, typename Want>
void check_block(std::size_t k, std::size_t extra, Emit emit, Want want) {
  GateSink s;
  const auto a = detail::iota_wires(0, k);
  const auto b = detail::iota_wires(static_cast<Wire>(k), k);
  emit(s, a, b, static_cast<Wire>(2 * k));
  Circuit c(2 * k + 1 + extra);
  c.append(s.gates());
  for (std::uint64_t x = 0; x < (1u << k); ++x) {
    for (std::uint64_t y = 0; y < (1u << k); ++y) {
      BitVector v(c.width(), 0);
      testing::write(v, a, x);
      testing::write(v, b, y);
      const BitVector out = simulate(c, v);
      EXPECT_EQ(testing::read(out, a), x);
      EXPECT_EQ(testing::read(out, b), want(x, y) & ((1u << k) - 1)) << "k=" << k << " x=" << x << " y=" << y;
      for (std::size_t w = 2 * k; w < c.width(); ++w) EXPECT_EQ(out[w], 0) << w;
    }
  }
}

TEST(GateSink, ModularAddAndSubtract) {
  for (std::size_t k = 1; k <= 5; ++k) {
    check_block(k, 0, [](GateSink& s, auto& a, auto& b, Wire anc) { s.add_mod(a, b, anc); },
                [](std::uint64_t x, std::uint64_t y) { return x + y; });
    check_block(k, 0, [](GateSink& s, auto& a, auto& b, Wire anc) { s.sub_mod(a, b, anc); },
                [](std::uint64_t x, std::uint64_t y) { return y - x; });
    GateSink s;
    s.add_mod(detail::iota_wires(0, k), detail::iota_wires(static_cast<Wire>(k), k), static_cast<Wire>(2 * k));
    std::size_t tof = 0;
    for (const Gate& g : s.gates()) tof += g.kind == GateKind::Toffoli;
    EXPECT_EQ(tof, modular_adder_toffolis(k));
  }
}

TEST(GateSink, UndoAppendsInverse) {
  GateSink s;
  s.tof(0, 1, 2);
  s.cnot(2, 3);
  s.not_gate(1);
  s.undo(0, s.mark());
  ASSERT_EQ(s.gates().size(), 6u);
  EXPECT_EQ(s.gates()[3], Gate::not_gate(1));
  EXPECT_EQ(s.gates()[5], Gate::toffoli(0, 1, 2));
}

TEST(Adder, CountsAndDepth) {
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto r = depth_metrics(build_adder(n));
    EXPECT_EQ(r.toffoli_count, 2 * n);
    EXPECT_EQ(r.toffoli_count, adder_toffolis(n));
    EXPECT_EQ(r.toffoli_depth, 2 * n);
    const auto rc = depth_metrics(build_adder(n, true));
    EXPECT_EQ(rc.toffoli_count, 4 * n);
    EXPECT_EQ(rc.toffoli_count, controlled_adder_toffolis(n));
    EXPECT_EQ(rc.toffoli_depth, 4 * n);
  }
}

TEST(Adder, Layout) {
  const Circuit c = build_adder(3, true);
  EXPECT_EQ(c.width(), 9u);
  EXPECT_EQ(c.register_wires(Role::InputX), (std::vector<Wire>{0, 1, 2}));
  EXPECT_EQ(c.register_wires(Role::InputY), (std::vector<Wire>{3, 4, 5}));
  EXPECT_EQ(c.register_wires(Role::Carry), (std::vector<Wire>{6}));
  EXPECT_EQ(c.register_wires(Role::Ancilla), (std::vector<Wire>{7}));
  EXPECT_EQ(c.register_wires(Role::Control), (std::vector<Wire>{8}));
  EXPECT_THROW(build_adder(0), std::domain_error);
}

TEST(Adder, Exhaustive) {
  for (std::size_t n = 1; n <= 8; ++n) {
    EXPECT_TRUE(verify_adder(build_adder(n), n, VerifyMode::exhaustive()).passed()) << n;
    EXPECT_TRUE(verify_adder(build_adder(n, true), n, VerifyMode::exhaustive()).passed()) << n;
  }
}

TEST(Adder, Random) {
  for (std::size_t n : {16u, 31u, 64u}) {
    EXPECT_TRUE(verify_adder(build_adder(n), n, VerifyMode::random(1000)).passed()) << n;
    EXPECT_TRUE(verify_adder(build_adder(n, true), n, VerifyMode::random(1000)).passed()) << n;
  }
}

TEST(Naive, Counts) {
  for (std::size_t n = 1; n <= 64; ++n) {
    const auto c = build_naive_multiplier(n);
    EXPECT_EQ(c.counts().toffoli, 4 * n * n - 3 * n) << n;
    EXPECT_EQ(c.counts().toffoli, naive_count(n));
    EXPECT_EQ(c.width(), 4 * n + 1);
  }
  EXPECT_EQ(naive_count(400), 638800u);
}

TEST(Naive, Functional) {
  for (std::size_t n = 1; n <= 6; ++n)
    EXPECT_TRUE(verify_multiplier(build_naive_multiplier(n), n, VerifyMode::exhaustive()).passed()) << n;
  for (std::size_t n : {8u, 16u, 32u, 64u})
    EXPECT_TRUE(verify_multiplier(build_naive_multiplier(n), n, VerifyMode::random(1000)).passed()) << n;
}

TEST(KaratsubaDecomposition, CrossTermIdentity) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 4; n <= 30; ++n) {
    for (std::size_t m = (n + 1) / 2; m + 2 <= n; ++m) {
      const KaratsubaDecomposition d{n, m};
      ASSERT_TRUE(valid_split(n, m));
      for (int t = 0; t < 50; ++t) {
        const std::uint64_t x = rng() & ((1ull << n) - 1), y = rng() & ((1ull << n) - 1);
        const std::uint64_t x0 = x & ((1ull << m) - 1), x1 = x >> m;
        const std::uint64_t y0 = y & ((1ull << m) - 1), y1 = y >> m;
        const u128 mid = u128{x0 + x1} * (y0 + y1);
        const u128 cross = mid - u128{x0} * y0 - u128{x1} * y1;
        EXPECT_TRUE(x0 + x1 < (1ull << d.sum_bits()));
        EXPECT_TRUE(mid < (u128{1} << d.middle_bits()));
        EXPECT_TRUE(cross < (u128{1} << d.cross_bits()));
        EXPECT_TRUE((u128{x1} * y1 << (2 * m)) + (cross << m) + u128{x0} * y0 == u128{x} * y);
        EXPECT_EQ(d.high_bits() + d.low_bits(), n);
        EXPECT_EQ(d.tail_bits(), 2 * n - m);
      }
    }
  }
}

TEST(Karatsuba, OneBit) {
  const SplitPlan p = SplitPlan::even(1, 1);
  const Circuit g = build_karatsuba_garbage(1, p);
  EXPECT_EQ(g.counts().toffoli, 1u);
  EXPECT_FALSE(g.has_register(Role::Garbage));
  const Circuit c = build_karatsuba_clean(1, p);
  EXPECT_EQ(c.counts().toffoli, 2u);
  EXPECT_EQ(c.counts().cnot, 2u);
  EXPECT_TRUE(verify_multiplier(c, 1, VerifyMode::exhaustive()).passed());
}

TEST(Karatsuba, TwoBitsFallBackToSchoolbook) {
  const SplitPlan p = SplitPlan::even(2, 1);
  EXPECT_TRUE(p.is_leaf(2));
  EXPECT_EQ(build_karatsuba_garbage(2, p).counts().toffoli, naive_count(2));
  EXPECT_EQ(naive_count(2), 10u);
}

TEST(Karatsuba, ExhaustiveSmall) {
  for (std::size_t n = 1; n <= 8; ++n) {
    for (std::size_t cut : {1u, 4u}) {
      for (SplitMode mode : {SplitMode::Even, SplitMode::Optimal}) {
        const SplitPlan p = make_plan(n, cut, mode);
        for (KaratsubaVariant v : {KaratsubaVariant::Garbage, KaratsubaVariant::Clean, KaratsubaVariant::Pebbled}) {
          const Verdict verdict = verify_multiplier(build_karatsuba(n, p, v), n, VerifyMode::exhaustive());
          EXPECT_TRUE(verdict.passed()) << "n=" << n << " cut=" << cut << '\n' << verdict.to_key_value();
        }
      }
    }
  }
}

TEST(Karatsuba, CleanLeavesNoGarbage) {
  for (std::size_t n : {4u, 9u, 23u}) {
    const SplitPlan p = SplitPlan::even(n, 1);
    EXPECT_TRUE(build_karatsuba_garbage(n, p).has_register(Role::Garbage));
    EXPECT_FALSE(build_karatsuba_clean(n, p).has_register(Role::Garbage));
    EXPECT_FALSE(build_karatsuba_pebbled(n, p).has_register(Role::Garbage));
  }
}

TEST(Karatsuba, PebbledMatchesCleanOnFourBits) {
  const SplitPlan p = SplitPlan::even(4, 1);
  const Circuit clean = build_karatsuba_clean(4, p);
  const Circuit peb = build_karatsuba_pebbled(4, p);
  for (std::uint64_t x = 0; x < 16; ++x) {
    for (std::uint64_t y = 0; y < 16; ++y) {
      auto run = [&](const Circuit& c) {
        BitVector v(c.width(), 0);
        testing::write(v, c.register_wires(Role::InputX), x);
        testing::write(v, c.register_wires(Role::InputY), y);
        const BitVector out = simulate(c, v);
        std::size_t ones = 0;
        for (auto b : out) ones += b;
        return std::pair{testing::read(out, c.register_wires(Role::Output)), ones};
      };
      EXPECT_EQ(run(clean), run(peb)) << x << '*' << y;
    }
  }
}

TEST(Karatsuba, CleanIsTwiceGarbage) {
  for (std::size_t n = 1; n <= 40; ++n) {
    for (std::size_t cut : {1u, 4u, 11u}) {
      const SplitPlan p = optimize_splits(n, cut);
      const Circuit g = build_karatsuba_garbage(n, p);
      const Circuit c = build_karatsuba_clean(n, p);
      EXPECT_EQ(c.counts().toffoli, 2 * g.counts().toffoli);
      EXPECT_EQ(c.counts().cnot, 2 * g.counts().cnot + 2 * n);
    }
  }
}

TEST(Karatsuba, RandomLarge) {
  for (std::size_t n : {16u, 32u, 64u}) {
    for (std::size_t cut : {1u, 11u}) {
      const SplitPlan p = optimize_splits(n, cut);
      for (KaratsubaVariant v : {KaratsubaVariant::Garbage, KaratsubaVariant::Clean, KaratsubaVariant::Pebbled}) {
        const Verdict verdict = verify_multiplier(build_karatsuba(n, p, v), n, VerifyMode::random(300));
        EXPECT_TRUE(verdict.passed()) << verdict.to_key_value();
      }
    }
  }
}

TEST(Karatsuba, Bound98At64) {
  const Circuit c = build_karatsuba_clean(64, optimize_splits(64, 11));
  EXPECT_LE(static_cast<double>(c.counts().toffoli), 98.0 * std::pow(64.0, std::log2(3.0)));
}

TEST(Karatsuba, PebbledOverheadBelowTwo) {
  for (std::size_t n : {4u, 8u, 16u, 33u, 64u, 100u}) {
    for (std::size_t cut : {1u, 11u}) {
      const SplitPlan p = optimize_splits(n, cut);
      const auto clean = build_karatsuba_clean(n, p).counts().toffoli;
      const auto peb = build_karatsuba_pebbled(n, p).counts().toffoli;
      EXPECT_GE(peb, clean);
      EXPECT_LT(peb, 2 * clean) << n;
    }
  }
}

TEST(Karatsuba, PebbledSavesQubitsAt256) {
  std::ifstream f(std::string(REVKARA_FIXTURES) + "/qubits_n256_cutoff11.json");
  ASSERT_TRUE(f);
  const auto fx = nlohmann::json::parse(f);
  const std::size_t n = fx["n"];
  const SplitPlan p = optimize_splits(n, fx["cutoff"]);
  const auto clean = depth_metrics(build_karatsuba_clean(n, p));
  const auto peb = depth_metrics(build_karatsuba_pebbled(n, p));
  EXPECT_LT(peb.qubits, clean.qubits);
  EXPECT_EQ(clean.qubits, fx["clean_qubits"].get<std::size_t>());
  EXPECT_EQ(peb.qubits, fx["pebbled_qubits"].get<std::size_t>());
  EXPECT_EQ(clean.toffoli_count, fx["clean_toffoli"].get<std::size_t>());
  EXPECT_EQ(peb.toffoli_count, fx["pebbled_toffoli"].get<std::size_t>());
}

TEST(Karatsuba, LevelFractionControlsCleanDepth) {
  const SplitPlan p = SplitPlan::even(64, 1);
  const std::size_t h = p.height();
  EXPECT_EQ(pebble_clean_depth(p, 0.5), h - h / 2);
  EXPECT_THROW(build_karatsuba_pebbled(64, p, 0.0), std::domain_error);
  EXPECT_THROW(build_karatsuba_pebbled(64, p, 1.0), std::domain_error);
  for (double f : {0.2, 0.5, 0.9}) {
    const Circuit c = build_karatsuba_pebbled(16, SplitPlan::even(16, 1), f);
    EXPECT_TRUE(verify_multiplier(c, 16, VerifyMode::random(200)).passed()) << f;
  }
}

TEST(Karatsuba, PlanMustMatchSize) {
  EXPECT_THROW(build_karatsuba_clean(9, SplitPlan::even(8, 1)), ContractError);
}

}  // namespace
}  // namespace revkara
