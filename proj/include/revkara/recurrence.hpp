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

// Toffoli-count constants of the arithmetic constructions. The builders emit
// gates; these formulas predict how many Toffolis the builders emit.

#pragma once

#include <cstddef>
#include <cstdint>

namespace revkara {

/// In-place ripple adder on m-bit registers with carry-out.
constexpr std::uint64_t adder_toffolis(std::size_t m) { return 2 * std::uint64_t{m}; }

/// Controlled in-place ripple adder on m-bit registers with carry-out.
constexpr std::uint64_t controlled_adder_toffolis(std::size_t m) { return 4 * std::uint64_t{m}; }

/// Addition modulo 2^j: a (j-1)-bit ripple adder whose carry-out lands on the
/// top target bit.
constexpr std::uint64_t modular_adder_toffolis(std::size_t j) { return j == 0 ? 0 : adder_toffolis(j - 1); }

/// Toffoli cascade for the first partial product plus n-1 controlled adders.
constexpr std::uint64_t naive_count(std::size_t n) {
  const std::uint64_t k = n;
  return 4 * k * k - 3 * k;
}

/// Smallest size a Karatsuba node can take: the middle product works on
/// (m+1)-bit sums, so m+1 < n requires n >= 4.
inline constexpr std::size_t kMinKaratsubaSize = 4;

/// A node of size n may split as x = x1*2^m + x0 with ceil(n/2) <= m <= n-2.
constexpr bool valid_split(std::size_t n, std::size_t m) {
  return n >= kMinKaratsubaSize && 2 * m >= n && m + 2 <= n;
}

/// Toffolis spent by one garbage-mode Karatsuba node outside its three
/// recursive products, for split m (low part m bits, high part h = n-m bits):
///   - two m-bit adders forming x0+x1 and y0+y1, and two more undoing them;
///   - two subtractions modulo 2^(n+1) turning the middle product into the
///     cross term B;
///   - one addition modulo 2^(2n-m) placing B at offset m of the output.
constexpr std::uint64_t karatsuba_node_toffolis(std::size_t n, std::size_t m) {
  const std::size_t h = n - m;
  return 4 * adder_toffolis(m) + 2 * modular_adder_toffolis(n + 1) + modular_adder_toffolis(m + 2 * h);
}

}  // namespace revkara
