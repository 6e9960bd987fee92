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
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "revkara/circuit.hpp"
#include "revkara/errors.hpp"

namespace revkara {

/// One bit per wire, each entry 0 or 1. Registers are little-endian: the
/// register's i-th wire carries weight 2^i.
using BitVector = std::vector<std::uint8_t>;

__extension__ typedef unsigned __int128 u128;

inline std::string to_string(u128 v) {
  if (v == 0) return "0";
  std::string s;
  while (v != 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

inline BitVector simulate(const Circuit& c, BitVector v) {
  if (v.size() != c.width()) {
    throw DimensionError("input has " + std::to_string(v.size()) + " bits, circuit width is " +
                         std::to_string(c.width()));
  }
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Not: v[g.target] ^= 1; break;
      case GateKind::Cnot: v[g.target] ^= v[g.controls[0]]; break;
      case GateKind::Toffoli: v[g.target] ^= v[g.controls[0]] & v[g.controls[1]]; break;
    }
  }
  return v;
}

/// Bit-sliced simulation: word w holds wire w for 64 independent inputs.
inline void simulate_lanes(const Circuit& c, std::span<std::uint64_t> state) {
  if (state.size() != c.width()) throw DimensionError("lane state does not match circuit width");
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Not: state[g.target] = ~state[g.target]; break;
      case GateKind::Cnot: state[g.target] ^= state[g.controls[0]]; break;
      case GateKind::Toffoli: state[g.target] ^= state[g.controls[0]] & state[g.controls[1]]; break;
    }
  }
}

/// Writes `value` into `wires` (little-endian) for one lane.
inline void load_lane(std::span<std::uint64_t> state, std::span<const Wire> wires, unsigned lane, u128 value) {
  const std::uint64_t bit = std::uint64_t{1} << lane;
  for (std::size_t i = 0; i < wires.size(); ++i) {
    if (i < 128 && ((value >> i) & 1)) state[wires[i]] |= bit;
    else state[wires[i]] &= ~bit;
  }
}

inline u128 read_lane(std::span<const std::uint64_t> state, std::span<const Wire> wires, unsigned lane) {
  u128 v = 0;
  const std::size_t k = std::min<std::size_t>(wires.size(), 128);
  for (std::size_t i = 0; i < k; ++i)
    if ((state[wires[i]] >> lane) & 1) v |= u128{1} << i;
  return v;
}

inline constexpr std::uint64_t kDefaultSeed = 42;

struct VerifyMode {
  enum class Kind { Exhaustive, Random };
  Kind kind = Kind::Exhaustive;
  std::size_t trials = 0;
  std::uint64_t seed = kDefaultSeed;

  static VerifyMode exhaustive() { return {Kind::Exhaustive, 0, kDefaultSeed}; }
  static VerifyMode random(std::size_t trials, std::uint64_t seed = kDefaultSeed) {
    return {Kind::Random, trials, seed};
  }
};

struct Verdict {
  std::string contract;
  std::size_t n = 0;
  VerifyMode mode;
  std::size_t trials = 0;
  std::size_t mismatches = 0;
  std::optional<std::string> counterexample;

  bool passed() const { return mismatches == 0; }

  std::string to_key_value() const {
    std::ostringstream os;
    os << "contract=" << contract << '\n'
       << "n=" << n << '\n'
       << "mode=" << (mode.kind == VerifyMode::Kind::Exhaustive ? "exhaustive" : "random") << '\n'
       << "trials=" << trials << '\n'
       << "seed=" << mode.seed << '\n'
       << "result=" << (passed() ? "pass" : "fail") << '\n'
       << "mismatches=" << mismatches << '\n'
       << "counterexample=" << counterexample.value_or("none") << '\n';
    return os.str();
  }
};

namespace detail {

inline std::vector<Wire> required_register(const Circuit& c, Role role, std::size_t expected) {
  auto w = c.register_wires(role);
  if (w.size() != expected) {
    throw ContractError("register " + std::string(to_string(role)) + " has " + std::to_string(w.size()) +
                        " wires, expected " + std::to_string(expected));
  }
  return w;
}

/// Drives `trials` cases through the circuit 64 at a time. `load(trial, lane,
/// state)` sets a lane's inputs on a zeroed state; `check(trial, lane, state)`
/// returns a description of the first violated property, if any.
template <typename Load, typename Check>
void run_lanes(const Circuit& c, std::size_t trials, Load&& load, Check&& check, Verdict& verdict) {
  std::vector<std::uint64_t> state(c.width());
  for (std::size_t base = 0; base < trials; base += 64) {
    const unsigned lanes = static_cast<unsigned>(std::min<std::size_t>(64, trials - base));
    std::fill(state.begin(), state.end(), 0);
    for (unsigned l = 0; l < lanes; ++l) load(base + l, l, std::span<std::uint64_t>(state));
    simulate_lanes(c, state);
    for (unsigned l = 0; l < lanes; ++l) {
      if (auto bad = check(base + l, l, std::span<const std::uint64_t>(state))) {
        ++verdict.mismatches;
        if (!verdict.counterexample) verdict.counterexample = std::move(*bad);
      }
    }
  }
  verdict.trials = trials;
}

/// Lists the first wire outside `allowed` that is set in `lane`, if any.
inline std::optional<Wire> first_dirty_wire(std::span<const std::uint64_t> state, const std::vector<bool>& allowed,
                                            unsigned lane) {
  for (std::size_t w = 0; w < state.size(); ++w)
    if (!allowed[w] && ((state[w] >> lane) & 1)) return static_cast<Wire>(w);
  return std::nullopt;
}

inline std::uint64_t mask_bits(std::size_t n) {
  return n >= 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
}

inline constexpr std::size_t kMaxExhaustiveBits = 24;

}  // namespace detail

/// Checks the in-place adder contract (a, b) -> (a, (a+b) mod 2^n) with the
/// carry-out wire receiving floor((a+b)/2^n) and ancillas restored. When the
/// circuit has a control register, control=0 must leave every wire unchanged.
/// `control` pins the control value; by default both values are exercised.
inline Verdict verify_adder(const Circuit& c, std::size_t n, VerifyMode mode,
                            std::optional<bool> control = std::nullopt) {
  if (n == 0 || n > 64) throw ContractError("adder verification supports 1 <= n <= 64");
  const auto a = detail::required_register(c, Role::InputX, n);
  const auto b = detail::required_register(c, Role::InputY, n);
  const auto carry = detail::required_register(c, Role::Carry, 1);
  const bool controlled = c.has_register(Role::Control);
  const auto ctrl = controlled ? detail::required_register(c, Role::Control, 1) : std::vector<Wire>{};

  std::vector<bool> allowed(c.width(), false);
  for (Wire w : a) allowed[w] = true;
  for (Wire w : b) allowed[w] = true;
  for (Wire w : carry) allowed[w] = true;
  for (Wire w : ctrl) allowed[w] = true;

  struct Case {
    std::uint64_t a, b;
    bool ctrl;
  };
  const bool both = controlled && !control.has_value();
  std::function<Case(std::size_t)> case_of;
  std::size_t trials = 0;
  std::mt19937_64 rng(mode.seed);
  std::vector<Case> drawn;
  if (mode.kind == VerifyMode::Kind::Exhaustive) {
    const std::size_t bits = 2 * n + (both ? 1 : 0);
    if (bits > detail::kMaxExhaustiveBits) throw CapacityError("exhaustive adder check too large");
    trials = std::size_t{1} << bits;
    case_of = [n, both, control](std::size_t t) {
      const std::uint64_t m = detail::mask_bits(n);
      return Case{t & m, (t >> n) & m, both ? ((t >> (2 * n)) & 1) != 0 : control.value_or(true)};
    };
  } else {
    trials = mode.trials;
    drawn.reserve(trials);
    const std::uint64_t m = detail::mask_bits(n);
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t x = rng() & m;
      const std::uint64_t y = rng() & m;
      const bool k = both ? (rng() & 1) != 0 : control.value_or(true);
      drawn.push_back({x, y, k});
    }
    case_of = [&drawn](std::size_t t) { return drawn[t]; };
  }

  Verdict v{controlled ? "ctrl-adder" : "adder", n, mode, 0, 0, std::nullopt};
  detail::run_lanes(
      c, trials,
      [&](std::size_t t, unsigned lane, std::span<std::uint64_t> s) {
        const Case k = case_of(t);
        load_lane(s, a, lane, k.a);
        load_lane(s, b, lane, k.b);
        if (controlled) load_lane(s, ctrl, lane, k.ctrl ? 1 : 0);
      },
      [&](std::size_t t, unsigned lane, std::span<const std::uint64_t> s) -> std::optional<std::string> {
        const Case k = case_of(t);
        const bool active = !controlled || k.ctrl;
        const u128 sum = u128{k.a} + k.b;
        const u128 want_b = active ? (sum & detail::mask_bits(n)) : k.b;
        const u128 want_carry = active ? (sum >> n) : 0;
        const u128 got_a = read_lane(s, a, lane);
        const u128 got_b = read_lane(s, b, lane);
        const u128 got_carry = read_lane(s, carry, lane);
        std::ostringstream os;
        os << "a=" << k.a << " b=" << k.b;
        if (controlled) os << " control=" << (k.ctrl ? 1 : 0);
        if (got_b != want_b) {
          os << " expected_b=" << to_string(want_b) << " got_b=" << to_string(got_b);
          return os.str();
        }
        if (got_carry != want_carry) {
          os << " expected_carry=" << to_string(want_carry) << " got_carry=" << to_string(got_carry);
          return os.str();
        }
        if (got_a != k.a) {
          os << " a_changed_to=" << to_string(got_a);
          return os.str();
        }
        if (auto w = detail::first_dirty_wire(s, allowed, lane)) {
          os << " dirty_wire=" << *w;
          return os.str();
        }
        return std::nullopt;
      },
      v);
  return v;
}

/// Checks (x, y, 0) -> (x, y, x*y) on the output register. Wires outside the
/// input, output and declared garbage registers must return to zero.
inline Verdict verify_multiplier(const Circuit& c, std::size_t n, VerifyMode mode) {
  if (n == 0 || n > 64) throw ContractError("multiplier verification supports 1 <= n <= 64");
  const auto x = detail::required_register(c, Role::InputX, n);
  const auto y = detail::required_register(c, Role::InputY, n);
  const auto out = detail::required_register(c, Role::Output, 2 * n);

  std::vector<bool> allowed(c.width(), false);
  for (Role r : {Role::InputX, Role::InputY, Role::Output, Role::Garbage})
    for (Wire w : c.register_wires(r)) allowed[w] = true;

  std::vector<std::pair<std::uint64_t, std::uint64_t>> drawn;
  std::size_t trials = 0;
  const std::uint64_t m = detail::mask_bits(n);
  if (mode.kind == VerifyMode::Kind::Exhaustive) {
    if (2 * n > detail::kMaxExhaustiveBits) throw CapacityError("exhaustive multiplier check too large");
    trials = std::size_t{1} << (2 * n);
  } else {
    trials = mode.trials;
    std::mt19937_64 rng(mode.seed);
    drawn.reserve(trials);
    for (std::size_t t = 0; t < trials; ++t) {
      const std::uint64_t a = rng() & m;
      const std::uint64_t b = rng() & m;
      drawn.emplace_back(a, b);
    }
  }
  auto case_of = [&](std::size_t t) {
    if (mode.kind == VerifyMode::Kind::Exhaustive) return std::pair<std::uint64_t, std::uint64_t>{t & m, t >> n};
    return drawn[t];
  };

  Verdict v{"multiplier", n, mode, 0, 0, std::nullopt};
  detail::run_lanes(
      c, trials,
      [&](std::size_t t, unsigned lane, std::span<std::uint64_t> s) {
        const auto [a, b] = case_of(t);
        load_lane(s, x, lane, a);
        load_lane(s, y, lane, b);
      },
      [&](std::size_t t, unsigned lane, std::span<const std::uint64_t> s) -> std::optional<std::string> {
        const auto [a, b] = case_of(t);
        const u128 want = u128{a} * b;
        const u128 got = read_lane(s, out, lane);
        std::ostringstream os;
        os << "x=" << a << " y=" << b;
        if (got != want) {
          os << " expected=" << to_string(want) << " got=" << to_string(got);
          return os.str();
        }
        if (read_lane(s, x, lane) != a || read_lane(s, y, lane) != b) {
          os << " inputs_not_restored";
          return os.str();
        }
        if (auto w = detail::first_dirty_wire(s, allowed, lane)) {
          os << " dirty_wire=" << *w;
          return os.str();
        }
        return std::nullopt;
      },
      v);
  return v;
}

}  // namespace revkara
