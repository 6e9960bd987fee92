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

// Adder and multiplier circuit builders. Registers are little-endian: bit i of
// a register has weight 2^i.

#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "revkara/circuit.hpp"
#include "revkara/errors.hpp"
#include "revkara/recurrence.hpp"
#include "revkara/split_plan.hpp"

namespace revkara {

/// Free-list of work wires with LIFO reuse. Released wires must be zero.
class WirePool {
 public:
  explicit WirePool(Wire first_free = 0) : next_(first_free) {}

  Wire alloc() {
    if (!free_.empty()) {
      const Wire w = free_.back();
      free_.pop_back();
      return w;
    }
    return next_++;
  }

  std::vector<Wire> alloc(std::size_t k) {
    std::vector<Wire> out(k);
    for (Wire& w : out) w = alloc();
    return out;
  }

  void release(Wire w) { free_.push_back(w); }

  /// Releases in reverse so that an identical alloc(k) gets the same wires back.
  void release(std::span<const Wire> ws) {
    for (auto it = ws.rbegin(); it != ws.rend(); ++it) release(*it);
  }

  /// One past the largest wire ever handed out.
  std::size_t high_water() const { return next_; }
  std::size_t free_count() const { return free_.size(); }

 private:
  Wire next_;
  std::vector<Wire> free_;
};

/// Gate-list emitter for the arithmetic blocks.
class GateSink {
 public:
  std::vector<Gate>& gates() { return gates_; }
  std::size_t mark() const { return gates_.size(); }

  void not_gate(Wire t) { gates_.push_back(Gate::not_gate(t)); }
  void cnot(Wire c, Wire t) { gates_.push_back(Gate::cnot(c, t)); }
  void tof(Wire a, Wire b, Wire t) { gates_.push_back(Gate::toffoli(a, b, t)); }

  /// Appends the inverse of gates [begin, end).
  void undo(std::size_t begin, std::size_t end) {
    gates_.reserve(gates_.size() + (end - begin));
    for (std::size_t i = end; i > begin; --i) gates_.push_back(gates_[i - 1]);
  }

  /// b += a with carry-out XORed into `carry`; `anc` is a zero wire.
  /// Majority/unmajority ripple, 2|a| Toffolis in series.
  void add(std::span<const Wire> a, std::span<const Wire> b, Wire carry, Wire anc) {
    const std::size_t k = a.size();
    check_sizes(a, b);
    auto c = [&](std::size_t i) { return i == 0 ? anc : a[i - 1]; };
    for (std::size_t i = 0; i < k; ++i) maj(c(i), b[i], a[i]);
    cnot(a[k - 1], carry);
    for (std::size_t i = k; i-- > 0;) uma(c(i), b[i], a[i]);
  }

  /// b += a mod 2^|b|. 2(|b|-1) Toffolis; `anc` is unused for one-bit registers.
  void add_mod(std::span<const Wire> a, std::span<const Wire> b, Wire anc) {
    const std::size_t k = a.size();
    check_sizes(a, b);
    if (k == 1) {
      cnot(a[0], b[0]);
      return;
    }
    auto c = [&](std::size_t i) { return i == 0 ? anc : a[i - 1]; };
    for (std::size_t i = 0; i + 1 < k; ++i) maj(c(i), b[i], a[i]);
    cnot(a[k - 1], b[k - 1]);
    cnot(c(k - 1), b[k - 1]);
    for (std::size_t i = k - 1; i-- > 0;) uma(c(i), b[i], a[i]);
  }

  /// b -= a mod 2^|b|.
  void sub_mod(std::span<const Wire> a, std::span<const Wire> b, Wire anc) {
    const std::size_t begin = mark();
    add_mod(a, b, anc);
    const std::size_t end = mark();
    undo(begin, end);
    gates_.erase(gates_.begin() + static_cast<std::ptrdiff_t>(begin),
                 gates_.begin() + static_cast<std::ptrdiff_t>(end));
  }

  /// If ctrl: b += a with carry-out into `carry`. Only the gates that would
  /// turn the adder into the identity are controlled; the first sum Toffoli
  /// reads the zero ancilla and is dropped. 4|a| Toffolis in series.
  void ctrl_add(Wire ctrl, std::span<const Wire> a, std::span<const Wire> b, Wire carry, Wire anc) {
    const std::size_t k = a.size();
    check_sizes(a, b);
    auto c = [&](std::size_t i) { return i == 0 ? anc : a[i - 1]; };
    for (std::size_t i = 0; i < k; ++i) {
      cnot(a[i], c(i));
      tof(ctrl, a[i], b[i]);
      tof(c(i), b[i], a[i]);
    }
    tof(ctrl, a[k - 1], carry);
    for (std::size_t i = k; i-- > 0;) {
      tof(c(i), b[i], a[i]);
      cnot(a[i], c(i));
      if (i > 0) tof(ctrl, c(i), b[i]);
    }
  }

  /// out ^= x*y for a zero out register of 2|x| bits: a Toffoli cascade for the
  /// first partial product, then one controlled adder per remaining bit of y.
  void naive_multiply(std::span<const Wire> x, std::span<const Wire> y, std::span<const Wire> out, Wire anc) {
    const std::size_t s = x.size();
    if (y.size() != s || out.size() != 2 * s) throw ContractError("multiplier register sizes disagree");
    for (std::size_t i = 0; i < s; ++i) tof(x[i], y[0], out[i]);
    for (std::size_t j = 1; j < s; ++j) ctrl_add(y[j], x, out.subspan(j, s), out[j + s], anc);
  }

 private:
  static void check_sizes(std::span<const Wire> a, std::span<const Wire> b) {
    if (a.empty() || a.size() != b.size()) throw ContractError("adder register sizes disagree");
  }

  void maj(Wire c, Wire b, Wire a) {
    cnot(a, b);
    cnot(a, c);
    tof(c, b, a);
  }

  void uma(Wire c, Wire b, Wire a) {
    tof(c, b, a);
    cnot(a, c);
    cnot(c, b);
  }

  std::vector<Gate> gates_;
};

namespace detail {

inline std::vector<Wire> iota_wires(Wire lo, std::size_t k) {
  std::vector<Wire> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = static_cast<Wire>(lo + i);
  return out;
}

inline std::vector<Wire> concat(std::span<const Wire> a, std::span<const Wire> b) {
  std::vector<Wire> out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline Circuit finish(GateSink& sink, std::size_t width) {
  Circuit c(width);
  c.append(sink.gates());
  return c;
}

inline void add_ancilla_register(Circuit& c, std::size_t first, const std::vector<bool>& taken) {
  std::vector<Wire> rest;
  for (std::size_t w = first; w < c.width(); ++w)
    if (!taken[w]) rest.push_back(static_cast<Wire>(w));
  if (!rest.empty()) c.add_register(Role::Ancilla, rest);
}

}  // namespace detail

/// In-place adder (a, b, 0, 0) -> (a, a+b mod 2^n, carry, 0).
/// Wires: a = 0..n-1, b = n..2n-1, carry = 2n, ancilla = 2n+1, control = 2n+2.
inline Circuit build_adder(std::size_t n, bool controlled = false) {
  if (n == 0) throw std::domain_error("adder needs n >= 1");
  const auto a = detail::iota_wires(0, n);
  const auto b = detail::iota_wires(static_cast<Wire>(n), n);
  const Wire carry = static_cast<Wire>(2 * n);
  const Wire anc = carry + 1;
  const Wire ctrl = carry + 2;
  GateSink sink;
  if (controlled) {
    sink.ctrl_add(ctrl, a, b, carry, anc);
  } else {
    sink.add(a, b, carry, anc);
  }
  Circuit c = detail::finish(sink, 2 * n + (controlled ? 3 : 2));
  c.add_register(Role::InputX, a);
  c.add_register(Role::InputY, b);
  c.add_register(Role::Carry, WireRange{carry, carry});
  c.add_register(Role::Ancilla, WireRange{anc, anc});
  if (controlled) c.add_register(Role::Control, WireRange{ctrl, ctrl});
  return c;
}

/// Out-of-place multiplier (x, y, 0, 0) -> (x, y, x*y, 0).
/// Wires: x = 0..n-1, y = n..2n-1, product = 2n..4n-1, ancilla = 4n.
inline Circuit build_naive_multiplier(std::size_t n) {
  if (n == 0) throw std::domain_error("multiplier needs n >= 1");
  const auto x = detail::iota_wires(0, n);
  const auto y = detail::iota_wires(static_cast<Wire>(n), n);
  const auto out = detail::iota_wires(static_cast<Wire>(2 * n), 2 * n);
  const Wire anc = static_cast<Wire>(4 * n);
  GateSink sink;
  sink.naive_multiply(x, y, out, anc);
  Circuit c = detail::finish(sink, 4 * n + 1);
  c.add_register(Role::InputX, x);
  c.add_register(Role::InputY, y);
  c.add_register(Role::Output, out);
  c.add_register(Role::Ancilla, WireRange{anc, anc});
  return c;
}

/// Register sizes of one Karatsuba node: x = x1*2^m + x0, and likewise y.
struct KaratsubaDecomposition {
  std::size_t n = 0;
  std::size_t m = 0;

  std::size_t low_bits() const { return m; }
  std::size_t high_bits() const { return n - m; }
  /// x0+x1 and y0+y1, one guard bit.
  std::size_t sum_bits() const { return m + 1; }
  /// (x0+x1)(y0+y1) register; its low cross_bits() bits end up holding B.
  std::size_t middle_bits() const { return 2 * m + 2; }
  /// B = x0*y1 + x1*y0 < 2^(n+1).
  std::size_t cross_bits() const { return n + 1; }
  /// Width of the output window B is added into.
  std::size_t tail_bits() const { return 2 * n - m; }
};

enum class KaratsubaVariant { Garbage, Clean, Pebbled };

namespace detail {

inline constexpr std::size_t kNeverClean = std::numeric_limits<std::size_t>::max();

class KaratsubaEmitter {
 public:
  KaratsubaEmitter(const SplitPlan& plan, Wire first_free, std::size_t clean_depth)
      : plan_(plan), pool_(first_free), clean_depth_(clean_depth) {}

  GateSink& sink() { return sink_; }
  WirePool& pool() { return pool_; }

  /// out ^= x*y; returns the garbage wires left behind.
  std::vector<Wire> emit(std::size_t s, std::span<const Wire> x, std::span<const Wire> y,
                         std::span<const Wire> out, std::size_t depth) {
    if (!plan_.is_leaf(s) && depth == clean_depth_) {
      emit_clean(s, x, y, out, depth);
      return {};
    }
    return emit_dirty(s, x, y, out, depth);
  }

  /// Compute into a scratch register, copy it to `dest`, run the computation
  /// backwards, and hand every work wire back to the pool.
  void emit_clean(std::size_t s, std::span<const Wire> x, std::span<const Wire> y, std::span<const Wire> dest,
                  std::size_t depth) {
    const auto tmp = pool_.alloc(2 * s);
    const std::size_t begin = sink_.mark();
    const auto garbage = emit_dirty(s, x, y, tmp, depth);
    const std::size_t end = sink_.mark();
    for (std::size_t i = 0; i < 2 * s; ++i) sink_.cnot(tmp[i], dest[i]);
    sink_.undo(begin, end);
    pool_.release(garbage);
    pool_.release(tmp);
  }

 private:
  std::vector<Wire> emit_dirty(std::size_t s, std::span<const Wire> x, std::span<const Wire> y,
                               std::span<const Wire> out, std::size_t depth) {
    if (plan_.is_leaf(s)) {
      if (s == 1) {
        sink_.tof(x[0], y[0], out[0]);
      } else {
        const Wire anc = pool_.alloc();
        sink_.naive_multiply(x, y, out, anc);
        pool_.release(anc);
      }
      return {};
    }

    const KaratsubaDecomposition d{s, plan_.split(s)};
    const std::size_t m = d.m, h = d.high_bits();
    const auto x0 = x.first(m), x1 = x.subspan(m), y0 = y.first(m), y1 = y.subspan(m);
    const auto lo = out.first(2 * m), hi = out.subspan(2 * m);

    auto garbage = emit(m, x0, y0, lo, depth + 1);
    auto g_hi = emit(h, x1, y1, hi, depth + 1);
    garbage.insert(garbage.end(), g_hi.begin(), g_hi.end());

    const std::size_t zero_count = std::max(m - h + 1, h - 1);
    const auto zeros = pool_.alloc(zero_count);
    const Wire anc = pool_.alloc();
    const Wire cx = pool_.alloc();
    const Wire cy = pool_.alloc();
    auto padded = [&](std::span<const Wire> r, std::size_t k) {
      std::vector<Wire> v(r.begin(), r.begin() + static_cast<std::ptrdiff_t>(std::min(k, r.size())));
      for (std::size_t i = 0; v.size() < k; ++i) v.push_back(zeros[i]);
      return v;
    };

    const std::size_t sums = sink_.mark();
    sink_.add(padded(x1, m), x0, cx, anc);
    sink_.add(padded(y1, m), y0, cy, anc);
    const std::size_t sums_end = sink_.mark();

    const auto mid = pool_.alloc(d.middle_bits());
    const auto sx = concat(x0, std::span<const Wire>(&cx, 1));
    const auto sy = concat(y0, std::span<const Wire>(&cy, 1));
    auto g_mid = emit(m + 1, sx, sy, mid, depth + 1);
    sink_.undo(sums, sums_end);

    const std::size_t j = d.cross_bits();
    const auto cross = std::span<const Wire>(mid).first(j);
    sink_.sub_mod(padded(lo, j), cross, anc);
    sink_.sub_mod(padded(hi, j), cross, anc);
    sink_.add_mod(padded(cross, d.tail_bits()), out.subspan(m), anc);

    pool_.release(cy);
    pool_.release(cx);
    pool_.release(anc);
    pool_.release(zeros);

    garbage.insert(garbage.end(), g_mid.begin(), g_mid.end());
    garbage.insert(garbage.end(), mid.begin(), mid.end());
    return garbage;
  }

  const SplitPlan& plan_;
  GateSink sink_;
  WirePool pool_;
  std::size_t clean_depth_;
};

inline void check_plan(std::size_t n, const SplitPlan& plan) {
  if (n == 0) throw std::domain_error("multiplier needs n >= 1");
  if (plan.n() != n) throw ContractError("plan is for n=" + std::to_string(plan.n()) + ", not " + std::to_string(n));
  plan.validate();
}

inline Circuit karatsuba_circuit(std::size_t n, const SplitPlan& plan, KaratsubaVariant variant,
                                 std::size_t clean_depth) {
  check_plan(n, plan);
  const auto x = iota_wires(0, n);
  const auto y = iota_wires(static_cast<Wire>(n), n);
  const auto out = iota_wires(static_cast<Wire>(2 * n), 2 * n);
  KaratsubaEmitter em(plan, static_cast<Wire>(4 * n), clean_depth);
  std::vector<Wire> garbage;
  if (variant == KaratsubaVariant::Garbage) {
    garbage = em.emit(n, x, y, out, 0);
  } else {
    em.emit_clean(n, x, y, out, 0);
  }
  Circuit c = finish(em.sink(), em.pool().high_water());
  c.add_register(Role::InputX, x);
  c.add_register(Role::InputY, y);
  c.add_register(Role::Output, out);
  std::vector<bool> taken(c.width(), false);
  if (!garbage.empty()) {
    std::sort(garbage.begin(), garbage.end());
    c.add_register(Role::Garbage, garbage);
    for (Wire w : garbage) taken[w] = true;
  }
  add_ancilla_register(c, 4 * n, taken);
  return c;
}

}  // namespace detail

/// (x, y, 0, 0) -> (x, y, x*y, g(x, y)). Each node computes x0*y0 and x1*y1
/// straight into the output, forms x0+x1 and y0+y1 in place, multiplies them
/// into a fresh register, restores the inputs, turns that register into
/// B = x0*y1 + x1*y0 and adds B at offset m. The middle registers are garbage.
inline Circuit build_karatsuba_garbage(std::size_t n, const SplitPlan& plan) {
  return detail::karatsuba_circuit(n, plan, KaratsubaVariant::Garbage, detail::kNeverClean);
}

/// Garbage circuit, a CNOT copy of the 2n product bits, then the garbage
/// circuit backwards.
inline Circuit build_karatsuba_clean(std::size_t n, const SplitPlan& plan) {
  return detail::karatsuba_circuit(n, plan, KaratsubaVariant::Clean, detail::kNeverClean);
}

/// Clean variant whose subtrees at depth pebble_clean_depth() are each computed,
/// copied into their parent and uncomputed before the next one starts, so their
/// work wires return to the pool.
inline Circuit build_karatsuba_pebbled(std::size_t n, const SplitPlan& plan,
                                       double level_fraction = default_level_fraction()) {
  const std::size_t depth = pebble_clean_depth(plan, level_fraction);
  return detail::karatsuba_circuit(n, plan, KaratsubaVariant::Pebbled, depth == 0 ? detail::kNeverClean : depth);
}

inline Circuit build_karatsuba(std::size_t n, const SplitPlan& plan, KaratsubaVariant variant,
                               double level_fraction = default_level_fraction()) {
  switch (variant) {
    case KaratsubaVariant::Garbage: return build_karatsuba_garbage(n, plan);
    case KaratsubaVariant::Clean: return build_karatsuba_clean(n, plan);
    case KaratsubaVariant::Pebbled: return build_karatsuba_pebbled(n, plan, level_fraction);
  }
  throw std::domain_error("unknown variant");
}

}  // namespace revkara
