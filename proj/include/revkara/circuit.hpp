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
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "revkara/errors.hpp"

namespace revkara {

using Wire = std::uint32_t;
inline constexpr Wire kNoWire = std::numeric_limits<Wire>::max();

enum class GateKind : std::uint8_t { Not, Cnot, Toffoli };

/// A NOT, CNOT or Toffoli gate. Unused control slots hold kNoWire.
struct Gate {
  GateKind kind = GateKind::Not;
  std::array<Wire, 2> controls{kNoWire, kNoWire};
  Wire target = kNoWire;

  static constexpr Gate not_gate(Wire t) { return {GateKind::Not, {kNoWire, kNoWire}, t}; }
  static constexpr Gate cnot(Wire c, Wire t) { return {GateKind::Cnot, {c, kNoWire}, t}; }
  static constexpr Gate toffoli(Wire c1, Wire c2, Wire t) {
    return {GateKind::Toffoli, {c1, c2}, t};
  }

  constexpr std::size_t num_controls() const {
    switch (kind) {
      case GateKind::Not: return 0;
      case GateKind::Cnot: return 1;
      case GateKind::Toffoli: return 2;
    }
    return 0;
  }

  std::span<const Wire> control_wires() const { return {controls.data(), num_controls()}; }

  /// Controls followed by the target.
  template <typename F>
  constexpr void for_each_wire(F&& f) const {
    for (std::size_t i = 0; i < num_controls(); ++i) f(controls[i]);
    f(target);
  }

  constexpr Wire max_wire() const {
    Wire w = target;
    for (std::size_t i = 0; i < num_controls(); ++i) w = std::max(w, controls[i]);
    return w;
  }

  friend constexpr bool operator==(const Gate&, const Gate&) = default;
};

/// Throws MalformedGate if the gate's wires are not pairwise distinct.
inline void check_gate(const Gate& g) {
  if (g.target == kNoWire) throw MalformedGate("gate has no target");
  for (std::size_t i = 0; i < g.num_controls(); ++i) {
    if (g.controls[i] == kNoWire) throw MalformedGate("gate is missing a control");
    if (g.controls[i] == g.target) throw MalformedGate("control equals target");
  }
  if (g.kind == GateKind::Toffoli && g.controls[0] == g.controls[1]) {
    throw MalformedGate("duplicate Toffoli controls");
  }
}

/// Register roles are metadata; wires are dense indices regardless of role.
enum class Role : std::uint8_t { InputX, InputY, Output, Ancilla, Garbage, Control, Carry };

inline constexpr std::array<Role, 7> kAllRoles{Role::InputX,  Role::InputY,  Role::Output,
                                                Role::Ancilla, Role::Garbage, Role::Control,
                                                Role::Carry};

constexpr std::string_view to_string(Role r) {
  switch (r) {
    case Role::InputX: return "input-x";
    case Role::InputY: return "input-y";
    case Role::Output: return "output";
    case Role::Ancilla: return "ancilla";
    case Role::Garbage: return "garbage";
    case Role::Control: return "control";
    case Role::Carry: return "carry";
  }
  return "?";
}

inline std::optional<Role> role_from_string(std::string_view s) {
  for (Role r : kAllRoles)
    if (to_string(r) == s) return r;
  return std::nullopt;
}

/// Inclusive wire range [lo, hi].
struct WireRange {
  Wire lo = 0;
  Wire hi = 0;
  std::size_t size() const { return std::size_t{hi} - lo + 1; }
  friend bool operator==(const WireRange&, const WireRange&) = default;
};

/// Collapses an ordered wire list into maximal runs of consecutive indices.
inline std::vector<WireRange> to_ranges(std::span<const Wire> wires) {
  std::vector<WireRange> out;
  for (Wire w : wires) {
    if (!out.empty() && out.back().hi != kNoWire && out.back().hi + 1 == w) {
      out.back().hi = w;
    } else {
      out.push_back({w, w});
    }
  }
  return out;
}

enum class WidthPolicy { Strict, Grow };

struct GateCounts {
  std::size_t toffoli = 0;
  std::size_t cnot = 0;
  std::size_t not_ = 0;
  std::size_t total() const { return toffoli + cnot + not_; }
  friend bool operator==(const GateCounts&, const GateCounts&) = default;
};

/// Ordered gate list over `width` wires with named registers. Gate counts and
/// ASAP layer frontiers are maintained incrementally on append.
class Circuit {
 public:
  using RegisterMap = std::map<Role, std::vector<WireRange>>;

  Circuit() = default;
  explicit Circuit(std::size_t width) { resize(width); }

  std::size_t width() const { return width_; }
  std::span<const Gate> gates() const { return gates_; }
  std::size_t size() const { return gates_.size(); }
  bool empty() const { return gates_.empty(); }

  const GateCounts& counts() const { return counts_; }
  std::size_t depth() const { return depth_; }
  std::size_t toffoli_depth() const { return toffoli_depth_; }

  void append(const Gate& g, WidthPolicy policy = WidthPolicy::Strict) {
    check_gate(g);
    const Wire top = g.max_wire();
    if (top >= width_) {
      if (policy == WidthPolicy::Strict) {
        throw MalformedGate("gate references wire " + std::to_string(top) + " >= width " +
                            std::to_string(width_));
      }
      resize(std::size_t{top} + 1);
    }
    gates_.push_back(g);
    track(g);
  }

  void append(std::span<const Gate> gs, WidthPolicy policy = WidthPolicy::Strict) {
    gates_.reserve(gates_.size() + gs.size());
    for (const Gate& g : gs) append(g, policy);
  }

  /// Widening never invalidates gates; shrinking below a used wire is rejected.
  void resize(std::size_t width) {
    if (width < width_) {
      for (const Gate& g : gates_)
        if (g.max_wire() >= width) throw MalformedGate("cannot shrink below a used wire");
      for (const auto& [role, ranges] : registers_)
        for (const WireRange& r : ranges)
          if (r.hi >= width) throw ContractError("cannot shrink below a register wire");
    }
    width_ = width;
    layer_.resize(width, 0);
    toffoli_layer_.resize(width, 0);
  }

  void add_register(Role role, WireRange range) {
    if (range.lo > range.hi || range.hi >= width_) {
      throw ContractError("register " + std::string(to_string(role)) + " out of range");
    }
    registers_[role].push_back(range);
  }

  void add_register(Role role, std::span<const Wire> wires) {
    for (const WireRange& r : to_ranges(wires)) add_register(role, r);
  }

  const RegisterMap& registers() const { return registers_; }
  bool has_register(Role role) const { return registers_.contains(role); }

  std::vector<Wire> register_wires(Role role) const {
    std::vector<Wire> out;
    if (auto it = registers_.find(role); it != registers_.end()) {
      for (const WireRange& r : it->second)
        for (std::size_t w = r.lo; w <= r.hi; ++w) out.push_back(static_cast<Wire>(w));
    }
    return out;
  }

  friend bool operator==(const Circuit& a, const Circuit& b) {
    return a.width_ == b.width_ && a.gates_ == b.gates_ && a.registers_ == b.registers_;
  }

 private:
  void track(const Gate& g) {
    switch (g.kind) {
      case GateKind::Not: ++counts_.not_; break;
      case GateKind::Cnot: ++counts_.cnot; break;
      case GateKind::Toffoli: ++counts_.toffoli; break;
    }
    std::size_t layer = 0;
    std::size_t tlayer = 0;
    g.for_each_wire([&](Wire w) {
      layer = std::max(layer, layer_[w]);
      tlayer = std::max(tlayer, toffoli_layer_[w]);
    });
    ++layer;
    if (g.kind == GateKind::Toffoli) ++tlayer;
    g.for_each_wire([&](Wire w) {
      layer_[w] = layer;
      toffoli_layer_[w] = tlayer;
    });
    depth_ = std::max(depth_, layer);
    toffoli_depth_ = std::max(toffoli_depth_, tlayer);
  }

  std::size_t width_ = 0;
  std::vector<Gate> gates_;
  RegisterMap registers_;

  GateCounts counts_;
  std::vector<std::size_t> layer_;
  std::vector<std::size_t> toffoli_layer_;
  std::size_t depth_ = 0;
  std::size_t toffoli_depth_ = 0;
};

/// Gates reversed; every gate in the set is self-inverse. Registers carry over.
inline Circuit inverse(const Circuit& c) {
  Circuit out(c.width());
  for (const auto& [role, ranges] : c.registers())
    for (const WireRange& r : ranges) out.add_register(role, r);
  auto gs = c.gates();
  for (auto it = gs.rbegin(); it != gs.rend(); ++it) out.append(*it);
  return out;
}

/// Toffoli-level cost constants used to derive T metrics.
struct CostModel {
  std::size_t t_per_toffoli = 4;
  std::size_t tdepth_per_toffoli = 1;
  std::size_t ancilla_per_toffoli = 1;

  /// One ancilla per directional Toffoli, four T gates, T-depth one.
  static constexpr CostModel directional() { return {4, 1, 1}; }
  /// Ancilla-free seven-T decomposition.
  static constexpr CostModel standard() { return {7, 3, 0}; }

  friend bool operator==(const CostModel&, const CostModel&) = default;
};

struct ResourceReport {
  std::size_t toffoli_count = 0;
  std::size_t cnot_count = 0;
  std::size_t not_count = 0;
  std::size_t t_count = 0;
  std::size_t t_depth = 0;
  std::size_t toffoli_depth = 0;
  std::size_t depth = 0;
  std::size_t qubits = 0;
  std::size_t width = 0;

  std::size_t gate_count() const { return toffoli_count + cnot_count + not_count; }
  friend bool operator==(const ResourceReport&, const ResourceReport&) = default;
};

struct MetricsOptions {
  CostModel cost = CostModel::directional();
  /// Adds the Toffoli decomposition ancillas (peak per layer) to `qubits`.
  bool include_toffoli_ancillas = false;
};

/// Wires pinned live for the whole circuit when computing the qubit high-water mark.
constexpr bool is_pinned_role(Role r) {
  return r == Role::InputX || r == Role::InputY || r == Role::Output || r == Role::Control ||
         r == Role::Carry;
}

/// Recomputes every metric from scratch.
///
/// Depth uses greedy as-soon-as-possible layering: a gate lands one layer past
/// the latest gate on any of its wires. Toffoli depth applies the same rule but
/// only Toffoli gates open a new layer. Qubits is the high-water mark of live
/// wires, where pinned-role wires are live throughout and every other wire is
/// live from its first to its last touching gate.
inline ResourceReport depth_metrics(const Circuit& c, const MetricsOptions& opt = {}) {
  ResourceReport r;
  r.width = c.width();
  const std::size_t w = c.width();
  std::vector<std::size_t> layer(w, 0), tlayer(w, 0);
  std::vector<std::size_t> first(w, std::numeric_limits<std::size_t>::max()), last(w, 0);
  std::vector<std::size_t> toffolis_per_layer;

  const auto gates = c.gates();
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const Gate& g = gates[i];
    std::size_t l = 0, t = 0;
    g.for_each_wire([&](Wire x) {
      l = std::max(l, layer[x]);
      t = std::max(t, tlayer[x]);
      first[x] = std::min(first[x], i);
      last[x] = i;
    });
    ++l;
    switch (g.kind) {
      case GateKind::Not: ++r.not_count; break;
      case GateKind::Cnot: ++r.cnot_count; break;
      case GateKind::Toffoli:
        ++r.toffoli_count;
        ++t;
        if (toffolis_per_layer.size() < l) toffolis_per_layer.resize(l, 0);
        ++toffolis_per_layer[l - 1];
        break;
    }
    g.for_each_wire([&](Wire x) {
      layer[x] = l;
      tlayer[x] = t;
    });
    r.depth = std::max(r.depth, l);
    r.toffoli_depth = std::max(r.toffoli_depth, t);
  }
  r.t_count = opt.cost.t_per_toffoli * r.toffoli_count;
  r.t_depth = opt.cost.tdepth_per_toffoli * r.toffoli_depth;

  std::vector<bool> pinned(w, false);
  for (const auto& [role, ranges] : c.registers()) {
    if (!is_pinned_role(role)) continue;
    for (const WireRange& rg : ranges)
      for (std::size_t x = rg.lo; x <= rg.hi; ++x) pinned[x] = true;
  }
  std::size_t pinned_count = 0;
  std::vector<std::ptrdiff_t> delta(gates.size() + 1, 0);
  for (std::size_t x = 0; x < w; ++x) {
    if (pinned[x]) {
      ++pinned_count;
    } else if (first[x] <= last[x]) {
      ++delta[first[x]];
      --delta[last[x] + 1];
    }
  }
  std::ptrdiff_t live = 0, peak = 0;
  for (std::ptrdiff_t d : delta) {
    live += d;
    peak = std::max(peak, live);
  }
  r.qubits = pinned_count + static_cast<std::size_t>(peak);
  if (opt.include_toffoli_ancillas && !toffolis_per_layer.empty()) {
    r.qubits += opt.cost.ancilla_per_toffoli *
                *std::max_element(toffolis_per_layer.begin(), toffolis_per_layer.end());
  }
  return r;
}

}  // namespace revkara
