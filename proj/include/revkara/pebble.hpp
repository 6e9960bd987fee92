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

// Reversible pebble games on DAGs. Vertices are 0-based. A pebble may be
// placed on or removed from v only while every predecessor of v is pebbled.

#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "revkara/errors.hpp"

namespace revkara {

class PebbleGraph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  PebbleGraph(std::size_t vertices, std::vector<Edge> edges) : n_(vertices), edges_(std::move(edges)) {
    if (n_ == 0) throw ContractError("graph needs at least one vertex");
    preds_.resize(n_);
    succs_.resize(n_);
    for (const auto& [u, v] : edges_) {
      if (u >= n_ || v >= n_) throw ContractError("edge endpoint out of range");
      if (u == v) throw ContractError("self loop on vertex " + std::to_string(u));
      preds_[v].push_back(u);
      succs_[u].push_back(v);
    }
    topo_ = topological_order();
    if (topo_.size() != n_) throw ContractError("graph has a cycle");
    for (std::size_t v = 0; v < n_; ++v) {
      if (preds_[v].empty()) inputs_.push_back(v);
      if (succs_[v].empty()) outputs_.push_back(v);
    }
  }

  /// 0 -> 1 -> ... -> n-1.
  static PebbleGraph line(std::size_t n) {
    if (n == 0) throw std::domain_error("line needs n >= 1");
    std::vector<Edge> e;
    for (std::size_t i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return PebbleGraph(n, std::move(e));
  }

  /// Complete ternary tree of the given height, numbered breadth-first from the
  /// root (vertex 0; children of v are 3v+1..3v+3), edges child -> parent.
  static PebbleGraph ternary(std::size_t height) {
    if (height > 12) throw CapacityError("ternary tree too tall");
    const std::size_t count = (ipow3(height + 1) - 1) / 2;
    std::vector<Edge> e;
    for (std::size_t v = 1; v < count; ++v) e.emplace_back(v, (v - 1) / 3);
    return PebbleGraph(count, std::move(e));
  }

  std::size_t size() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<std::size_t>& predecessors(std::size_t v) const { return preds_.at(v); }
  const std::vector<std::size_t>& successors(std::size_t v) const { return succs_.at(v); }
  const std::vector<std::size_t>& inputs() const { return inputs_; }
  const std::vector<std::size_t>& outputs() const { return outputs_; }
  const std::vector<std::size_t>& topological() const { return topo_; }

  static std::size_t ipow3(std::size_t k) {
    std::size_t r = 1;
    while (k--) r *= 3;
    return r;
  }

 private:
  std::vector<std::size_t> topological_order() const {
    std::vector<std::size_t> indeg(n_, 0), order;
    for (const auto& e : edges_) ++indeg[e.second];
    std::vector<std::size_t> ready;
    for (std::size_t v = n_; v-- > 0;)
      if (indeg[v] == 0) ready.push_back(v);
    while (!ready.empty()) {
      const std::size_t v = ready.back();
      ready.pop_back();
      order.push_back(v);
      for (std::size_t w : succs_[v])
        if (--indeg[w] == 0) ready.push_back(w);
    }
    return order;
  }

  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> preds_, succs_;
  std::vector<std::size_t> inputs_, outputs_, topo_;
};

enum class PebbleAction : std::uint8_t { Place, Remove };

struct Move {
  PebbleAction action = PebbleAction::Place;
  std::size_t vertex = 0;

  static Move place(std::size_t v) { return {PebbleAction::Place, v}; }
  static Move remove(std::size_t v) { return {PebbleAction::Remove, v}; }
  friend bool operator==(const Move&, const Move&) = default;
};

struct Strategy {
  std::vector<Move> moves;
  std::size_t budget = 0;

  std::size_t size() const { return moves.size(); }
  friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// Strict: exactly V_out pebbled at the end. Relaxed: V_out pebbled, others allowed.
enum class FinalRule { Relaxed, Strict };

struct PebbleVerdict {
  bool valid = true;
  /// 1-based number of the first offending move; 0 when the failure is the final configuration.
  std::size_t failed_move = 0;
  std::string reason;
  std::size_t moves = 0;
  std::size_t peak = 0;
  std::size_t final_pebbles = 0;
  /// Peak of the summed vertex weights, when weights were supplied.
  double weighted_peak = 0.0;
};

inline PebbleVerdict validate(const PebbleGraph& g, const Strategy& s, FinalRule rule = FinalRule::Relaxed,
                              const std::vector<double>& weights = {}) {
  if (!weights.empty() && weights.size() != g.size()) throw DimensionError("one weight per vertex required");
  PebbleVerdict v;
  v.moves = s.moves.size();
  std::vector<bool> on(g.size(), false);
  std::size_t count = 0;
  double weight = 0.0;
  auto fail = [&](std::size_t i, std::string why) {
    v.valid = false;
    v.failed_move = i + 1;
    v.reason = "move " + std::to_string(i + 1) + ": " + why;
    return v;
  };
  for (std::size_t i = 0; i < s.moves.size(); ++i) {
    const Move& m = s.moves[i];
    if (m.vertex >= g.size()) return fail(i, "vertex " + std::to_string(m.vertex) + " out of range");
    for (std::size_t p : g.predecessors(m.vertex))
      if (!on[p]) return fail(i, "predecessor " + std::to_string(p) + " of " + std::to_string(m.vertex) + " unpebbled");
    const double w = weights.empty() ? 0.0 : weights[m.vertex];
    if (m.action == PebbleAction::Place) {
      if (on[m.vertex]) return fail(i, "vertex " + std::to_string(m.vertex) + " already pebbled");
      on[m.vertex] = true;
      ++count;
      weight += w;
      if (count > s.budget) return fail(i, "budget " + std::to_string(s.budget) + " exceeded");
    } else {
      if (!on[m.vertex]) return fail(i, "vertex " + std::to_string(m.vertex) + " not pebbled");
      on[m.vertex] = false;
      --count;
      weight -= w;
    }
    v.peak = std::max(v.peak, count);
    v.weighted_peak = std::max(v.weighted_peak, weight);
  }
  v.final_pebbles = count;
  for (std::size_t o : g.outputs()) {
    if (!on[o]) {
      v.valid = false;
      v.reason = "output " + std::to_string(o) + " unpebbled at the end";
      return v;
    }
  }
  if (rule == FinalRule::Strict && count != g.outputs().size()) {
    v.valid = false;
    v.reason = "pebbles left outside V_out";
  }
  return v;
}

inline constexpr std::size_t kMaxSearchVertices = 20;

/// Breadth-first search over pebble configurations (bitmasks). Returns a
/// minimum-length strategy, lexicographically smallest among those when moves
/// are ordered by vertex, or nullopt if none exists within the budget.
inline std::optional<Strategy> optimal_search(const PebbleGraph& g, std::size_t budget,
                                              FinalRule rule = FinalRule::Strict) {
  const std::size_t n = g.size();
  if (n > kMaxSearchVertices) throw CapacityError("optimal search supports at most 20 vertices");
  const std::uint32_t states = std::uint32_t{1} << n;
  std::vector<std::uint32_t> pred_mask(n, 0);
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t p : g.predecessors(v)) pred_mask[v] |= std::uint32_t{1} << p;
  std::uint32_t out_mask = 0;
  for (std::size_t o : g.outputs()) out_mask |= std::uint32_t{1} << o;
  auto goal = [&](std::uint32_t s) { return rule == FinalRule::Strict ? s == out_mask : (s & out_mask) == out_mask; };

  constexpr std::uint32_t kUnseen = 0xffffffffu;
  std::vector<std::uint32_t> parent(states, kUnseen);
  std::vector<std::uint32_t> frontier{0}, next;
  parent[0] = 0;
  std::optional<std::uint32_t> found = goal(0) ? std::optional<std::uint32_t>(0) : std::nullopt;
  while (!found && !frontier.empty()) {
    next.clear();
    for (std::uint32_t s : frontier) {
      for (std::size_t v = 0; v < n && !found; ++v) {
        if ((s & pred_mask[v]) != pred_mask[v]) continue;
        const std::uint32_t t = s ^ (std::uint32_t{1} << v);
        if (static_cast<std::size_t>(std::popcount(t)) > budget || parent[t] != kUnseen) continue;
        parent[t] = s;
        if (goal(t)) found = t;
        next.push_back(t);
      }
      if (found) break;
    }
    frontier.swap(next);
  }
  if (!found) return std::nullopt;

  Strategy out{{}, budget};
  for (std::uint32_t s = *found; s != 0;) {
    const std::uint32_t p = parent[s];
    const std::uint32_t diff = s ^ p;
    const auto v = static_cast<std::size_t>(std::countr_zero(diff));
    out.moves.push_back((s & diff) ? Move::place(v) : Move::remove(v));
    s = p;
  }
  std::reverse(out.moves.begin(), out.moves.end());
  return out;
}

namespace detail {

/// Appends the inverse of moves [begin, end) of `m`, skipping moves whose vertex is `keep`.
inline void append_inverse(std::vector<Move>& m, std::size_t begin, std::size_t end,
                           std::optional<std::size_t> keep = std::nullopt) {
  for (std::size_t i = end; i > begin; --i) {
    Move x = m[i - 1];
    if (keep && x.vertex == *keep) continue;
    x.action = x.action == PebbleAction::Place ? PebbleAction::Remove : PebbleAction::Place;
    m.push_back(x);
  }
}

}  // namespace detail

/// Place 0..n-1, then remove n-2..0: 2n-1 moves, n pebbles.
inline Strategy bennett_strategy(std::size_t line_length) {
  if (line_length == 0) throw std::domain_error("line needs n >= 1");
  Strategy s{{}, line_length};
  for (std::size_t v = 0; v < line_length; ++v) s.moves.push_back(Move::place(v));
  for (std::size_t v = line_length - 1; v-- > 0;) s.moves.push_back(Move::remove(v));
  return s;
}

/// Rounds of "advance, then clean up behind the new frontier". Each round places
/// as many fresh pebbles as the budget leaves after the frontiers kept so far,
/// then removes all of them except the last. Earlier frontiers cannot be freed
/// without recomputation, so they stay pebbled: the game reaches the end of a
/// line of up to S(S+1)/2 vertices and finishes with one pebble per round.
inline Strategy incremental_strategy(std::size_t line_length, std::size_t budget) {
  if (line_length == 0) throw std::domain_error("line needs n >= 1");
  if (line_length <= budget) {
    Strategy s = bennett_strategy(line_length);
    s.budget = budget;
    return s;
  }
  if (budget < 2) throw InfeasibleError("incremental strategy needs at least 2 pebbles");
  Strategy s{{}, budget};
  std::size_t next = 0;
  std::size_t kept = 0;
  while (next < line_length) {
    const std::size_t fresh = std::min(budget - kept, line_length - next);
    if (fresh == 0) {
      throw InfeasibleError("incremental strategy runs out of pebbles at vertex " + std::to_string(next));
    }
    for (std::size_t i = 0; i < fresh; ++i) s.moves.push_back(Move::place(next + i));
    for (std::size_t i = fresh - 1; i-- > 0;) s.moves.push_back(Move::remove(next + i));
    next += fresh;
    ++kept;
  }
  return s;
}

namespace detail {

/// With lo-1 pebbled (or lo == 0), ends with hi pebbled in addition.
inline void lmt_forward(std::vector<Move>& m, std::size_t lo, std::size_t hi) {
  if (lo == hi) {
    m.push_back(Move::place(lo));
    return;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  const std::size_t begin = m.size();
  lmt_forward(m, lo, mid);
  const std::size_t end = m.size();
  lmt_forward(m, mid + 1, hi);
  append_inverse(m, begin, end);
}

}  // namespace detail

/// Recursive halving: pebble the midpoint, pebble the end from it, then unpebble
/// the midpoint by replaying the first half backwards. Peak ceil(log2 n)+1
/// pebbles; 3^k moves for n = 2^k.
inline Strategy lmt_strategy(std::size_t line_length) {
  if (line_length == 0) throw std::domain_error("line needs n >= 1");
  Strategy s;
  detail::lmt_forward(s.moves, 0, line_length - 1);
  std::size_t peak = 0, count = 0;
  for (const Move& m : s.moves) {
    count += m.action == PebbleAction::Place ? 1 : 0;
    count -= m.action == PebbleAction::Remove ? 1 : 0;
    peak = std::max(peak, count);
  }
  s.budget = peak;
  return s;
}

/// Level of a breadth-first-numbered ternary vertex counted from the leaves.
inline std::size_t ternary_level(std::size_t vertex, std::size_t height) {
  std::size_t depth = 0;
  for (std::size_t v = vertex; v != 0; v = (v - 1) / 3) ++depth;
  if (depth > height) throw std::domain_error("vertex below the tree");
  return height - depth;
}

/// Vertex weights n / 2^level for a tree whose root stands for an n-bit product.
inline std::vector<double> ternary_weights(std::size_t height, double n) {
  const std::size_t count = (PebbleGraph::ipow3(height + 1) - 1) / 2;
  std::vector<double> w(count);
  for (std::size_t v = 0; v < count; ++v) {
    w[v] = n / std::ldexp(1.0, static_cast<int>(height - ternary_level(v, height)));
  }
  return w;
}

namespace detail {

inline void postorder(std::size_t v, std::size_t levels_below, std::vector<Move>& m) {
  if (levels_below > 0)
    for (std::size_t c = 3 * v + 1; c <= 3 * v + 3; ++c) postorder(c, levels_below - 1, m);
  m.push_back(Move::place(v));
}

/// Pebbles the top tree above the level-k roots; each level-k root is computed
/// on demand by pebbling its subtree and unpebbling the interior.
inline void ternary_forward(std::size_t v, std::size_t level, std::size_t k, std::vector<Move>& m) {
  if (level == k) {
    const std::size_t begin = m.size();
    postorder(v, level, m);
    append_inverse(m, begin, m.size(), v);
    return;
  }
  for (std::size_t c = 3 * v + 1; c <= 3 * v + 3; ++c) ternary_forward(c, level - 1, k, m);
  m.push_back(Move::place(v));
}

}  // namespace detail

/// Schedule on ternary(height): each subtree rooted at level k (counted from
/// the leaves) is pebbled bottom-up, its interior unpebbled, and the top tree
/// pebbled over the surviving roots. The whole sequence is then replayed
/// backwards, except the root, leaving only the root pebbled. k = 0 and
/// k = height are whole-tree Bennett pebbling.
inline Strategy ternary_tree_schedule(std::size_t height, std::size_t k) {
  if (k > height) throw std::domain_error("k must lie in [0, height]");
  if (height > 12) throw CapacityError("ternary tree too tall");
  Strategy s;
  if (k == 0 || k == height) {
    detail::postorder(0, height, s.moves);
  } else {
    detail::ternary_forward(0, height, k, s.moves);
  }
  detail::append_inverse(s.moves, 0, s.moves.size(), std::size_t{0});
  std::size_t peak = 0, count = 0;
  for (const Move& m : s.moves) {
    count = m.action == PebbleAction::Place ? count + 1 : count - 1;
    peak = std::max(peak, count);
  }
  s.budget = peak;
  return s;
}

/// floor(fraction * height); the default fraction is 1/(2 - log 2/log 3).
inline std::size_t split_level(std::size_t height, double fraction) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw std::domain_error("fraction must lie in [0, 1]");
  return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(height)));
}

// Text formats.

inline void write_strategy(std::ostream& os, const Strategy& s) {
  for (const Move& m : s.moves) os << (m.action == PebbleAction::Place ? '+' : '-') << m.vertex << '\n';
}

inline std::string format_strategy(const Strategy& s) {
  std::ostringstream os;
  write_strategy(os, s);
  return os.str();
}

namespace detail {

inline std::size_t parse_count(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size() || tok.empty()) {
    throw ParseError(line, "expected a decimal number, got '" + std::string(tok) + "'");
  }
  return v;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace detail

inline Strategy read_strategy(std::istream& is, std::size_t budget = 0) {
  Strategy s{{}, budget};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string_view t(raw);
    if (auto h = t.find('#'); h != std::string_view::npos) t = t.substr(0, h);
    t = detail::trim(t);
    if (t.empty()) continue;
    if (t[0] != '+' && t[0] != '-') throw ParseError(line, "expected +<v> or -<v>");
    const std::size_t v = detail::parse_count(t.substr(1), line);
    s.moves.push_back(t[0] == '+' ? Move::place(v) : Move::remove(v));
  }
  return s;
}

/// `v <count>` header followed by `e <from> <to>` lines; `#` comments.
inline PebbleGraph read_graph(std::istream& is) {
  std::optional<std::size_t> count;
  std::vector<PebbleGraph::Edge> edges;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::string_view t(raw);
    if (auto h = t.find('#'); h != std::string_view::npos) t = t.substr(0, h);
    std::istringstream ls{std::string(t)};
    std::string op;
    if (!(ls >> op)) continue;
    std::vector<std::string> args;
    for (std::string a; ls >> a;) args.push_back(a);
    if (op == "v") {
      if (count) throw ParseError(line, "duplicate vertex header");
      if (args.size() != 1) throw ParseError(line, "'v' takes 1 argument");
      count = detail::parse_count(args[0], line);
    } else if (op == "e") {
      if (!count) throw ParseError(line, "missing 'v' header");
      if (args.size() != 2) throw ParseError(line, "'e' takes 2 arguments");
      edges.emplace_back(detail::parse_count(args[0], line), detail::parse_count(args[1], line));
    } else {
      throw ParseError(line, "unknown directive '" + op + "'");
    }
  }
  if (!count) throw ParseError(line, "missing 'v' header");
  try {
    return PebbleGraph(*count, std::move(edges));
  } catch (const ContractError& e) {
    throw ParseError(line, e.what());
  }
}

inline void write_graph(std::ostream& os, const PebbleGraph& g) {
  os << "v " << g.size() << '\n';
  for (const auto& [u, v] : g.edges()) os << "e " << u << ' ' << v << '\n';
}

/// `line:<n>` or `ternary:<height>`.
inline std::optional<PebbleGraph> graph_from_shorthand(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  const auto kind = text.substr(0, colon);
  const std::size_t arg = detail::parse_count(text.substr(colon + 1), 1);
  if (kind == "line") return PebbleGraph::line(arg);
  if (kind == "ternary") return PebbleGraph::ternary(arg);
  return std::nullopt;
}

}  // namespace revkara
