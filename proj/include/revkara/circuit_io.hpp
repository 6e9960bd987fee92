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

// Line-oriented circuit text format:
//
//   width <N>
//   reg <role> <lo>..<hi>
//   not <t>
//   cnot <c> <t>
//   tof <c1> <c2> <t>
//
// `#` starts a comment. Register ranges are inclusive and may repeat per role.

#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "revkara/circuit.hpp"
#include "revkara/errors.hpp"

namespace revkara {

inline void write_circuit(std::ostream& os, const Circuit& c) {
  os << "width " << c.width() << '\n';
  for (const auto& [role, ranges] : c.registers())
    for (const WireRange& r : ranges) os << "reg " << to_string(role) << ' ' << r.lo << ".." << r.hi << '\n';
  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::Not: os << "not " << g.target << '\n'; break;
      case GateKind::Cnot: os << "cnot " << g.controls[0] << ' ' << g.target << '\n'; break;
      case GateKind::Toffoli:
        os << "tof " << g.controls[0] << ' ' << g.controls[1] << ' ' << g.target << '\n';
        break;
    }
  }
}

inline std::string serialize(const Circuit& c) {
  std::ostringstream os;
  write_circuit(os, c);
  return os.str();
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

inline std::size_t parse_index(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) {
    throw ParseError(line, "expected a decimal index, got '" + std::string(tok) + "'");
  }
  return v;
}

}  // namespace detail

inline Circuit read_circuit(std::istream& is) {
  Circuit c;
  bool have_width = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(is, raw)) {
    ++line_no;
    std::string_view line(raw);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tok = detail::split_ws(line);
    if (tok.empty()) continue;

    const std::string_view op = tok[0];
    auto expect_args = [&](std::size_t k) {
      if (tok.size() != k + 1) {
        throw ParseError(line_no, "'" + std::string(op) + "' takes " + std::to_string(k) + " argument(s)");
      }
    };
    auto idx = [&](std::size_t i) {
      const std::size_t v = detail::parse_index(tok[i], line_no);
      if (v >= kNoWire) throw ParseError(line_no, "index too large");
      return static_cast<Wire>(v);
    };

    if (op == "width") {
      expect_args(1);
      if (have_width) throw ParseError(line_no, "duplicate width header");
      c.resize(detail::parse_index(tok[1], line_no));
      have_width = true;
      continue;
    }
    if (!have_width) throw ParseError(line_no, "missing 'width' header");

    try {
      if (op == "reg") {
        expect_args(2);
        auto role = role_from_string(tok[1]);
        if (!role) throw ParseError(line_no, "unknown role '" + std::string(tok[1]) + "'");
        const std::string_view span = tok[2];
        const auto dots = span.find("..");
        if (dots == std::string_view::npos) throw ParseError(line_no, "expected <lo>..<hi>");
        const auto lo = detail::parse_index(span.substr(0, dots), line_no);
        const auto hi = detail::parse_index(span.substr(dots + 2), line_no);
        c.add_register(*role, WireRange{static_cast<Wire>(lo), static_cast<Wire>(hi)});
      } else if (op == "not") {
        expect_args(1);
        c.append(Gate::not_gate(idx(1)));
      } else if (op == "cnot") {
        expect_args(2);
        c.append(Gate::cnot(idx(1), idx(2)));
      } else if (op == "tof") {
        expect_args(3);
        c.append(Gate::toffoli(idx(1), idx(2), idx(3)));
      } else {
        throw ParseError(line_no, "unknown directive '" + std::string(op) + "'");
      }
    } catch (const MalformedGate& e) {
      throw ParseError(line_no, e.what());
    } catch (const ContractError& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!have_width) throw ParseError(line_no, "missing 'width' header");
  return c;
}

inline Circuit deserialize(std::string_view text) {
  std::istringstream is{std::string(text)};
  return read_circuit(is);
}

}  // namespace revkara
