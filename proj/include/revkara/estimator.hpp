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

// Resource accounting without building circuits: Toffoli-count recursions,
// space and depth estimates for the pebbled Karatsuba tree, sweeps and
// log-log exponent fits.

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "revkara/builders.hpp"
#include "revkara/errors.hpp"
#include "revkara/recurrence.hpp"
#include "revkara/split_plan.hpp"

namespace revkara {

enum class SplitMode { Even, Optimal };

inline SplitPlan make_plan(std::size_t n, std::size_t cutoff, SplitMode mode) {
  return mode == SplitMode::Even ? SplitPlan::even(n, cutoff) : optimize_splits(n, cutoff);
}

struct KaratsubaCount {
  std::uint64_t garbage = 0;
  std::uint64_t clean = 0;
  friend bool operator==(const KaratsubaCount&, const KaratsubaCount&) = default;
};

namespace detail {

inline std::uint64_t garbage_count(const SplitPlan& plan, std::size_t s, std::map<std::size_t, std::uint64_t>& memo) {
  if (auto it = memo.find(s); it != memo.end()) return it->second;
  std::uint64_t c = 0;
  if (plan.is_leaf(s)) {
    c = naive_count(s);
  } else {
    const std::size_t m = plan.split(s);
    for (std::size_t child : plan.children(s)) c += garbage_count(plan, child, memo);
    c += karatsuba_node_toffolis(s, m);
  }
  memo[s] = c;
  return c;
}

}  // namespace detail

/// Toffoli counts of the garbage and clean multipliers for a plan. Leaves cost
/// naive_count; every internal node adds karatsuba_node_toffolis.
inline KaratsubaCount karatsuba_count(const SplitPlan& plan) {
  std::map<std::size_t, std::uint64_t> memo;
  const std::uint64_t g = detail::garbage_count(plan, plan.n(), memo);
  return {g, 2 * g};
}

inline KaratsubaCount karatsuba_count(std::size_t n, std::size_t cutoff, SplitMode mode = SplitMode::Even) {
  return karatsuba_count(make_plan(n, cutoff, mode));
}

/// Toffoli count of build_karatsuba_pebbled: the tree above the clean depth is
/// computed and uncomputed once, and each subtree at the clean depth is
/// computed and uncomputed on both passes.
inline std::uint64_t pebbled_count(const SplitPlan& plan, double level_fraction = default_level_fraction()) {
  const std::size_t depth = pebble_clean_depth(plan, level_fraction);
  std::map<std::size_t, std::uint64_t> memo;
  auto top = [&](auto&& self, std::size_t s, std::size_t d) -> std::uint64_t {
    if (plan.is_leaf(s)) return naive_count(s);
    if (d == depth) return 2 * detail::garbage_count(plan, s, memo);
    std::uint64_t c = karatsuba_node_toffolis(s, plan.split(s));
    for (std::size_t child : plan.children(s)) c += self(self, child, d + 1);
    return c;
  };
  if (depth == 0) return 2 * detail::garbage_count(plan, plan.n(), memo);
  return 2 * top(top, plan.n(), 0);
}

// Analytic space and depth for n = 2^N.

struct Estimate {
  double value = 0.0;
  /// N = ceil(log2 n) was used because n is not a power of two.
  bool rounded = false;
};

namespace detail {

inline std::pair<double, bool> log2_height(double n) {
  if (!(n >= 1.0)) throw std::domain_error("estimate needs n >= 1");
  const double exact = std::log2(n);
  const double up = std::ceil(exact - 1e-12);
  return {up, std::abs(up - exact) > 1e-12};
}

}  // namespace detail

/// Unpebbled: n * sum_{k<N} (3/2)^k = n((3/2)^N - 1)/(1/2).
/// Pebbled: n (3/2)^(N log 3/(2 log 3 - log 2)).
inline Estimate space_estimate(double n, bool pebbled) {
  const auto [N, rounded] = detail::log2_height(n);
  if (!pebbled) return {n * (std::pow(1.5, N) - 1.0) / 0.5, rounded};
  const double e = std::log(3.0) / (2.0 * std::log(3.0) - std::log(2.0));
  return {n * std::pow(1.5, e * N), rounded};
}

/// n (3/2)^((1 - log 3/(2 log 3 - log 2)) N).
inline Estimate depth_estimate(double n) {
  const auto [N, rounded] = detail::log2_height(n);
  const double e = std::log(3.0) / (2.0 * std::log(3.0) - std::log(2.0));
  return {n * std::pow(1.5, (1.0 - e) * N), rounded};
}

/// A recursion with a subproblems of size n/b and linear overhead per node.
struct RecursionShape {
  double a = 3.0;
  double b = 2.0;
  double overhead = 1.0;

  void check() const {
    if (!(a >= 1.0) || !(b > 1.0)) throw std::domain_error("shape needs a >= 1 and b > 1");
  }
};

/// 1/(2 - log b/log a), or nullopt when a <= b and splitting the tree saves nothing.
inline std::optional<double> level_fraction(const RecursionShape& shape) {
  shape.check();
  if (shape.a <= shape.b) return std::nullopt;
  return 1.0 / (2.0 - std::log(shape.b) / std::log(shape.a));
}

/// Exponent of n (a/b)^(fraction log_b n): 1 + fraction (log_b a - 1).
inline double pebbled_space_exponent(const RecursionShape& shape, double fraction) {
  shape.check();
  return 1.0 + fraction * (std::log(shape.a) / std::log(shape.b) - 1.0);
}

/// Exponent of the unpebbled space n sum_k (a/b)^k: log_b a when a > b.
inline double unpebbled_space_exponent(const RecursionShape& shape) {
  shape.check();
  return std::max(1.0, std::log(shape.a) / std::log(shape.b));
}

/// Peak of the summed weights n/2^level while ternary_tree_schedule(height, k)
/// runs; unit weights give the peak pebble count.
inline double schedule_weighted_peak(std::size_t height, std::size_t k, double n, bool unit_weights = false) {
  if (k > height) throw std::domain_error("k must lie in [0, height]");
  auto w = [&](std::size_t level) { return unit_weights ? 1.0 : n / std::ldexp(1.0, static_cast<int>(height - level)); };
  auto subtree = [&](std::size_t level) {
    double s = 0.0, copies = 1.0;
    for (std::size_t j = 0; j <= level; ++j, copies *= 3.0) s += copies * w(level - j);
    return s;
  };
  if (k == 0 || k == height) return subtree(height);
  // p: peak while a level-l node is being pebbled; r: what stays pebbled after.
  double p = subtree(k), r = w(k);
  for (std::size_t l = k + 1; l < height; ++l) {
    p = std::max(2.0 * r + p, 3.0 * r + w(l));
    r = 3.0 * r + w(l);
  }
  const double before_root = std::max(2.0 * r + p, 3.0 * r);
  return before_root + w(height);
}

// Sweeps.

/// naive: schoolbook multiplier; skara: even splits; akara: optimized splits;
/// pkara: pebbled multiplier on optimized splits. Counts are for clean circuits.
enum class SweepVariant { Naive, Skara, Akara, Pkara };

inline std::string_view to_string(SweepVariant v) {
  switch (v) {
    case SweepVariant::Naive: return "naive";
    case SweepVariant::Skara: return "skara";
    case SweepVariant::Akara: return "akara";
    case SweepVariant::Pkara: return "pkara";
  }
  return "?";
}

inline std::optional<SweepVariant> sweep_variant_from_string(std::string_view s) {
  for (SweepVariant v : {SweepVariant::Naive, SweepVariant::Skara, SweepVariant::Akara, SweepVariant::Pkara})
    if (to_string(v) == s) return v;
  return std::nullopt;
}

struct SweepRow {
  std::size_t n = 0;
  std::size_t cutoff = 0;
  std::string variant;
  std::uint64_t toffoli = 0;
  std::uint64_t qubits = 0;
  std::uint64_t toffoli_depth = 0;
  friend bool operator==(const SweepRow&, const SweepRow&) = default;
};

struct SweepOptions {
  /// Build each circuit to fill in qubits and toffoli_depth.
  bool materialize = false;
  double level_fraction = default_level_fraction();
};

/// One row per (n, cutoff, variant), ordered by variant, then cutoff, then n.
/// Naive rows ignore the cutoff and are emitted once per n with cutoff 0.
inline std::vector<SweepRow> sweep(const std::vector<std::size_t>& ns, const std::vector<std::size_t>& cutoffs,
                                   const std::vector<SweepVariant>& variants, const SweepOptions& opt = {}) {
  if (ns.empty() || variants.empty()) throw std::domain_error("sweep needs sizes and variants");
  for (std::size_t n : ns)
    if (n == 0) throw std::domain_error("sweep sizes must be >= 1");
  std::vector<SweepRow> rows;
  for (SweepVariant v : variants) {
    if (v == SweepVariant::Naive) {
      for (std::size_t n : ns) {
        SweepRow r{n, 0, std::string(to_string(v)), naive_count(n), 0, 0};
        if (opt.materialize) {
          const auto rep = depth_metrics(build_naive_multiplier(n));
          r.qubits = rep.qubits;
          r.toffoli_depth = rep.toffoli_depth;
        }
        rows.push_back(r);
      }
      continue;
    }
    if (cutoffs.empty()) throw std::domain_error("sweep needs cutoffs");
    for (std::size_t cut : cutoffs) {
      if (cut == 0) throw std::domain_error("cutoff must be >= 1");
      std::optional<SplitOptimizer> dp;
      if (v != SweepVariant::Skara) dp.emplace(cut);
      for (std::size_t n : ns) {
        const SplitPlan plan = dp ? dp->plan(n) : SplitPlan::even(n, cut);
        SweepRow r{n, cut, std::string(to_string(v)), 0, 0, 0};
        r.toffoli = v == SweepVariant::Pkara ? pebbled_count(plan, opt.level_fraction) : karatsuba_count(plan).clean;
        if (opt.materialize) {
          const Circuit c = v == SweepVariant::Pkara ? build_karatsuba_pebbled(n, plan, opt.level_fraction)
                                                     : build_karatsuba_clean(n, plan);
          const auto rep = depth_metrics(c);
          r.qubits = rep.qubits;
          r.toffoli_depth = rep.toffoli_depth;
        }
        rows.push_back(r);
      }
    }
  }
  return rows;
}

/// Cutoff with the smallest arithmetic-mean Toffoli count over sizes lo..hi
/// (step 1). Ties go to the smaller cutoff.
struct CutoffChoice {
  std::size_t cutoff = 0;
  double mean = 0.0;
  std::map<std::size_t, double> means;
};

inline CutoffChoice best_cutoff(std::size_t lo, std::size_t hi, const std::vector<std::size_t>& cutoffs,
                                SweepVariant variant = SweepVariant::Akara) {
  if (lo == 0 || hi < lo || cutoffs.empty()) throw std::domain_error("bad cutoff search range");
  std::vector<std::size_t> ns;
  for (std::size_t n = lo; n <= hi; ++n) ns.push_back(n);
  CutoffChoice best;
  best.mean = std::numeric_limits<double>::infinity();
  for (std::size_t cut : cutoffs) {
    double sum = 0.0;
    for (const SweepRow& r : sweep(ns, {cut}, {variant})) sum += static_cast<double>(r.toffoli);
    const double mean = sum / static_cast<double>(ns.size());
    best.means[cut] = mean;
    if (mean < best.mean) {
      best.mean = mean;
      best.cutoff = cut;
    }
  }
  return best;
}

// CSV.

inline constexpr std::string_view kSweepCsvHeader = "n,cutoff,variant,toffoli,qubits,toffoli_depth";

inline void write_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << kSweepCsvHeader << '\n';
  for (const SweepRow& r : rows)
    os << r.n << ',' << r.cutoff << ',' << r.variant << ',' << r.toffoli << ',' << r.qubits << ',' << r.toffoli_depth
       << '\n';
}

inline std::vector<SweepRow> read_csv(std::istream& is) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t line_no = 0;
  bool header = false;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header) {
      if (line != kSweepCsvHeader) throw ParseError(line_no, "expected header '" + std::string(kSweepCsvHeader) + "'");
      header = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 6) throw ParseError(line_no, "expected 6 fields");
    auto num = [&](const std::string& s) {
      std::uint64_t v = 0;
      auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || p != s.data() + s.size() || s.empty()) {
        throw ParseError(line_no, "bad number '" + s + "'");
      }
      return v;
    };
    rows.push_back({static_cast<std::size_t>(num(f[0])), static_cast<std::size_t>(num(f[1])), f[2], num(f[3]),
                    num(f[4]), num(f[5])});
  }
  if (!header) throw ParseError(line_no, "empty CSV");
  return rows;
}

// Exponent fits.

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t rows = 0;
};

/// Least-squares line through (log x, log y).
inline FitResult fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size()) throw DimensionError("x and y lengths differ");
  if (xs.size() < 3) throw std::domain_error("fit needs at least 3 points");
  const double k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw std::domain_error("fit needs positive values");
    const double x = std::log(xs[i]), y = std::log(ys[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    syy += y * y;
  }
  const double vx = k * sxx - sx * sx;
  if (vx <= 1e-12 * k * sxx) throw std::domain_error("fit needs at least two distinct sizes");
  FitResult f;
  f.rows = xs.size();
  f.slope = (k * sxy - sx * sy) / vx;
  f.intercept = (sy - f.slope * sx) / k;
  const double vy = k * syy - sy * sy;
  f.r2 = vy <= 0.0 ? 1.0 : (k * sxy - sx * sy) * (k * sxy - sx * sy) / (vx * vy);
  return f;
}

inline std::uint64_t column_value(const SweepRow& r, std::string_view column) {
  if (column == "toffoli") return r.toffoli;
  if (column == "qubits") return r.qubits;
  if (column == "toffoli_depth") return r.toffoli_depth;
  throw std::domain_error("unknown column '" + std::string(column) + "'");
}

/// Fits log(column) against log(n) over the given rows.
inline FitResult fit_exponent(const std::vector<SweepRow>& rows, std::string_view column) {
  std::vector<double> xs, ys;
  for (const SweepRow& r : rows) {
    xs.push_back(static_cast<double>(r.n));
    ys.push_back(static_cast<double>(column_value(r, column)));
  }
  return fit_loglog(xs, ys);
}

/// Rows whose variant matches `label`: a variant name, optionally followed by a
/// cutoff ("skara1" is skara at cutoff 1).
inline std::vector<SweepRow> select_rows(const std::vector<SweepRow>& rows, std::string_view label) {
  std::size_t digits = label.size();
  while (digits > 0 && label[digits - 1] >= '0' && label[digits - 1] <= '9') --digits;
  const std::string_view name = label.substr(0, digits);
  std::optional<std::size_t> cutoff;
  if (digits < label.size()) cutoff = std::stoul(std::string(label.substr(digits)));
  std::vector<SweepRow> out;
  for (const SweepRow& r : rows)
    if (r.variant == name && (!cutoff || r.cutoff == *cutoff)) out.push_back(r);
  return out;
}

}  // namespace revkara
