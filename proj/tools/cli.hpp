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

// Command-line front end. Exit codes: 0 success, 1 verification failure or
// infeasible pebbling, 2 usage or I/O error. The resolved configuration goes to
// the error stream before any output; reports go to the output stream.

#pragma once

#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "revkara.hpp"

namespace revkara::cli {

using ojson = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Thrown for bad flag values that CLI11 validators cannot express.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "50..500", "1,5,11" or "64".
inline std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  auto num = [&](const std::string& s) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos);
    } catch (const std::exception&) {
      throw UsageError("bad number '" + s + "' in '" + text + "'");
    }
    if (pos != s.size()) throw UsageError("bad number '" + s + "' in '" + text + "'");
    return static_cast<std::size_t>(v);
  };
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) {
    if (auto dots = part.find(".."); dots != std::string::npos) {
      const std::size_t lo = num(part.substr(0, dots)), hi = num(part.substr(dots + 2));
      if (hi < lo) throw UsageError("empty range '" + part + "'");
      for (std::size_t v = lo; v <= hi; ++v) out.push_back(v);
    } else {
      out.push_back(num(part));
    }
  }
  if (out.empty()) throw UsageError("empty list '" + text + "'");
  return out;
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');)
    if (!part.empty()) out.push_back(part);
  return out;
}

inline ojson report_json(const ResourceReport& r) {
  ojson j;
  j["toffoli"] = r.toffoli_count;
  j["cnot"] = r.cnot_count;
  j["not"] = r.not_count;
  j["t_count"] = r.t_count;
  j["t_depth"] = r.t_depth;
  j["toffoli_depth"] = r.toffoli_depth;
  j["depth"] = r.depth;
  j["qubits"] = r.qubits;
  j["width"] = r.width;
  return j;
}

inline void print_json(std::ostream& out, const ojson& j, bool pretty) {
  if (!pretty) {
    out << j.dump() << '\n';
    return;
  }
  std::size_t key_width = 0;
  for (const auto& [k, v] : j.items()) key_width = std::max(key_width, k.size());
  for (const auto& [k, v] : j.items()) {
    out << k << std::string(key_width - k.size() + 2, ' ') << (v.is_string() ? v.get<std::string>() : v.dump())
        << '\n';
  }
}

inline void print_config(std::ostream& err, const std::string& sub, const ojson& cfg) {
  err << "config " << sub << ' ' << cfg.dump() << '\n';
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::ios_base::failure("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Writes to `path`, or to `out` when path is "-".
inline void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::ios_base::failure("cannot write '" + path + "'");
  f << text;
}

struct Options {
  // build
  std::string kind;
  std::size_t n = 0;
  std::size_t cutoff = 11;
  std::string splits = "optimal";
  std::string variant = "clean";
  bool pebbled = false;
  double level_fraction = default_level_fraction();
  std::string out_path;
  std::string cost = "directional";
  bool pretty = false;
  // verify
  std::string circuit_path;
  std::string contract;
  std::string mode = "exhaustive";
  std::size_t trials = 1000;
  std::uint64_t seed = kDefaultSeed;
  std::optional<int> control;
  // sweep / fit
  std::string sizes;
  std::string cutoffs = "11";
  std::string variants = "akara";
  bool materialize = false;
  std::string csv = "-";
  std::string column = "toffoli";
  std::string fit_variant;
  // pebble
  std::string graph;
  std::size_t pebbles = 0;
  bool optimal = false;
  std::string strategy;
  std::optional<std::size_t> k;
  bool strict = false;
  bool list_moves = false;
  std::string validate_path;
};

inline SplitPlan plan_for(const Options& o) {
  return o.splits == "even" ? SplitPlan::even(o.n, o.cutoff) : optimize_splits(o.n, o.cutoff);
}

inline int run_build(const Options& o, std::ostream& out, std::ostream& err) {
  const std::string variant = o.pebbled ? "pebbled" : o.variant;
  ojson cfg{{"kind", o.kind}, {"n", o.n}, {"cost", o.cost}, {"out", o.out_path}};
  if (o.kind == "karatsuba") {
    cfg["cutoff"] = o.cutoff;
    cfg["splits"] = o.splits;
    cfg["variant"] = variant;
    if (variant == "pebbled") cfg["level_fraction"] = o.level_fraction;
  }
  print_config(err, "build", cfg);

  Circuit c;
  ojson rep{{"kind", o.kind}, {"n", o.n}};
  if (o.kind == "adder" || o.kind == "ctrl-adder") {
    c = build_adder(o.n, o.kind == "ctrl-adder");
  } else if (o.kind == "naive") {
    c = build_naive_multiplier(o.n);
  } else {
    const SplitPlan plan = plan_for(o);
    KaratsubaVariant v = KaratsubaVariant::Clean;
    if (variant == "garbage") v = KaratsubaVariant::Garbage;
    if (variant == "pebbled") v = KaratsubaVariant::Pebbled;
    c = build_karatsuba(o.n, plan, v, o.level_fraction);
    rep["cutoff"] = o.cutoff;
    rep["splits"] = o.splits;
    rep["variant"] = variant;
    rep["garbage_bits"] = c.register_wires(Role::Garbage).size();
  }
  MetricsOptions mo;
  mo.cost = o.cost == "standard" ? CostModel::standard() : CostModel::directional();
  rep.update(report_json(depth_metrics(c, mo)));
  if (!o.out_path.empty()) write_text(o.out_path, serialize(c), out);
  if (o.out_path != "-") print_json(out, rep, o.pretty);
  return kExitOk;
}

inline int run_verify(const Options& o, std::ostream& out, std::ostream& err) {
  ojson cfg{{"circuit", o.circuit_path}, {"contract", o.contract}, {"n", o.n}, {"mode", o.mode}};
  if (o.mode == "random") {
    cfg["trials"] = o.trials;
    cfg["seed"] = o.seed;
  }
  if (o.control) cfg["control"] = *o.control;
  print_config(err, "verify", cfg);

  const Circuit c = deserialize(read_file(o.circuit_path));
  const VerifyMode mode = o.mode == "random" ? VerifyMode::random(o.trials, o.seed) : VerifyMode::exhaustive();
  Verdict v;
  if (o.contract == "adder") {
    std::optional<bool> control;
    if (o.control) control = *o.control != 0;
    v = verify_adder(c, o.n, mode, control);
  } else {
    v = verify_multiplier(c, o.n, mode);
  }
  out << v.to_key_value();
  return v.passed() ? kExitOk : kExitFailed;
}

inline int run_count(const Options& o, std::ostream& out, std::ostream& err) {
  print_config(err, "count",
               ojson{{"n", o.n}, {"cutoff", o.cutoff}, {"splits", o.splits}, {"level_fraction", o.level_fraction}});
  const SplitPlan plan = plan_for(o);
  const KaratsubaCount k = karatsuba_count(plan);
  ojson j{{"n", o.n},
          {"cutoff", o.cutoff},
          {"splits", o.splits},
          {"naive", naive_count(o.n)},
          {"garbage", k.garbage},
          {"clean", k.clean},
          {"pebbled", pebbled_count(plan, o.level_fraction)},
          {"height", plan.height()},
          {"bound", 98.0 * std::pow(static_cast<double>(o.n), std::log2(3.0))}};
  print_json(out, j, o.pretty);
  return kExitOk;
}

inline int run_sweep(const Options& o, std::ostream& out, std::ostream& err) {
  const auto ns = parse_sizes(o.sizes);
  const auto cuts = parse_sizes(o.cutoffs);
  std::vector<SweepVariant> vs;
  for (const std::string& name : split_list(o.variants)) {
    auto v = sweep_variant_from_string(name);
    if (!v) throw UsageError("unknown variant '" + name + "'");
    vs.push_back(*v);
  }
  for (std::size_t n : ns)
    if (n == 0) throw UsageError("sizes must be >= 1");
  for (std::size_t c : cuts)
    if (c == 0) throw UsageError("cutoffs must be >= 1");
  print_config(err, "sweep",
               ojson{{"n", o.sizes},
                     {"cutoffs", o.cutoffs},
                     {"variants", o.variants},
                     {"materialize", o.materialize},
                     {"level_fraction", o.level_fraction},
                     {"csv", o.csv}});
  SweepOptions so;
  so.materialize = o.materialize;
  so.level_fraction = o.level_fraction;
  std::ostringstream text;
  write_csv(text, sweep(ns, cuts, vs, so));
  write_text(o.csv, text.str(), out);
  return kExitOk;
}

inline int run_fit(const Options& o, std::ostream& out, std::ostream& err, std::istream& in) {
  print_config(err, "fit", ojson{{"csv", o.csv}, {"column", o.column}, {"variant", o.fit_variant}});
  std::vector<SweepRow> rows;
  if (o.csv == "-") {
    rows = read_csv(in);
  } else {
    std::istringstream is(read_file(o.csv));
    rows = read_csv(is);
  }
  if (!o.fit_variant.empty()) rows = select_rows(rows, o.fit_variant);
  const FitResult f = fit_exponent(rows, o.column);
  print_json(out, ojson{{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"rows", f.rows}}, o.pretty);
  return kExitOk;
}

inline PebbleGraph load_graph(const std::string& source) {
  if (auto g = graph_from_shorthand(source)) return *g;
  std::istringstream is(read_file(source));
  return read_graph(is);
}

inline int run_pebble(const Options& o, std::ostream& out, std::ostream& err) {
  const PebbleGraph g = load_graph(o.graph);
  const bool line = o.graph.rfind("line:", 0) == 0;
  const bool tern = o.graph.rfind("ternary:", 0) == 0;
  const std::size_t arg = (line || tern) ? std::stoul(o.graph.substr(o.graph.find(':') + 1)) : 0;

  std::string name = o.optimal ? "optimal" : o.strategy;
  if (!o.validate_path.empty()) name = "file";
  if (name.empty()) throw UsageError("choose --optimal, --strategy or --validate");
  if ((name == "bennett" || name == "incremental" || name == "lmt") && !line) {
    throw UsageError(name + " strategy needs a line:<n> graph");
  }
  if (name == "ternary" && !tern) throw UsageError("ternary strategy needs a ternary:<height> graph");
  const bool strict = o.strict || name == "optimal";
  std::optional<std::size_t> k = o.k;
  if (name == "ternary" && !k) k = split_level(arg, default_level_fraction());

  ojson cfg{{"graph", o.graph}, {"strategy", name}, {"pebbles", o.pebbles}, {"strict", strict}};
  if (k) cfg["k"] = *k;
  if (!o.validate_path.empty()) cfg["validate"] = o.validate_path;
  print_config(err, "pebble", cfg);

  Strategy s;
  if (name == "optimal") {
    auto found = optimal_search(g, o.pebbles, FinalRule::Strict);
    out << "graph: " << o.graph << "\nstrategy: optimal\nbudget: " << o.pebbles << '\n';
    if (!found) {
      out << "result: infeasible\n";
      return kExitFailed;
    }
    s = *found;
  } else if (name == "bennett") {
    s = bennett_strategy(arg);
  } else if (name == "incremental") {
    try {
      s = incremental_strategy(arg, o.pebbles);
    } catch (const InfeasibleError& e) {
      out << "graph: " << o.graph << "\nstrategy: incremental\nbudget: " << o.pebbles << "\nresult: infeasible\n";
      return kExitFailed;
    }
  } else if (name == "lmt") {
    s = lmt_strategy(arg);
  } else if (name == "ternary") {
    s = ternary_tree_schedule(arg, *k);
  } else if (name == "file") {
    std::istringstream is(read_file(o.validate_path));
    s = read_strategy(is);
  } else {
    throw UsageError("unknown strategy '" + name + "'");
  }
  if (o.pebbles > 0 && name != "optimal") s.budget = o.pebbles;
  if (s.budget == 0) s.budget = g.size();

  std::vector<double> weights;
  if (tern) weights = ternary_weights(arg, std::ldexp(1.0, static_cast<int>(arg)));
  const PebbleVerdict v = validate(g, s, strict ? FinalRule::Strict : FinalRule::Relaxed, weights);
  if (name != "optimal") out << "graph: " << o.graph << "\nstrategy: " << name << "\nbudget: " << s.budget << '\n';
  out << "moves: " << v.moves << "\npeak: " << v.peak << '\n';
  if (tern) out << "weighted_peak: " << v.weighted_peak << '\n';
  out << "final_pebbles: " << v.final_pebbles << "\nvalid: " << (v.valid ? "true" : "false") << '\n';
  if (!v.valid) out << "reason: " << v.reason << '\n';
  if (o.list_moves) write_strategy(out, s);
  return v.valid ? kExitOk : kExitFailed;
}

/// Parses `args` (without the program name) and runs one subcommand.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               std::istream& in = std::cin) {
  CLI::App app{"Reversible adder and multiplier circuits, pebble games and resource estimates", "revkara"};
  app.require_subcommand(1);
  Options o;

  auto* build = app.add_subcommand("build", "Build a circuit and print its resource report as JSON");
  build->add_option("--kind", o.kind, "adder, ctrl-adder, naive or karatsuba")
      ->required()
      ->check(CLI::IsMember({"adder", "ctrl-adder", "naive", "karatsuba"}));
  build->add_option("--n", o.n, "Operand bit size")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  build->add_option("--cutoff", o.cutoff, "Karatsuba leaf size (>= 1)")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 20));
  build->add_option("--splits", o.splits, "even or optimal")->capture_default_str()->check(CLI::IsMember({"even", "optimal"}));
  build->add_option("--variant", o.variant, "garbage, clean or pebbled")
      ->capture_default_str()
      ->check(CLI::IsMember({"garbage", "clean", "pebbled"}));
  build->add_flag("--pebbled", o.pebbled, "Same as --variant pebbled");
  build->add_option("--level-fraction", o.level_fraction, "Pebbled fraction of the recursion height, in (0, 1)")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  build->add_option("--out", o.out_path, "Write the circuit text here ('-' for standard output)");
  build->add_option("--cost", o.cost, "directional (4 T, T-depth 1) or standard (7 T, T-depth 3)")
      ->capture_default_str()
      ->check(CLI::IsMember({"directional", "standard"}));
  build->add_flag("--pretty", o.pretty, "Human-readable report");

  auto* verify = app.add_subcommand("verify", "Check a circuit file against an adder or multiplier oracle");
  verify->add_option("--circuit", o.circuit_path, "Circuit text file")->required();
  verify->add_option("--contract", o.contract, "adder or multiplier")->required()->check(CLI::IsMember({"adder", "multiplier"}));
  verify->add_option("--n", o.n, "Operand bit size")->required()->check(CLI::Range(1, 64));
  verify->add_option("--mode", o.mode, "exhaustive or random")->capture_default_str()->check(CLI::IsMember({"exhaustive", "random"}));
  verify->add_option("--trials", o.trials, "Random trials")->capture_default_str()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 30));
  verify->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  verify->add_option("--control", o.control, "Pin the adder control wire to 0 or 1")->check(CLI::Range(0, 1));

  auto* count = app.add_subcommand("count", "Toffoli counts from the recurrences, without building circuits");
  count->add_option("--n", o.n, "Operand bit size")->required()->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  count->add_option("--cutoff", o.cutoff, "Karatsuba leaf size (>= 1)")
      ->capture_default_str()
      ->check(CLI::Range(std::size_t{1}, std::size_t{1} << 24));
  count->add_option("--splits", o.splits, "even or optimal")->capture_default_str()->check(CLI::IsMember({"even", "optimal"}));
  count->add_option("--level-fraction", o.level_fraction, "Pebbled fraction of the recursion height")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  count->add_flag("--pretty", o.pretty, "Human-readable report");

  auto* sweep_cmd = app.add_subcommand("sweep", "Toffoli counts over sizes, cutoffs and variants as CSV");
  sweep_cmd->add_option("--n", o.sizes, "Sizes: 50..500, 8,16,32 or 64")->required();
  sweep_cmd->add_option("--cutoffs", o.cutoffs, "Cutoff list")->capture_default_str();
  sweep_cmd->add_option("--variant", o.variants, "Comma list of naive, skara, akara, pkara")->capture_default_str();
  sweep_cmd->add_flag("--materialize", o.materialize, "Build circuits to fill qubits and toffoli_depth");
  sweep_cmd->add_option("--level-fraction", o.level_fraction, "Pebbled fraction for pkara")
      ->capture_default_str()
      ->check(CLI::Range(1e-9, 1.0 - 1e-9));
  sweep_cmd->add_option("--csv", o.csv, "Output path ('-' for standard output)")->capture_default_str();

  auto* fit = app.add_subcommand("fit", "Least-squares slope of log(column) against log(n)");
  fit->add_option("--csv", o.csv, "Sweep CSV ('-' for standard input)")->capture_default_str();
  fit->add_option("--column", o.column, "toffoli, qubits or toffoli_depth")
      ->capture_default_str()
      ->check(CLI::IsMember({"toffoli", "qubits", "toffoli_depth"}));
  fit->add_option("--variant", o.fit_variant, "Row filter, e.g. akara or skara1 (skara at cutoff 1)");
  fit->add_flag("--pretty", o.pretty, "Human-readable report");

  auto* pebble = app.add_subcommand("pebble", "Generate or check a reversible pebbling strategy");
  pebble->add_option("--graph", o.graph, "line:<n>, ternary:<height> or an edge-list file")->required();
  pebble->add_option("--pebbles", o.pebbles, "Pebble budget");
  pebble->add_flag("--optimal", o.optimal, "Breadth-first minimum-move search (at most 20 vertices)");
  pebble->add_option("--strategy", o.strategy, "bennett, incremental, lmt or ternary")
      ->check(CLI::IsMember({"bennett", "incremental", "lmt", "ternary"}));
  pebble->add_option("--k", o.k, "Ternary split level counted from the leaves");
  pebble->add_flag("--strict", o.strict, "Require exactly the outputs pebbled at the end");
  pebble->add_flag("--moves", o.list_moves, "Print the moves as +v / -v lines");
  pebble->add_option("--validate", o.validate_path, "Replay a strategy file instead of generating one");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (build->parsed()) return run_build(o, out, err);
    if (verify->parsed()) return run_verify(o, out, err);
    if (count->parsed()) return run_count(o, out, err);
    if (sweep_cmd->parsed()) return run_sweep(o, out, err);
    if (fit->parsed()) return run_fit(o, out, err, in);
    if (pebble->parsed()) return run_pebble(o, out, err);
  } catch (const revkara::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace revkara::cli
