#pragma once

// Command-line front end: classify, decompose, dini, verify-theorems.
//
// Exit codes: 0 success/agreement, 1 configuration or parse error,
// 2 method disagreement or failed verification, 3 inconclusive.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pcvx/battery.hpp"
#include "pcvx/charact.hpp"
#include "pcvx/dini.hpp"
#include "pcvx/domain.hpp"
#include "pcvx/expr.hpp"
#include "pcvx/oracle.hpp"
#include "pcvx/report.hpp"
#include "pcvx/theorems.hpp"
#include "pcvx/verdict.hpp"

namespace pcvx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitDisagree = 2;
inline constexpr int kExitInconclusive = 3;

enum class Property { pseudoconvex, strictly_pseudoconvex, quasiconvex, semistrictly_quasiconvex };

inline const char* to_string(Property p) {
  switch (p) {
    case Property::pseudoconvex: return "pseudoconvex";
    case Property::strictly_pseudoconvex: return "strict-pseudoconvex";
    case Property::quasiconvex: return "quasiconvex";
    case Property::semistrictly_quasiconvex: return "semistrict-quasiconvex";
  }
  return "?";
}

/// The structural method that applies to each property.
inline Method structural_method(Property p) {
  return p == Property::pseudoconvex || p == Property::strictly_pseudoconvex ? Method::characterization
                                                                              : Method::martos;
}

struct RunConfig {
  std::string function;
  int arity = 1;
  std::string domain;  // arity 1
  std::string box;     // any arity
  std::size_t grid = 257;
  Real margin = 1e-6L;
  std::optional<Real> tol;
  Real stat_tol = kDefaultStatTol;
  Real dini_tol = kDefaultDiniTol;
  DiniSchedule schedule;
  std::vector<Method> methods{Method::definitional, Method::characterization, Method::martos};
  std::vector<Property> checks{Property::pseudoconvex, Property::strictly_pseudoconvex,
                               Property::quasiconvex, Property::semistrictly_quasiconvex};
  std::uint64_t seed = 0;
  std::string output = "json";
  std::size_t pairs = 50;
  std::size_t dirs = 64;

  void validate() const {
    if (grid < 8) throw std::invalid_argument("--grid must be at least 8");
    if (!(margin > 0)) throw std::invalid_argument("--margin must be positive");
    if (tol && !(*tol > 0)) throw std::invalid_argument("--tol must be positive");
    if (!(stat_tol > 0)) throw std::invalid_argument("--stat-tol must be positive");
    if (!(dini_tol > 0)) throw std::invalid_argument("dini tolerance must be positive");
    schedule.validate();
    if (output != "json" && output != "text") throw std::invalid_argument("--output must be json or text");
    if (pairs == 0) throw std::invalid_argument("--pairs must be positive");
    if (dirs == 0) throw std::invalid_argument("--dirs must be positive");
  }

  CheckConfig check() const {
    CheckConfig c;
    c.tol = tol;
    c.stat_tol = stat_tol;
    c.dini_tol = dini_tol;
    c.schedule = schedule;
    return c;
  }

  TheoremConfig theorem() const {
    TheoremConfig t;
    t.check = check();
    t.grid = grid;
    t.margin = margin;
    t.pairs = pairs;
    t.dirs = dirs;
    t.seed = seed;
    return t;
  }

  /// Domain box of the function: --box, or --domain for arity 1.
  Box resolve_box() const {
    if (!box.empty()) {
      Box b = parse_box(box);
      if (static_cast<int>(b.size()) != arity) throw std::invalid_argument("--box dimension does not match --arity");
      return b;
    }
    if (!domain.empty()) {
      if (arity != 1) throw std::invalid_argument("--domain is for one variable; use --box");
      return {Interval::parse(domain)};
    }
    throw std::invalid_argument(arity == 1 ? "--domain is required" : "--box is required");
  }

  Json echo() const {
    Json j;
    j["function"] = function;
    j["arity"] = arity;
    if (!domain.empty()) j["domain"] = domain;
    if (!box.empty()) j["box"] = box;
    j["grid"] = grid;
    j["margin"] = real_json(margin);
    j["tol"] = tol ? real_json(*tol) : Json(nullptr);
    j["stat_tol"] = real_json(stat_tol);
    j["dini_tol"] = real_json(dini_tol);
    j["schedule"] = to_json(schedule);
    Json m = Json::array();
    for (Method x : methods) m.push_back(to_string(x));
    j["methods"] = m;
    Json c = Json::array();
    for (Property x : checks) c.push_back(to_string(x));
    j["checks"] = c;
    j["seed"] = seed;
    j["pairs"] = pairs;
    j["dirs"] = dirs;
    return j;
  }
};

inline std::vector<Property> parse_checks(const std::string& text) {
  std::vector<Property> out;
  std::stringstream ss(text);
  std::string item;
  auto add = [&](Property p) {
    if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  };
  while (std::getline(ss, item, ',')) {
    if (item == "all") {
      for (Property p : {Property::pseudoconvex, Property::strictly_pseudoconvex, Property::quasiconvex,
                         Property::semistrictly_quasiconvex}) {
        add(p);
      }
    } else if (item == "pseudoconvex") {
      add(Property::pseudoconvex);
    } else if (item == "strict-pseudoconvex") {
      add(Property::strictly_pseudoconvex);
    } else if (item == "quasiconvex") {
      add(Property::quasiconvex);
    } else if (item == "semistrict-quasiconvex") {
      add(Property::semistrictly_quasiconvex);
    } else {
      throw std::invalid_argument("unknown --check '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("--check is empty");
  return out;
}

/// "both" and "all" select the definition plus the structural method of each property.
inline std::vector<Method> parse_methods(const std::string& text) {
  std::vector<Method> out;
  std::stringstream ss(text);
  std::string item;
  auto add = [&](Method m) {
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  };
  while (std::getline(ss, item, ',')) {
    if (item == "both" || item == "all") {
      add(Method::definitional);
      add(Method::characterization);
      add(Method::martos);
    } else if (item == "definitional") {
      add(Method::definitional);
    } else if (item == "characterization") {
      add(Method::characterization);
    } else if (item == "martos") {
      add(Method::martos);
    } else {
      throw std::invalid_argument("unknown --method '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("--method is empty");
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Real> parse_vector(const std::string& text) {
  std::vector<Real> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* end = nullptr;
    const Real v = std::strtold(item.c_str(), &end);
    while (end && *end == ' ') ++end;
    if (item.empty() || !end || *end != '\0' || !std::isfinite(v)) {
      throw std::invalid_argument("malformed number '" + item + "'");
    }
    out.push_back(v);
  }
  return out;
}

/// What a command produces: the report, an optional CSV, the exit code and
/// a short diagnostic for stderr.
struct CommandResult {
  Json report;
  std::string csv;
  std::string message;
  int exit_code = kExitOk;
};

// ---------------------------------------------------------------------------
// classify

namespace detail {

template <UnivariateOracle Phi>
Verdict run_method(Property p, Method m, const Phi& phi, const SampledDomain& dom, const CheckConfig& cc) {
  switch (p) {
    case Property::pseudoconvex:
      return m == Method::definitional ? pseudoconvex_def(phi, dom, cc) : pseudoconvex_char(phi, dom, cc);
    case Property::strictly_pseudoconvex:
      return m == Method::definitional ? strictly_pseudoconvex_def(phi, dom, cc)
                                       : strictly_pseudoconvex_char(phi, dom, cc);
    case Property::quasiconvex:
      return m == Method::definitional ? quasiconvex_def(phi, dom, cc) : quasiconvex_martos(phi, dom, cc);
    case Property::semistrictly_quasiconvex:
      return m == Method::definitional ? semistrictly_quasiconvex_def(phi, dom, cc)
                                       : semistrictly_quasiconvex_martos(phi, dom, cc);
  }
  throw std::logic_error("unknown property");
}

inline std::vector<Method> applicable(Property p, const std::vector<Method>& requested) {
  std::vector<Method> out;
  for (Method m : requested) {
    if (m == Method::definitional || m == structural_method(p)) out.push_back(m);
  }
  return out;
}

inline Json witness_diff(const std::vector<Verdict>& vs) {
  Json diff = Json::object();
  for (const Verdict& v : vs) {
    Json w = Json::array();
    for (const Witness& x : v.witnesses) w.push_back(to_json(x));
    diff[to_string(v.method)] = {{"outcome", to_string(v.outcome)}, {"witnesses", w}};
  }
  return diff;
}

}  // namespace detail

inline CommandResult cmd_classify(const RunConfig& cfg) {
  cfg.validate();
  const FunctionAst f = parse(cfg.function, cfg.arity);
  const Box box = cfg.resolve_box();
  const CheckConfig cc = cfg.check();
  const TheoremConfig tc = cfg.theorem();

  CommandResult out;
  out.report["command"] = "classify";
  out.report["config"] = cfg.echo();

  std::optional<SampledDomain> dom;
  std::vector<std::pair<PointPair, LineRestriction>> lines;
  if (cfg.arity == 1) {
    dom = make_grid(box.front(), cfg.grid, cfg.margin);
  } else {
    for (const PointPair& p : sample_pairs(box, cfg.pairs, cfg.seed, tc.lattice_cells)) {
      lines.emplace_back(p, restrict(f, p.first, p.second, box));
    }
  }

  bool disagree = false;
  bool inconclusive = false;
  bool ran = false;
  Json results = Json::array();
  std::string message;
  for (Property p : cfg.checks) {
    const std::vector<Method> methods = detail::applicable(p, cfg.methods);
    if (methods.empty()) continue;
    ran = true;
    std::vector<Verdict> verdicts;
    for (Method m : methods) {
      if (dom) {
        verdicts.push_back(detail::run_method(p, m, f, *dom, cc));
      } else {
        std::vector<Verdict> parts;
        for (const auto& [pair, line] : lines) {
          const SampledDomain ldom = restriction_grid(line, tc);
          parts.push_back(detail::tag_pair(detail::run_method(p, m, line, ldom, cc), pair));
        }
        verdicts.push_back(detail::aggregate(std::move(parts), m, "over sampled line restrictions",
                                             cc.max_witnesses));
      }
    }
    bool any_inconclusive = false;
    std::optional<Outcome> first;
    bool same = true;
    for (const Verdict& v : verdicts) {
      if (v.inconclusive()) {
        any_inconclusive = true;
        continue;
      }
      if (!first) first = v.outcome;
      if (v.outcome != *first) same = false;
    }
    Json r;
    r["property"] = to_string(p);
    Json vj = Json::array();
    for (const Verdict& v : verdicts) vj.push_back(to_json(v));
    r["verdicts"] = vj;
    r["agree"] = same;
    r["inconclusive"] = any_inconclusive;
    if (!same) {
      r["witness_diff"] = detail::witness_diff(verdicts);
      disagree = true;
      message += std::string("methods disagree on ") + to_string(p) + ":";
      for (const Verdict& v : verdicts) message += std::string(" ") + to_string(v.method) + "=" + to_string(v.outcome);
      message += "\n";
    }
    if (any_inconclusive) {
      inconclusive = true;
      message += std::string("inconclusive: ") + to_string(p) + "\n";
    }
    results.push_back(r);
  }
  if (!ran) throw std::invalid_argument("no requested method applies to the requested checks");
  out.report["results"] = results;

  if (dom) {
    const std::vector<Real> v = sample_values(f, *dom);
    if (std::all_of(v.begin(), v.end(), [](Real x) { return std::isfinite(x); })) {
      out.report["decomposition"] = to_json(decompose(f, *dom, cc));
    } else {
      out.report["decomposition"] = nullptr;
    }
  }

  out.exit_code = disagree ? kExitDisagree : inconclusive ? kExitInconclusive : kExitOk;
  out.report["status"] = disagree ? "disagree" : inconclusive ? "inconclusive" : "agree";
  out.report["exit_code"] = out.exit_code;
  out.message = message;
  return out;
}

// ---------------------------------------------------------------------------
// decompose

inline std::string segment_csv(const MonotoneDecomposition& d) {
  std::string csv = "t,value,segment\n";
  char buf[96];
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%s\n", static_cast<double>(d.points[i]),
                  static_cast<double>(d.values[i]), d.label(i));
    csv += buf;
  }
  return csv;
}

inline CommandResult cmd_decompose(const RunConfig& cfg) {
  cfg.validate();
  if (cfg.arity != 1) throw std::invalid_argument("decompose needs a function of one variable");
  const FunctionAst f = parse(cfg.function, 1);
  const Box box = cfg.resolve_box();
  const SampledDomain dom = make_grid(box.front(), cfg.grid, cfg.margin);
  const CheckConfig cc = cfg.check();

  CommandResult out;
  out.report["command"] = "decompose";
  out.report["config"] = cfg.echo();
  std::optional<std::size_t> bad;
  const std::vector<Real> v = sample_values(f, dom, &bad);
  if (bad) {
    out.exit_code = kExitInconclusive;
    out.message = "function undefined at grid point t=" + detail::format_double(static_cast<double>(dom.points[*bad]));
    out.report["decomposition"] = nullptr;
    out.report["undefined_at"] = real_json(dom.points[*bad]);
    out.report["exit_code"] = out.exit_code;
    return out;
  }
  const MonotoneDecomposition d = decompose_values(dom, v, resolve_tol(cc, v));
  out.report["decomposition"] = to_json(d);
  out.report["segment_split"] = to_json(martos_segments_values(dom, v, d.tol), dom.points);
  out.report["exit_code"] = out.exit_code;
  out.csv = segment_csv(d);
  return out;
}

// ---------------------------------------------------------------------------
// dini

inline CommandResult cmd_dini(const RunConfig& cfg, const std::string& at, const std::string& dir) {
  cfg.validate();
  const FunctionAst f = parse(cfg.function, cfg.arity);
  const std::vector<Real> x = parse_vector(at);
  const std::vector<Real> u = parse_vector(dir);
  const std::size_t n = static_cast<std::size_t>(cfg.arity);
  if (x.size() != n || u.size() != n) throw std::invalid_argument("--at/--dir dimension does not match --arity");
  if (std::all_of(u.begin(), u.end(), [](Real c) { return c == 0; })) {
    throw std::invalid_argument("--dir must be nonzero");
  }

  Box box;
  if (!cfg.box.empty() || !cfg.domain.empty()) {
    box = cfg.resolve_box();
  } else {
    box.assign(n, Interval::open(-kInf, kInf));
  }
  if (!box_contains(box, x)) throw std::invalid_argument("--at lies outside the domain");

  std::vector<Real> target(n);
  for (std::size_t i = 0; i < n; ++i) target[i] = x[i] + u[i];
  const Interval feasible = line_feasible_set(x, u, box);
  const LineRestriction ray(f, x, target, feasible);
  const DiniEstimate est = lower_dini(ray, 0, 1, feasible, cfg.schedule, cfg.dini_tol);

  CommandResult out;
  out.report["command"] = "dini";
  out.report["config"] = cfg.echo();
  out.report["at"] = reals_json(x);
  out.report["direction"] = reals_json(u);
  out.report["value_at_point"] = real_json(f.evaluate(x).value);
  out.report["estimate"] = to_json(est);
  const DiniSign sign = classify(est, cfg.stat_tol);
  out.report["sign"] = sign == DiniSign::negative      ? "negative"
                       : sign == DiniSign::nonnegative ? "nonnegative"
                                                       : "undecided";
  out.exit_code = est.converged ? kExitOk : kExitInconclusive;
  if (!est.converged) out.message = "trailing minimum did not settle";
  out.report["exit_code"] = out.exit_code;
  return out;
}

// ---------------------------------------------------------------------------
// verify-theorems

struct VerifyOptions {
  std::string manifest;
  std::size_t random = 0;
  unsigned threads = 0;
  bool verbose = false;
  bool timing = false;
  /// Override the manifest grid/margin only when set on the command line.
  bool grid_set = false;
  bool margin_set = false;
};

inline Json tally_json(const BatteryResult::Tally& t) {
  return {{"total", t.total}, {"agree", t.agree}, {"disagree", t.disagree}, {"inconclusive", t.inconclusive}};
}

inline CommandResult cmd_verify_theorems(const RunConfig& cfg, const VerifyOptions& opt) {
  cfg.validate();
  Battery battery = load_battery(opt.manifest);
  TheoremConfig tc = cfg.theorem();
  tc.grid = opt.grid_set ? cfg.grid : battery.grid;
  tc.margin = opt.margin_set ? cfg.margin : battery.margin;

  std::vector<BatteryEntry> entries = battery.entries;
  for (std::size_t i = 0; i < opt.random; ++i) entries.push_back(random_piecewise_cubic(cfg.seed, i));

  const auto start = std::chrono::steady_clock::now();
  const BatteryResult res = run_battery(entries, tc, opt.threads);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  CommandResult out;
  out.report["command"] = "verify-theorems";
  Json echo = cfg.echo();
  echo.erase("function");
  echo.erase("arity");
  echo.erase("methods");
  echo.erase("checks");
  echo["manifest"] = opt.manifest;
  echo["random"] = opt.random;
  echo["grid"] = tc.grid;
  echo["margin"] = real_json(tc.margin);
  out.report["config"] = echo;

  Json entries_json = Json::array();
  std::size_t failed = 0;
  std::size_t violations = 0;
  std::size_t mismatches = 0;
  std::map<std::string, std::map<std::string, std::size_t>> per_theorem;
  for (const EntryResult& e : res.entries) {
    entries_json.push_back(to_json(e, opt.verbose));
    if (!e.passed()) {
      ++failed;
      out.message += "FAILED " + e.entry.id + (e.error.empty() ? "" : ": " + e.error) + "\n";
    }
    for (const TheoremReport& t : e.theorems) {
      ++per_theorem[to_string(t.theorem_id)][to_string(t.status)];
      if (!t.implication_holds) ++violations;
    }
    for (const LabelCheck& l : e.labels) mismatches += !l.matches;
  }
  Json summary;
  summary["entries"] = res.entries.size();
  summary["failed_entries"] = failed;
  summary["implication_violations"] = violations;
  summary["label_mismatches"] = mismatches;
  Json theorems = Json::object();
  for (const auto& [id, statuses] : per_theorem) {
    Json s = Json::object();
    for (const auto& [st, n] : statuses) s[st] = n;
    theorems[id] = s;
  }
  summary["theorems"] = theorems;
  Json comps = Json::object();
  for (const char* name : {"pseudoconvex: characterization vs definition",
                           "strictly pseudoconvex: characterization vs definition",
                           "strict implies non-strict (definition)",
                           "strict implies non-strict (characterization)", "quasiconvex: shape vs definition",
                           "semistrict: segment split implies definition"}) {
    comps[name] = tally_json(res.tally(name));
  }
  summary["comparisons"] = comps;
  out.report["summary"] = summary;
  out.report["entries"] = entries_json;
  if (opt.timing) out.report["timing"] = {{"seconds", seconds}};
  out.exit_code = res.passed() ? kExitOk : kExitDisagree;
  out.report["exit_code"] = out.exit_code;
  return out;
}

// ---------------------------------------------------------------------------
// Argument handling.

inline std::string render(const Json& report, const std::string& format) {
  return format == "text" ? dump_text(report) : dump_json(report);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << content;
}

/// Parses `args` (without the program name) and runs the selected command.
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized convexity classifier for scalar functions", "pcvx"};
  app.require_subcommand(1);

  RunConfig cfg;
  double margin = static_cast<double>(cfg.margin);
  std::optional<double> tol;
  double stat_tol = static_cast<double>(cfg.stat_tol);
  double t0 = static_cast<double>(cfg.schedule.t0);
  double ratio = static_cast<double>(cfg.schedule.ratio);
  std::string check_text = "all";
  std::string method_text = "both";
  std::string report_path;
  std::string csv_path;
  std::string at;
  std::string dir;
  VerifyOptions vopt;

  auto common = [&](CLI::App* sub, bool needs_function) {
    auto* fn = sub->add_option("--function", cfg.function, "expression in t (or x1..xn)");
    if (needs_function) fn->required();
    sub->add_option("--arity", cfg.arity, "number of variables")->check(CLI::PositiveNumber);
    sub->add_option("--domain", cfg.domain, "interval such as [-1,1] or (0,1]");
    sub->add_option("--box", cfg.box, "box such as [-1,1]x[-1,1]");
    sub->add_option("--grid", cfg.grid, "grid size (>= 8)");
    sub->add_option("--margin", margin, "offset replacing open endpoints");
    sub->add_option("--tol", tol, "absolute equality band (default: relative to max |f|)");
    sub->add_option("--stat-tol", stat_tol, "Dini value below -stat-tol counts as descent");
    sub->add_option("--dini-t0", t0, "first Dini step");
    sub->add_option("--dini-ratio", ratio, "geometric step ratio in (0,1)");
    sub->add_option("--dini-steps", cfg.schedule.steps, "number of Dini steps");
    sub->add_option("--seed", cfg.seed, "seed for pair and direction sampling");
    sub->add_option("--output", cfg.output, "json or text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--pairs", cfg.pairs, "sampled (x, y) pairs for several variables");
    sub->add_option("--dirs", cfg.dirs, "direction sample size for multivariate stationarity");
    sub->add_option("--report", report_path, "also write the JSON report to this file");
  };

  CLI::App* classify = app.add_subcommand("classify", "classify a function by every requested method");
  common(classify, true);
  classify->add_option("--check", check_text,
                       "pseudoconvex, strict-pseudoconvex, quasiconvex, semistrict-quasiconvex or all");
  classify->add_option("--method", method_text, "definitional, characterization, martos, both or all");

  CLI::App* decompose_cmd = app.add_subcommand("decompose", "split the grid into minus/hat/plus segments");
  common(decompose_cmd, true);
  decompose_cmd->add_option("--csv", csv_path, "write t,value,segment rows here ('-' for stdout)");

  CLI::App* dini = app.add_subcommand("dini", "lower Dini derivative at a point in a direction");
  common(dini, true);
  dini->add_option("--at", at, "point (comma separated for several variables)")->required();
  dini->add_option("--dir", dir, "direction (comma separated)")->required();

  CLI::App* verify = app.add_subcommand("verify-theorems", "run every check over a battery manifest");
  common(verify, false);
  verify->add_option("manifest", vopt.manifest, "battery manifest (JSON)")->required();
  verify->add_option("--random", vopt.random, "append this many seeded random piecewise-cubic functions");
  verify->add_option("--threads", vopt.threads, "worker threads (0 = hardware)");
  verify->add_flag("--verbose", vopt.verbose, "include passing verdicts in the report");
  verify->add_flag("--timing", vopt.timing, "include wall-clock timing (breaks byte identity)");

  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    cfg.margin = margin;
    if (tol) cfg.tol = *tol;
    cfg.stat_tol = stat_tol;
    cfg.schedule.t0 = t0;
    cfg.schedule.ratio = ratio;
    cfg.checks = parse_checks(check_text);
    cfg.methods = parse_methods(method_text);

    CommandResult result;
    if (classify->parsed()) {
      result = cmd_classify(cfg);
    } else if (decompose_cmd->parsed()) {
      result = cmd_decompose(cfg);
    } else if (dini->parsed()) {
      result = cmd_dini(cfg, at, dir);
    } else {
      vopt.grid_set = verify->count("--grid") > 0;
      vopt.margin_set = verify->count("--margin") > 0;
      result = cmd_verify_theorems(cfg, vopt);
    }

    if (!report_path.empty()) write_file(report_path, dump_json(result.report));
    if (csv_path == "-") {
      out << result.csv;
    } else {
      if (!csv_path.empty()) write_file(csv_path, result.csv);
      out << render(result.report, cfg.output);
    }
    if (!result.message.empty()) err << result.message;
    return result.exit_code;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const ManifestError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace pcvx
