#pragma once

// Function batteries: manifest I/O, a seeded random piecewise-cubic family and
// the runner that applies every theorem check and method comparison to each entry.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "pcvx/charact.hpp"
#include "pcvx/oracle.hpp"
#include "pcvx/theorems.hpp"

namespace pcvx {

/// Regularity declared per function; never detected from samples.
struct DeclaredProperties {
  bool lsc = false;
  bool radially_continuous = false;
  bool radially_usc = false;
  bool quasiconvex = false;
};

/// Classification labels expected from the definitional checkers.
struct ExpectedLabels {
  std::optional<bool> pseudoconvex;
  std::optional<bool> strictly_pseudoconvex;
  std::optional<bool> quasiconvex;
  std::optional<bool> semistrictly_quasiconvex;

  bool empty() const {
    return !pseudoconvex && !strictly_pseudoconvex && !quasiconvex && !semistrictly_quasiconvex;
  }
};

struct BatteryEntry {
  std::string id;
  std::string expression;
  int arity = 1;
  /// One interval for arity 1, one per coordinate otherwise.
  Box box;
  DeclaredProperties properties;
  ExpectedLabels expected;
  /// Equality band override for this entry (default: relative to max |f|).
  std::optional<Real> tol;

  bool univariate() const { return arity == 1; }
};

struct Battery {
  std::vector<BatteryEntry> entries;
  std::size_t grid = 257;
  Real margin = 1e-6L;
};

class ManifestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string box_to_string(const Box& box) {
  std::string s;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (i) s += "x";
    s += box[i].to_string();
  }
  return s;
}

inline void read_label(const nlohmann::json& j, const char* key, std::optional<bool>& out) {
  if (!j.contains(key)) return;
  if (!j[key].is_boolean()) throw ManifestError(std::string("expected.") + key + " must be a boolean");
  out = j[key].get<bool>();
}

}  // namespace detail

inline BatteryEntry parse_entry(const nlohmann::json& j) {
  if (!j.is_object()) throw ManifestError("battery entry must be an object");
  BatteryEntry e;
  try {
    e.id = j.at("id").get<std::string>();
    e.expression = j.at("expression").get<std::string>();
    e.arity = j.value("arity", 1);
  } catch (const nlohmann::json::exception& ex) {
    throw ManifestError(std::string("malformed battery entry: ") + ex.what());
  }
  if (e.arity < 1) throw ManifestError("entry '" + e.id + "': arity must be positive");
  try {
    if (j.contains("domain")) {
      e.box = {Interval::parse(j.at("domain").get<std::string>())};
    } else if (j.contains("box")) {
      e.box = parse_box(j.at("box").get<std::string>());
    } else {
      throw ManifestError("entry '" + e.id + "': needs \"domain\" or \"box\"");
    }
  } catch (const std::invalid_argument& ex) {
    throw ManifestError("entry '" + e.id + "': " + ex.what());
  }
  if (static_cast<int>(e.box.size()) != e.arity) {
    throw ManifestError("entry '" + e.id + "': domain dimension does not match arity");
  }
  if (j.contains("tol")) {
    if (!j["tol"].is_number() || !(j["tol"].get<double>() > 0)) {
      throw ManifestError("entry '" + e.id + "': tol must be a positive number");
    }
    e.tol = j["tol"].get<double>();
  }
  if (j.contains("properties")) {
    const auto& p = j["properties"];
    e.properties.lsc = p.value("lsc", false);
    e.properties.radially_continuous = p.value("radially_continuous", false);
    e.properties.radially_usc = p.value("radially_usc", false);
    e.properties.quasiconvex = p.value("quasiconvex", false);
  }
  if (j.contains("expected")) {
    const auto& x = j["expected"];
    detail::read_label(x, "pseudoconvex", e.expected.pseudoconvex);
    detail::read_label(x, "strictly_pseudoconvex", e.expected.strictly_pseudoconvex);
    detail::read_label(x, "quasiconvex", e.expected.quasiconvex);
    detail::read_label(x, "semistrictly_quasiconvex", e.expected.semistrictly_quasiconvex);
  }
  try {
    (void)parse(e.expression, e.arity);
  } catch (const ParseError& ex) {
    throw ManifestError("entry '" + e.id + "': " + ex.what());
  }
  return e;
}

inline nlohmann::json entry_to_json(const BatteryEntry& e) {
  nlohmann::json j;
  j["id"] = e.id;
  j["expression"] = e.expression;
  j["arity"] = e.arity;
  if (e.univariate()) {
    j["domain"] = e.box.front().to_string();
  } else {
    j["box"] = detail::box_to_string(e.box);
  }
  j["properties"] = {{"lsc", e.properties.lsc},
                     {"radially_continuous", e.properties.radially_continuous},
                     {"radially_usc", e.properties.radially_usc},
                     {"quasiconvex", e.properties.quasiconvex}};
  nlohmann::json x = nlohmann::json::object();
  if (e.expected.pseudoconvex) x["pseudoconvex"] = *e.expected.pseudoconvex;
  if (e.expected.strictly_pseudoconvex) x["strictly_pseudoconvex"] = *e.expected.strictly_pseudoconvex;
  if (e.expected.quasiconvex) x["quasiconvex"] = *e.expected.quasiconvex;
  if (e.expected.semistrictly_quasiconvex) {
    x["semistrictly_quasiconvex"] = *e.expected.semistrictly_quasiconvex;
  }
  j["expected"] = x;
  if (e.tol) j["tol"] = static_cast<double>(*e.tol);
  return j;
}

inline Battery parse_battery(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("functions") || !j["functions"].is_array()) {
    throw ManifestError("manifest needs a \"functions\" array");
  }
  Battery b;
  if (j.contains("grid")) {
    if (!j["grid"].is_number_unsigned()) throw ManifestError("\"grid\" must be a positive integer");
    b.grid = j["grid"].get<std::size_t>();
  }
  if (j.contains("margin")) {
    if (!j["margin"].is_number()) throw ManifestError("\"margin\" must be a number");
    b.margin = j["margin"].get<double>();
  }
  for (const auto& f : j["functions"]) b.entries.push_back(parse_entry(f));
  std::vector<std::string> ids;
  for (const auto& e : b.entries) ids.push_back(e.id);
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) throw ManifestError("duplicate entry id");
  return b;
}

inline Battery load_battery(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("cannot open manifest '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw ManifestError("manifest '" + path + "' is not valid JSON: " + ex.what());
  }
  return parse_battery(j);
}

inline nlohmann::json battery_to_json(const Battery& b) {
  nlohmann::json j;
  j["grid"] = b.grid;
  j["margin"] = static_cast<double>(b.margin);
  j["functions"] = nlohmann::json::array();
  for (const auto& e : b.entries) j["functions"].push_back(entry_to_json(e));
  return j;
}

// ---------------------------------------------------------------------------
// Random piecewise-cubic lsc functions on [-2, 2].
//
// Breakpoints sit on multiples of 1/8. Two shapes are drawn: a "valley" whose
// pieces are monotone toward a minimizing piece (constant plateau or bowl),
// with jumps allowed only in the monotone direction, and an unconstrained
// shape with arbitrary cubic pieces. At each breakpoint the guard (< or <=)
// gives the breakpoint to the lower side, which makes the function lsc.

namespace detail {

inline std::string coef(Real v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.21Lg", v);
  std::string s(buf);
  return v < 0 ? "(" + s + ")" : s;
}

struct Cubic {
  Real c = 0;  // expansion point
  Real a0 = 0, a1 = 0, a2 = 0, a3 = 0;

  Real at(Real t) const {
    const Real s = t - c;
    return a0 + s * (a1 + s * (a2 + s * a3));
  }

  std::string text() const {
    const std::string s = "(t - " + coef(c) + ")";
    std::string out = coef(a0);
    if (a1 != 0) out += " + " + coef(a1) + "*" + s;
    if (a2 != 0) out += " + " + coef(a2) + "*" + s + "^2";
    if (a3 != 0) out += " + " + coef(a3) + "*" + s + "^3";
    return out;
  }

  // Shifts a0 so that the piece takes value `target` at t.
  void anchor(Real t, Real target) { a0 += target - at(t); }
};

class Draw {
 public:
  explicit Draw(std::uint64_t seed) : rng_(seed) {}
  Real uniform(Real lo, Real hi) {
    const Real u = static_cast<Real>(rng_() >> 11) / static_cast<Real>(1ULL << 53);
    return lo + (hi - lo) * u;
  }
  std::size_t below(std::size_t m) { return static_cast<std::size_t>(rng_() % m); }
  bool chance(Real p) { return uniform(0, 1) < p; }

 private:
  std::mt19937_64 rng_;
};

// Expansion point on a 1/64 lattice inside [lo, hi].
inline Real lattice_point(Draw& d, Real lo, Real hi) {
  const long a = std::lround(lo * 64);
  const long b = std::lround(hi * 64);
  return static_cast<Real>(a + static_cast<long>(d.below(static_cast<std::size_t>(b - a + 1)))) / 64;
}

// Strictly monotone cubic on [lo, hi]; `sign` = +1 increasing, -1 decreasing.
// Occasionally a stationary inflection (zero slope at the expansion point).
inline Cubic monotone_piece(Draw& d, Real lo, Real hi, int sign) {
  Cubic p;
  p.c = lattice_point(d, lo, hi);
  const bool inflection = d.chance(0.15L);
  p.a1 = inflection ? 0 : sign * d.uniform(0.2L, 2);
  p.a3 = sign * d.uniform(inflection ? 0.2L : 0, 1);
  return p;
}

}  // namespace detail

inline BatteryEntry random_piecewise_cubic(std::uint64_t seed, std::size_t index) {
  using detail::Cubic;
  detail::Draw d(seed * 0x9E3779B97F4A7C15ULL + index * 0xBF58476D1CE4E5B9ULL + 1);

  const std::size_t pieces = 1 + d.below(4);
  std::vector<long> cuts;  // breakpoints in units of 1/8, strictly inside (-16, 16)
  while (cuts.size() + 1 < pieces) {
    const long m = -15 + static_cast<long>(d.below(31));
    if (std::find(cuts.begin(), cuts.end(), m) == cuts.end()) cuts.push_back(m);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<Real> edge{-2};
  for (long m : cuts) edge.push_back(static_cast<Real>(m) / 8);
  edge.push_back(2);

  std::vector<Cubic> piece(pieces);
  std::vector<bool> closed_right(pieces, true);  // guard "t <= b" (else "t < b")
  bool continuous = true;

  if (d.chance(0.7L)) {
    const std::size_t p = d.below(pieces);
    Cubic& m = piece[p];
    m.a0 = d.uniform(-1, 1);
    if (d.chance(0.4L)) {
      m.c = edge[p];  // constant plateau
    } else {
      m.c = detail::lattice_point(d, edge[p], edge[p + 1]);
      m.a2 = d.uniform(0.2L, 2);
      m.a3 = d.uniform(-1, 1) * m.a2 / 8;  // keeps the bowl unimodal on a width-4 piece
    }
    for (std::size_t k = p + 1; k < pieces; ++k) {
      const Real start = piece[k - 1].at(edge[k]);
      const Real jump = d.chance(0.3L) ? d.uniform(0.1L, 1) : 0;
      if (jump > 0) continuous = false;
      piece[k] = detail::monotone_piece(d, edge[k], edge[k + 1], +1);
      piece[k].anchor(edge[k], start + jump);
      closed_right[k - 1] = true;
    }
    for (std::size_t k = p; k-- > 0;) {
      const Real end = piece[k + 1].at(edge[k + 1]);
      const Real jump = d.chance(0.3L) ? d.uniform(0.1L, 1) : 0;
      if (jump > 0) continuous = false;
      piece[k] = detail::monotone_piece(d, edge[k], edge[k + 1], -1);
      piece[k].anchor(edge[k + 1], end + jump);
      closed_right[k] = false;
    }
  } else {
    for (std::size_t k = 0; k < pieces; ++k) {
      Cubic& q = piece[k];
      q.c = edge[k];
      q.a0 = d.uniform(-1, 1);
      q.a1 = d.uniform(-1, 1);
      q.a2 = d.uniform(-1, 1);
      q.a3 = d.uniform(-1, 1);
      if (k > 0 && d.chance(0.5L)) q.anchor(edge[k], piece[k - 1].at(edge[k]));
    }
    for (std::size_t k = 0; k + 1 < pieces; ++k) {
      const Real left = piece[k].at(edge[k + 1]);
      const Real right = piece[k + 1].at(edge[k + 1]);
      if (std::fabs(left - right) > 1e-12L) continuous = false;
      closed_right[k] = left <= right;
    }
  }

  std::string expr;
  if (pieces == 1) {
    expr = piece[0].text();
  } else {
    expr = "piecewise(";
    for (std::size_t k = 0; k + 1 < pieces; ++k) {
      expr += std::string("t ") + (closed_right[k] ? "<=" : "<") + " " + detail::coef(edge[k + 1]) + ": " +
              piece[k].text() + ", ";
    }
    expr += "else: " + piece.back().text() + ")";
  }

  BatteryEntry e;
  e.id = "random-" + std::to_string(seed) + "-" + std::to_string(index);
  e.expression = expr;
  e.arity = 1;
  e.box = {Interval::closed(-2, 2)};
  e.properties.lsc = true;
  e.properties.radially_continuous = continuous;
  e.properties.radially_usc = continuous;
  return e;
}

// ---------------------------------------------------------------------------
// Runner.

/// Two procedures that must agree on one function.
struct Comparison {
  std::string name;
  Verdict left;
  Verdict right;
  /// "equal" compares outcomes, "implies" requires left.holds() => right.holds().
  bool implication = false;
  bool inconclusive = false;
  bool agree = true;
};

struct LabelCheck {
  std::string label;
  bool expected = false;
  Outcome observed = Outcome::inconclusive;
  bool matches = false;
};

struct EntryResult {
  BatteryEntry entry;
  std::vector<TheoremReport> theorems;
  std::vector<Comparison> comparisons;
  std::vector<LabelCheck> labels;
  std::string error;

  bool passed() const {
    if (!error.empty()) return false;
    for (const auto& t : theorems) {
      if (!t.implication_holds) return false;
    }
    for (const auto& c : comparisons) {
      if (!c.inconclusive && !c.agree) return false;
    }
    for (const auto& l : labels) {
      if (!l.matches) return false;
    }
    return true;
  }
};

struct BatteryResult {
  std::vector<EntryResult> entries;

  bool passed() const {
    return std::all_of(entries.begin(), entries.end(), [](const EntryResult& e) { return e.passed(); });
  }

  /// Counts over the comparisons with the given name.
  struct Tally {
    std::size_t total = 0;
    std::size_t agree = 0;
    std::size_t disagree = 0;
    std::size_t inconclusive = 0;
  };

  Tally tally(const std::string& comparison) const {
    Tally t;
    for (const auto& e : entries) {
      for (const auto& c : e.comparisons) {
        if (c.name != comparison) continue;
        ++t.total;
        if (c.inconclusive) {
          ++t.inconclusive;
        } else if (c.agree) {
          ++t.agree;
        } else {
          ++t.disagree;
        }
      }
    }
    return t;
  }
};

namespace detail {

inline Comparison compare(std::string name, Verdict left, Verdict right, bool implication = false) {
  Comparison c;
  c.name = std::move(name);
  c.implication = implication;
  c.inconclusive = left.inconclusive() || right.inconclusive();
  if (!c.inconclusive) {
    c.agree = implication ? (!left.holds() || right.holds()) : left.outcome == right.outcome;
  }
  c.left = std::move(left);
  c.right = std::move(right);
  return c;
}

inline void expect_label(EntryResult& r, const char* label, const std::optional<bool>& expected,
                         const Verdict& observed) {
  if (!expected) return;
  LabelCheck l;
  l.label = label;
  l.expected = *expected;
  l.observed = observed.outcome;
  l.matches = !observed.inconclusive() && observed.holds() == *expected;
  r.labels.push_back(std::move(l));
}

inline EntryResult run_univariate(const BatteryEntry& e, const FunctionAst& f, const TheoremConfig& cfg) {
  EntryResult r;
  r.entry = e;
  const SampledDomain dom = make_grid(e.box.front(), cfg.grid, cfg.margin);
  const CheckConfig& cc = cfg.check;

  Verdict pdef = pseudoconvex_def(f, dom, cc);
  Verdict sdef = strictly_pseudoconvex_def(f, dom, cc);
  Verdict qdef = quasiconvex_def(f, dom, cc);
  Verdict ssq = semistrictly_quasiconvex_def(f, dom, cc);
  Verdict pchar = pseudoconvex_char(f, dom, cc);
  Verdict schar = strictly_pseudoconvex_char(f, dom, cc);

  expect_label(r, "pseudoconvex", e.expected.pseudoconvex, pdef);
  expect_label(r, "strictly_pseudoconvex", e.expected.strictly_pseudoconvex, sdef);
  expect_label(r, "quasiconvex", e.expected.quasiconvex, qdef);
  expect_label(r, "semistrictly_quasiconvex", e.expected.semistrictly_quasiconvex, ssq);

  r.comparisons.push_back(compare("pseudoconvex: characterization vs definition", pchar, pdef));
  r.comparisons.push_back(compare("strictly pseudoconvex: characterization vs definition", schar, sdef));
  r.comparisons.push_back(compare("strict implies non-strict (definition)", sdef, pdef, true));
  r.comparisons.push_back(compare("strict implies non-strict (characterization)", schar, pchar, true));
  r.comparisons.push_back(compare("quasiconvex: shape vs definition", quasiconvex_martos(f, dom, cc), qdef));
  r.comparisons.push_back(
      compare("semistrict: segment split implies definition", semistrictly_quasiconvex_martos(f, dom, cc), ssq,
              true));

  if (e.properties.lsc) r.theorems.push_back(check_pseudo_implies_quasi(f, dom, cfg, e.id));
  if (e.properties.radially_continuous) r.theorems.push_back(check_pseudo_iff_quasi_stationary(f, dom, cfg, e.id));
  if (e.properties.lsc) r.theorems.push_back(check_strict_iff_nonconstant(f, dom, cfg, e.id));
  return r;
}

inline EntryResult run_multivariate(const BatteryEntry& e, const FunctionAst& f, const TheoremConfig& cfg) {
  EntryResult r;
  r.entry = e;
  if (e.properties.lsc) {
    r.theorems.push_back(check_pseudo_iff_semistrict_lines(f, e.box, cfg, e.id));
    const TheoremReport& lines = r.theorems.back();
    if (!lines.premise_verdicts.empty()) expect_label(r, "pseudoconvex", e.expected.pseudoconvex, lines.premise_verdicts[0]);
    if (!lines.conclusion_verdicts.empty()) {
      expect_label(r, "semistrictly_quasiconvex", e.expected.semistrictly_quasiconvex, lines.conclusion_verdicts[0]);
    }
  }
  if (e.properties.quasiconvex && e.properties.radially_usc) {
    r.theorems.push_back(check_line_stationarity(f, e.box, cfg, e.id, true));
    r.theorems.push_back(check_line_stationarity(f, e.box, cfg, e.id, false));
  }
  return r;
}

}  // namespace detail

inline EntryResult run_entry(const BatteryEntry& e, const TheoremConfig& config) {
  try {
    TheoremConfig cfg = config;
    if (e.tol && !cfg.check.tol) cfg.check.tol = e.tol;
    const FunctionAst f = parse(e.expression, e.arity);
    return e.univariate() ? detail::run_univariate(e, f, cfg) : detail::run_multivariate(e, f, cfg);
  } catch (const std::exception& ex) {
    EntryResult r;
    r.entry = e;
    r.error = ex.what();
    return r;
  }
}

/// Runs every entry; entries are independent and are spread over `threads`
/// workers (0 = hardware concurrency). Results keep manifest order.
inline BatteryResult run_battery(const std::vector<BatteryEntry>& entries, const TheoremConfig& cfg,
                                 unsigned threads = 0) {
  BatteryResult out;
  out.entries.resize(entries.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, entries.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < entries.size(); ++i) out.entries[i] = run_entry(entries[i], cfg);
    return out;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < entries.size(); i += threads) out.entries[i] = run_entry(entries[i], cfg);
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

}  // namespace pcvx
