#pragma once

// Executable checks of the implications among generalized convexity classes
// on concrete functions. A report with implication_holds == false means a
// checker disagrees with itself at grid resolution (a bug or a resolution
// artifact), never a refutation of the underlying mathematics.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "pcvx/charact.hpp"
#include "pcvx/dini.hpp"
#include "pcvx/domain.hpp"
#include "pcvx/expr.hpp"
#include "pcvx/oracle.hpp"
#include "pcvx/verdict.hpp"

namespace pcvx {

enum class TheoremId {
  pseudo_implies_quasi,
  pseudo_iff_quasi_stationary,
  pseudo_iff_semistrict_lines,
  strict_iff_nonconstant,
  line_stationarity_implication,
  line_stationarity_equivalence,
};

inline const char* to_string(TheoremId id) {
  switch (id) {
    case TheoremId::pseudo_implies_quasi: return "pseudoconvex-implies-quasiconvex";
    case TheoremId::pseudo_iff_quasi_stationary: return "pseudoconvex-iff-quasiconvex-with-minimizing-stationary-points";
    case TheoremId::pseudo_iff_semistrict_lines: return "pseudoconvex-iff-semistrict-with-nonstationary-lines";
    case TheoremId::strict_iff_nonconstant: return "strict-iff-radially-nonconstant";
    case TheoremId::line_stationarity_implication: return "line-stationarity-implication";
    case TheoremId::line_stationarity_equivalence: return "line-stationarity-equivalence";
  }
  return "?";
}

enum class CheckStatus {
  checked,       // premise held (or an equivalence was evaluated)
  vacuous,       // implication premise failed
  skipped,       // theorem hypothesis not met
  inconclusive,  // a decision-critical estimate did not converge
};

inline const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::checked: return "checked";
    case CheckStatus::vacuous: return "vacuous";
    case CheckStatus::skipped: return "skipped";
    case CheckStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

struct TheoremReport {
  TheoremId theorem_id = TheoremId::pseudo_implies_quasi;
  std::string function_id;
  CheckStatus status = CheckStatus::checked;
  std::vector<Verdict> premise_verdicts;
  std::vector<Verdict> conclusion_verdicts;
  /// No counterexample found. Inconclusive reports keep this true; check status.
  bool implication_holds = true;
  std::optional<std::vector<Witness>> counterexample;
  std::string detail;
};

struct TheoremConfig {
  CheckConfig check;
  std::size_t grid = 257;
  Real margin = 1e-6L;
  std::size_t pairs = 50;
  std::size_t dirs = 64;
  std::uint64_t seed = 0;
  /// Pair coordinates are drawn from a lattice with this many cells per box side.
  std::size_t lattice_cells = 16;
};

namespace detail {

inline void mark_counterexample(TheoremReport& r, std::vector<Witness> w, std::string why) {
  r.implication_holds = false;
  r.counterexample = std::move(w);
  r.detail = std::move(why);
}

inline std::vector<Witness> witnesses_of(const std::vector<Verdict>& vs) {
  std::vector<Witness> out;
  for (const Verdict& v : vs) {
    out.insert(out.end(), v.witnesses.begin(), v.witnesses.end());
  }
  return out;
}

template <UnivariateOracle Phi>
Verdict stationary_points_are_minimizers(const Phi& phi, const SampledDomain& dom,
                                         const CheckConfig& cfg) {
  const std::vector<Real> v = sample_values(phi, dom);
  const Real tol = resolve_tol(cfg, v);
  Verdict out;
  out.method = Method::characterization;
  out.tolerances = make_tolerances(cfg, tol);
  out.note = "every stationary grid point is a global minimizer";
  for (Real x : v) {
    if (!std::isfinite(x)) {
      out.outcome = Outcome::inconclusive;
      return out;
    }
  }
  const Real min_value = *std::min_element(v.begin(), v.end());
  WitnessSink sink(cfg.max_witnesses);
  bool undecided = false;
  for (std::size_t k = 0; k < dom.size(); ++k) {
    if (v[k] <= min_value + tol) continue;
    const Stationarity s =
        is_stationary(phi, dom.points[k], dom.interval, cfg.schedule, cfg.stat_tol, cfg.dini_tol);
    if (s.undecided) {
      undecided = true;
    } else if (s.stationary) {
      sink.add({{dom.points[k]}, {v[k]}, "stationary point is not a global minimizer", s.backward ? s.backward : s.forward});
    }
  }
  out.violations = sink.count();
  out.witnesses = sink.take();
  out.outcome = out.violations ? Outcome::fails : (undecided ? Outcome::inconclusive : Outcome::holds);
  return out;
}

inline bool any_inconclusive(const std::vector<Verdict>& vs) {
  return std::any_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.inconclusive(); });
}

inline bool all_hold(const std::vector<Verdict>& vs) {
  return std::all_of(vs.begin(), vs.end(), [](const Verdict& v) { return v.holds(); });
}

}  // namespace detail

/// Pseudoconvex implies semistrictly quasiconvex and quasiconvex.
template <UnivariateOracle Phi>
TheoremReport check_pseudo_implies_quasi(const Phi& phi, const SampledDomain& dom, const TheoremConfig& cfg,
                       std::string function_id = {}) {
  TheoremReport r;
  r.theorem_id = TheoremId::pseudo_implies_quasi;
  r.function_id = std::move(function_id);
  r.premise_verdicts.push_back(pseudoconvex_def(phi, dom, cfg.check));
  const Verdict& premise = r.premise_verdicts.front();
  if (premise.inconclusive()) {
    r.status = CheckStatus::inconclusive;
    return r;
  }
  if (premise.fails()) {
    r.status = CheckStatus::vacuous;
    return r;
  }
  r.conclusion_verdicts.push_back(semistrictly_quasiconvex_def(phi, dom, cfg.check));
  r.conclusion_verdicts.push_back(quasiconvex_def(phi, dom, cfg.check));
  if (detail::any_inconclusive(r.conclusion_verdicts)) {
    r.status = CheckStatus::inconclusive;
    return r;
  }
  if (!detail::all_hold(r.conclusion_verdicts)) {
    detail::mark_counterexample(r, detail::witnesses_of(r.conclusion_verdicts),
                                "pseudoconvex but not (semistrictly) quasiconvex");
  }
  return r;
}

/// Pseudoconvex iff quasiconvex and every stationary point is a global minimizer.
template <UnivariateOracle Phi>
TheoremReport check_pseudo_iff_quasi_stationary(const Phi& phi, const SampledDomain& dom, const TheoremConfig& cfg,
                       std::string function_id = {}) {
  TheoremReport r;
  r.theorem_id = TheoremId::pseudo_iff_quasi_stationary;
  r.function_id = std::move(function_id);
  r.premise_verdicts.push_back(pseudoconvex_def(phi, dom, cfg.check));
  r.conclusion_verdicts.push_back(quasiconvex_def(phi, dom, cfg.check));
  r.conclusion_verdicts.push_back(detail::stationary_points_are_minimizers(phi, dom, cfg.check));
  if (detail::any_inconclusive(r.premise_verdicts) || detail::any_inconclusive(r.conclusion_verdicts)) {
    r.status = CheckStatus::inconclusive;
    return r;
  }
  const bool lhs = r.premise_verdicts.front().holds();
  const bool rhs = detail::all_hold(r.conclusion_verdicts);
  r.detail = std::string("lhs=") + (lhs ? "true" : "false") + " rhs=" + (rhs ? "true" : "false");
  if (lhs != rhs) {
    auto w = detail::witnesses_of(r.premise_verdicts);
    auto c = detail::witnesses_of(r.conclusion_verdicts);
    w.insert(w.end(), c.begin(), c.end());
    detail::mark_counterexample(r, std::move(w), "sides of the equivalence disagree: " + r.detail);
  }
  return r;
}

/// True when some run of >= 3 consecutive grid values (two cells) is constant within tol.
inline bool has_constant_run(const std::vector<Real>& v, Real tol) {
  std::size_t start = 0;
  for (std::size_t k = 1; k < v.size(); ++k) {
    if (std::fabs(v[k] - v[start]) > tol) start = k;
    if (k - start >= 2) return true;
  }
  return false;
}

/// For pseudoconvex functions: strictly pseudoconvex iff no constant segment.
template <UnivariateOracle Phi>
TheoremReport check_strict_iff_nonconstant(const Phi& phi, const SampledDomain& dom, const TheoremConfig& cfg,
                       std::string function_id = {}) {
  TheoremReport r;
  r.theorem_id = TheoremId::strict_iff_nonconstant;
  r.function_id = std::move(function_id);
  r.premise_verdicts.push_back(pseudoconvex_def(phi, dom, cfg.check));
  const Verdict& premise = r.premise_verdicts.front();
  if (premise.inconclusive()) {
    r.status = CheckStatus::inconclusive;
    return r;
  }
  if (premise.fails()) {
    r.status = CheckStatus::skipped;
    r.detail = "premise (pseudoconvex) fails";
    return r;
  }
  r.conclusion_verdicts.push_back(strictly_pseudoconvex_def(phi, dom, cfg.check));
  const Verdict& strict = r.conclusion_verdicts.front();
  if (strict.inconclusive()) {
    r.status = CheckStatus::inconclusive;
    return r;
  }
  const std::vector<Real> v = sample_values(phi, dom);
  const bool nonconstant = !has_constant_run(v, strict.tolerances.tol);
  r.detail = std::string("strict=") + (strict.holds() ? "true" : "false") +
             " nonconstant=" + (nonconstant ? "true" : "false");
  if (strict.holds() != nonconstant) {
    detail::mark_counterexample(r, strict.witnesses, "strictness and radial nonconstancy disagree: " + r.detail);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Multivariate checks over sampled line restrictions.

using PointPair = std::pair<std::vector<Real>, std::vector<Real>>;

/// Seeded pairs of distinct box points with coordinates on a lattice of
/// `cells` cells per side (open endpoints excluded).
inline std::vector<PointPair> sample_pairs(const Box& box, std::size_t count, std::uint64_t seed,
                                           std::size_t cells = 16) {
  if (cells < 2) throw std::invalid_argument("lattice needs at least 2 cells");
  std::mt19937_64 rng(seed);
  auto coordinate = [&](const Interval& c) {
    if (!c.bounded()) throw std::invalid_argument("pair sampling needs a bounded box");
    const std::uint64_t lo_k = c.lo_closed() ? 0 : 1;
    const std::uint64_t hi_k = c.hi_closed() ? cells : cells - 1;
    const std::uint64_t k = lo_k + rng() % (hi_k - lo_k + 1);
    const Real w = static_cast<Real>(k) / static_cast<Real>(cells);
    return (1 - w) * c.lo() + w * c.hi();
  };
  std::vector<PointPair> pairs;
  while (pairs.size() < count) {
    PointPair p;
    for (const Interval& c : box) p.first.push_back(coordinate(c));
    for (const Interval& c : box) p.second.push_back(coordinate(c));
    if (p.first != p.second) pairs.push_back(std::move(p));
  }
  return pairs;
}

/// Deterministic unit directions: coordinate axes, pairwise diagonals, then a
/// golden-angle sequence (2-D) or seeded Gaussian directions (n >= 3). The
/// sample for a larger count extends the sample for a smaller one.
inline std::vector<std::vector<Real>> direction_sample(std::size_t arity, std::size_t count,
                                                       std::uint64_t seed) {
  std::vector<std::vector<Real>> dirs;
  auto push = [&](std::vector<Real> d) {
    if (dirs.size() < count) dirs.push_back(std::move(d));
  };
  for (std::size_t i = 0; i < arity; ++i) {
    for (const Real s : {Real(1), Real(-1)}) {
      std::vector<Real> d(arity, 0);
      d[i] = s;
      push(std::move(d));
    }
  }
  const Real inv_sqrt2 = 1 / std::sqrt(Real(2));
  for (std::size_t i = 0; i < arity; ++i) {
    for (std::size_t j = i + 1; j < arity; ++j) {
      for (const Real si : {Real(1), Real(-1)}) {
        for (const Real sj : {Real(1), Real(-1)}) {
          std::vector<Real> d(arity, 0);
          d[i] = si * inv_sqrt2;
          d[j] = sj * inv_sqrt2;
          push(std::move(d));
        }
      }
    }
  }
  std::mt19937_64 rng(seed);
  if (arity == 2) {
    const Real golden = std::numbers::pi_v<Real> * (3 - std::sqrt(Real(5)));
    const Real offset = static_cast<Real>(rng() % 1000003) / 1000003 * 2 * std::numbers::pi_v<Real>;
    for (std::size_t k = 0; dirs.size() < count; ++k) {
      const Real a = offset + golden * static_cast<Real>(k);
      push({std::cos(a), std::sin(a)});
    }
  } else {
    std::normal_distribution<double> gauss;
    while (dirs.size() < count) {
      std::vector<Real> d(arity);
      Real norm = 0;
      for (Real& c : d) {
        c = gauss(rng);
        norm += c * c;
      }
      if (norm == 0) continue;
      for (Real& c : d) c /= std::sqrt(norm);
      push(std::move(d));
    }
  }
  return dirs;
}

/// Grid over the feasible set of a restriction with t = 0 and t = 1 included.
inline SampledDomain restriction_grid(const LineRestriction& r, const TheoremConfig& cfg) {
  return with_anchors(make_grid(r.feasible_set(), cfg.grid, cfg.margin), {Real(0), Real(1)});
}

inline std::string describe_pair(const PointPair& p) {
  auto vec = [](const std::vector<Real>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%s%.17Lg", i ? "," : "", v[i]);
      s += buf;
    }
    return s + ")";
  };
  return "x=" + vec(p.first) + " y=" + vec(p.second);
}

namespace detail {

inline Verdict tag_pair(Verdict v, const PointPair& p) {
  for (Witness& w : v.witnesses) w.failed += " [line " + describe_pair(p) + "]";
  return v;
}

inline Verdict aggregate(std::vector<Verdict> parts, Method method, std::string note,
                         std::size_t max_witnesses) {
  Verdict out;
  out.method = method;
  out.note = std::move(note);
  bool undecided = false;
  for (Verdict& v : parts) {
    if (!v.fails() && !v.inconclusive()) continue;
    if (v.inconclusive()) undecided = true;
    out.violations += v.violations;
    for (Witness& w : v.witnesses) {
      if (v.fails() && out.witnesses.size() < max_witnesses) out.witnesses.push_back(std::move(w));
    }
  }
  if (!parts.empty()) out.tolerances = parts.front().tolerances;
  out.outcome = out.violations ? Outcome::fails : (undecided ? Outcome::inconclusive : Outcome::holds);
  return out;
}

// Along one line: every grid point that has a strictly lower grid point
// must be non-stationary.
inline Verdict lower_points_not_stationary(const LineRestriction& r, const SampledDomain& dom,
                                           const CheckConfig& cfg) {
  const std::vector<Real> v = sample_values(r, dom);
  const Real tol = resolve_tol(cfg, v);
  Verdict out;
  out.method = Method::characterization;
  out.tolerances = make_tolerances(cfg, tol);
  const Real min_value = *std::min_element(v.begin(), v.end());
  WitnessSink sink(cfg.max_witnesses);
  bool undecided = false;
  for (std::size_t k = 0; k < dom.size(); ++k) {
    if (!(min_value < v[k] - tol)) continue;
    const Stationarity s =
        is_stationary(r, dom.points[k], dom.interval, cfg.schedule, cfg.stat_tol, cfg.dini_tol);
    if (s.undecided) {
      undecided = true;
    } else if (s.stationary) {
      sink.add({{dom.points[k]}, {v[k]}, "f(y) < f(x) but t = 0 is stationary for the restriction at x",
                s.backward ? s.backward : s.forward});
    }
  }
  out.violations = sink.count();
  out.witnesses = sink.take();
  out.outcome = out.violations ? Outcome::fails : (undecided ? Outcome::inconclusive : Outcome::holds);
  return out;
}

}  // namespace detail

/// Pseudoconvex iff semistrictly quasiconvex and, whenever f(y) < f(x), t = 0
/// is not stationary for the restriction through x toward y. Both sides are
/// evaluated over the sampled lines; the stationarity side is instantiated at
/// every grid point of every sampled line (each is the base of a pair on it).
inline TheoremReport check_pseudo_iff_semistrict_lines(const FunctionAst& f, const Box& box, const TheoremConfig& cfg,
                              std::string function_id = {}) {
  TheoremReport r;
  r.theorem_id = TheoremId::pseudo_iff_semistrict_lines;
  r.function_id = std::move(function_id);
  std::vector<Verdict> lhs;
  std::vector<Verdict> semi;
  std::vector<Verdict> stat;
  for (const PointPair& p : sample_pairs(box, cfg.pairs, cfg.seed, cfg.lattice_cells)) {
    const LineRestriction line = restrict(f, p.first, p.second, box);
    const SampledDomain dom = restriction_grid(line, cfg);
    lhs.push_back(detail::tag_pair(pseudoconvex_def(line, dom, cfg.check), p));
    semi.push_back(detail::tag_pair(semistrictly_quasiconvex_def(line, dom, cfg.check), p));
    stat.push_back(detail::tag_pair(detail::lower_points_not_stationary(line, dom, cfg.check), p));
  }
  const std::size_t cap = cfg.check.max_witnesses;
  r.premise_verdicts.push_back(
      detail::aggregate(std::move(lhs), Method::definitional, "pseudoconvex on sampled lines", cap));
  r.conclusion_verdicts.push_back(detail::aggregate(std::move(semi), Method::definitional,
                                                    "semistrictly quasiconvex on sampled lines", cap));
  r.conclusion_verdicts.push_back(detail::aggregate(
      std::move(stat), Method::characterization, "no stationary base point above a lower point", cap));
  if (detail::any_inconclusive(r.premise_verdicts) || detail::any_inconclusive(r.conclusion_verdicts)) {
    r.status = CheckStatus::inconclusive;
    return r;
  }
  const bool left = r.premise_verdicts.front().holds();
  const bool right = detail::all_hold(r.conclusion_verdicts);
  r.detail = std::string("lhs=") + (left ? "true" : "false") + " rhs=" + (right ? "true" : "false");
  if (left != right) {
    auto w = detail::witnesses_of(r.premise_verdicts);
    auto c = detail::witnesses_of(r.conclusion_verdicts);
    w.insert(w.end(), c.begin(), c.end());
    detail::mark_counterexample(r, std::move(w), "sides of the equivalence disagree: " + r.detail);
  }
  return r;
}

/// Three statements about one pair (x, y) and its restriction phi:
///   base_stationary: x is a stationary point of f (over the direction sample);
///   zero_minimizes: t = 0 is a global minimizer of phi;
///   zero_stationary: t = 0 is a stationary point of phi.
struct LineStationarity {
  bool base_stationary = false;
  bool zero_minimizes = false;
  bool zero_stationary = false;
  bool undecided = false;
  std::size_t directions_used = 0;
  std::optional<std::vector<Real>> descent_direction;
};

inline LineStationarity evaluate_line_stationarity(const FunctionAst& f, const std::vector<Real>& x,
                                                   const std::vector<Real>& y, const Box& box,
                                                   const TheoremConfig& cfg) {
  const CheckConfig& cc = cfg.check;
  const std::size_t n = static_cast<std::size_t>(f.arity());
  LineStationarity out;

  // x stationary: no sampled direction of descent
  bool descent = false;
  bool unsure = false;
  for (const std::vector<Real>& d : direction_sample(n, cfg.dirs, cfg.seed)) {
    const Interval feasible = line_feasible_set(x, d, box);
    std::vector<Real> target(n);
    for (std::size_t i = 0; i < n; ++i) target[i] = x[i] + d[i];
    const LineRestriction ray(f, x, target, feasible);
    try {
      const DiniEstimate est = lower_dini(ray, 0, 1, feasible, cc.schedule, cc.dini_tol);
      ++out.directions_used;
      switch (classify(est, cc.stat_tol)) {
        case DiniSign::negative:
          if (!descent) out.descent_direction = d;
          descent = true;
          break;
        case DiniSign::undecided: unsure = true; break;
        case DiniSign::nonnegative: break;
      }
    } catch (const DirectionLeavesDomain&) {
    }
  }
  out.base_stationary = !descent;
  if (!descent && unsure) out.undecided = true;

  // t = 0 on the restriction: minimizer and stationarity
  const LineRestriction line = restrict(f, x, y, box);
  const SampledDomain dom = restriction_grid(line, cfg);
  std::vector<Real> values = sample_values(line, dom);
  const Real tol = resolve_tol(cc, values);
  const Real at_zero = line(0);
  // The probe abscissae around 0 refine the minimum near the decision point.
  for (int k = 0; k < cc.schedule.steps; ++k) {
    for (const Real s : {Real(1), Real(-1)}) {
      const Real t = s * cc.schedule.step(k);
      if (line.feasible_set().contains(t)) values.push_back(line(t));
    }
  }
  Real min_value = kInf;
  for (Real v : values) {
    if (!std::isnan(v)) min_value = std::fmin(min_value, v);
  }
  out.zero_minimizes = at_zero <= min_value + tol;

  const Stationarity st = is_stationary(line, 0, line.feasible_set(), cc.schedule, cc.stat_tol, cc.dini_tol);
  out.zero_stationary = st.stationary;
  if (st.undecided) out.undecided = true;
  return out;
}

namespace detail {

inline std::string statement_bits(bool a, bool b, bool c) {
  return std::string(a ? "1" : "0") + (b ? "1" : "0") + (c ? "1" : "0");
}

}  // namespace detail

/// (x stationary or t = 0 minimizes phi) iff t = 0 is stationary for phi, over
/// `cfg.pairs` sampled pairs. With `implication_only`, just the direction
/// "t = 0 stationary implies x stationary or t = 0 minimizes".
/// `detail` tallies pairs by the bit triple (base_stationary, zero_minimizes, zero_stationary).
inline TheoremReport check_line_stationarity(const FunctionAst& f, const Box& box,
                                             const TheoremConfig& cfg, std::string function_id = {},
                                             bool implication_only = false) {
  TheoremReport r;
  r.theorem_id = implication_only ? TheoremId::line_stationarity_implication
                                  : TheoremId::line_stationarity_equivalence;
  r.function_id = std::move(function_id);
  std::map<std::string, std::size_t> counts;
  std::size_t undecided = 0;
  std::vector<Witness> bad;
  for (const PointPair& p : sample_pairs(box, cfg.pairs, cfg.seed, cfg.lattice_cells)) {
    const LineStationarity e = evaluate_line_stationarity(f, p.first, p.second, box, cfg);
    if (e.undecided) {
      ++undecided;
      continue;
    }
    const std::string bits = detail::statement_bits(e.base_stationary, e.zero_minimizes, e.zero_stationary);
    ++counts[bits];
    const bool either = e.base_stationary || e.zero_minimizes;
    const bool ok = implication_only ? (either || !e.zero_stationary) : either == e.zero_stationary;
    if (!ok && bad.size() < cfg.check.max_witnesses) {
      bad.push_back({p.first,
                     {f.evaluate(p.first).value, f.evaluate(p.second).value},
                     "statements " + bits + " violate the rule [" + describe_pair(p) + "]",
                     {}});
    }
  }
  std::string tally;
  for (const auto& [bits, n] : counts) tally += (tally.empty() ? "" : " ") + bits + "=" + std::to_string(n);
  r.detail = tally + " undecided=" + std::to_string(undecided) + " dirs=" + std::to_string(cfg.dirs);
  if (!bad.empty()) {
    detail::mark_counterexample(r, std::move(bad), "statement mismatch: " + tally);
  } else if (undecided > 0) {
    r.status = CheckStatus::inconclusive;
  }
  return r;
}

}  // namespace pcvx
