#pragma once

// Structural characterizations on a sampled grid:
//  * the three-part split (I-, I^, I+) with strict monotone flanks and the
//    "no stationary point outside the minimizer set" condition for
//    (strict) pseudoconvexity;
//  * the decreasing / constant / strictly increasing segment split for
//    semistrict quasiconvexity;
//  * the monotone / monotone-off-an-endpoint / valley patterns for
//    quasiconvexity.

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pcvx/dini.hpp"
#include "pcvx/domain.hpp"
#include "pcvx/verdict.hpp"

namespace pcvx {

/// Half-open index range [first, last).
struct IndexRange {
  std::size_t first = 0;
  std::size_t last = 0;

  bool empty() const noexcept { return first >= last; }
  std::size_t size() const noexcept { return empty() ? 0 : last - first; }
  bool contains(std::size_t i) const noexcept { return i >= first && i < last; }

  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

enum class Pattern { empty_min_increasing, empty_min_decreasing, valley };

inline const char* to_string(Pattern p) {
  switch (p) {
    case Pattern::empty_min_increasing: return "empty_min_increasing";
    case Pattern::empty_min_decreasing: return "empty_min_decreasing";
    case Pattern::valley: return "valley";
  }
  return "?";
}

struct MonotoneDecomposition {
  IndexRange i_minus;
  IndexRange i_hat;
  IndexRange i_plus;
  std::optional<Real> min_value;
  Pattern pattern = Pattern::valley;
  Real tol = 0;
  std::vector<Real> points;
  std::vector<Real> values;
  /// Structural violations: non-contiguous argmin band, non-strict flanks.
  std::vector<Witness> violations;

  bool structurally_valid() const noexcept { return violations.empty(); }

  const char* label(std::size_t i) const {
    if (i_hat.contains(i)) return "hat";
    if (i_minus.contains(i)) return "minus";
    return "plus";
  }
};

/// Decomposes grid values into (I-, I^, I+). Values must be finite.
inline MonotoneDecomposition decompose_values(const SampledDomain& dom, std::vector<Real> v,
                                              Real tol) {
  const std::size_t n = v.size();
  if (n == 0 || n != dom.size()) throw std::invalid_argument("decompose: grid/value size mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(v[i])) {
      throw std::domain_error("decompose: non-finite value at grid point " + std::to_string(i));
    }
  }

  MonotoneDecomposition d;
  d.tol = tol;
  d.points = dom.points;

  const Real min_value = *std::min_element(v.begin(), v.end());
  std::size_t first = n;
  std::size_t last = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] <= min_value + tol) {
      first = std::min(first, i);
      last = i;
    }
  }
  for (std::size_t k = first; k <= last; ++k) {
    if (v[k] > min_value + tol) {
      d.violations.push_back({{dom.points[first], dom.points[k], dom.points[last]},
                              {v[first], v[k], v[last]},
                              "argmin band is not contiguous",
                              {}});
      break;
    }
  }

  for (std::size_t k = 0; k + 1 < first; ++k) {
    if (!(v[k + 1] < v[k] - tol)) {
      d.violations.push_back({{dom.points[k], dom.points[k + 1]},
                              {v[k], v[k + 1]},
                              "not strictly decreasing left of the minimizer set",
                              {}});
    }
  }
  for (std::size_t k = last + 1; k + 1 < n; ++k) {
    if (!(v[k + 1] > v[k] + tol)) {
      d.violations.push_back({{dom.points[k], dom.points[k + 1]},
                              {v[k], v[k + 1]},
                              "not strictly increasing right of the minimizer set",
                              {}});
    }
  }

  d.i_minus = {0, first};
  d.i_hat = {first, last + 1};
  d.i_plus = {last + 1, n};
  d.min_value = min_value;
  d.pattern = Pattern::valley;

  // Infimum at an open endpoint is not attained: if the band sits on the
  // margin point and the grid is strictly monotone, treat the minimizer set as empty.
  if (d.violations.empty() && first == last) {
    if (first == 0 && !dom.interval.lo_closed()) {
      d.pattern = Pattern::empty_min_increasing;
      d.i_minus = {0, 0};
      d.i_hat = {0, 0};
      d.i_plus = {0, n};
      d.min_value.reset();
    } else if (last == n - 1 && !dom.interval.hi_closed()) {
      d.pattern = Pattern::empty_min_decreasing;
      d.i_minus = {0, n};
      d.i_hat = {n, n};
      d.i_plus = {n, n};
      d.min_value.reset();
    }
  }
  d.values = std::move(v);
  return d;
}

template <UnivariateOracle Phi>
MonotoneDecomposition decompose(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg = {}) {
  std::vector<Real> v = sample_values(phi, dom);
  const Real tol = resolve_tol(cfg, v);
  return decompose_values(dom, std::move(v), tol);
}

namespace detail {

template <UnivariateOracle Phi>
Verdict pseudoconvex_char_impl(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg,
                               bool strict) {
  std::optional<std::size_t> bad;
  std::vector<Real> v = sample_values(phi, dom, &bad);
  const Real tol = resolve_tol(cfg, v);
  const Tolerances tolerances = make_tolerances(cfg, tol);
  if (!bad) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i])) {
        bad = i;
        break;
      }
    }
  }
  if (bad) return undefined_grid_verdict(Method::characterization, dom, v, *bad, tolerances);

  const MonotoneDecomposition d = decompose_values(dom, std::move(v), tol);
  WitnessSink sink(cfg.max_witnesses);
  for (const Witness& w : d.violations) sink.add(w);

  // For the strict variant the minimizer set may span at most one grid cell;
  // when it spans a full cell the true minimizer lies strictly inside, so both
  // band points must be non-stationary.
  IndexRange exempt = d.i_hat;
  if (strict && d.i_hat.size() > 2) {
    sink.add({{d.points[d.i_hat.first], d.points[d.i_hat.last - 1]},
              {d.values[d.i_hat.first], d.values[d.i_hat.last - 1]},
              "minimizer set wider than one grid cell",
              {}});
  }
  if (strict && d.i_hat.size() == 2) exempt = {0, 0};

  bool undecided = false;
  for (std::size_t k = 0; k < dom.size(); ++k) {
    if (exempt.contains(k)) continue;
    const Stationarity s =
        is_stationary(phi, dom.points[k], dom.interval, cfg.schedule, cfg.stat_tol, cfg.dini_tol);
    if (s.undecided) {
      undecided = true;
      continue;
    }
    if (s.stationary) {
      Witness w{{d.points[k]},
                {d.values[k]},
                strict ? "stationary point other than the minimizer"
                       : "stationary point outside the minimizer set",
                {}};
      w.dini = s.backward ? s.backward : s.forward;
      sink.add(std::move(w));
    }
  }

  Verdict out;
  out.method = Method::characterization;
  out.tolerances = tolerances;
  out.violations = sink.count();
  out.witnesses = sink.take();
  if (out.violations > 0) {
    out.outcome = Outcome::fails;
  } else if (undecided) {
    out.outcome = Outcome::inconclusive;
    out.note = "a Dini estimate at a decision-critical point did not converge";
  } else {
    out.outcome = Outcome::holds;
  }
  out.note += (out.note.empty() ? "" : "; ") + std::string("pattern=") + to_string(d.pattern);
  return out;
}

}  // namespace detail

/// Pseudoconvexity via the three-part split plus the stationarity condition.
template <UnivariateOracle Phi>
Verdict pseudoconvex_char(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg = {}) {
  return detail::pseudoconvex_char_impl(phi, dom, cfg, false);
}

/// Strict variant: the minimizer set is (at grid resolution) a single point.
template <UnivariateOracle Phi>
Verdict strictly_pseudoconvex_char(const Phi& phi, const SampledDomain& dom,
                                   const CheckConfig& cfg = {}) {
  return detail::pseudoconvex_char_impl(phi, dom, cfg, true);
}

struct SegmentSplit {
  IndexRange decreasing;
  IndexRange constant;
  IndexRange increasing;
  bool valid = false;
  /// Where the scan stopped when invalid.
  std::optional<Witness> stop;
};

/// Greedy scan: strictly decreasing run, then a constant run (within tol of
/// its first value), then strictly increasing to the end.
inline SegmentSplit martos_segments_values(const SampledDomain& dom, const std::vector<Real>& v,
                                           Real tol) {
  const std::size_t n = v.size();
  SegmentSplit s;
  if (n == 0) return s;
  std::size_t k = 0;
  while (k + 1 < n && v[k + 1] < v[k] - tol) ++k;
  const std::size_t c = k;
  while (k + 1 < n && std::fabs(v[k + 1] - v[c]) <= tol) ++k;
  s.decreasing = {0, c};
  s.constant = {c, k + 1};
  std::size_t j = k;
  while (j + 1 < n && v[j + 1] > v[j] + tol) ++j;
  s.increasing = {k + 1, j + 1};
  s.valid = j + 1 == n;
  if (!s.valid) {
    s.stop = Witness{{dom.points[j], dom.points[j + 1]},
                     {v[j], v[j + 1]},
                     "segment split breaks: value does not rise after the constant part",
                     {}};
  }
  return s;
}

template <UnivariateOracle Phi>
SegmentSplit martos_segments(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg = {}) {
  const std::vector<Real> v = sample_values(phi, dom);
  for (Real x : v) {
    if (!std::isfinite(x)) throw std::domain_error("martos_segments: non-finite grid value");
  }
  return martos_segments_values(dom, v, resolve_tol(cfg, v));
}

/// Semistrict quasiconvexity via the segment split.
template <UnivariateOracle Phi>
Verdict semistrictly_quasiconvex_martos(const Phi& phi, const SampledDomain& dom,
                                        const CheckConfig& cfg = {}) {
  std::optional<std::size_t> bad;
  const std::vector<Real> v = sample_values(phi, dom, &bad);
  const Real tol = resolve_tol(cfg, v);
  Verdict out;
  out.method = Method::martos;
  out.tolerances = make_tolerances(cfg, tol);
  if (bad) return detail::undefined_grid_verdict(Method::martos, dom, v, *bad, out.tolerances);
  const SegmentSplit s = martos_segments_values(dom, v, tol);
  if (s.valid) {
    out.outcome = Outcome::holds;
  } else {
    out.outcome = Outcome::fails;
    out.violations = 1;
    out.witnesses.push_back(*s.stop);
  }
  return out;
}

enum class QuasiPattern { none, monotone, monotone_off_endpoint, valley };

inline const char* to_string(QuasiPattern p) {
  switch (p) {
    case QuasiPattern::none: return "none";
    case QuasiPattern::monotone: return "monotone";
    case QuasiPattern::monotone_off_endpoint: return "monotone_off_endpoint";
    case QuasiPattern::valley: return "valley";
  }
  return "?";
}

struct QuasiconvexShape {
  QuasiPattern pattern = QuasiPattern::none;
  /// Split index of the valley pattern (last point of the decreasing part).
  std::size_t split = 0;
  std::optional<Witness> stop;
};

/// Matches the grid values against: (i) increasing or decreasing throughout;
/// (ii) increasing except at the first point, or decreasing except at the last;
/// (iii) decreasing up to a split point and increasing after it.
inline QuasiconvexShape quasiconvex_shape(const SampledDomain& dom, const std::vector<Real>& v,
                                          Real tol) {
  const std::size_t n = v.size();
  QuasiconvexShape out;
  if (n < 2) {
    out.pattern = QuasiPattern::monotone;
    return out;
  }
  auto up = [&](std::size_t k) { return v[k + 1] >= v[k] - tol; };    // weakly increasing step
  auto down = [&](std::size_t k) { return v[k + 1] <= v[k] + tol; };  // weakly decreasing step

  bool all_up = true;
  bool all_down = true;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    all_up = all_up && up(k);
    all_down = all_down && down(k);
  }
  if (all_up || all_down) {
    out.pattern = QuasiPattern::monotone;
    return out;
  }

  std::size_t p = 0;
  while (p + 1 < n && down(p)) ++p;
  std::size_t j = p;
  while (j + 1 < n && up(j)) ++j;
  if (j + 1 != n) {
    out.pattern = QuasiPattern::none;
    out.stop = Witness{{dom.points[p], dom.points[j], dom.points[j + 1]},
                       {v[p], v[j], v[j + 1]},
                       "values fall again after rising",
                       {}};
    return out;
  }
  out.split = p;
  out.pattern = (p == 1 || p == n - 2) ? QuasiPattern::monotone_off_endpoint : QuasiPattern::valley;
  return out;
}

/// Quasiconvexity via the monotone/valley pattern characterization.
template <UnivariateOracle Phi>
Verdict quasiconvex_martos(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg = {}) {
  std::optional<std::size_t> bad;
  const std::vector<Real> v = sample_values(phi, dom, &bad);
  const Real tol = resolve_tol(cfg, v);
  Verdict out;
  out.method = Method::martos;
  out.tolerances = make_tolerances(cfg, tol);
  if (bad) return detail::undefined_grid_verdict(Method::martos, dom, v, *bad, out.tolerances);
  const QuasiconvexShape shape = quasiconvex_shape(dom, v, tol);
  out.note = std::string("pattern=") + to_string(shape.pattern);
  if (shape.pattern == QuasiPattern::none) {
    out.outcome = Outcome::fails;
    out.violations = 1;
    out.witnesses.push_back(*shape.stop);
  } else {
    out.outcome = Outcome::holds;
  }
  return out;
}

}  // namespace pcvx
