#pragma once

// Intervals, evaluation grids and line restrictions of multivariate functions.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pcvx/expr.hpp"

namespace pcvx {

/// Interval with endpoint openness flags. Infinite endpoints are open.
class Interval {
 public:
  Interval() = default;

  static Interval make(Real lo, Real hi, bool lo_closed, bool hi_closed) {
    if (std::isnan(lo) || std::isnan(hi)) throw std::invalid_argument("interval endpoint is NaN");
    if (std::isinf(lo) && lo_closed) throw std::invalid_argument("infinite endpoint must be open");
    if (std::isinf(hi) && hi_closed) throw std::invalid_argument("infinite endpoint must be open");
    if (lo > hi) throw std::invalid_argument("interval has lo > hi");
    if (lo == hi && !(lo_closed && hi_closed)) throw std::invalid_argument("interval is empty");
    Interval iv;
    iv.lo_ = lo;
    iv.hi_ = hi;
    iv.lo_closed_ = lo_closed;
    iv.hi_closed_ = hi_closed;
    return iv;
  }

  static Interval closed(Real lo, Real hi) { return make(lo, hi, true, true); }
  static Interval open(Real lo, Real hi) { return make(lo, hi, false, false); }

  /// Parses "[a,b]", "(a,b]", "[a,b)" or "(a,b)"; "inf" and "-inf" allowed on open ends.
  static Interval parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
      while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
      return s;
    };
    const std::string_view s = trim(text);
    if (s.size() < 5) throw std::invalid_argument("malformed interval '" + std::string(text) + "'");
    const char open_c = s.front();
    const char close_c = s.back();
    if ((open_c != '[' && open_c != '(') || (close_c != ']' && close_c != ')')) {
      throw std::invalid_argument("interval must start with [ or ( and end with ] or )");
    }
    const std::string_view body = s.substr(1, s.size() - 2);
    const std::size_t comma = body.find(',');
    if (comma == std::string_view::npos || body.find(',', comma + 1) != std::string_view::npos) {
      throw std::invalid_argument("interval needs exactly one comma: '" + std::string(text) + "'");
    }
    auto number = [&](std::string_view part) -> Real {
      const std::string p(trim(part));
      if (p == "inf" || p == "+inf") return kInf;
      if (p == "-inf") return -kInf;
      char* end = nullptr;
      const Real v = std::strtold(p.c_str(), &end);
      if (p.empty() || end != p.c_str() + p.size() || std::isnan(v)) {
        throw std::invalid_argument("malformed interval endpoint '" + p + "'");
      }
      return v;
    };
    return make(number(body.substr(0, comma)), number(body.substr(comma + 1)), open_c == '[',
                close_c == ']');
  }

  Real lo() const noexcept { return lo_; }
  Real hi() const noexcept { return hi_; }
  bool lo_closed() const noexcept { return lo_closed_; }
  bool hi_closed() const noexcept { return hi_closed_; }

  bool degenerate() const noexcept { return lo_ == hi_; }
  bool bounded() const noexcept { return std::isfinite(lo_) && std::isfinite(hi_); }

  bool contains(Real t) const noexcept {
    if (std::isnan(t)) return false;
    const bool above = lo_closed_ ? t >= lo_ : t > lo_;
    const bool below = hi_closed_ ? t <= hi_ : t < hi_;
    return above && below;
  }

  std::string to_string() const {
    auto end = [](Real v) {
      if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17Lg", v);
      return std::string(buf);
    };
    return std::string(lo_closed_ ? "[" : "(") + end(lo_) + "," + end(hi_) + (hi_closed_ ? "]" : ")");
  }

  friend bool operator==(const Interval&, const Interval&) = default;

 private:
  Real lo_ = 0;
  Real hi_ = 0;
  bool lo_closed_ = true;
  bool hi_closed_ = true;
};

/// Interval plus a strictly increasing evaluation grid.
struct SampledDomain {
  Interval interval;
  std::vector<Real> points;
  Real endpoint_margin = 0;

  std::size_t size() const noexcept { return points.size(); }
};

/// n uniformly spaced points over the closed core of the interval; an open
/// endpoint e is replaced by e -/+ endpoint_margin.
inline SampledDomain make_grid(const Interval& interval, std::size_t n, Real endpoint_margin) {
  if (n < 2) throw std::invalid_argument("grid needs at least 2 points");
  if (!(endpoint_margin > 0)) throw std::invalid_argument("endpoint margin must be positive");
  if (interval.degenerate()) throw std::invalid_argument("degenerate interval (single point)");
  if (!interval.bounded()) throw std::invalid_argument("cannot grid an unbounded interval");

  const Real lo = interval.lo_closed() ? interval.lo() : interval.lo() + endpoint_margin;
  const Real hi = interval.hi_closed() ? interval.hi() : interval.hi() - endpoint_margin;
  if (!(lo < hi)) throw std::invalid_argument("endpoint margin swallows the interval");

  SampledDomain dom{interval, {}, endpoint_margin};
  dom.points.resize(n);
  const Real last = static_cast<Real>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    const Real w = static_cast<Real>(i);
    dom.points[i] = ((last - w) * lo + w * hi) / last;
  }
  dom.points.front() = lo;
  dom.points.back() = hi;
  return dom;
}

/// Returns a copy of the grid with extra abscissae merged in (those outside
/// the interval are ignored).
inline SampledDomain with_points(SampledDomain dom, const std::vector<Real>& extra) {
  for (Real t : extra) {
    if (dom.interval.contains(t)) dom.points.push_back(t);
  }
  std::sort(dom.points.begin(), dom.points.end());
  dom.points.erase(std::unique(dom.points.begin(), dom.points.end()), dom.points.end());
  return dom;
}

/// Like with_points, but a grid point closer than a quarter cell to an extra
/// abscissa is moved onto it instead of keeping both (near-duplicate points
/// make value comparisons inside the tolerance band meaningless).
inline SampledDomain with_anchors(SampledDomain dom, const std::vector<Real>& extra) {
  const std::size_t n = dom.points.size();
  const Real cell = n > 1 ? (dom.points.back() - dom.points.front()) / static_cast<Real>(n - 1) : 0;
  std::vector<Real> rest;
  for (Real t : extra) {
    if (!dom.interval.contains(t)) continue;
    auto it = std::lower_bound(dom.points.begin(), dom.points.end(), t);
    std::size_t best = static_cast<std::size_t>(it - dom.points.begin());
    if (best == n || (best > 0 && t - dom.points[best - 1] < dom.points[best] - t)) --best;
    if (std::fabs(dom.points[best] - t) < cell / 4) {
      dom.points[best] = t;
    } else {
      rest.push_back(t);
    }
  }
  return with_points(std::move(dom), rest);
}

using Box = std::vector<Interval>;

/// Parses "[a,b]x[c,d]x..." into a box.
inline Box parse_box(std::string_view text) {
  Box box;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t close = text.find_first_of("])", start);
    if (close == std::string_view::npos) throw std::invalid_argument("malformed box");
    box.push_back(Interval::parse(text.substr(start, close - start + 1)));
    start = close + 1;
    bool separated = false;
    while (start < text.size() && (text[start] == 'x' || text[start] == '*' ||
                                   std::isspace(static_cast<unsigned char>(text[start])))) {
      separated = separated || !std::isspace(static_cast<unsigned char>(text[start]));
      ++start;
    }
    if (separated && start == text.size()) throw std::invalid_argument("box ends with a separator");
  }
  if (box.empty()) throw std::invalid_argument("empty box");
  return box;
}

inline bool box_contains(const Box& box, std::span<const Real> x) {
  if (box.size() != x.size()) return false;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (!box[i].contains(x[i])) return false;
  }
  return true;
}

/// phi(t) = f((1-t) x + t y) on the feasible set X(x,y) of the box.
class LineRestriction {
 public:
  LineRestriction(FunctionAst f, std::vector<Real> x, std::vector<Real> y, Interval feasible)
      : f_(std::move(f)), x_(std::move(x)), y_(std::move(y)), feasible_(feasible) {}

  const std::vector<Real>& base_point() const noexcept { return x_; }
  const std::vector<Real>& target_point() const noexcept { return y_; }
  const Interval& feasible_set() const noexcept { return feasible_; }
  const FunctionAst& function() const noexcept { return f_; }

  std::vector<Real> point_at(Real t) const {
    std::vector<Real> z(x_.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (1 - t) * x_[i] + t * y_[i];
    return z;
  }

  /// Undefined outside the feasible set.
  Real operator()(Real t) const {
    if (!feasible_.contains(t)) return kUndefined;
    const std::vector<Real> z = point_at(t);
    return f_.evaluate(z).value;
  }

 private:
  FunctionAst f_;
  std::vector<Real> x_;
  std::vector<Real> y_;
  Interval feasible_;
};

/// The set of t with x + t d inside the box, in closed form from the
/// per-coordinate bounds. d must be nonzero.
inline Interval line_feasible_set(std::span<const Real> x, std::span<const Real> d, const Box& box) {
  Real lo = -kInf;
  Real hi = kInf;
  bool lo_closed = false;
  bool hi_closed = false;
  auto tighten_lo = [&](Real v, bool closed) {
    if (v > lo) {
      lo = v;
      lo_closed = closed;
    } else if (v == lo) {
      lo_closed = lo_closed && closed;
    }
  };
  auto tighten_hi = [&](Real v, bool closed) {
    if (v < hi) {
      hi = v;
      hi_closed = closed;
    } else if (v == hi) {
      hi_closed = hi_closed && closed;
    }
  };

  bool moves = false;
  for (std::size_t i = 0; i < box.size(); ++i) {
    if (d[i] == 0) continue;
    moves = true;
    const Interval& c = box[i];
    const Real a = (c.lo() - x[i]) / d[i];  // t where the coordinate hits lo
    const Real b = (c.hi() - x[i]) / d[i];
    if (d[i] > 0) {
      tighten_lo(a, c.lo_closed() && std::isfinite(a));
      tighten_hi(b, c.hi_closed() && std::isfinite(b));
    } else {
      tighten_lo(b, c.hi_closed() && std::isfinite(b));
      tighten_hi(a, c.lo_closed() && std::isfinite(a));
    }
  }
  if (!moves) throw std::invalid_argument("line direction is zero");
  return Interval::make(lo, hi, lo_closed, hi_closed);
}

inline LineRestriction restrict(const FunctionAst& f, std::vector<Real> x, std::vector<Real> y,
                                const Box& box) {
  const std::size_t n = static_cast<std::size_t>(f.arity());
  if (x.size() != n || y.size() != n || box.size() != n) {
    throw std::invalid_argument("point/box dimension does not match function arity");
  }
  if (x == y) throw std::invalid_argument("restriction needs x != y");
  if (!box_contains(box, x) || !box_contains(box, y)) {
    throw std::invalid_argument("restriction endpoints must lie in the box");
  }
  std::vector<Real> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = y[i] - x[i];
  const Interval feasible = line_feasible_set(x, d, box);
  return LineRestriction(f, std::move(x), std::move(y), feasible);
}

}  // namespace pcvx
