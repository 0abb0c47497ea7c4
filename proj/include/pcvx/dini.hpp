#pragma once

// Lower Dini directional derivative estimation for univariate oracles.
//
// The liminf as s -> 0+ of [phi(t + s u) - phi(t)] / s is approximated by the
// minimum difference quotient over the trailing half of a geometric step
// schedule t0 * ratio^k. Directions are normalized to |u| = 1 before probing
// and the result is scaled back by |u|.

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pcvx/domain.hpp"
#include "pcvx/expr.hpp"

namespace pcvx {

/// Anything callable as phi(t) -> value, NaN meaning undefined.
template <class F>
concept UnivariateOracle = std::regular_invocable<const F&, Real> &&
                           std::convertible_to<std::invoke_result_t<const F&, Real>, Real>;

inline constexpr Real kDefaultStatTol = 1e-7L;
inline constexpr Real kDefaultDiniTol = 1e-6L;

struct DiniSchedule {
  Real t0 = 1e-2L;
  Real ratio = 0.6L;
  int steps = 40;

  Real step(int k) const { return t0 * std::pow(ratio, static_cast<Real>(k)); }
  Real smallest() const { return step(steps - 1); }

  void validate() const {
    if (!(t0 > 0)) throw std::invalid_argument("dini schedule: t0 must be positive");
    if (!(ratio > 0 && ratio < 1)) throw std::invalid_argument("dini schedule: ratio must be in (0,1)");
    if (steps < 1) throw std::invalid_argument("dini schedule: steps must be positive");
    if (smallest() < 1e-12L) throw std::invalid_argument("dini schedule: smallest step below 1e-12");
  }

  friend bool operator==(const DiniSchedule&, const DiniSchedule&) = default;
};

struct DiniEstimate {
  Real value = 0;
  /// Running minima of the quotients across the trailing window (non-increasing).
  std::vector<Real> tail_min_trace;
  bool converged = false;
  int probes_in_domain = 0;
  int probes_undefined = 0;
};

class DirectionLeavesDomain : public std::domain_error {
 public:
  DirectionLeavesDomain() : std::domain_error("direction leaves domain") {}
};

namespace detail {

// Quotients growing without bound (jumps, infinite slopes): one sign, monotone
// in magnitude, and growth at least half of the s^-1/2 rate across the window.
inline int divergence_sign(const std::vector<Real>& q, const std::vector<Real>& h) {
  if (q.size() < 3) return 0;
  const bool positive = q.front() > 0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!std::isfinite(q[k])) return 0;
    if ((q[k] > 0) != positive || q[k] == 0) return 0;
    if (k > 0 && std::fabs(q[k]) < std::fabs(q[k - 1])) return 0;
  }
  const Real needed = Real(0.5) * std::sqrt(h.front() / h.back());
  if (std::fabs(q.back()) < needed * std::fabs(q.front())) return 0;
  return positive ? 1 : -1;
}

}  // namespace detail

/// Lower Dini derivative of phi at t in direction u, restricted to `feasible`.
/// Steps that leave `feasible` are skipped; undefined probe values are skipped.
template <UnivariateOracle Phi>
DiniEstimate lower_dini(const Phi& phi, Real t, Real u, const Interval& feasible,
                        const DiniSchedule& schedule, Real dini_tol = kDefaultDiniTol) {
  if (u == 0 || std::isnan(u)) throw std::invalid_argument("dini direction must be nonzero");
  const Real scale = std::fabs(u);
  const Real dir = u > 0 ? Real(1) : Real(-1);
  const Real base = phi(t);
  if (std::isnan(base)) throw std::domain_error("function undefined at the base point");

  struct Probe {
    Real h;
    Real value;
  };
  std::vector<Probe> in_domain;
  in_domain.reserve(static_cast<std::size_t>(schedule.steps));
  for (int k = 0; k < schedule.steps; ++k) {
    const Real probe = t + dir * schedule.step(k);
    if (!feasible.contains(probe)) continue;
    const Real h = std::fabs(probe - t);
    if (h == 0) continue;
    in_domain.push_back({h, phi(probe)});
  }
  if (in_domain.empty()) throw DirectionLeavesDomain();

  DiniEstimate est;
  est.probes_in_domain = static_cast<int>(in_domain.size());
  const std::size_t window_start = in_domain.size() / 2;

  std::vector<Real> q;
  std::vector<Real> h;
  for (std::size_t k = window_start; k < in_domain.size(); ++k) {
    if (std::isnan(in_domain[k].value)) {
      ++est.probes_undefined;
      continue;
    }
    const Real quotient = (in_domain[k].value - base) / in_domain[k].h;
    if (std::isnan(quotient)) {
      ++est.probes_undefined;
      continue;
    }
    q.push_back(quotient);
    h.push_back(in_domain[k].h);
  }

  if (q.empty()) {
    est.value = kInf;
    est.converged = true;
    return est;
  }

  Real running = kInf;
  for (Real v : q) {
    running = std::fmin(running, v);
    est.tail_min_trace.push_back(running);
  }

  if (const int s = detail::divergence_sign(q, h); s != 0) {
    est.value = s > 0 ? kInf : -kInf;
    est.converged = true;
    return est;
  }

  est.value = est.tail_min_trace.back() * scale;
  if (est.tail_min_trace.size() < 2) {
    est.converged = true;
  } else {
    const Real last = est.tail_min_trace.back();
    const Real prev = est.tail_min_trace[est.tail_min_trace.size() - 2];
    if (std::isinf(last) || std::isinf(prev)) {
      est.converged = last == prev;
    } else {
      est.converged = std::fabs(last - prev) <= dini_tol * (1 + std::fabs(last));
    }
  }
  return est;
}

/// Three-valued sign decision on a Dini estimate.
enum class DiniSign { negative, nonnegative, undecided };

inline DiniSign classify(const DiniEstimate& est, Real stat_tol) {
  if (!est.converged) return DiniSign::undecided;
  return est.value < -stat_tol ? DiniSign::negative : DiniSign::nonnegative;
}

struct Stationarity {
  bool stationary = false;
  /// True when the answer rests on an unconverged estimate.
  bool undecided = false;
  std::optional<DiniEstimate> forward;   // u = +1
  std::optional<DiniEstimate> backward;  // u = -1
};

/// t is stationary iff no feasible direction in {+1, -1} has a negative lower
/// Dini derivative.
template <UnivariateOracle Phi>
Stationarity is_stationary(const Phi& phi, Real t, const Interval& feasible,
                           const DiniSchedule& schedule, Real stat_tol = kDefaultStatTol,
                           Real dini_tol = kDefaultDiniTol) {
  Stationarity out;
  auto probe = [&](Real u) -> std::optional<DiniEstimate> {
    try {
      return lower_dini(phi, t, u, feasible, schedule, dini_tol);
    } catch (const DirectionLeavesDomain&) {
      return std::nullopt;
    }
  };
  out.forward = probe(1);
  out.backward = probe(-1);

  bool descent = false;
  bool unsure = false;
  for (const auto* est : {&out.forward, &out.backward}) {
    if (!*est) continue;
    switch (classify(**est, stat_tol)) {
      case DiniSign::negative: descent = true; break;
      case DiniSign::undecided: unsure = true; break;
      case DiniSign::nonnegative: break;
    }
  }
  out.stationary = !descent;
  out.undecided = !descent && unsure;
  return out;
}

}  // namespace pcvx
