#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "pcvx/dini.hpp"
#include "pcvx/domain.hpp"

namespace pcvx {

enum class Outcome { holds, fails, inconclusive };
enum class Method { definitional, characterization, martos };

inline const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::holds: return "holds";
    case Outcome::fails: return "fails";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::definitional: return "definitional";
    case Method::characterization: return "characterization";
    case Method::martos: return "martos";
  }
  return "?";
}

/// A concrete failed inequality: the grid points involved, their values, and
/// optionally the Dini estimate that decided it.
struct Witness {
  std::vector<Real> points;
  std::vector<Real> values;
  std::string failed;
  std::optional<DiniEstimate> dini;

  friend bool operator<(const Witness& a, const Witness& b) {
    if (a.points != b.points) return a.points < b.points;
    return a.failed < b.failed;
  }
};

struct Tolerances {
  Real tol = 0;
  Real stat_tol = kDefaultStatTol;
  Real dini_tol = kDefaultDiniTol;
  DiniSchedule schedule;
};

struct Verdict {
  Outcome outcome = Outcome::inconclusive;
  Method method = Method::definitional;
  std::vector<Witness> witnesses;
  /// Total number of violated instances; witnesses holds at most max_witnesses of them.
  std::size_t violations = 0;
  Tolerances tolerances;
  std::string note;

  bool holds() const noexcept { return outcome == Outcome::holds; }
  bool fails() const noexcept { return outcome == Outcome::fails; }
  bool inconclusive() const noexcept { return outcome == Outcome::inconclusive; }
};

/// Settings shared by the oracle and characterization checkers.
struct CheckConfig {
  /// Absolute equality band; when unset, 1e-9 * (1 + max |phi| on the grid).
  std::optional<Real> tol;
  Real stat_tol = kDefaultStatTol;
  Real dini_tol = kDefaultDiniTol;
  DiniSchedule schedule;
  std::size_t max_witnesses = 16;
};

inline Real resolve_tol(const CheckConfig& cfg, const std::vector<Real>& values) {
  if (cfg.tol) return *cfg.tol;
  Real m = 0;
  for (Real v : values) {
    if (std::isfinite(v)) m = std::max(m, std::fabs(v));
  }
  return 1e-9L * (1 + m);
}

inline Tolerances make_tolerances(const CheckConfig& cfg, Real tol) {
  return Tolerances{tol, cfg.stat_tol, cfg.dini_tol, cfg.schedule};
}

/// Grid evaluation; `bad` receives the first index with an undefined value.
template <UnivariateOracle Phi>
std::vector<Real> sample_values(const Phi& phi, const SampledDomain& dom,
                                std::optional<std::size_t>* bad = nullptr) {
  std::vector<Real> v(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) {
    v[i] = phi(dom.points[i]);
    if (bad && !*bad && std::isnan(v[i])) *bad = i;
  }
  return v;
}

namespace detail {

inline Verdict undefined_grid_verdict(Method method, const SampledDomain& dom,
                                      const std::vector<Real>& values, std::size_t index,
                                      const Tolerances& tolerances) {
  Verdict v;
  v.method = method;
  v.outcome = Outcome::inconclusive;
  v.tolerances = tolerances;
  v.witnesses.push_back({{dom.points[index]}, {values[index]}, "function undefined at grid point", {}});
  v.note = "evaluation failure on the grid";
  return v;
}

/// Bounded, canonically ordered witness collection.
class WitnessSink {
 public:
  explicit WitnessSink(std::size_t cap) : cap_(cap) {}

  void add(Witness w) {
    ++count_;
    if (kept_.size() < cap_) kept_.push_back(std::move(w));
  }

  std::size_t count() const noexcept { return count_; }

  std::vector<Witness> take() {
    std::stable_sort(kept_.begin(), kept_.end());
    return std::move(kept_);
  }

 private:
  std::size_t cap_;
  std::size_t count_ = 0;
  std::vector<Witness> kept_;
};

}  // namespace detail

}  // namespace pcvx
