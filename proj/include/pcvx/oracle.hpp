#pragma once

// Definition-based classifiers: exhaustive scans over grid pairs/triples.
// These are the ground truth against which the structural checkers are compared.

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "pcvx/dini.hpp"
#include "pcvx/domain.hpp"
#include "pcvx/verdict.hpp"

namespace pcvx {

namespace detail {

// Lazily computed unit-direction Dini estimates at grid points.
template <UnivariateOracle Phi>
class DiniTable {
 public:
  DiniTable(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg)
      : phi_(phi), dom_(dom), cfg_(cfg), cache_(dom.size()) {}

  const DiniEstimate& at(std::size_t i, int dir) {
    auto& slot = cache_[i][dir > 0 ? 1 : 0];
    if (!slot) {
      slot = lower_dini(phi_, dom_.points[i], static_cast<Real>(dir), dom_.interval,
                        cfg_.schedule, cfg_.dini_tol);
    }
    return *slot;
  }

 private:
  const Phi& phi_;
  const SampledDomain& dom_;
  const CheckConfig& cfg_;
  std::vector<std::array<std::optional<DiniEstimate>, 2>> cache_;
};

// Shared pair scan for the (strict) pseudoconvexity definitions.
template <UnivariateOracle Phi>
Verdict pseudoconvex_pair_scan(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg,
                               bool strict) {
  std::optional<std::size_t> bad;
  const std::vector<Real> v = sample_values(phi, dom, &bad);
  const Real tol = resolve_tol(cfg, v);
  const Tolerances tolerances = make_tolerances(cfg, tol);
  if (bad) return undefined_grid_verdict(Method::definitional, dom, v, *bad, tolerances);

  DiniTable<Phi> dini(phi, dom, cfg);
  WitnessSink sink(cfg.max_witnesses);
  bool undecided = false;
  const std::size_t n = dom.size();

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const bool premise = strict ? v[j] <= v[i] + tol : v[j] < v[i] - tol;
      if (!premise) continue;
      const int dir = j > i ? 1 : -1;
      const DiniEstimate& est = dini.at(i, dir);
      switch (classify(est, cfg.stat_tol)) {
        case DiniSign::negative:
          break;
        case DiniSign::undecided:
          undecided = true;
          break;
        case DiniSign::nonnegative: {
          DiniEstimate scaled = est;
          scaled.value *= std::fabs(dom.points[j] - dom.points[i]);
          sink.add({{dom.points[i], dom.points[j]},
                    {v[i], v[j]},
                    strict ? "f(y) <= f(x) but lower Dini derivative at x toward y is not negative"
                           : "f(y) < f(x) but lower Dini derivative at x toward y is not negative",
                    std::move(scaled)});
          break;
        }
      }
    }
  }

  Verdict out;
  out.method = Method::definitional;
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
  return out;
}

}  // namespace detail

/// f(y) < f(x) implies the lower Dini derivative at x toward y is negative,
/// checked over every ordered pair of grid points.
template <UnivariateOracle Phi>
Verdict pseudoconvex_def(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg = {}) {
  return detail::pseudoconvex_pair_scan(phi, dom, cfg, false);
}

/// y != x and f(y) <= f(x) implies a negative lower Dini derivative at x toward y.
template <UnivariateOracle Phi>
Verdict strictly_pseudoconvex_def(const Phi& phi, const SampledDomain& dom,
                                  const CheckConfig& cfg = {}) {
  return detail::pseudoconvex_pair_scan(phi, dom, cfg, true);
}

/// phi(z) <= max(phi(x), phi(y)) + tol for every grid triple x < z < y.
/// The inner quantifier over z is taken as a running maximum.
template <UnivariateOracle Phi>
Verdict quasiconvex_def(const Phi& phi, const SampledDomain& dom, const CheckConfig& cfg = {}) {
  if (dom.size() < 3) throw std::invalid_argument("quasiconvexity check needs at least 3 points");
  std::optional<std::size_t> bad;
  const std::vector<Real> v = sample_values(phi, dom, &bad);
  const Real tol = resolve_tol(cfg, v);
  const Tolerances tolerances = make_tolerances(cfg, tol);
  if (bad) return detail::undefined_grid_verdict(Method::definitional, dom, v, *bad, tolerances);

  detail::WitnessSink sink(cfg.max_witnesses);
  const std::size_t n = dom.size();
  for (std::size_t i = 0; i + 2 < n; ++i) {
    std::size_t arg = i + 1;
    for (std::size_t j = i + 2; j < n; ++j) {
      if (v[j - 1] > v[arg]) arg = j - 1;
      if (v[arg] > std::max(v[i], v[j]) + tol) {
        sink.add({{dom.points[i], dom.points[arg], dom.points[j]},
                  {v[i], v[arg], v[j]},
                  "f(z) > max(f(x), f(y)) for x < z < y",
                  {}});
      }
    }
  }

  Verdict out;
  out.method = Method::definitional;
  out.tolerances = tolerances;
  out.violations = sink.count();
  out.witnesses = sink.take();
  out.outcome = out.violations ? Outcome::fails : Outcome::holds;
  return out;
}

/// f(y) < f(x) implies f(z) < f(x) for every grid point z strictly between.
template <UnivariateOracle Phi>
Verdict semistrictly_quasiconvex_def(const Phi& phi, const SampledDomain& dom,
                                     const CheckConfig& cfg = {}) {
  std::optional<std::size_t> bad;
  const std::vector<Real> v = sample_values(phi, dom, &bad);
  const Real tol = resolve_tol(cfg, v);
  const Tolerances tolerances = make_tolerances(cfg, tol);
  if (bad) return detail::undefined_grid_verdict(Method::definitional, dom, v, *bad, tolerances);

  detail::WitnessSink sink(cfg.max_witnesses);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(dom.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    for (const std::ptrdiff_t step : {std::ptrdiff_t{1}, std::ptrdiff_t{-1}}) {
      std::ptrdiff_t arg = -1;  // argmax of v strictly between i and j
      for (std::ptrdiff_t j = i + step; j >= 0 && j < n; j += step) {
        const std::ptrdiff_t prev = j - step;
        if (prev != i && (arg < 0 || v[prev] > v[arg])) arg = prev;
        if (arg < 0 || !(v[j] < v[i] - tol)) continue;
        if (v[arg] >= v[i] - tol) {
          const auto ui = static_cast<std::size_t>(i);
          const auto ua = static_cast<std::size_t>(arg);
          const auto uj = static_cast<std::size_t>(j);
          sink.add({{dom.points[ui], dom.points[ua], dom.points[uj]},
                    {v[ui], v[ua], v[uj]},
                    "f(y) < f(x) but f(z) is not below f(x) for z between x and y",
                    {}});
        }
      }
    }
  }

  Verdict out;
  out.method = Method::definitional;
  out.tolerances = tolerances;
  out.violations = sink.count();
  out.witnesses = sink.take();
  out.outcome = out.violations ? Outcome::fails : Outcome::holds;
  return out;
}

}  // namespace pcvx
