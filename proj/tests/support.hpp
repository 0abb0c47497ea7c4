#pragma once

// Test-side reference data that does not go through the library's own
// evaluation paths: polynomials with analytic derivatives, and hand-made
// value sequences.

#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "pcvx/expr.hpp"

namespace pcvx::test {

/// Polynomial with ascending coefficients; value and derivative by Horner.
struct Poly {
  std::vector<long double> c;

  long double value(long double t) const {
    long double v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
  }

  long double derivative(long double t) const {
    long double v = 0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * t + static_cast<long double>(k) * c[k];
    return v;
  }

  /// Expression text "c0 + c1*t + c2*t^2 ...", fed to the parser.
  std::string text() const {
    std::string s;
    char buf[64];
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (c[k] == 0) continue;
      std::snprintf(buf, sizeof buf, "(%.21Lg)", c[k]);
      if (!s.empty()) s += " + ";
      s += buf;
      if (k == 1) s += "*t";
      if (k > 1) s += "*t^" + std::to_string(k);
    }
    return s.empty() ? "0" : s;
  }
};

/// Ten fixed polynomials of degree <= 5, with |p''| <= 55 on [-2,2]. The
/// trailing-window estimate carries a bias of |p''| h / 2 with h up to
/// 1e-2 * 2^-15, so steeper curvature cannot meet 1e-5 on that schedule.
inline const std::vector<Poly>& fixed_polynomials() {
  static const std::vector<Poly> polys = {
      {{0, 1}},
      {{1, 0, 1}},
      {{0, 0, 0, 1}},
      {{0.5L, -2, 0, 1}},
      {{0, 0, -1, 0, 1}},
      {{0.25L, 0.25L, 0.25L, 0.25L, 0.25L, 0.25L}},
      {{-0.25L, 3, -1.5L, 0.5L}},
      {{2, 0, 0, 0, 0, -0.2L}},
      {{0, -1, 0.75L, 0, -0.125L, 0.05L}},
      {{0.04L, 0.08L, -0.12L, 0.16L, -0.2L, 0.24L}},
  };
  return polys;
}

/// Curvature up to about 220 on [-2,2]; used to check the bias bound itself.
inline const std::vector<Poly>& steep_polynomials() {
  static const std::vector<Poly> polys = {
      {{1, 1, 1, 1, 1, 1}},
      {{0.1L, 0.2L, -0.3L, 0.4L, -0.5L, 0.6L}},
      {{0, 0, 0, 0, 0, 1}},
  };
  return polys;
}

inline std::vector<long double> uniform_points(std::size_t n, long double lo, long double hi, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(static_cast<double>(lo), static_cast<double>(hi));
  std::vector<long double> out(n);
  for (auto& t : out) t = u(rng);
  return out;
}

}  // namespace pcvx::test
