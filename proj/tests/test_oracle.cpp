#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "pcvx/oracle.hpp"
#include "support.hpp"

using namespace pcvx;

namespace {

SampledDomain grid(const char* interval, std::size_t n) { return make_grid(Interval::parse(interval), n, 1e-6L); }

Verdict pdef(const char* src, const char* dom, std::size_t n = 101) {
  return pseudoconvex_def(parse(src, 1), grid(dom, n));
}

CheckConfig all_witnesses() {
  CheckConfig c;
  c.max_witnesses = 100000;
  return c;
}

bool has_witness_at(const Verdict& v, Real x, Real slack = 1e-12L) {
  return std::any_of(v.witnesses.begin(), v.witnesses.end(),
                     [&](const Witness& w) { return std::fabs(w.points.front() - x) <= slack; });
}

// Values looked up by grid position; lets tests feed arbitrary sequences.
struct Table {
  const SampledDomain* dom;
  std::vector<Real> v;
  Real operator()(Real t) const {
    const auto it = std::lower_bound(dom->points.begin(), dom->points.end(), t);
    if (it == dom->points.end() || *it != t) return kUndefined;
    return v[static_cast<std::size_t>(it - dom->points.begin())];
  }
};

bool naive_quasiconvex(const std::vector<Real>& v, Real tol) {
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t k = i + 1; k < v.size(); ++k)
      for (std::size_t j = k + 1; j < v.size(); ++j)
        if (v[k] > std::max(v[i], v[j]) + tol) return false;
  return true;
}

bool naive_semistrict(const std::vector<Real>& v, Real tol) {
  const std::size_t n = v.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (!(v[j] < v[i] - tol)) continue;
      for (std::size_t k = std::min(i, j) + 1; k < std::max(i, j); ++k)
        if (!(v[k] < v[i] - tol)) return false;
    }
  return true;
}

std::vector<Real> random_levels(std::mt19937_64& rng, std::size_t n) {
  std::vector<Real> v(n);
  for (auto& x : v) x = static_cast<Real>(rng() % 4);
  return v;
}

}  // namespace

TEST(PseudoconvexDef, Square) { EXPECT_TRUE(pdef("t^2", "[-1,1]").holds()); }

TEST(PseudoconvexDef, CubeFailsAtZero) {
  const Verdict v = pdef("t^3", "[-1,1]");
  ASSERT_TRUE(v.fails());
  EXPECT_TRUE(has_witness_at(v, 0));
  for (const Witness& w : v.witnesses) {
    EXPECT_EQ(w.points.size(), 2u);
    EXPECT_LT(w.values[1], w.values[0]);
  }
}

TEST(PseudoconvexDef, PlateauAboveMinimumFails) {
  const Verdict v = pdef("piecewise(t<0: 1, else: t)", "[-1,1]");
  ASSERT_TRUE(v.fails());
  EXPECT_TRUE(has_witness_at(v, -0.5L) || v.violations > v.witnesses.size());
  // Every grid point of the plateau pairs with y = 0.5 and quotient 0.
  const Verdict full = pseudoconvex_def(parse("piecewise(t<0: 1, else: t)", 1), grid("[-1,1]", 101),
                                        all_witnesses());
  EXPECT_TRUE(has_witness_at(full, -0.5L));
}

TEST(StrictlyPseudoconvexDef, Examples) {
  EXPECT_TRUE(strictly_pseudoconvex_def(parse("t^2", 1), grid("[-1,1]", 101)).holds());
  EXPECT_TRUE(strictly_pseudoconvex_def(parse("t", 1), grid("[0,1]", 101)).holds());
  const Verdict v = strictly_pseudoconvex_def(parse("max(0, abs(t) - 1)", 1), grid("[-2,2]", 161));
  ASSERT_TRUE(v.fails());
  for (const Witness& w : v.witnesses) {
    EXPECT_LE(std::fabs(w.points[0]), 1);
    EXPECT_LE(std::fabs(w.points[1]), 1);
  }
}

TEST(QuasiconvexDef, Examples) {
  EXPECT_TRUE(quasiconvex_def(parse("t^3", 1), grid("[-1,1]", 101)).holds());
  EXPECT_TRUE(quasiconvex_def(parse("abs(t)", 1), grid("[-1,1]", 101)).holds());
  const Verdict v = quasiconvex_def(parse("-t^2", 1), grid("[-1,1]", 5));
  ASSERT_TRUE(v.fails());
  const bool found = std::any_of(v.witnesses.begin(), v.witnesses.end(), [](const Witness& w) {
    return w.points == std::vector<Real>{-1, 0, 1};
  });
  EXPECT_TRUE(found);
}

TEST(SemistrictDef, Examples) {
  EXPECT_TRUE(semistrictly_quasiconvex_def(parse("max(0, t)", 1), grid("[-1,1]", 101)).holds());
  EXPECT_TRUE(semistrictly_quasiconvex_def(parse("t^2", 1), grid("[-1,1]", 101)).holds());
  const Verdict v = semistrictly_quasiconvex_def(parse("piecewise(t<0: 1, else: t)", 1), grid("[-1,1]", 5),
                                                 all_witnesses());
  ASSERT_TRUE(v.fails());
  const bool found = std::any_of(v.witnesses.begin(), v.witnesses.end(), [](const Witness& w) {
    return w.points == std::vector<Real>{-1, -0.5L, 0.5L};
  });
  EXPECT_TRUE(found);
}

TEST(Verdicts, UndefinedGridValueIsInconclusive) {
  const Verdict v = pdef("log(t)", "[-1,1]", 11);
  EXPECT_TRUE(v.inconclusive());
  ASSERT_EQ(v.witnesses.size(), 1u);
  EXPECT_EQ(v.witnesses[0].points[0], -1);
}

TEST(Verdicts, FailsImpliesWitnesses) {
  for (const char* s : {"t^3", "-t^2", "sin(6*t)", "piecewise(t<0: 1, else: t)", "t^2", "abs(t)"}) {
    const FunctionAst f = parse(s, 1);
    const SampledDomain d = grid("[-1,1]", 41);
    for (const Verdict& v : {pseudoconvex_def(f, d), strictly_pseudoconvex_def(f, d), quasiconvex_def(f, d),
                             semistrictly_quasiconvex_def(f, d)}) {
      if (v.fails()) {
        EXPECT_FALSE(v.witnesses.empty()) << s;
      }
      EXPECT_LE(v.witnesses.size(), v.violations);
    }
  }
}

TEST(Verdicts, DefaultToleranceBand) {
  const Verdict v = quasiconvex_def(parse("3*t^2", 1), grid("[-1,1]", 11));
  EXPECT_NEAR(static_cast<double>(v.tolerances.tol), 1e-9 * 4, 1e-24);
}

// A plateau below the band width reads as constant.
TEST(Verdicts, SubToleranceWiggleIsFlat) {
  const FunctionAst f = parse("max(0, abs(t) - 0.5) + 1e-12*sin(40*t)", 1);
  EXPECT_TRUE(quasiconvex_def(f, grid("[-1,1]", 101)).holds());
  EXPECT_TRUE(semistrictly_quasiconvex_def(f, grid("[-1,1]", 101)).holds());
}

// The running-maximum scans agree with naive triple loops.
TEST(OracleProperty, ScansMatchTripleLoops) {
  std::mt19937_64 rng(17);
  CheckConfig cfg;
  cfg.tol = 0.25L;
  for (int k = 0; k < 3000; ++k) {
    const std::size_t n = 3 + rng() % 9;
    const SampledDomain d = make_grid(Interval::closed(0, 1), n, 1e-6L);
    const Table tab{&d, random_levels(rng, n)};
    EXPECT_EQ(quasiconvex_def(tab, d, cfg).holds(), naive_quasiconvex(tab.v, 0.25L));
    EXPECT_EQ(semistrictly_quasiconvex_def(tab, d, cfg).holds(), naive_semistrict(tab.v, 0.25L));
  }
}

// A failing witness stays failing on every refinement that contains it.
TEST(OracleProperty, FailuresPersistUnderRefinement) {
  const FunctionAst cube = parse("t^3", 1);
  const FunctionAst hill = parse("-t^2", 1);
  const FunctionAst jump = parse("piecewise(t<0: 1, else: t)", 1);
  for (std::size_t n : {5u, 9u, 17u, 33u, 65u, 129u, 257u}) {
    const SampledDomain d = grid("[-1,1]", n);
    EXPECT_TRUE(pseudoconvex_def(cube, d).fails()) << n;
    EXPECT_TRUE(quasiconvex_def(hill, d).fails()) << n;
    EXPECT_TRUE(semistrictly_quasiconvex_def(jump, d).fails()) << n;
    const Verdict c = pseudoconvex_def(cube, d, all_witnesses());
    EXPECT_TRUE(has_witness_at(c, 0)) << n;
  }
}

// Definitional consistency: pseudoconvex implies both quasiconvexity notions.
TEST(OracleProperty, PseudoconvexImpliesQuasiconvex) {
  for (const char* s : {"t^2", "abs(t)", "t", "exp(t)", "max(0, abs(t) - 0.5)", "t^3 + t", "log(2 + t)",
                        "sqrt(abs(t))", "-t^2", "t^3", "piecewise(t<0: 1, else: t)"}) {
    const FunctionAst f = parse(s, 1);
    const SampledDomain d = grid("[-1,1]", 129);
    if (!pseudoconvex_def(f, d).holds()) continue;
    EXPECT_TRUE(quasiconvex_def(f, d).holds()) << s;
    EXPECT_TRUE(semistrictly_quasiconvex_def(f, d).holds()) << s;
  }
}

TEST(OracleProperty, WitnessesAreDeterministicAndSorted) {
  const FunctionAst f = parse("sin(5*t)", 1);
  const SampledDomain d = grid("[-1,1]", 97);
  const Verdict a = pseudoconvex_def(f, d);
  const Verdict b = pseudoconvex_def(f, d);
  ASSERT_EQ(a.witnesses.size(), b.witnesses.size());
  for (std::size_t i = 0; i < a.witnesses.size(); ++i) {
    EXPECT_EQ(a.witnesses[i].points, b.witnesses[i].points);
    if (i) {
      EXPECT_FALSE(a.witnesses[i] < a.witnesses[i - 1]);
    }
  }
}
