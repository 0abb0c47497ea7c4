#include <gtest/gtest.h>

#include <cstdlib>

#include "pcvx/report.hpp"

using namespace pcvx;

TEST(Report, FloatsUseSeventeenDigits) {
  EXPECT_EQ(dump_json(Json(0.1)), "0.10000000000000001\n");
  EXPECT_EQ(dump_json(Json(1.0)), "1\n");
  EXPECT_EQ(dump_json(Json(-2.5e-300)), "-2.5e-300\n");
  // Every printed double parses back to the same bits.
  for (double v : {1.0 / 3, 2.0 / 7, 1e-9, 6.02214076e23, -0.0}) {
    const std::string s = detail::format_double(v);
    EXPECT_EQ(std::strtod(s.c_str(), nullptr), v) << s;
  }
}

TEST(Report, NonFiniteValuesAreStrings) {
  EXPECT_EQ(real_json(kInf), "+inf");
  EXPECT_EQ(real_json(-kInf), "-inf");
  EXPECT_EQ(real_json(kUndefined), "nan");
  EXPECT_EQ(real_json(0.5L), 0.5);
}

TEST(Report, KeysSortedAndIndented) {
  Json j;
  j["zeta"] = 1;
  j["alpha"] = {{"b", true}, {"a", nullptr}};
  j["mid"] = Json::array({1, "x", 0.25});
  j["empty"] = Json::array();
  const std::string expected =
      "{\n"
      "  \"alpha\": {\n"
      "    \"a\": null,\n"
      "    \"b\": true\n"
      "  },\n"
      "  \"empty\": [],\n"
      "  \"mid\": [\n"
      "    1,\n"
      "    \"x\",\n"
      "    0.25\n"
      "  ],\n"
      "  \"zeta\": 1\n"
      "}\n";
  EXPECT_EQ(dump_json(j), expected);
  EXPECT_EQ(Json::parse(dump_json(j)), j);
}

TEST(Report, TextRendering) {
  Json j;
  j["name"] = "cube";
  j["values"] = Json::array({1, 2.5});
  j["none"] = Json::array();
  j["inner"] = {{"ok", true}};
  EXPECT_EQ(dump_text(j), "inner:\n  ok: true\nname: cube\nnone: []\nvalues: 1 2.5\n");
}

TEST(Report, VerdictSerialization) {
  Verdict v;
  v.outcome = Outcome::fails;
  v.method = Method::characterization;
  v.violations = 3;
  v.witnesses.push_back({{0, 1}, {0, kInf}, "why", {}});
  const Json j = to_json(v);
  EXPECT_EQ(j["outcome"], "fails");
  EXPECT_EQ(j["method"], "characterization");
  EXPECT_EQ(j["violations"], 3);
  EXPECT_EQ(j["witnesses"][0]["values"][1], "+inf");
  EXPECT_FALSE(j.contains("note"));
  EXPECT_TRUE(j["tolerances"].contains("schedule"));
}

TEST(Report, DecompositionRanges) {
  const SampledDomain d = make_grid(Interval::closed(-1, 1), 5, 1e-6L);
  const MonotoneDecomposition m = decompose_values(d, {1, 0.25L, 0, 0.25L, 1}, 1e-9L);
  const Json j = to_json(m);
  EXPECT_EQ(j["i_hat"]["first"], 2);
  EXPECT_EQ(j["i_hat"]["last"], 3);
  EXPECT_EQ(j["i_hat"]["lo"], 0.0);
  EXPECT_EQ(j["pattern"], "valley");
  EXPECT_EQ(j["min_value"], 0.0);
  EXPECT_EQ(j["structurally_valid"], true);
}
