#include <gtest/gtest.h>

#include <sstream>

#include "pcvx/cli.hpp"

using namespace pcvx;

namespace {

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun cli(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

const std::string kGolden = std::string(PCVX_SOURCE_DIR) + "/battery/golden.json";

}  // namespace

TEST(Cli, CubeMethodsAgreeOnFailure) {
  const CliRun r = cli({"classify", "--function", "t^3", "--domain", "[-1,1]", "--check", "pseudoconvex",
                     "--method", "both"});
  EXPECT_EQ(r.code, kExitOk);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["status"], "agree");
  ASSERT_EQ(j["results"].size(), 1u);
  for (const auto& v : j["results"][0]["verdicts"]) EXPECT_EQ(v["outcome"], "fails");
  EXPECT_EQ(j["results"][0]["verdicts"].size(), 2u);
}

TEST(Cli, AllChecksOnSquare) {
  const CliRun r = cli({"classify", "--function", "t^2", "--domain", "[-1,1]", "--grid", "65"});
  EXPECT_EQ(r.code, kExitOk);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["results"].size(), 4u);
  for (const auto& res : j["results"]) {
    for (const auto& v : res["verdicts"]) EXPECT_EQ(v["outcome"], "holds") << res["property"];
  }
  EXPECT_EQ(j["decomposition"]["pattern"], "valley");
  EXPECT_EQ(j["config"]["schedule"]["steps"], 40);
}

TEST(Cli, ConfigurationErrorsExitOne) {
  EXPECT_EQ(cli({"classify", "--function", "t^", "--domain", "[-1,1]"}).code, kExitConfig);
  EXPECT_EQ(cli({"classify", "--function", "t", "--domain", "[0,0]"}).code, kExitConfig);
  EXPECT_EQ(cli({"classify", "--function", "t", "--domain", "[0,1]", "--grid", "4"}).code, kExitConfig);
  EXPECT_EQ(cli({"classify", "--function", "t", "--domain", "[0,1]", "--dini-ratio", "1.5"}).code, kExitConfig);
  EXPECT_EQ(cli({"classify", "--function", "t", "--domain", "[0,1]", "--check", "convex"}).code, kExitConfig);
  EXPECT_EQ(cli({"classify", "--function", "t", "--domain", "[0,1]", "--output", "xml"}).code, kExitConfig);
  EXPECT_EQ(cli({"classify", "--function", "x1", "--arity", "2", "--box", "[0,1]"}).code, kExitConfig);
  EXPECT_EQ(cli({"classify", "--domain", "[0,1]"}).code, kExitConfig);
  EXPECT_EQ(cli({}).code, kExitConfig);
  const CliRun r = cli({"classify", "--function", "t +* 1", "--domain", "[0,1]"});
  EXPECT_NE(r.err.find("error"), std::string::npos);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(cli({"--help"}).code, kExitOk); }

TEST(Cli, UndefinedValuesAreInconclusive) {
  EXPECT_EQ(cli({"classify", "--function", "log(t)", "--domain", "[-1,1]"}).code, kExitInconclusive);
  EXPECT_EQ(cli({"decompose", "--function", "log(t)", "--domain", "[-1,1]"}).code, kExitInconclusive);
}

TEST(Cli, DisagreementExitsTwoWithWitnessDiff) {
  const CliRun r = cli({"classify", "--function", "t - 0.1*sin(16*pi*t)", "--domain", "[0,1)", "--grid", "9",
                     "--check", "pseudoconvex"});
  EXPECT_EQ(r.code, kExitDisagree);
  const Json j = Json::parse(r.out);
  EXPECT_TRUE(j["results"][0].contains("witness_diff"));
  EXPECT_NE(r.err.find("disagree"), std::string::npos);
}

TEST(Cli, DecomposeCsv) {
  const CliRun r = cli({"decompose", "--function", "abs(t)", "--domain", "[-1,1]", "--grid", "9", "--csv", "-"});
  EXPECT_EQ(r.code, kExitOk);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  EXPECT_EQ(line, "t,value,segment");
  std::vector<std::string> labels;
  while (std::getline(lines, line)) labels.push_back(line.substr(line.rfind(',') + 1));
  EXPECT_EQ(labels, (std::vector<std::string>{"minus", "minus", "minus", "minus", "hat", "plus", "plus", "plus",
                                              "plus"}));
  EXPECT_NE(r.out.find("-0.75,0.75,minus"), std::string::npos);
}

TEST(Cli, DecomposeReportHasSegmentSplit) {
  const CliRun r = cli({"decompose", "--function", "max(0,abs(t)-1)", "--domain", "[-2,2]", "--grid", "161"});
  EXPECT_EQ(r.code, kExitOk);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["decomposition"]["i_hat"]["lo"], -1.0);
  EXPECT_EQ(j["decomposition"]["i_hat"]["hi"], 1.0);
  EXPECT_EQ(j["segment_split"]["valid"], true);
}

TEST(Cli, DiniValues) {
  CliRun r = cli({"dini", "--function", "abs(t)", "--at", "0", "--dir", "1"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_EQ(Json::parse(r.out)["estimate"]["value"], 1.0);
  r = cli({"dini", "--function", "piecewise(t<0: 1, else: t)", "--at", "0", "--dir", "-1"});
  EXPECT_EQ(Json::parse(r.out)["estimate"]["value"], "+inf");
  r = cli({"dini", "--function", "x1^2 + 3*x2", "--arity", "2", "--at", "1,1", "--dir", "0,-2"});
  EXPECT_EQ(r.code, kExitOk);
  const double v = Json::parse(r.out)["estimate"]["value"].get<double>();
  // Linear in x2, so only rounding in quotients with steps near 2e-11 remains.
  EXPECT_NEAR(v, -6.0, 1e-7);
  EXPECT_EQ(Json::parse(r.out)["sign"], "negative");
  EXPECT_EQ(cli({"dini", "--function", "t", "--domain", "[0,1]", "--at", "0", "--dir", "-1"}).code, kExitConfig);
  EXPECT_EQ(cli({"dini", "--function", "t", "--at", "0", "--dir", "0"}).code, kExitConfig);
}

TEST(Cli, TextOutput) {
  const CliRun r = cli({"dini", "--function", "t", "--at", "0", "--dir", "1", "--output", "text"});
  EXPECT_EQ(r.code, kExitOk);
  EXPECT_NE(r.out.find("command: dini\n"), std::string::npos);
  EXPECT_NE(r.out.find("sign: nonnegative\n"), std::string::npos);
}

TEST(Cli, VerifyMissingManifest) {
  const CliRun r = cli({"verify-theorems", "/nonexistent/battery.json"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("cannot open"), std::string::npos);
}

TEST(Cli, VerifyGoldenSummary) {
  const CliRun r = cli({"verify-theorems", kGolden, "--random", "4", "--seed", "3"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["summary"]["failed_entries"], 0);
  EXPECT_EQ(j["summary"]["implication_violations"], 0);
  EXPECT_EQ(j["summary"]["label_mismatches"], 0);
  EXPECT_FALSE(j.contains("timing"));
  EXPECT_EQ(j["config"]["grid"], 257);
}

TEST(Cli, ReportsAreByteIdentical) {
  const std::vector<std::string> args = {"classify", "--function", "x1^2 + abs(x2)", "--arity", "2", "--box",
                                         "[-1,1]x[-1,1]", "--pairs", "8", "--seed", "5", "--grid", "33"};
  const CliRun a = cli(args);
  const CliRun b = cli(args);
  EXPECT_EQ(a.code, kExitOk);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.back(), '\n');
}

TEST(Cli, MethodAndCheckParsing) {
  EXPECT_EQ(parse_methods("both"), parse_methods("all"));
  EXPECT_EQ(parse_methods("definitional").size(), 1u);
  EXPECT_THROW(parse_methods("guess"), std::invalid_argument);
  EXPECT_EQ(parse_checks("all").size(), 4u);
  EXPECT_EQ(parse_vector("1, -2.5,3"), (std::vector<Real>{1, -2.5L, 3}));
  EXPECT_THROW(parse_vector("1,,2"), std::invalid_argument);
}
