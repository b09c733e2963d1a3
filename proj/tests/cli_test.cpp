#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "hyperid/cli.hpp"

namespace {

struct CliResult {
  int status;
  std::string out;
  std::string err;
};

CliResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hyperid");
  std::ostringstream out, err;
  const int status = hyperid::run_cli(args, out, err);
  return {status, out.str(), err.str()};
}

nlohmann::json json_of(const CliResult& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Eval, MintonFixedPoint) {
  const CliResult r = cli({"eval", "minton", "--k", "1", "--b", "1", "--f", "2", "--m", "1", "--output", "json"});
  EXPECT_EQ(r.status, 0);
  const auto j = json_of(r);
  EXPECT_EQ(j["lhs"], "1/4");
  EXPECT_EQ(j["rhs"], "1/4");
  EXPECT_EQ(j["pass"], true);
}

TEST(Eval, QSummationFixedPoint) {
  const CliResult r = cli({"eval", "q_summation", "--a", "-1", "--b", "1", "--c", "4", "--f", "2", "--m", "1"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("lhs           5/8"), std::string::npos);
  EXPECT_NE(r.out.find("rhs           5/8"), std::string::npos);
}

TEST(Eval, PreconditionErrorGoesToStderr) {
  const CliResult r = cli({"eval", "minton", "--k", "0", "--b", "1", "--f", "2", "--m", "1"});
  EXPECT_NE(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("precondition"), std::string::npos);
}

TEST(Eval, ParseErrors) {
  EXPECT_NE(cli({"eval", "minton", "--k", "x"}).status, 0);
  EXPECT_NE(cli({"eval", "nonexistent"}).status, 0);
  EXPECT_NE(cli({"eval", "minton", "--k", "1", "--b", "1", "--f", "2", "--m", "1", "--precision", "8"}).status, 0);
  EXPECT_NE(cli({"eval", "karlsson", "--a", "-1/2", "--b", "1/3", "--f", "2", "--m", "1", "--m", "2"}).status, 0);
}

TEST(Eval, DecimalAndComplexParameters) {
  const CliResult dec = cli({"eval", "karlsson", "--a", "-0.5", "--b", "0.25", "--f", "1.5", "--m", "1", "--output", "json"});
  EXPECT_EQ(dec.status, 0);
  EXPECT_EQ(json_of(dec)["mode"], "float");
  const CliResult cplx =
      cli({"eval", "karlsson", "--a", "-1/2+1i", "--b", "1/3", "--f", "2", "--m", "1", "--output", "json"});
  EXPECT_EQ(cplx.status, 0) << cplx.err;
  EXPECT_EQ(json_of(cplx)["mode"], "float");
}

TEST(Eval, VectorsByRepeatedFlags) {
  const CliResult r = cli({"eval", "karlsson_multi", "--a", "-3", "--b", "1/2", "--b", "5/3", "--p", "1", "--p", "2", "--f",
                     "7/2", "--m", "1", "--output", "json"});
  EXPECT_EQ(r.status, 0) << r.err;
  EXPECT_EQ(json_of(r)["mode"], "exact");
}

TEST(Eval, EnvironmentPrecision) {
  ::setenv("HYPERID_PRECISION", "8", 1);
  const CliResult low = cli({"eval", "minton", "--k", "1", "--b", "1", "--f", "2", "--m", "1"});
  ::setenv("HYPERID_PRECISION", "30", 1);
  const CliResult ok = cli({"eval", "minton", "--k", "1", "--b", "1", "--f", "2", "--m", "1"});
  ::unsetenv("HYPERID_PRECISION");
  EXPECT_NE(low.status, 0);
  EXPECT_EQ(ok.status, 0);
}

TEST(Verify, MintonSuitePasses) {
  const CliResult r = cli({"verify", "--suite", "minton", "--exact-cases", "40"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("minton/exact"), std::string::npos);
  EXPECT_NE(r.out.find("unexpected failures: 0"), std::string::npos);
}

TEST(Verify, CounterexampleSuiteExitsZero) {
  const CliResult r = cli({"verify", "--suite", "counterexample", "--output", "json"});
  EXPECT_EQ(r.status, 0);
  const auto j = json_of(r);
  ASSERT_EQ(j["suites"].size(), 1u);
  EXPECT_EQ(j["suites"][0]["summary"]["cases_failed"], 1);
  EXPECT_EQ(j["suites"][0]["summary"]["expected_failures"], 1);
  EXPECT_EQ(j["summary"]["unexpected_failures"], 0);
}

TEST(Verify, ReportFileIsDeterministic) {
  const auto dir = std::filesystem::temp_directory_path();
  const auto p1 = (dir / "hyperid_cli_report_1.json").string();
  const auto p2 = (dir / "hyperid_cli_report_2.json").string();
  const std::vector<std::string> base{"verify", "--suite", "karlsson", "--seed", "42", "--exact-cases", "20",
                                      "--float-cases", "10", "--threads", "2", "--report"};
  auto a1 = base;
  a1.push_back(p1);
  auto a2 = base;
  a2.push_back(p2);
  EXPECT_EQ(cli(a1).status, 0);
  EXPECT_EQ(cli(a2).status, 0);
  auto slurp = [](const std::string& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const std::string r1 = slurp(p1);
  EXPECT_FALSE(r1.empty());
  EXPECT_EQ(r1, slurp(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST(Counterexample, ExactResidualIndependentOfPrecision) {
  const CliResult a = cli({"counterexample"});
  EXPECT_EQ(a.status, 0);
  EXPECT_NE(a.out.find("difference"), std::string::npos);
  const auto j50 = json_of(cli({"counterexample", "--json"}));
  const auto j100 = json_of(cli({"counterexample", "--json", "--precision", "100"}));
  EXPECT_EQ(j50["difference"], j100["difference"]);
  EXPECT_NE(j50["difference"], "0");
  EXPECT_EQ(j50["karlsson_holds"], false);
  EXPECT_EQ(j50["extended_holds"], true);
}

TEST(Table, CsvAndJson) {
  const CliResult csv = cli({"table", "minton", "--vary", "b", "--from", "1/2", "--to", "5/2", "--steps", "3", "--k", "2",
                       "--f", "2", "--m", "1"});
  EXPECT_EQ(csv.status, 0);
  EXPECT_EQ(csv.out.rfind("b,lhs,rhs,rel_residual,pass\n", 0), 0u);
  EXPECT_NE(csv.out.find("3/2,"), std::string::npos);
  const CliResult js = cli({"table", "minton", "--vary", "k", "--from", "1", "--to", "4", "--steps", "4", "--b", "1", "--f",
                      "2", "--m", "1", "--output", "json"});
  EXPECT_EQ(js.status, 0);
  const auto j = json_of(js);
  ASSERT_EQ(j["rows"].size(), 4u);
  EXPECT_EQ(j["rows"][1]["k"], "2");
  EXPECT_EQ(j["rows"][1]["pass"], true);
}
