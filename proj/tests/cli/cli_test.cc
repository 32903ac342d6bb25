#include "cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "copula_ot/copula_ot.h"
#include "errors.h"
#include "input.h"
#include "render.h"

namespace copula_ot::cli {
namespace {

using nlohmann::json;

std::string data(const std::string& name) { return std::string(COPULA_OT_TEST_DATA) + "/" + name; }

struct Run {
  int code;
  std::string out;
  std::string err;

  json doc() const { return json::parse(out); }
};

Run invoke(const std::vector<std::string>& args, const Environment& env = {}) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err, env);
  return {code, out.str(), err.str()};
}

TEST(Dist1d, UniformPairAcrossMethods) {
  const auto r = invoke({"dist1d", data("uniform_0_1.csv"), data("uniform_0_2.csv"), "--p", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto d = r.doc()["data"];
  EXPECT_EQ(d["w_p"].get<double>(), 0.5);
  ASSERT_EQ(d["methods"].size(), 3u);
  EXPECT_EQ(d["methods"][0]["method"], "quantile_integral");
  EXPECT_EQ(d["methods"][1]["method"], "cdf_area");
  EXPECT_EQ(d["methods"][2]["method"], "oracle_lp");
  for (const auto& m : d["methods"]) EXPECT_NEAR(m["w_p"].get<double>(), 0.5, 1e-15);
  EXPECT_EQ(d["max_method_disagreement"].get<double>(), 0.0);
  EXPECT_TRUE(d["within_tolerance"].get<bool>());
}

TEST(Dist1d, IdenticalFiles) {
  const auto r = invoke({"dist1d", data("ladder_1_3.csv"), data("ladder_1_3.csv"), "--p", "2"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.doc()["data"]["w_p"].get<double>(), 0.0);
  EXPECT_EQ(r.doc()["data"]["max_method_disagreement"].get<double>(), 0.0);
}

TEST(Dist1d, ShiftedLadders) {
  const auto r = invoke({"dist1d", data("ladder_1_3.csv"), data("ladder_2_4.csv"), "--p", "2"});
  ASSERT_EQ(r.code, 0);
  const auto d = r.doc()["data"];
  EXPECT_NEAR(d["w_p_pow_p"].get<double>(), 1.0, 1e-15);
  EXPECT_EQ(d["methods"].size(), 2u);
}

TEST(Dist1d, InlineSpecs) {
  const auto r = invoke({"dist1d", "normal:0,1", "normal:1,1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto d = r.doc()["data"];
  EXPECT_NEAR(d["w_p"].get<double>(), 1.0, 1e-8);
  EXPECT_EQ(d["notices"].size(), 1u);
  EXPECT_NE(r.err.find("oracle omitted"), std::string::npos);

  const auto mixed = invoke({"dist1d", "discrete:0@0.5,1@0.5", "samples:0,2", "--p", "1"});
  ASSERT_EQ(mixed.code, 0) << mixed.err;
  EXPECT_NEAR(mixed.doc()["data"]["w_p"].get<double>(), 0.5, 1e-15);
}

TEST(Dist1d, LargeSamplesOmitOracle) {
  const auto dir = std::filesystem::temp_directory_path() / "copula_ot_cli_test";
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> z(0.0, 1.0);
  std::ofstream a(dir / "a.csv");
  std::ofstream b(dir / "b.csv");
  for (int k = 0; k < 1000; ++k) {
    const double x = z(rng);
    a << x << "\n";
    b << x + 1.0 << "\n";
  }
  a.close();
  b.close();
  const auto r = invoke({"dist1d", (dir / "a.csv").string(), (dir / "b.csv").string()});
  ASSERT_EQ(r.code, 0);
  const auto d = r.doc()["data"];
  EXPECT_NEAR(d["w_p"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(d["methods"].size(), 2u);
  ASSERT_EQ(d["notices"].size(), 1u);
  EXPECT_NE(d["notices"][0].get<std::string>().find("--oracle-max-atoms"), std::string::npos);
}

TEST(Dist1d, InputErrors) {
  EXPECT_EQ(invoke({"dist1d", data("malformed.csv"), data("uniform_0_1.csv")}).code, 2);
  EXPECT_EQ(invoke({"dist1d", data("missing.csv"), data("uniform_0_1.csv")}).code, 2);
  EXPECT_EQ(invoke({"dist1d", data("three_columns.csv"), data("uniform_0_1.csv")}).code, 2);
  EXPECT_EQ(invoke({"dist1d", "normal:0", "normal:0,1"}).code, 2);
  EXPECT_EQ(invoke({"dist1d", "gamma:1,2", "normal:0,1"}).code, 2);
  EXPECT_EQ(invoke({"dist1d", "discrete:0@0.5,1@0.4", "point:0"}).code, 2);
  EXPECT_EQ(invoke({"dist1d", data("uniform_0_1.csv"), data("uniform_0_2.csv"), "--p", "0.5"}).code, 2);
  EXPECT_EQ(invoke({"dist1d", data("uniform_0_1.csv")}).code, 2);
  EXPECT_EQ(invoke({"dist1d", data("uniform_0_1.csv"), data("uniform_0_2.csv"), "--format", "xml"}).code, 2);
  EXPECT_EQ(invoke({"nonsense"}).code, 2);
  EXPECT_EQ(invoke({}).code, 2);
  EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST(Dist1d, ToleranceFromEnvironment) {
  Environment env;
  env.tolerance = "1e-3";
  const auto r = invoke({"dist1d", data("uniform_0_1.csv"), data("uniform_0_2.csv")}, env);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.doc()["data"]["tolerance"].get<double>(), 1e-3);
  env.tolerance = "not-a-number";
  EXPECT_EQ(invoke({"dist1d", data("uniform_0_1.csv"), data("uniform_0_2.csv")}, env).code, 2);
  env.tolerance = "-1";
  EXPECT_EQ(invoke({"dist1d", data("uniform_0_1.csv"), data("uniform_0_2.csv")}, env).code, 2);
}

TEST(Distnd, RequiresHypothesisFlag) {
  const auto r = invoke({"distnd", data("pairs_0_1.csv"), data("pairs_0_2.csv")});
  EXPECT_EQ(r.code, 3);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("--assume-shared-copula"), std::string::npos);
  EXPECT_NE(r.err.find("share one copula"), std::string::npos);
}

TEST(Distnd, Examples) {
  const auto same = invoke({"distnd", data("pairs_0_1.csv"), data("pairs_0_1.csv"), "--assume-shared-copula"});
  ASSERT_EQ(same.code, 0) << same.err;
  EXPECT_EQ(same.doc()["data"]["total_w_p"].get<double>(), 0.0);

  const auto points = invoke({"distnd", data("point_origin.csv"), data("point_3_4.csv"), "--assume-shared-copula"});
  ASSERT_EQ(points.code, 0) << points.err;
  EXPECT_EQ(points.doc()["data"]["total_w_p"].get<double>(), 7.0);

  const auto two = invoke(
      {"distnd", data("pairs_0_1.csv"), data("pairs_0_2.csv"), "--assume-shared-copula", "--p", "2"});
  ASSERT_EQ(two.code, 0) << two.err;
  const auto d = two.doc()["data"];
  EXPECT_NEAR(d["total_w_p_pow_p"].get<double>(), 1.0, 1e-15);
  EXPECT_NEAR(d["oracle"]["w_pq_pow_p"].get<double>(), 1.0, 1e-12);
  ASSERT_EQ(d["coordinates"].size(), 2u);
  EXPECT_NEAR(d["coordinates"][0]["w_p_pow_p"].get<double>(), 0.5, 1e-15);
}

TEST(Distnd, MismatchedNormReportsBracket) {
  const auto r = invoke({"distnd", data("pairs_0_1.csv"), data("pairs_0_2.csv"), "--assume-shared-copula", "--p",
                         "2", "--q", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto d = r.doc()["data"];
  EXPECT_FALSE(d["exact"].get<bool>());
  EXPECT_FALSE(d.contains("total_w_p"));
  EXPECT_NEAR(d["bracket"]["lower"].get<double>(), std::pow(2.0, -0.5), 1e-15);
  EXPECT_NEAR(d["bracket"]["upper"].get<double>(), 2.0, 1e-15);
  EXPECT_TRUE(d["oracle"]["inside_bracket"].get<bool>());
}

TEST(Distnd, Errors) {
  EXPECT_EQ(invoke({"distnd", data("pairs_0_1.csv"), data("three_columns.csv"), "--assume-shared-copula"}).code, 2);
  EXPECT_EQ(invoke({"distnd", data("malformed.csv"), data("pairs_0_1.csv"), "--assume-shared-copula"}).code, 2);
}

TEST(CheckCopula, Examples) {
  const auto m = invoke({"check-copula", "M", "3"});
  ASSERT_EQ(m.code, 0);
  EXPECT_TRUE(m.doc()["data"]["passed"].get<bool>());
  EXPECT_EQ(m.doc()["data"]["resolution"].get<int>(), 8);

  const auto w = invoke({"check-copula", "W", "3", "--resolution", "4"});
  ASSERT_EQ(w.code, 0);
  const auto d = w.doc()["data"];
  EXPECT_FALSE(d["passed"].get<bool>());
  EXPECT_TRUE(d["axioms"][0]["passed"].get<bool>());
  EXPECT_TRUE(d["axioms"][1]["passed"].get<bool>());
  EXPECT_FALSE(d["axioms"][2]["passed"].get<bool>());
  ASSERT_FALSE(d["witnesses"].empty());
  EXPECT_LT(d["witnesses"][0]["value"].get<double>(), 0.0);

  const auto pi = invoke({"check-copula", "Pi", "2"});
  ASSERT_EQ(pi.code, 0);
  EXPECT_TRUE(pi.doc()["data"]["passed"].get<bool>());
}

TEST(CheckCopula, Errors) {
  EXPECT_EQ(invoke({"check-copula", "Gumbel", "2"}).code, 2);
  EXPECT_EQ(invoke({"check-copula", "M", "1"}).code, 2);
  EXPECT_EQ(invoke({"check-copula", "M", "two"}).code, 2);
  EXPECT_EQ(invoke({"check-copula", "M", "11"}).code, 4);
  EXPECT_EQ(invoke({"check-copula", "M", "8", "--resolution", "64"}).code, 4);
}

TEST(OracleCompare, Examples) {
  const auto two = invoke({"oracle-compare", data("uniform_0_1.csv"), data("uniform_0_2.csv")});
  ASSERT_EQ(two.code, 0) << two.err;
  auto d = two.doc()["data"];
  ASSERT_EQ(d["couplings"].size(), 2u);
  EXPECT_TRUE(d["comonotone_minimal"].get<bool>());
  EXPECT_TRUE(d["comonotone_is_vertex"].get<bool>());

  const auto one = invoke({"oracle-compare", data("point_zero.csv"), "point:3"});
  ASSERT_EQ(one.code, 0) << one.err;
  d = one.doc()["data"];
  ASSERT_EQ(d["couplings"].size(), 1u);
  EXPECT_EQ(d["couplings"][0]["gap"].get<double>(), 0.0);

  const auto three = invoke({"oracle-compare", data("uniform_3a.csv"), data("uniform_3b.csv"), "--p", "2"});
  ASSERT_EQ(three.code, 0) << three.err;
  d = three.doc()["data"];
  ASSERT_EQ(d["couplings"].size(), 6u);
  int comonotone_rows = 0;
  for (const auto& row : d["couplings"]) {
    EXPECT_GE(row["gap"].get<double>(), -1e-9);
    EXPECT_NEAR(row["dall_aglio"].get<double>(), row["i_h"].get<double>(), 1e-9);
    if (row["comonotone"].get<bool>()) {
      ++comonotone_rows;
      const auto plan = row["plan"];
      for (int i = 0; i < 3; ++i) EXPECT_NEAR(plan[i][i].get<double>(), 1.0 / 3.0, 1e-15);
    }
  }
  EXPECT_EQ(comonotone_rows, 1);
}

TEST(OracleCompare, Errors) {
  EXPECT_EQ(invoke({"oracle-compare", data("five_atoms.csv"), data("uniform_0_1.csv")}).code, 4);
  EXPECT_EQ(invoke({"oracle-compare", "normal:0,1", data("uniform_0_1.csv")}).code, 2);
}

TEST(DiagnoseTails, Examples) {
  const auto beyond = invoke({"diagnose-tails", data("symmetric_pair.csv"), "--grid", "2,5", "--r", "1"});
  ASSERT_EQ(beyond.code, 0) << beyond.err;
  for (const auto& row : beyond.doc()["data"]["rows"]) {
    EXPECT_EQ(row["upper_tail"].get<double>(), 0.0);
    EXPECT_EQ(row["lower_tail"].get<double>(), 0.0);
  }

  const auto point = invoke({"diagnose-tails", data("point_zero.csv"), "--grid", "1,10", "--r", "2"});
  ASSERT_EQ(point.code, 0);
  EXPECT_EQ(point.doc()["data"]["rows"].size(), 2u);
  for (const auto& row : point.doc()["data"]["rows"]) EXPECT_EQ(row["upper_tail"].get<double>(), 0.0);

  const auto three = invoke({"diagnose-tails", data("ladder_1_3.csv"), "--grid", "2.5"});
  ASSERT_EQ(three.code, 0);
  const auto row = three.doc()["data"]["rows"][0];
  EXPECT_EQ(row["x"].get<double>(), 2.5);
  EXPECT_NEAR(row["upper_tail"].get<double>(), 2.5 / 3.0, 1e-15);
  EXPECT_EQ(row["lower_tail"].get<double>(), 0.0);
}

TEST(DiagnoseTails, Errors) {
  EXPECT_EQ(invoke({"diagnose-tails", data("malformed.csv"), "--grid", "1"}).code, 2);
  EXPECT_EQ(invoke({"diagnose-tails", data("ladder_1_3.csv")}).code, 2);
  EXPECT_EQ(invoke({"diagnose-tails", data("ladder_1_3.csv"), "--grid", "2,1"}).code, 2);
  EXPECT_EQ(invoke({"diagnose-tails", data("ladder_1_3.csv"), "--grid", "1,x"}).code, 2);
  EXPECT_EQ(invoke({"diagnose-tails", data("ladder_1_3.csv"), "--grid", "1", "--r", "0"}).code, 2);
}

TEST(Output, JsonRoundTripsLibraryValues) {
  const auto r = invoke({"dist1d", "discrete:0.1@0.3,0.7@0.7", "discrete:0.2@0.6,1.3@0.4", "--p", "1.5"});
  ASSERT_EQ(r.code, 0);
  const auto f = Distribution1D::discrete(std::vector<double>{0.1, 0.7}, std::vector<double>{0.3, 0.7});
  const auto g = Distribution1D::discrete(std::vector<double>{0.2, 1.3}, std::vector<double>{0.6, 0.4});
  const auto expected = wasserstein_1d(f, g, 1.5);
  const auto d = r.doc()["data"];
  EXPECT_EQ(d["w_p"].get<double>(), expected.value);
  EXPECT_EQ(d["w_p_pow_p"].get<double>(), expected.value_pth_power);
  // Re-serializing the parsed document reproduces it byte for byte.
  EXPECT_EQ(nlohmann::ordered_json::parse(r.out).dump(2) + "\n", r.out);
}

TEST(Output, FormatNumberRoundTrips) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int k = 0; k < 2000; ++k) {
    const double x = k % 2 ? u(rng) : std::ldexp(u(rng), -40 + k % 80);
    double back = 0.0;
    ASSERT_TRUE(parse_number(format_number(x), back));
    EXPECT_EQ(back, x);
  }
  EXPECT_EQ(format_number(0.5), "0.5");
  EXPECT_EQ(format_number(7.0), "7");
}

TEST(Output, CsvAndPlain) {
  const auto csv = invoke({"dist1d", data("uniform_0_1.csv"), data("uniform_0_2.csv"), "--format", "csv"});
  ASSERT_EQ(csv.code, 0);
  EXPECT_EQ(csv.out.rfind("field,value\ncommand,dist1d\np,1\nw_p,0.5\n", 0), 0u) << csv.out;
  EXPECT_NE(csv.out.find("\n# methods\nmethod,w_p,w_p_pow_p,error_bound\nquantile_integral,0.5,0.5,0\n"),
            std::string::npos);

  const auto plain = invoke({"check-copula", "W", "3", "--format", "plain", "--resolution", "4"});
  ASSERT_EQ(plain.code, 0);
  EXPECT_EQ(plain.out.rfind("check-copula\n", 0), 0u);
  EXPECT_NE(plain.out.find("passed:"), std::string::npos);
  EXPECT_NE(plain.out.find("witnesses"), std::string::npos);
}

TEST(Output, Deterministic) {
  const std::vector<std::vector<std::string>> configs{
      {"dist1d", data("ladder_1_3.csv"), data("ladder_2_4.csv"), "--p", "2"},
      {"dist1d", "normal:0,1", "exponential:1", "--p", "2", "--format", "csv"},
      {"distnd", data("pairs_0_1.csv"), data("pairs_0_2.csv"), "--assume-shared-copula", "--q", "3"},
      {"check-copula", "W", "4", "--format", "plain"},
      {"oracle-compare", data("uniform_3a.csv"), data("uniform_3b.csv"), "--p", "3"},
      {"diagnose-tails", "normal:0,1", "--grid", "1,2,4", "--r", "2"},
  };
  for (const auto& args : configs) {
    const auto a = invoke(args);
    const auto b = invoke(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(a.out, b.out);
  }
}

TEST(Input, CsvHeaderDetection) {
  const auto with_header = parse_csv("value\n1\n2\n", "t");
  EXPECT_EQ(with_header.header, std::vector<std::string>{"value"});
  EXPECT_EQ(with_header.rows.size(), 2u);
  const auto bare = parse_csv("1,2\r\n3,4\n\n", "t");
  EXPECT_TRUE(bare.header.empty());
  EXPECT_EQ(bare.rows.size(), 2u);
  EXPECT_EQ(bare.rows[1][1], 4.0);
  EXPECT_THROW(parse_csv("1,2\n3\n", "t"), InputError);
  EXPECT_THROW(parse_csv("x\n", "t"), InputError);
  EXPECT_THROW(parse_csv("1\nnan\n", "t"), InputError);
  EXPECT_THROW(parse_csv("1;5\n", "t"), InputError);
}

}  // namespace
}  // namespace copula_ot::cli
