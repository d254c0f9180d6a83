#include <gtest/gtest.h>

#include <clocale>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "harness/harness.hpp"

using namespace rugged;
using namespace rugged::harness;
using nlohmann::json;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const ExperimentConfig d = parse_config(json::object());
  EXPECT_EQ(d.lambdas, std::vector<double>{1.0});
  EXPECT_EQ(d.head_dim, 16u);
  EXPECT_EQ(d.seed, 0u);

  const ExperimentConfig c = parse_config(json::parse(R"({"lambdas":[0.5,2],"head_dim":8,"seed":9,"op":"fp-grid"})"));
  EXPECT_EQ(c.lambdas, (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(c.head_dim, 8u);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.op, "fp-grid");

  const ExperimentConfig round = parse_config(to_json(c));
  EXPECT_EQ(round.lambdas, c.lambdas);
  EXPECT_EQ(round.op, c.op);
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(parse_config(json::parse(R"({"lambda":[1]})")), UsageError);
  EXPECT_THROW(parse_config(json::parse(R"({"head_dim":"eight"})")), UsageError);
  EXPECT_THROW(parse_config(json::parse(R"({"lambdas":[0]})")), UsageError);
  EXPECT_THROW(parse_config(json::parse("[1,2]")), UsageError);
  EXPECT_THROW(parse_config(json::parse(R"({"lambda_grid":{"min":1,"max":2,"n":3}})")), UsageError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), UsageError);
}

TEST(Config, LambdaGrid) {
  const ExperimentConfig c = parse_config(json::parse(R"({"lambda_grid":{"min":0.01,"max":100,"count":5}})"));
  ASSERT_EQ(c.lambdas.size(), 5u);
  EXPECT_EQ(c.lambdas.front(), 0.01);
  EXPECT_EQ(c.lambdas.back(), 100.0);
  EXPECT_NEAR(c.lambdas[2], 1.0, 1e-14);
}

TEST(LambdaList, Parsing) {
  EXPECT_EQ(parse_lambda_list("1,2.5, 4"), (std::vector<double>{1.0, 2.5, 4.0}));
  EXPECT_THROW(parse_lambda_list("1,x"), UsageError);
  EXPECT_THROW(parse_lambda_list("-1"), UsageError);
}

TEST(Format, SeventeenDigitsAnyLocale) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(2.0), "2");
  const char* old = std::setlocale(LC_NUMERIC, nullptr);
  const std::string saved = old ? old : "C";
  if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
    EXPECT_EQ(format_double(0.5), "0.5");
    EXPECT_EQ(parse_lambda_list("0.5"), std::vector<double>{0.5});
  }
  std::setlocale(LC_NUMERIC, saved.c_str());
}

TEST(BoundsTable, Rows) {
  const std::vector<double> ls{1.0, (3.0 + std::sqrt(15.0)) / 6.0};
  const auto rows = lines(bounds_table_csv(ls));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "lambda,m_lambda,smaller_root,larger_root,threshold,tau,identity_residual_max");
  const auto r1 = fields(rows[1]);
  ASSERT_EQ(r1.size(), 7u);
  EXPECT_NEAR(std::stod(r1[1]), 0.0632501, 1e-7);
  EXPECT_EQ(std::stod(r1[4]), 0.5);
  EXPECT_NEAR(std::stod(fields(rows[2])[1]), 0.06349, 5e-5);
  EXPECT_EQ(std::stod(r1[1]), m_of_lambda(1.0));
}

TEST(BoundsTable, EmptyGridHeaderOnly) {
  EXPECT_EQ(bounds_table_csv({}), "lambda,m_lambda,smaller_root,larger_root,threshold,tau,identity_residual_max\n");
}

TEST(Verify, SuitesPass) {
  ExperimentConfig cfg;
  cfg.lambdas = {0.5, 2.0};
  cfg.samples = 200;
  cfg.head_dim = 10;
  cfg.grid_size = 24;
  for (auto name : kSuiteNames) {
    const VerifyOutcome v = run_verify(name, cfg);
    EXPECT_TRUE(v.passed) << name << "\n" << v.summary.dump(2);
  }
  const VerifyOutcome skew = run_verify("skew", cfg);
  for (const auto& c : skew.summary["suites"][0]["checks"]) {
    EXPECT_LE(c["value"].get<double>(), 1e-12) << c.dump();
  }
}

TEST(Verify, UnknownSuite) {
  EXPECT_THROW(run_verify("nonsense", ExperimentConfig{}), UsageError);
}

TEST(Operators, MakeOperator) {
  ExperimentConfig cfg;
  cfg.head_dim = 5;
  cfg.grid_size = 12;
  EXPECT_EQ(make_operator("gossez", cfg).space().head_dim(), 5u);
  EXPECT_EQ(make_operator("neg-fp-grid", cfg).space().head_dim(), 12u);
  EXPECT_THROW(make_operator("matrix", cfg), UsageError);
  EXPECT_THROW(make_operator("bogus", cfg), UsageError);
}

TEST(Explore, CertifiedRowsAndDeterminism) {
  ExperimentConfig cfg;
  cfg.lambdas = {4.0};
  cfg.head_dim = 6;
  cfg.restarts = 3;
  cfg.budget = 300;
  cfg.seed = 5;
  const ExploreOutcome a = run_explore(cfg);
  const ExploreOutcome b = run_explore(cfg);
  EXPECT_EQ(a.csv, b.csv);
  EXPECT_TRUE(a.all_floors_held);
  const auto rows = lines(a.csv);
  ASSERT_EQ(rows.size(), 2u);
  const auto f = fields(rows[1]);
  ASSERT_EQ(f.size(), 14u);
  EXPECT_EQ(f[0], "gossez");
  EXPECT_EQ(f.back(), "true");
  EXPECT_TRUE(a.witnesses[0].contains("midpoint"));

  cfg.op = "fp-grid";
  cfg.grid_size = 128;
  cfg.lambdas = {2.0};
  cfg.restarts = 1;
  cfg.budget = 100;
  const auto g = fields(lines(run_explore(cfg).csv)[1]);
  EXPECT_EQ(g[0], "fp-grid");
  EXPECT_EQ(g[2], "128");
  EXPECT_GE(std::stod(g[11]), 0.0);
  EXPECT_EQ(g.back(), "true");

  cfg.budget = 0;
  EXPECT_THROW(run_explore(cfg), UsageError);
}

TEST(RuggedCheck, Pattern) {
  ExperimentConfig cfg;
  cfg.head_dim = 4;
  cfg.grid_size = 6;
  const RuggedOutcome r = run_rugged_check(cfg);
  EXPECT_TRUE(r.passed);
  const auto rows = lines(r.csv);
  // header + 4 head cells + tail + 6 grid cells
  ASSERT_EQ(rows.size(), 12u);
  EXPECT_EQ(rows[1], "\"l1(K=4,tail)\",1,-2,2,true");
  EXPECT_EQ(rows[3], "\"l1(K=4,tail)\",3,-4,4,true");
  EXPECT_EQ(rows[5], "\"l1(K=4,tail)\",tail,-4,4,true");
}

TEST(Output, RunDirectoryLayout) {
  const auto base = std::filesystem::temp_directory_path() / "rugged_test_runs";
  std::filesystem::remove_all(base);
  const auto d1 = write_run_directory(base, "explore", json{{"seed", 1}}, "a,b\n1,2\n", json{{"ok", true}});
  const auto d2 = write_run_directory(base, "explore", json{{"seed", 1}}, "", json{{"ok", true}});
  EXPECT_EQ(d1.filename(), "explore-001");
  EXPECT_EQ(d2.filename(), "explore-002");
  EXPECT_EQ(slurp(d1 / "results.csv"), "a,b\n1,2\n");
  EXPECT_FALSE(std::filesystem::exists(d2 / "results.csv"));
  EXPECT_EQ(json::parse(slurp(d1 / "config.json"))["seed"], 1);
  EXPECT_TRUE(json::parse(slurp(d2 / "summary.json"))["ok"].get<bool>());
  std::filesystem::remove_all(base);
}
