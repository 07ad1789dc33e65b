// Copyright 2026 The rtnoise Authors
// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rtn/table.hpp"

namespace {

namespace fs = std::filesystem;
using rtn::Table;

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("rtnoise_cli_") + info->name() + "_" +
                                        std::to_string(::getpid()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args, const std::string& env = "") {
    const auto out = dir_ / "stdout";
    const auto err = dir_ / "stderr";
    const std::string cmd = env + " '" RTNOISE_PATH "' " + args + " >'" + out.string() + "' 2>'" +
                            err.string() + "'";
    const int status = std::system(cmd.c_str());
    Outcome r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
  }

  static std::string fixture(const std::string& name) {
    return std::string("'") + FIXTURES_DIR + "/" + name + "'";
  }

  fs::path dir_;
};

// Round trip through the reader must reproduce the exact bytes.
Table parse_checked(const std::string& text) {
  const auto t = Table::parse(text);
  const auto format = text.find_first_not_of(" \n") != std::string::npos && text[0] == '{'
                          ? rtn::TableFormat::json
                          : rtn::TableFormat::csv;
  EXPECT_EQ(t.to_string(format), text);
  return t;
}

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

TEST_F(Cli, ExpectSymmetric) {
  auto r = run("expect symmetric --m 0 --delta 1 --tau 1 --t 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.err.empty());
  auto t = parse_checked(r.out);
  ASSERT_EQ(t.rows.size(), 1u);
  EXPECT_EQ(t.number(0, "value"), 1.0);
  EXPECT_EQ(t.text(0, "formula"), "cos_symmetric");
  EXPECT_EQ(t.text(0, "params_hash").size(), 16u);

  r = run("expect symmetric --m 1 --delta 1 --tau 1 --t 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(parse_checked(r.out).number(0, "value"), 2 * std::exp(-1.0), 1e-15);
}

TEST_F(Cli, ExpectGaussianAndGrid) {
  auto r = run("expect gaussian --m 2 --sigma 0.5 --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(parse_checked(r.out).number(0, "value"), std::exp(-0.5), 1e-15);

  r = run("expect general --m 0.5,1,2 --t 1,3 --tau-plus 0.5 --tau-minus 2 --start positive");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse_checked(r.out);
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.number(5, "m"), 2.0);
  EXPECT_EQ(t.number(5, "t"), 3.0);
}

TEST_F(Cli, ExpectVarianceLongTimeAndOneOverF) {
  auto r = run("expect variance --delta 2 --tau 0.01 --t 10");
  ASSERT_EQ(r.code, 0) << r.err;
  auto t = parse_checked(r.out);
  EXPECT_NEAR(t.number(0, "variance") / t.number(0, "long_time"), 1.0, 1e-12);

  r = run("expect one-over-f --r 10 --tau-a 10 --tau-b 0.1 --t 5 --mc --samples 20000 --seed 3");
  ASSERT_EQ(r.code, 0) << r.err;
  t = parse_checked(r.out);
  EXPECT_EQ(t.text(0, "approx_questionable"), "yes");
  EXPECT_LE(std::abs(t.number(0, "mc_mean") - t.number(0, "quadrature")), 4 * t.number(0, "mc_se"));
}

TEST_F(Cli, InvalidParametersExitOneWithoutOutput) {
  for (const std::string args :
       {"expect symmetric --tau -1", "expect symmetric --m abc", "bogus", "", "expect general --start sideways",
        "expect multi-source --source 1:2", "control --method suppression --n 3", "qubit --noise rtn --format xml",
        "sweep /nonexistent/spec.json"}) {
    const auto r = run(args);
    EXPECT_EQ(r.code, 1) << args;
    EXPECT_TRUE(r.out.empty()) << args << ": " << r.out;
    EXPECT_FALSE(r.err.empty()) << args;
  }
}

TEST_F(Cli, VerifyPassesAndIsReproducible) {
  const auto a = run("verify --samples 100000 --seed 5");
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_NE(a.err.find("0 fail"), std::string::npos) << a.err;
  const auto t = parse_checked(a.out);
  bool saw_zero_m = false;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_EQ(t.text(i, "status"), "pass") << t.text(i, "label");
    EXPECT_LE(t.number(i, "z_max"), 4.0);
    if (t.text(i, "grid") == "symmetric" && t.number(i, "m") == 0.0) {
      saw_zero_m = true;
      EXPECT_EQ(t.number(i, "mc_re"), t.number(i, "analytic_re"));
      EXPECT_EQ(t.number(i, "z_max"), 0.0);
    }
  }
  EXPECT_TRUE(saw_zero_m);

  const auto b = run("verify --samples 100000 --seed 5");
  EXPECT_EQ(a.out, b.out);
  const auto threads = run("verify --samples 100000 --seed 5", "OMP_NUM_THREADS=3");
  EXPECT_EQ(a.out, threads.out);
  const auto other = run("verify --samples 100000 --seed 6");
  EXPECT_NE(a.out, other.out);
}

TEST_F(Cli, VerifyFailureExitsTwo) {
  // Two samples per point cannot match the closed forms.
  const auto r = run("verify --grid symmetric --samples 2 --workers 1 --seed 1");
  EXPECT_EQ(r.code, 2) << r.err;
  EXPECT_NE(r.err.find("fail"), std::string::npos);
  const auto t = parse_checked(r.out);
  EXPECT_EQ(t.rows.size(), 6u);
}

TEST_F(Cli, VerifyReportsInfeasibleConditionalRows) {
  const auto r = run("verify --grid conditional --flips 1,40 --samples 20000");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse_checked(r.out);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.text(0, "status"), "pass");
  EXPECT_EQ(t.text(1, "status"), "infeasible");
  EXPECT_NE(r.err.find("infeasible"), std::string::npos);
}

TEST_F(Cli, TraceIsExactAndDeterministic) {
  auto r = run("trace --delta 0 --t 50 --seed 2");
  ASSERT_EQ(r.code, 0) << r.err;
  auto t = parse_checked(r.out);
  ASSERT_GT(t.rows.size(), 2u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(t.number(i, "theta"), 0.0);

  const double tau = 0.5;
  r = run("trace --tau 0.5 --t 5000 --seed 9");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run("trace --tau 0.5 --t 5000 --seed 9").out, r.out);
  t = parse_checked(r.out);
  EXPECT_EQ(t.text(0, "event"), "start");
  EXPECT_EQ(t.text(t.rows.size() - 1, "event"), "end");
  // Complete dwell intervals lie between consecutive flips.
  double sum = 0, sum2 = 0;
  int n = 0;
  for (std::size_t i = 2; i + 1 < t.rows.size(); ++i) {
    const double d = t.number(i, "time") - t.number(i - 1, "time");
    ASSERT_GT(d, 0.0);
    EXPECT_EQ(t.number(i, "y"), -t.number(i - 1, "y"));
    sum += d;
    sum2 += d * d;
    ++n;
  }
  ASSERT_GT(n, 1000);
  const double mean = sum / n;
  const double se = std::sqrt((sum2 / n - mean * mean) / n);
  EXPECT_LE(std::abs(mean - tau), 4 * se);
  // theta is the running integral of y.
  double theta = 0.0;
  for (std::size_t i = 1; i < t.rows.size(); ++i) {
    theta += t.number(i - 1, "y") * (t.number(i, "time") - t.number(i - 1, "time"));
    EXPECT_NEAR(t.number(i, "theta"), theta, 1e-9) << i;
  }
  EXPECT_LE(std::abs(theta), 5000.0);
}

TEST_F(Cli, SweepSuppressionGivesInverseSquareSlope) {
  const auto r = run("sweep " + fixture("suppression_n.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse_checked(r.out);
  ASSERT_EQ(t.rows.size(), 4u);
  std::vector<double> n, err;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    n.push_back(t.number(i, "n_segments"));
    err.push_back(t.number(i, "exact_error"));
    EXPECT_LE(std::abs(t.number(i, "mc_re") - t.number(i, "exact_re")), 4 * t.number(i, "se_re"));
    EXPECT_LE(std::abs(t.number(i, "mc_im") - t.number(i, "exact_im")), 4 * t.number(i, "se_im"));
  }
  EXPECT_EQ(n, (std::vector<double>{4, 8, 16, 32}));
  EXPECT_NEAR(fitted_slope(n, err), -2.0, 0.1);
  EXPECT_EQ(run("sweep " + fixture("suppression_n.json")).out, r.out);
}

TEST_F(Cli, SweepQubitSigmaMatchesClosedForms) {
  const auto r = run("sweep " + fixture("qubit_sigma.json") + " --format json");
  ASSERT_EQ(r.code, 0) << r.err;
  const auto t = parse_checked(r.out);
  ASSERT_EQ(t.rows.size(), 25u);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const double s = t.number(i, "sigma");
    const double q = std::exp(-2 * s * s);
    const double q4 = std::pow(q, 4);
    EXPECT_NEAR(t.number(i, "n0"), 3.0 / 8 + q / 2 + q4 / 8, 1e-15);
    EXPECT_NEAR(t.number(i, "n1"), 1.0 / 8 - q4 / 8, 1e-15);
    EXPECT_NEAR(t.number(i, "n2"), 3.0 / 8 - q / 2 + q4 / 8, 1e-15);
    EXPECT_NEAR(t.number(i, "completeness"), 1.0, 1e-12);
  }
}

TEST_F(Cli, SweepVarianceApproachesLongTimeLimit) {
  const auto r = run("sweep " + fixture("variance_long_t.json"));
  ASSERT_EQ(r.code, 0) << r.err;
  ASSERT_EQ(r.out.front(), '{');  // the spec asks for JSON
  const auto t = parse_checked(r.out);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_NEAR(t.number(i, "variance") / t.number(i, "long_time"), 1.0, 1e-12);
  }
}

TEST_F(Cli, SweepFlagsOverrideSpec) {
  const auto out = dir_ / "table.csv";
  const auto r = run("sweep " + fixture("variance_long_t.json") + " --format csv --out '" + out.string() + "'");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto text = slurp(out);
  EXPECT_EQ(text.rfind("# rtnoise-table v1\n", 0), 0u);
  EXPECT_EQ(parse_checked(text).rows.size(), 7u);

  const auto a = run("sweep " + fixture("suppression_n.json") + " --seed 12");
  const auto b = run("sweep " + fixture("suppression_n.json"));
  EXPECT_NE(a.out, b.out);
}

TEST_F(Cli, SweepValidationDiagnostics) {
  auto r = run("sweep " + fixture("bad_count.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("sweep.count"), std::string::npos) << r.err;

  r = run("sweep " + fixture("bad_syntax.json"));
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

  std::ofstream(dir_ / "typo.json") << R"({"quantity": "variance", "sweep": {"parameter": "t", "min": 1, "max": 2}, "tau": 1})";
  r = run("sweep '" + (dir_ / "typo.json").string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("tau: unknown field"), std::string::npos) << r.err;

  std::ofstream(dir_ / "param.json") << R"({"quantity": "variance", "sweep": {"parameter": "sigma", "min": 1, "max": 2}})";
  r = run("sweep '" + (dir_ / "param.json").string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("sweep.parameter"), std::string::npos) << r.err;

  std::ofstream(dir_ / "log.json") << R"({"quantity": "variance", "sweep": {"parameter": "t", "min": 0, "max": 2, "count": 3, "spacing": "log"}})";
  r = run("sweep '" + (dir_ / "log.json").string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("sweep.min"), std::string::npos) << r.err;

  std::ofstream(dir_ / "odd.json") << R"({"quantity": "suppression", "sweep": {"parameter": "n_segments", "min": 3, "max": 3}})";
  r = run("sweep '" + (dir_ / "odd.json").string() + "'");
  EXPECT_EQ(r.code, 1);
  EXPECT_TRUE(r.out.empty());
  EXPECT_NE(r.err.find("n_segments=3"), std::string::npos) << r.err;
}

TEST_F(Cli, QubitAndControl) {
  auto r = run("qubit --noise rtn --delta 0.2 --tau 1e13 --t 1");
  ASSERT_EQ(r.code, 0) << r.err;
  auto t = parse_checked(r.out);
  const double c = std::cos(0.2), s = std::sin(0.2);
  EXPECT_NEAR(t.number(0, "n0"), std::pow(c, 4), 1e-10);
  EXPECT_NEAR(t.number(0, "n1"), s * s * c * c, 1e-10);
  EXPECT_NEAR(t.number(0, "n2"), std::pow(s, 4), 1e-10);

  r = run("qubit --noise suppressed --delta 0.3 --tau 1 --t 1,2 --n 4");
  ASSERT_EQ(r.code, 0) << r.err;
  t = parse_checked(r.out);
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_NEAR(t.number(1, "completeness"), 1.0, 1e-12);

  r = run("control --method suppression --n 2,4,8 --m 2 --t 2 --mc --samples 50000");
  ASSERT_EQ(r.code, 0) << r.err;
  t = parse_checked(r.out);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    EXPECT_NEAR(t.number(i, "value_re"), t.number(i, "schedule_re"), 1e-12);
    EXPECT_LE(t.number(i, "z_max"), 4.0);
  }

  r = run("control --method waiting --mode leading_order --n 4 --m 0.01 --t 1");
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NEAR(parse_checked(r.out).number(0, "error"), 1e-4 / 8, 2e-16);
}

}  // namespace
