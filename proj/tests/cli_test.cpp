// Copyright 2026 The queuegrad Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "queuegrad/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "queuegrad/io.hpp"

namespace queuegrad::cli {
namespace {

namespace fs = std::filesystem;

const std::string kDataDir = QUEUEGRAD_DATA_DIR;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "queuegrad");
  std::ostringstream out, err;
  const int code = run_main(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("queuegrad_cli_" + std::string(::testing::UnitTest::GetInstance()
                                               ->current_test_info()
                                               ->name()));
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, SolveLpAutoStepPrintsGamma) {
  const Result r = invoke({"solve", kDataDir + "/lp_paper.json", "--iterations", "1000",
                           "-o", path("lp.csv")});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("gamma        0.00389105"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("f(xbar)"), std::string::npos);
  EXPECT_NE(r.out.find("max g(xbar)"), std::string::npos);
  EXPECT_TRUE(fs::exists(path("lp.csv")));
}

TEST_F(CliTest, SolveQpWithExplicitStep) {
  const Result r = invoke({"solve", kDataDir + "/qp_paper.json", "--step", "0.1395",
                           "--iterations", "500"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("gamma        0.1395"), std::string::npos) << r.out;
}

TEST_F(CliTest, ZeroIterationsIsConfigError) {
  const Result r = invoke({"solve", kDataDir + "/lp_paper.json", "--iterations", "0"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("iterations must be ≥ 1"), std::string::npos) << r.err;
}

TEST_F(CliTest, BadFlagsAreConfigErrors) {
  EXPECT_EQ(invoke({"solve", kDataDir + "/lp_paper.json", "--algorithm", "simplex"}).code,
            kExitConfig);
  EXPECT_EQ(invoke({"solve", kDataDir + "/lp_paper.json", "--step", "abc"}).code, kExitConfig);
  EXPECT_EQ(invoke({"solve", kDataDir + "/missing.json"}).code, kExitConfig);
  EXPECT_EQ(invoke({"frobnicate"}).code, kExitConfig);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST_F(CliTest, DivergentStepIsNumericalFailure) {
  std::ofstream(path("huge.json")) << R"({"family": "lp", "c": [1], "A": [[1]],
    "b": [-1e120], "lower": [0], "upper": [1]})";
  const Result r = invoke({"solve", path("huge.json"), "--step", "0.001", "--iterations", "100",
                           "-o", path("bad.csv")});
  EXPECT_EQ(r.code, kExitNumerical);
  EXPECT_TRUE(fs::exists(path("bad.csv")));
}

TEST_F(CliTest, AllAlgorithmsRun) {
  for (const std::string a : {"new", "pd-subgradient", "dual-type"}) {
    const Result r = invoke({"solve", kDataDir + "/qp_paper.json", "-a", a, "-T", "200"});
    EXPECT_EQ(r.code, kExitOk) << a << ": " << r.err;
  }
  const Result literal = invoke({"solve", kDataDir + "/lp_paper.json", "-a", "pd-subgradient",
                                 "--no-objective-gradient", "--lambda-bound", "100", "-T", "50"});
  EXPECT_EQ(literal.code, kExitOk) << literal.err;
  EXPECT_NE(literal.out.find("c            "), std::string::npos);
}

TEST_F(CliTest, RandomProblemSource) {
  const Result r = invoke({"solve", "random:qp:3:2", "--seed", "4", "-T", "100"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  const Result g = invoke({"random", "--family", "lp", "-n", "3", "-m", "2", "--seed", "4",
                           "-o", path("r.json")});
  ASSERT_EQ(g.code, kExitOk) << g.err;
  EXPECT_EQ(problem_to_json(parse_problem_file(path("r.json"))),
            problem_to_json(random_instance(Family::kLp, 3, 2, 4)));
}

TEST_F(CliTest, SolveIsByteDeterministic) {
  for (const std::string name : {"a.csv", "b.csv"}) {
    ASSERT_EQ(invoke({"solve", kDataDir + "/qp_paper.json", "-T", "2000", "-o", path(name)}).code,
              kExitOk);
  }
  EXPECT_EQ(read_file(path("a.csv")), read_file(path("b.csv")));
}

TEST_F(CliTest, VerifyPassesOnReferenceLp) {
  ASSERT_EQ(invoke({"solve", kDataDir + "/lp_paper.json", "-T", "5000", "-o", path("lp.csv")}).code,
            kExitOk);
  const Result plain = invoke({"verify", path("lp.csv"), "-p", kDataDir + "/lp_paper.json"});
  EXPECT_EQ(plain.code, kExitOk) << plain.out << plain.err;
  EXPECT_NE(plain.out.find("objective_gap_bound                 skipped"), std::string::npos)
      << plain.out;
  const Result with = invoke({"verify", path("lp.csv"), "-p", kDataDir + "/lp_paper.json",
                              "--f-star", "-5.733333333333333"});
  EXPECT_EQ(with.code, kExitOk) << with.out;
  EXPECT_NE(with.out.find("objective_gap_bound                 pass"), std::string::npos)
      << with.out;
}

TEST_F(CliTest, VerifyFlagsNegatedQueueColumn) {
  ASSERT_EQ(invoke({"solve", kDataDir + "/qp_paper.json", "-T", "300", "-o", path("qp.csv")}).code,
            kExitOk);
  // Negate every q_norm entry.
  std::istringstream in(read_file(path("qp.csv")));
  std::ostringstream out;
  std::string line;
  int q_col = -1;
  while (std::getline(in, line)) {
    if (line.rfind('#', 0) == 0) {
      out << line << "\n";
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (q_col < 0) {
      for (std::size_t i = 0; i < cells.size(); ++i) {
        if (cells[i] == "q_norm") q_col = static_cast<int>(i);
      }
    } else if (cells[q_col] != "0") {
      cells[q_col] = "-" + cells[q_col];
    }
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << "\n";
  }
  std::ofstream(path("bad.csv"), std::ios::binary) << out.str();
  const Result r = invoke({"verify", path("bad.csv"), "-p", kDataDir + "/qp_paper.json"});
  EXPECT_EQ(r.code, kExitVerifyFailed) << r.out << r.err;
  EXPECT_NE(r.out.find("queue_nonnegative                   FAIL"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("result: FAIL"), std::string::npos);
}

TEST_F(CliTest, VerifyRejectsOtherAlgorithms) {
  ASSERT_EQ(invoke({"solve", kDataDir + "/lp_paper.json", "-a", "dual-type", "-T", "100",
                    "-o", path("d.csv")}).code,
            kExitOk);
  const Result r = invoke({"verify", path("d.csv"), "-p", kDataDir + "/lp_paper.json"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("dual-type"), std::string::npos);
}

TEST_F(CliTest, RateOnReferenceTraces) {
  ASSERT_EQ(invoke({"solve", kDataDir + "/lp_paper.json", "-o", path("lp.csv")}).code, kExitOk);
  const Result lp = invoke({"rate", path("lp.csv"), "--f-star", "-5.733333333333333",
                            "--series", path("series.csv")});
  ASSERT_EQ(lp.code, kExitOk) << lp.err;
  const double slope = std::stod(lp.out.substr(lp.out.find("slope") + 5));
  EXPECT_GE(slope, -1.25);
  EXPECT_LE(slope, -0.75);
  for (const std::string k : {"onset g_1  ", "onset g_2  ", "onset g_3  "}) {
    const auto pos = lp.out.find(k);
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LE(std::stoi(lp.out.substr(pos + k.size())), 10);
  }
  EXPECT_EQ(read_file(path("series.csv")).rfind("t,log10_t,log10_gap,g_xbar_1", 0), 0u);

  ASSERT_EQ(invoke({"solve", kDataDir + "/qp_paper.json", "--step", "0.1395", "-T", "2000",
                    "-o", path("qp.csv")}).code,
            kExitOk);
  const Result qp = invoke({"rate", path("qp.csv"), "--f-star", "-3.75", "--t-lo", "100",
                            "--t-hi", "2000"});
  ASSERT_EQ(qp.code, kExitOk) << qp.err;
  EXPECT_NE(qp.out.find("onset g_1  1\n"), std::string::npos) << qp.out;
  EXPECT_NE(qp.out.find("onset g_3  1\n"), std::string::npos) << qp.out;
}

TEST_F(CliTest, RateOnSyntheticPowerLaw) {
  std::ofstream csv(path("syn.csv"), std::ios::binary);
  csv << "t,f_x,f_xbar,g_xbar_1,q_norm,drift\n";
  for (int t = 0; t <= 100000; t += (t < 1000 ? 1 : 10)) {
    csv << t << ",0," << format_double(t == 0 ? 5.0 : 1.0 / t) << ",-1,0,0\n";
  }
  csv.close();
  const Result r = invoke({"rate", path("syn.csv"), "--f-star", "0"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("slope      -1.000000"), std::string::npos) << r.out;
}

TEST_F(CliTest, RateWithoutPositiveGapsGivesMessage) {
  std::ofstream csv(path("flat.csv"), std::ios::binary);
  csv << "t,f_x,f_xbar,g_xbar_1,q_norm,drift\n";
  for (int t = 0; t <= 2000; ++t) csv << t << ",0,0,-1,0,0\n";
  csv.close();
  const Result r = invoke({"rate", path("flat.csv"), "--f-star", "0"});
  EXPECT_EQ(r.code, kExitConfig);
  EXPECT_NE(r.err.find("no fit"), std::string::npos);
}

TEST_F(CliTest, CompareLpNewMatchesDualType) {
  const Result r = invoke({"compare", kDataDir + "/lp_paper.json", "-T", "10000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::istringstream in(r.out);
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.rfind("gap t", 0) == 0) {
      while (std::getline(in, line) && line.rfind("maxg", 0) != 0) {
        std::istringstream cells(line);
        std::string t, a, b, c;
        cells >> t >> a >> b >> c;
        EXPECT_EQ(a.substr(0, 14), c.substr(0, 14)) << line;
        ++rows;
      }
      break;
    }
  }
  EXPECT_EQ(rows, 3);  // t = 100, 1000, 10000
}

TEST_F(CliTest, CompareTrivialObjectiveHasZeroGaps) {
  std::ofstream(path("flat.json")) << R"({"family": "lp", "c": [0, 0], "A": [[1, 1]],
    "b": [1], "lower": [0, 0], "upper": [1, 1]})";
  const Result r = invoke({"compare", path("flat.json"), "-T", "1000"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto start = r.out.find("gap t");
  const auto end = r.out.find("maxg t");
  ASSERT_NE(start, std::string::npos);
  std::istringstream in(r.out.substr(start, end - start));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::istringstream cells(line);
    std::string t;
    double a, b, c;
    cells >> t >> a >> b >> c;
    EXPECT_EQ(a, 0.0);
    EXPECT_EQ(b, 0.0);
    EXPECT_EQ(c, 0.0);
  }
}

TEST_F(CliTest, CompareQpHasDistinctColumns) {
  setenv("QUEUEGRAD_THREADS", "2", 1);
  EXPECT_EQ(thread_limit(), 2u);
  const Result r = invoke({"compare", kDataDir + "/qp_paper.json", "-T", "10000"});
  unsetenv("QUEUEGRAD_THREADS");
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const auto pos = r.out.find("\n10000 ", r.out.find("gap t"));
  ASSERT_NE(pos, std::string::npos) << r.out;
  std::istringstream cells(r.out.substr(pos + 1, r.out.find('\n', pos + 1) - pos - 1));
  std::string t, a, b, c;
  cells >> t >> a >> b >> c;
  EXPECT_NE(a, b);
  EXPECT_NE(a, c);
  EXPECT_NE(b, c);
}

TEST_F(CliTest, OraclePrintsOptimum) {
  const Result lp = invoke({"oracle", kDataDir + "/lp_paper.json"});
  ASSERT_EQ(lp.code, kExitOk) << lp.err;
  EXPECT_NE(lp.out.find("f_star       -5.73333333333333"), std::string::npos) << lp.out;
  const Result qp = invoke({"oracle", kDataDir + "/qp_paper.json"});
  ASSERT_EQ(qp.code, kExitOk) << qp.err;
  EXPECT_NE(qp.out.find("f_star       -3.75"), std::string::npos) << qp.out;
}

}  // namespace
}  // namespace queuegrad::cli
