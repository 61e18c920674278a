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

#include "queuegrad/io.hpp"

#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "queuegrad/errors.hpp"

namespace queuegrad {
namespace {

const std::string kDataDir = QUEUEGRAD_DATA_DIR;

std::string parse_error_message(const std::string& text) {
  try {
    parse_problem_json(text, "case.json");
  } catch (const ParseError& e) {
    return e.what();
  }
  return "";
}

TEST(ParseProblemTest, ShippedLpEqualsBuiltIn) {
  const ProblemSpec spec = parse_problem_file(kDataDir + "/lp_paper.json");
  const auto& lp = std::get<LpSpec>(spec);
  const LpSpec ref = paper_lp_instance();
  EXPECT_EQ(lp.c, ref.c);
  EXPECT_EQ(lp.A, ref.A);
  EXPECT_EQ(lp.b, ref.b);
  EXPECT_EQ(lp.lower, ref.lower);
  EXPECT_EQ(lp.upper, ref.upper);
}

TEST(ParseProblemTest, ShippedQpEqualsBuiltIn) {
  const ProblemSpec spec = parse_problem_file(kDataDir + "/qp_paper.json");
  const auto& qp = std::get<QpSpec>(spec);
  const QpSpec ref = paper_qp_instance();
  EXPECT_EQ(qp.P, ref.P);
  EXPECT_EQ(qp.c, ref.c);
  EXPECT_EQ(qp.A, ref.A);
  EXPECT_EQ(qp.b, ref.b);
  EXPECT_EQ(qp.Q, ref.Q);
  EXPECT_EQ(qp.d, ref.d);
  EXPECT_EQ(qp.e, ref.e);
  EXPECT_EQ(qp.lower, ref.lower);
  EXPECT_EQ(qp.upper, ref.upper);
}

TEST(ParseProblemTest, ShortRowIsNamed) {
  const std::string msg = parse_error_message(R"({
  "family": "lp",
  "c": [1, 2],
  "A": [[1, 2],
        [3]],
  "b": [1, 2],
  "lower": [0, 0],
  "upper": [1, 1]
})");
  EXPECT_NE(msg.find("A row 2"), std::string::npos) << msg;
  EXPECT_NE(msg.find("case.json:4"), std::string::npos) << msg;
}

TEST(ParseProblemTest, MalformedJsonReportsLine) {
  const std::string msg = parse_error_message("{\n  \"family\": \"lp\",\n  \"c\": [1, 2,,]\n}");
  EXPECT_NE(msg.find("case.json:3"), std::string::npos) << msg;
}

TEST(ParseProblemTest, NonPsdRejected) {
  const std::string msg = parse_error_message(R"({
  "family": "qp", "P": [[1, 0], [0, -1]], "c": [0, 0], "Q": [[1, 0], [0, 1]],
  "d": [0, 0], "e": 1, "lower": [0, 0], "upper": [1, 1]
})");
  EXPECT_FALSE(msg.empty());
}

TEST(ParseProblemTest, MissingFieldAndUnknownFamily) {
  EXPECT_NE(parse_error_message(R"({"family": "lp", "c": [1]})").find("lower"), std::string::npos);
  EXPECT_NE(parse_error_message(R"({"family": "sdp"})").find("sdp"), std::string::npos);
  EXPECT_THROW(parse_problem_file(kDataDir + "/does_not_exist.json"), ParseError);
}

TEST(ParseProblemTest, JsonRoundTrip) {
  for (const ProblemSpec& spec : {ProblemSpec(random_instance(Family::kLp, 3, 2, 8)),
                                  ProblemSpec(random_instance(Family::kQp, 3, 2, 8))}) {
    const ProblemSpec back = parse_problem_json(problem_to_json(spec));
    EXPECT_EQ(problem_to_json(back), problem_to_json(spec));
    EXPECT_EQ(lower_bound(back), lower_bound(spec));
  }
}

TEST(FormatDoubleTest, RoundTripsExactly) {
  for (const double v : {1.0 / 3.0, -5.733333333333333, 1e-300, 6.02214076e23, 0.1}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
}

SolverTrace sample_trace() {
  const BuiltProgram built = build_qp(paper_qp_instance(), 50.0);
  RunOptions options;
  options.iterations = 200;
  options.step = 0.05;
  options.x_init = Vector::Zero(2);
  return run(built.program, built.constants, options);
}

TEST(TraceCsvTest, HeaderIsExact) {
  std::ostringstream out;
  write_trace_csv(out, sample_trace());
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line) && line.rfind('#', 0) == 0) {
  }
  EXPECT_EQ(line, "t,f_x,f_xbar,g_xbar_1,g_xbar_2,g_xbar_3,q_norm,drift,x_1,x_2");
}

TEST(TraceCsvTest, OptionalXColumns) {
  std::ostringstream out;
  write_trace_csv(out, sample_trace(), CsvOptions{false});
  std::istringstream in(out.str());
  const ParsedTrace parsed = read_trace_csv(in);
  EXPECT_EQ(parsed.num_variables(), 0);
  EXPECT_EQ(parsed.num_constraints(), 3);
  EXPECT_EQ(parsed.columns.back(), "drift");
}

TEST(TraceCsvTest, RoundTripPreservesEveryField) {
  const SolverTrace trace = sample_trace();
  std::ostringstream out;
  write_trace_csv(out, trace);
  std::istringstream in(out.str());
  const ParsedTrace parsed = read_trace_csv(in);
  ASSERT_EQ(parsed.rows.size(), trace.records.size());
  EXPECT_EQ(parsed.metadata.at("algorithm"), "new");
  const BuiltProgram built = build_qp(paper_qp_instance(), 50.0);
  const SolverTrace back = trace_from_csv(parsed, built.program);
  EXPECT_EQ(back.step, trace.step);
  EXPECT_EQ(back.x_init, trace.x_init);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& a = trace.records[i];
    const TraceRecord& b = back.records[i];
    EXPECT_EQ(a.t, b.t);
    EXPECT_EQ(a.f_x, b.f_x);
    EXPECT_EQ(a.f_average, b.f_average);
    EXPECT_EQ(a.g_average, b.g_average);
    EXPECT_EQ(a.queue_norm, b.queue_norm);
    EXPECT_EQ(a.drift, b.drift);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.queue, b.queue);
  }
}

TEST(TraceCsvTest, RejectsRaggedRows) {
  std::istringstream in("t,f_x\n0,1\n1\n");
  EXPECT_THROW(read_trace_csv(in), ParseError);
}

TEST(TraceCsvTest, ReplayNeedsXColumns) {
  std::ostringstream out;
  write_trace_csv(out, sample_trace(), CsvOptions{false});
  std::istringstream in(out.str());
  const ParsedTrace parsed = read_trace_csv(in);
  const BuiltProgram built = build_qp(paper_qp_instance(), 50.0);
  EXPECT_THROW(trace_from_csv(parsed, built.program), ConfigurationError);
}

}  // namespace
}  // namespace queuegrad
