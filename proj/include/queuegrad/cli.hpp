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

// Command implementations behind the `queuegrad` executable. Each command
// writes to the given streams and returns its process exit code:
//
//   0  success
//   1  configuration or input error (bad flags, unreadable files,
//      algorithm mismatch in verify)
//   2  numerical failure during a solve (partial trace still written)
//   3  verify found a failed check

#ifndef QUEUEGRAD_CLI_HPP_
#define QUEUEGRAD_CLI_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "queuegrad/instances.hpp"
#include "queuegrad/solvers.hpp"

namespace queuegrad::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitVerifyFailed = 3;

struct RunConfig {
  Algorithm algorithm = Algorithm::kNew;
  std::int64_t iterations = 100000;
  std::string step = "auto";      // "auto" or a positive real
  std::string x_init = "default"; // "default", "lower", "upper" or "a,b,..."
  std::uint64_t seed = 0;         // random:<family>:<n>:<m> problems only
  std::string output;             // trace CSV path; empty skips the file
  bool x_columns = true;
  bool include_objective_gradient = true;
  double inner_tolerance = 1e-10;
  std::int64_t inner_max_iterations = 100000;
  std::optional<double> lambda_bound;
};

// Loads a problem file, or generates one from "random:<lp|qp>:<n>:<m>".
ProblemSpec load_problem(const std::string& source, std::uint64_t seed = 0);

// Parses "lower", "upper", "default" or a comma-separated vector.
Vector resolve_initial_point(const ProblemSpec& spec, const std::string& text);

// Turns a RunConfig into solver options, resolving step = auto from the
// problem constants. Throws ConfigurationError.
RunOptions make_run_options(const ProblemSpec& spec, const BuiltProgram& built,
                            const RunConfig& config);

// Constants with the estimated multiplier bound attached when one exists.
BuiltProgram build_with_estimate(const ProblemSpec& spec);

// Reference optimum when the problem is small enough for the oracle.
std::optional<double> reference_optimum(const ProblemSpec& spec);

int cmd_solve(const std::string& problem, const RunConfig& config,
              std::ostream& out, std::ostream& err);

int cmd_verify(const std::string& trace_path, const std::string& problem,
               std::optional<double> f_star, std::ostream& out,
               std::ostream& err);

struct RateConfig {
  double f_star = 0.0;
  double t_lo = 1e3;
  double t_hi = 1e5;
  std::string series_output;  // optional CSV of the log-log series
};

int cmd_rate(const std::string& trace_path, const RateConfig& config,
             std::ostream& out, std::ostream& err);

int cmd_compare(const std::string& problem, std::int64_t iterations,
                std::uint64_t seed, std::ostream& out, std::ostream& err);

int cmd_oracle(const std::string& problem, int grid_points, std::uint64_t seed,
               std::ostream& out, std::ostream& err);

int cmd_random(Family family, int n, int m, std::uint64_t seed,
               const std::string& output, std::ostream& out, std::ostream& err);

// Worker count for concurrent solves: QUEUEGRAD_THREADS if set to a
// positive integer, else the number of logical processors.
unsigned thread_limit();

// Full command-line entry point.
int run_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err);

}  // namespace queuegrad::cli

#endif  // QUEUEGRAD_CLI_HPP_
