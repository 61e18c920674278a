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

// Runtime checks of the provable properties of a solver trace, plus
// convergence-rate measurement.

#ifndef QUEUEGRAD_DIAGNOSTICS_HPP_
#define QUEUEGRAD_DIAGNOSTICS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "queuegrad/problem.hpp"
#include "queuegrad/solvers.hpp"

namespace queuegrad {

enum class CheckStatus { kPassed, kFailed, kSkipped };
std::string_view to_string(CheckStatus status);

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kSkipped;
  // Largest amount by which the checked inequality was exceeded (<= 0 when
  // it held everywhere), and where.
  double worst_violation = 0.0;
  std::int64_t worst_iteration = -1;
  std::string note;
};

struct InvariantReport {
  std::vector<CheckResult> checks;

  bool all_passed() const;  // no check failed; skipped checks are fine
  const CheckResult& at(std::string_view name) const;
  std::string to_table() const;
};

// Registered check names, in report order.
namespace checks {
inline constexpr std::string_view kQueueNonnegative = "queue_nonnegative";
inline constexpr std::string_view kShiftedNonnegative = "queue_plus_constraint_nonnegative";
inline constexpr std::string_view kNormOrdering = "queue_norm_ordering";
inline constexpr std::string_view kPartialSums = "queue_dominates_partial_sums";
inline constexpr std::string_view kDriftBound = "drift_bound";
inline constexpr std::string_view kRecordConsistency = "recorded_norm_and_drift";
inline constexpr std::string_view kAverageInBox = "average_in_box";
inline constexpr std::string_view kQueueCap = "queue_norm_cap";
inline constexpr std::string_view kObjectiveBound = "objective_gap_bound";
inline constexpr std::string_view kConstraintBound = "constraint_violation_bound";
inline constexpr std::string_view kDualityLowerBound = "duality_lower_bound";
}  // namespace checks

struct CheckOptions {
  std::optional<double> f_star;
  // Defaults to constants.multiplier_bound when absent.
  std::optional<double> multiplier_bound;
};

// Runs every applicable check. Bound checks allow an additive
// 1e-9 * (1 + |bound|). Checks whose hypotheses are unmet (no f*, no
// multiplier bound, step above ConstantsPack::max_step, dual-type trace) are
// reported as skipped. Throws ConfigurationError for subgradient traces.
InvariantReport check_trace(const SolverTrace& trace,
                            const ConvexProgram& program,
                            const ConstantsPack& constants,
                            const CheckOptions& options = {});

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  double residual = 0.0;  // RMS deviation in log10 units
  std::size_t points = 0;
};

// Least squares of log10(error) on log10(t) over points with
// t_lo <= t <= t_hi and error > 0. Throws InvalidInput with fewer than 10.
RateFit fit_rate(const std::vector<std::pair<double, double>>& series,
                 double t_lo, double t_hi);

// (t, Delta(t)) with Delta(t) = (||Q(t+1)||^2 - ||Q(t)||^2) / 2.
std::vector<std::pair<std::int64_t, double>> drift_series(const SolverTrace& trace);

// (t, |f(xbar(t)) - f_star|) for t >= 1.
std::vector<std::pair<double, double>> gap_series(const SolverTrace& trace,
                                                  double f_star);

// Per constraint, the first t >= 1 from which g_k(xbar(tau)) <= 0 holds for
// every later record; nullopt if the last record still violates it.
std::vector<std::optional<std::int64_t>> constraint_onset(const SolverTrace& trace);

}  // namespace queuegrad

#endif  // QUEUEGRAD_DIAGNOSTICS_HPP_
