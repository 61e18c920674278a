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

#include "queuegrad/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "queuegrad/errors.hpp"

namespace queuegrad {
namespace {

constexpr double kRelTol = 1e-9;

double tolerance(double scale) { return kRelTol * (1.0 + std::abs(scale)); }

// Tracks one inequality lhs <= rhs across iterations.
class Check {
 public:
  explicit Check(std::string_view name) { result_.name = std::string(name); }

  void observe(double excess, double allowed, std::int64_t t) {
    if (!observed_ || excess > result_.worst_violation) {
      result_.worst_violation = excess;
      result_.worst_iteration = t;
    }
    observed_ = true;
    if (excess > allowed) failed_ = true;
  }

  CheckResult finish() {
    result_.status = failed_ ? CheckStatus::kFailed : CheckStatus::kPassed;
    return std::move(result_);
  }

 private:
  CheckResult result_;
  bool observed_ = false;
  bool failed_ = false;
};

CheckResult skipped(std::string_view name, std::string note) {
  CheckResult r;
  r.name = std::string(name);
  r.status = CheckStatus::kSkipped;
  r.note = std::move(note);
  return r;
}

}  // namespace

std::string_view to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPassed:
      return "pass";
    case CheckStatus::kFailed:
      return "FAIL";
    case CheckStatus::kSkipped:
      return "skipped";
  }
  return "?";
}

bool InvariantReport::all_passed() const {
  return std::none_of(checks.begin(), checks.end(), [](const CheckResult& c) {
    return c.status == CheckStatus::kFailed;
  });
}

const CheckResult& InvariantReport::at(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return c;
  }
  throw InvalidInput("no check named " + std::string(name));
}

std::string InvariantReport::to_table() const {
  std::ostringstream out;
  out << std::left << std::setw(36) << "check" << std::setw(9) << "status"
      << std::setw(16) << "worst_excess" << std::setw(10) << "at_t"
      << "note\n";
  for (const auto& c : checks) {
    out << std::left << std::setw(36) << c.name << std::setw(9)
        << to_string(c.status);
    if (c.status == CheckStatus::kSkipped) {
      out << std::setw(16) << "-" << std::setw(10) << "-";
    } else {
      std::ostringstream v;
      v << std::setprecision(6) << c.worst_violation;
      out << std::setw(16) << v.str() << std::setw(10) << c.worst_iteration;
    }
    out << c.note << "\n";
  }
  return out.str();
}

InvariantReport check_trace(const SolverTrace& trace,
                            const ConvexProgram& program,
                            const ConstantsPack& constants,
                            const CheckOptions& options) {
  if (trace.algorithm == Algorithm::kPdSubgradient) {
    throw ConfigurationError(
        "trace checks apply to virtual-queue traces; the subgradient method "
        "has no queue");
  }
  if (trace.records.empty()) throw ConfigurationError("trace has no records");
  const auto& records = trace.records;
  const Eigen::Index m = program.num_constraints();
  for (const auto& r : records) {
    if (r.queue.size() != m || r.g_x.size() != m || r.g_average.size() != m) {
      throw ConfigurationError("trace does not match the program's constraint count");
    }
  }

  InvariantReport report;

  // Queue properties shared by both virtual-queue methods.
  {
    Check check(checks::kQueueNonnegative);
    for (const auto& r : records) {
      const double worst = std::max(-r.queue.minCoeff(), -r.queue_norm);
      check.observe(worst, 0.0, r.t);
    }
    report.checks.push_back(check.finish());
  }
  {
    Check check(checks::kShiftedNonnegative);
    for (const auto& r : records) {
      const Vector shifted = r.queue + r.g_x;
      check.observe(-shifted.minCoeff(), tolerance(r.g_x.cwiseAbs().maxCoeff()),
                    r.t);
    }
    report.checks.push_back(check.finish());
  }
  {
    Check check(checks::kNormOrdering);
    for (const auto& r : records) {
      const double g_norm = r.g_x.norm();
      const double excess =
          r.t == 0 ? r.queue_norm - g_norm : g_norm - r.queue_norm;
      check.observe(excess, tolerance(g_norm), r.t);
    }
    report.checks.push_back(check.finish());
  }
  {
    Check check(checks::kPartialSums);
    Vector partial = Vector::Zero(m);
    for (std::size_t i = 1; i < records.size(); ++i) {
      partial += records[i].g_x;
      const double excess = (partial - records[i].queue).maxCoeff();
      check.observe(excess, tolerance(partial.cwiseAbs().maxCoeff()),
                    records[i].t);
    }
    report.checks.push_back(check.finish());
  }
  {
    Check check(checks::kDriftBound);
    for (std::size_t i = 0; i + 1 < records.size(); ++i) {
      const Vector& q = records[i].queue;
      const Vector& g = records[i + 1].g_x;
      const double bound = q.dot(g) + g.squaredNorm();
      check.observe(records[i + 1].drift - bound, tolerance(q.squaredNorm()),
                    records[i].t);
    }
    report.checks.push_back(check.finish());
  }
  {
    Check check(checks::kRecordConsistency);
    for (std::size_t i = 0; i < records.size(); ++i) {
      const auto& r = records[i];
      const double norm = r.queue.norm();
      check.observe(std::abs(r.queue_norm - norm), tolerance(norm), r.t);
      if (i > 0) {
        const double prev = records[i - 1].queue.squaredNorm();
        const double drift = 0.5 * (r.queue.squaredNorm() - prev);
        check.observe(std::abs(r.drift - drift),
                      tolerance(r.queue.squaredNorm() + prev), r.t);
      }
    }
    report.checks.push_back(check.finish());
  }
  {
    Check check(checks::kAverageInBox);
    const BoxSet& box = program.box();
    for (const auto& r : records) {
      const double below = (box.lower() - r.x_average).maxCoeff();
      const double above = (r.x_average - box.upper()).maxCoeff();
      check.observe(std::max(below, above),
                    tolerance(box.radius_bound()), r.t);
    }
    report.checks.push_back(check.finish());
  }

  // Bounds that rely on the step-size rule and on strong duality.
  const std::optional<double> lambda_bound =
      options.multiplier_bound ? options.multiplier_bound
                               : constants.multiplier_bound;
  const double gamma = trace.step;
  std::string step_issue;
  if (trace.algorithm != Algorithm::kNew) {
    step_issue = "bounds are proved for the virtual-queue method only";
  } else {
    ConstantsPack pack = constants;
    pack.multiplier_bound = lambda_bound;
    pack = finalize_constants(std::move(pack));
    if (!pack.complete()) {
      step_issue = "step rule needs a multiplier bound";
    } else if (gamma > pack.max_step * (1.0 + 1e-12)) {
      std::ostringstream msg;
      msg << "gamma " << gamma << " exceeds max admissible step "
          << pack.max_step;
      step_issue = msg.str();
    }
  }
  const double R = constants.diameter;
  const double C = constants.constraint_bound;

  if (!step_issue.empty()) {
    report.checks.push_back(skipped(checks::kQueueCap, step_issue));
  } else if (!lambda_bound) {
    report.checks.push_back(skipped(checks::kQueueCap, "no multiplier bound"));
  } else {
    Check check(checks::kQueueCap);
    const double cap = 2.0 * *lambda_bound + R / std::sqrt(gamma) + C;
    for (const auto& r : records) {
      check.observe(r.queue_norm - cap, tolerance(cap), r.t);
    }
    report.checks.push_back(check.finish());
  }

  if (!step_issue.empty()) {
    report.checks.push_back(skipped(checks::kObjectiveBound, step_issue));
  } else if (!options.f_star) {
    report.checks.push_back(skipped(checks::kObjectiveBound, "no f* supplied"));
  } else {
    Check check(checks::kObjectiveBound);
    for (const auto& r : records) {
      if (r.t < 1) continue;
      const double bound = R * R / (2.0 * gamma * static_cast<double>(r.t));
      check.observe(r.f_average - *options.f_star - bound, tolerance(bound), r.t);
    }
    report.checks.push_back(check.finish());
  }

  if (!step_issue.empty()) {
    report.checks.push_back(skipped(checks::kConstraintBound, step_issue));
  } else if (!lambda_bound) {
    report.checks.push_back(
        skipped(checks::kConstraintBound, "no multiplier bound"));
  } else {
    Check check(checks::kConstraintBound);
    const double numerator = 2.0 * *lambda_bound + R / std::sqrt(gamma) + C;
    for (const auto& r : records) {
      if (r.t < 1) continue;
      const double bound = numerator / static_cast<double>(r.t);
      check.observe(r.g_average.maxCoeff() - bound, tolerance(bound), r.t);
    }
    report.checks.push_back(check.finish());
  }

  if (trace.algorithm != Algorithm::kNew) {
    report.checks.push_back(skipped(
        checks::kDualityLowerBound,
        "bounds are proved for the virtual-queue method only"));
  } else if (!options.f_star || !lambda_bound) {
    report.checks.push_back(skipped(checks::kDualityLowerBound,
                                    "needs f* and a multiplier bound"));
  } else {
    Check check(checks::kDualityLowerBound);
    double objective_sum = 0.0;
    for (std::size_t i = 1; i < records.size(); ++i) {
      objective_sum += records[i].f_x;
      const double t = static_cast<double>(records[i].t);
      const double slack = *lambda_bound * records[i].queue_norm;
      const double lower = t * *options.f_star - slack;
      check.observe(lower - objective_sum,
                    tolerance(std::abs(t * *options.f_star) + slack +
                              std::abs(objective_sum)),
                    records[i].t);
    }
    report.checks.push_back(check.finish());
  }
  return report;
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& series,
                 double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw InvalidInput("rate window needs t_lo < t_hi");
  std::vector<double> xs, ys;
  for (const auto& [t, err] : series) {
    if (t < t_lo || t > t_hi || !(t > 0.0)) continue;
    if (!(err > 0.0) || !std::isfinite(err)) continue;
    xs.push_back(std::log10(t));
    ys.push_back(std::log10(err));
  }
  if (xs.size() < 10) {
    std::ostringstream msg;
    msg << "rate fit needs at least 10 positive points in [" << t_lo << ", "
        << t_hi << "], found " << xs.size();
    throw InvalidInput(msg.str());
  }
  const double count = static_cast<double>(xs.size());
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mean_x += xs[i];
    mean_y += ys[i];
  }
  mean_x /= count;
  mean_y /= count;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mean_x) * (xs[i] - mean_x);
    sxy += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  if (!(sxx > 0.0)) throw InvalidInput("rate fit needs distinct t values");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = mean_y - fit.slope * mean_x;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.points = xs.size();
  double ss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (fit.intercept + fit.slope * xs[i]);
    ss += r * r;
  }
  fit.residual = std::sqrt(ss / count);
  return fit;
}

std::vector<std::pair<std::int64_t, double>> drift_series(
    const SolverTrace& trace) {
  if (trace.records.size() < 2) {
    throw InvalidInput("drift series needs at least two records");
  }
  std::vector<std::pair<std::int64_t, double>> out;
  out.reserve(trace.records.size() - 1);
  for (std::size_t i = 0; i + 1 < trace.records.size(); ++i) {
    const double now = trace.records[i].queue.squaredNorm();
    const double next = trace.records[i + 1].queue.squaredNorm();
    out.emplace_back(trace.records[i].t, 0.5 * (next - now));
  }
  return out;
}

std::vector<std::pair<double, double>> gap_series(const SolverTrace& trace,
                                                  double f_star) {
  std::vector<std::pair<double, double>> out;
  out.reserve(trace.records.size());
  for (const auto& r : trace.records) {
    if (r.t < 1) continue;
    out.emplace_back(static_cast<double>(r.t), std::abs(r.f_average - f_star));
  }
  return out;
}

std::vector<std::optional<std::int64_t>> constraint_onset(
    const SolverTrace& trace) {
  if (trace.records.empty()) return {};
  const Eigen::Index m = trace.records.front().g_average.size();
  std::vector<std::optional<std::int64_t>> onset(static_cast<std::size_t>(m));
  for (Eigen::Index k = 0; k < m; ++k) {
    std::optional<std::int64_t> first;
    for (const auto& r : trace.records) {
      if (r.t < 1) continue;
      if (r.g_average[k] <= 0.0) {
        if (!first) first = r.t;
      } else {
        first.reset();
      }
    }
    onset[static_cast<std::size_t>(k)] = first;
  }
  return onset;
}

}  // namespace queuegrad
