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

// First-order primal-dual solvers over box-constrained convex programs.
//
// The virtual-queue method: with x(-1) in the box and
// Q_k(0) = max{0, -g_k(x(-1))}, each iteration t = 0, 1, ... computes
//
//   d(t)     = grad f(x(t-1)) + sum_k [Q_k(t) + g_k(x(t-1))] grad g_k(x(t-1))
//   x(t)     = P_X[x(t-1) - gamma d(t)]
//   Q_k(t+1) = max{-g_k(x(t)), Q_k(t) + g_k(x(t))}
//
// and reports the running average xbar(t) = (1/t) sum_{tau<t} x(tau), which
// attains O(1/t) objective and constraint error whenever gamma is at most
// ConstantsPack::max_step.
//
// Two baselines share the state type: the primal-dual subgradient
// (Arrow-Hurwicz-Uzawa) method with clipped multipliers, and the dual-type
// method whose primal update minimizes
//   f(x) + [Q(t) + g(x(t-1))]^T g(x) + alpha ||x - x(t-1)||^2
// over the box.

#ifndef QUEUEGRAD_SOLVERS_HPP_
#define QUEUEGRAD_SOLVERS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "queuegrad/problem.hpp"

namespace queuegrad {

enum class Algorithm { kNew, kPdSubgradient, kDualType };

std::string_view to_string(Algorithm algorithm);
// Accepts "new", "pd-subgradient" and "dual-type".
Algorithm parse_algorithm(std::string_view name);

class VirtualQueue {
 public:
  VirtualQueue() = default;
  explicit VirtualQueue(Vector backlog);

  const Vector& backlog() const { return backlog_; }
  double norm() const { return backlog_.norm(); }
  // L = ||Q||^2 / 2.
  double lyapunov() const { return 0.5 * backlog_.squaredNorm(); }

  // Q_k <- max{-g_k, Q_k + g_k}.
  void update(const Vector& g);

 private:
  Vector backlog_;
};

// Q_k(0) = max{0, -g_k(x_init)}.
VirtualQueue init_virtual_queue(const ConvexProgram& program,
                                const Vector& x_init);

struct SolverState {
  std::int64_t t = 0;
  Vector x_prev;  // x(t-1)
  Vector g_prev;  // g(x(t-1))
  Matrix jacobian_prev;
  VirtualQueue queue;    // Q(t); unused by the subgradient method
  Vector multipliers;    // lambda(t-1); subgradient method only
  Vector running_sum;    // sum_{tau<t} x(tau)

  // xbar(t); x(-1) before the first step.
  Vector average() const;
};

SolverState initial_state(const ConvexProgram& program, const Vector& x_init,
                          Algorithm algorithm = Algorithm::kNew);

// d(t) for the given x(t-1) and Q(t).
Vector direction(const ConvexProgram& program, const Vector& x_prev,
                 const VirtualQueue& queue);

// One iteration of the virtual-queue method, in place. Bit-deterministic.
void step_new_algorithm(const ConvexProgram& program, SolverState& state,
                        double gamma);

// One iteration of the primal-dual subgradient method:
//   x(t) = P_X[x(t-1) - c (grad f(x(t-1)) + sum_k lambda_k(t-1) grad g_k)]
//   lambda(t) = clip(lambda(t-1) + c g(x(t-1)), 0, lambda_max).
// With include_objective_gradient = false the grad f term is dropped.
void step_pd_subgradient(const ConvexProgram& program, SolverState& state,
                         double c, const Vector& lambda_max,
                         bool include_objective_gradient = true);

struct InnerSolverOptions {
  double tolerance = 1e-10;
  std::int64_t max_iterations = 100000;
};

// One iteration of the dual-type method. Closed form per coordinate when
// every function is a separable quadratic; otherwise projected gradient on
// the strongly convex subproblem. Throws ConvergenceFailure at the cap.
void step_dual_type(const ConvexProgram& program, SolverState& state,
                    double alpha, const InnerSolverOptions& inner = {});

struct TraceRecord {
  std::int64_t t = 0;
  Vector x;          // x(t-1)
  Vector g_x;        // g(x(t-1))
  Vector x_average;  // xbar(t)
  Vector queue;      // Q(t), or lambda for the subgradient method
  double queue_norm = 0.0;
  double f_x = 0.0;
  double f_average = 0.0;
  Vector g_average;  // g(xbar(t))
  double drift = 0.0;  // (||Q(t)||^2 - ||Q(t-1)||^2) / 2; 0 at t = 0
};

struct SolverTrace {
  Algorithm algorithm = Algorithm::kNew;
  double step = 0.0;  // gamma, c or alpha
  Vector x_init;
  std::vector<TraceRecord> records;
  double wall_seconds = 0.0;
  bool failed = false;
  std::string failure;
};

struct RunOptions {
  Algorithm algorithm = Algorithm::kNew;
  std::int64_t iterations = 100000;
  double step = 0.0;
  Vector x_init;
  // Subgradient method.
  bool include_objective_gradient = true;
  std::optional<Vector> lambda_max;
  // Dual-type method.
  InnerSolverOptions inner;
  // Virtual-queue method only: stop once R^2 / (2 gamma t) < epsilon.
  std::optional<double> stop_epsilon;
};

// Runs the full budget and records t = 0..iterations. Numerical failures
// end the run early with `failed` set and the partial trace kept.
// Throws ConfigurationError for inadmissible options.
SolverTrace run(const ConvexProgram& program, const ConstantsPack& constants,
                const RunOptions& options);

// 1 / (||L_g|| R + sqrt(D))^2, or 1 / (beta^2 + L_f) for linear constraints.
double select_gamma(const ConstantsPack& constants);

// (f(x_hat) - dual_value_lower) / min_k{-g_k(x_hat)} for a strictly feasible
// x_hat and a lower bound on the dual function at lambda = 0.
double multiplier_bound(const ConvexProgram& program, const Vector& slater_point,
                        double dual_value_lower);

// 2 * multiplier_bound + 1 per constraint.
Vector default_lambda_max(const ConstantsPack& constants, Eigen::Index m);

// Aborts when any |x_i|, Q_k or |g_k| exceeds this.
inline constexpr double kOverflowLimit = 1e100;

}  // namespace queuegrad

#endif  // QUEUEGRAD_SOLVERS_HPP_
