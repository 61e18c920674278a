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

#include "queuegrad/solvers.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "queuegrad/errors.hpp"

namespace queuegrad {
namespace {

void guard_overflow(const Vector& x, const Vector& dual, const Vector& g) {
  const auto too_big = [](const Vector& v) {
    return v.size() > 0 && !(v.cwiseAbs().maxCoeff() <= kOverflowLimit);
  };
  if (too_big(x)) throw NumericalFailure("iterate exceeded 1e100 (step too large?)");
  if (too_big(dual)) throw NumericalFailure("dual variable exceeded 1e100");
  if (too_big(g)) throw NumericalFailure("constraint value exceeded 1e100");
}

// Moves the state to the new primal iterate x(t) and refreshes the cached
// constraint data. The dual update is the caller's business.
ConstraintEvaluation accept_iterate(const ConvexProgram& program,
                                    SolverState& state, Vector x) {
  ConstraintEvaluation eval = program.evaluate_constraints(x);
  state.running_sum += x;
  state.t += 1;
  state.x_prev = std::move(x);
  return eval;
}

void store_constraints(SolverState& state, ConstraintEvaluation eval) {
  state.g_prev = std::move(eval.values);
  state.jacobian_prev = std::move(eval.jacobian);
}

bool all_separable(const ConvexProgram& program) {
  const auto separable = [](const DifferentiableFunction& fn) {
    return fn.quadratic_form().has_value() && fn.quadratic_form()->separable();
  };
  if (!separable(program.objective())) return false;
  for (const auto& g : program.constraints()) {
    if (!separable(g)) return false;
  }
  return true;
}

// argmin over the box of f(x) + w^T g(x) + alpha ||x - x_prev||^2 when every
// function is x^T diag(a) x + b^T x + const.
Vector separable_prox(const ConvexProgram& program, const Vector& x_prev,
                      const Vector& weights, double alpha) {
  const QuadraticForm& f = *program.objective().quadratic_form();
  Vector linear = f.linear;
  Vector curvature = f.curvature.diagonal();
  Matrix constraint_linear(program.num_constraints(), program.dimension());
  for (Eigen::Index k = 0; k < program.num_constraints(); ++k) {
    const QuadraticForm& g =
        *program.constraints()[static_cast<std::size_t>(k)].quadratic_form();
    constraint_linear.row(k) = g.linear.transpose();
    curvature += weights[k] * g.curvature.diagonal();
  }
  linear += constraint_linear.transpose() * weights;
  Vector x(x_prev.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    // Minimizer of a x^2 + b x + alpha (x - x_prev)^2.
    if (curvature[i] == 0.0) {
      x[i] = x_prev[i] - linear[i] / (2.0 * alpha);
    } else {
      x[i] = (2.0 * alpha * x_prev[i] - linear[i]) /
             (2.0 * (curvature[i] + alpha));
    }
  }
  return project(program.box(), x);
}

Vector projected_gradient_prox(const ConvexProgram& program,
                               const Vector& x_prev, const Vector& weights,
                               double alpha, const InnerSolverOptions& inner) {
  double lipschitz = program.objective().smoothness() + 2.0 * alpha;
  for (Eigen::Index k = 0; k < program.num_constraints(); ++k) {
    lipschitz +=
        weights[k] * program.constraints()[static_cast<std::size_t>(k)].smoothness();
  }
  const auto gradient = [&](const Vector& x) -> Vector {
    const ConstraintEvaluation eval = program.evaluate_constraints(x);
    return program.objective_gradient(x) + eval.jacobian.transpose() * weights +
           2.0 * alpha * (x - x_prev);
  };
  Vector x = x_prev;
  double residual = std::numeric_limits<double>::infinity();
  for (std::int64_t it = 0; it < inner.max_iterations; ++it) {
    Vector next = project(program.box(), x - gradient(x) / lipschitz);
    residual = (next - x).norm();
    if (residual <= inner.tolerance * (1.0 + x.norm())) return next;
    x = std::move(next);
  }
  std::ostringstream msg;
  msg << "inner projected gradient did not converge in "
      << inner.max_iterations << " iterations (residual " << residual << ")";
  throw ConvergenceFailure(msg.str(), residual);
}

}  // namespace

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kNew:
      return "new";
    case Algorithm::kPdSubgradient:
      return "pd-subgradient";
    case Algorithm::kDualType:
      return "dual-type";
  }
  return "unknown";
}

Algorithm parse_algorithm(std::string_view name) {
  if (name == "new") return Algorithm::kNew;
  if (name == "pd-subgradient") return Algorithm::kPdSubgradient;
  if (name == "dual-type") return Algorithm::kDualType;
  throw ConfigurationError("unknown algorithm '" + std::string(name) +
                           "' (expected new, pd-subgradient or dual-type)");
}

VirtualQueue::VirtualQueue(Vector backlog) : backlog_(std::move(backlog)) {}

void VirtualQueue::update(const Vector& g) {
  backlog_ = (-g).cwiseMax(backlog_ + g);
}

VirtualQueue init_virtual_queue(const ConvexProgram& program,
                                const Vector& x_init) {
  return VirtualQueue((-program.constraint_values(x_init)).cwiseMax(0.0));
}

Vector SolverState::average() const {
  if (t == 0) return x_prev;
  return running_sum / static_cast<double>(t);
}

SolverState initial_state(const ConvexProgram& program, const Vector& x_init,
                          Algorithm algorithm) {
  SolverState state;
  state.x_prev = x_init;
  store_constraints(state, program.evaluate_constraints(x_init));
  state.running_sum = Vector::Zero(x_init.size());
  if (algorithm == Algorithm::kPdSubgradient) {
    state.multipliers = Vector::Zero(program.num_constraints());
  } else {
    state.queue = VirtualQueue((-state.g_prev).cwiseMax(0.0));
  }
  return state;
}

Vector direction(const ConvexProgram& program, const Vector& x_prev,
                 const VirtualQueue& queue) {
  const ConstraintEvaluation eval = program.evaluate_constraints(x_prev);
  Vector d = program.objective_gradient(x_prev) +
             eval.jacobian.transpose() * (queue.backlog() + eval.values);
  if (!d.allFinite()) throw NumericalFailure("direction is not finite");
  return d;
}

void step_new_algorithm(const ConvexProgram& program, SolverState& state,
                        double gamma) {
  const Vector weights = state.queue.backlog() + state.g_prev;
  const Vector d = program.objective_gradient(state.x_prev) +
                   state.jacobian_prev.transpose() * weights;
  if (!d.allFinite()) throw NumericalFailure("direction is not finite");
  ConstraintEvaluation eval =
      accept_iterate(program, state, project(program.box(), state.x_prev - gamma * d));
  state.queue.update(eval.values);
  guard_overflow(state.x_prev, state.queue.backlog(), eval.values);
  store_constraints(state, std::move(eval));
}

void step_pd_subgradient(const ConvexProgram& program, SolverState& state,
                         double c, const Vector& lambda_max,
                         bool include_objective_gradient) {
  Vector d = state.jacobian_prev.transpose() * state.multipliers;
  if (include_objective_gradient) d += program.objective_gradient(state.x_prev);
  if (!d.allFinite()) throw NumericalFailure("direction is not finite");
  // Both updates read x(t-1) and lambda(t-1).
  state.multipliers =
      (state.multipliers + c * state.g_prev).cwiseMax(0.0).cwiseMin(lambda_max);
  ConstraintEvaluation eval =
      accept_iterate(program, state, project(program.box(), state.x_prev - c * d));
  guard_overflow(state.x_prev, state.multipliers, eval.values);
  store_constraints(state, std::move(eval));
}

void step_dual_type(const ConvexProgram& program, SolverState& state,
                    double alpha, const InnerSolverOptions& inner) {
  const Vector weights = state.queue.backlog() + state.g_prev;
  Vector x = all_separable(program)
                 ? separable_prox(program, state.x_prev, weights, alpha)
                 : projected_gradient_prox(program, state.x_prev, weights,
                                           alpha, inner);
  ConstraintEvaluation eval = accept_iterate(program, state, std::move(x));
  state.queue.update(eval.values);
  guard_overflow(state.x_prev, state.queue.backlog(), eval.values);
  store_constraints(state, std::move(eval));
}

double select_gamma(const ConstantsPack& constants) {
  if (constants.constraint_smoothness.norm() > 0.0 &&
      !constants.multiplier_bound) {
    throw ConfigurationError(
        "automatic step size needs a multiplier bound when constraints are "
        "nonlinear");
  }
  const ConstantsPack pack = finalize_constants(constants);
  if (!std::isfinite(pack.max_step) || !(pack.max_step > 0.0)) {
    throw ConfigurationError(
        "automatic step size is unbounded (all smoothness and Lipschitz "
        "constants are zero); pass an explicit step");
  }
  return pack.max_step;
}

double multiplier_bound(const ConvexProgram& program, const Vector& slater_point,
                        double dual_value_lower) {
  const Vector g = program.constraint_values(slater_point);
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    if (!(g[k] < 0.0)) {
      std::ostringstream msg;
      msg << "point is not strictly feasible: constraint " << k + 1
          << " has value " << g[k];
      throw InvalidInput(msg.str());
    }
  }
  const double f = program.objective_value(slater_point);
  if (dual_value_lower > f) {
    throw InvalidInput("dual lower bound exceeds the objective at a feasible point");
  }
  return (f - dual_value_lower) / (-g).minCoeff();
}

Vector default_lambda_max(const ConstantsPack& constants, Eigen::Index m) {
  if (!constants.multiplier_bound) {
    throw ConfigurationError(
        "subgradient method needs lambda_max or a multiplier bound");
  }
  return Vector::Constant(m, 2.0 * *constants.multiplier_bound + 1.0);
}

SolverTrace run(const ConvexProgram& program, const ConstantsPack& constants,
                const RunOptions& options) {
  if (options.iterations < 1) {
    throw ConfigurationError("iterations must be ≥ 1");
  }
  if (!(options.step > 0.0) || !std::isfinite(options.step)) {
    throw ConfigurationError("step parameter must be positive and finite");
  }
  if (options.x_init.size() != program.dimension()) {
    throw ConfigurationError("initial point has the wrong dimension");
  }
  if (!program.box().contains(options.x_init)) {
    throw ConfigurationError("initial point lies outside the box");
  }
  const Eigen::Index m = program.num_constraints();
  Vector lambda_max;
  if (options.algorithm == Algorithm::kPdSubgradient) {
    lambda_max = options.lambda_max ? *options.lambda_max
                                    : default_lambda_max(constants, m);
    if (lambda_max.size() != m) {
      throw ConfigurationError("lambda_max needs one entry per constraint");
    }
    if (constants.multiplier_bound &&
        !(lambda_max.minCoeff() > *constants.multiplier_bound)) {
      throw ConfigurationError("lambda_max must exceed the multiplier bound");
    }
  }

  const auto start = std::chrono::steady_clock::now();
  SolverTrace trace;
  trace.algorithm = options.algorithm;
  trace.step = options.step;
  trace.x_init = options.x_init;
  trace.records.reserve(static_cast<std::size_t>(options.iterations) + 1);

  SolverState state = initial_state(program, options.x_init, options.algorithm);
  const auto dual = [&]() -> const Vector& {
    return options.algorithm == Algorithm::kPdSubgradient
               ? state.multipliers
               : state.queue.backlog();
  };
  const auto record = [&](double previous_squared_norm) {
    TraceRecord r;
    r.t = state.t;
    r.x = state.x_prev;
    r.g_x = state.g_prev;
    r.x_average = state.average();
    r.queue = dual();
    r.queue_norm = r.queue.norm();
    r.f_x = program.objective_value(r.x);
    r.f_average = program.objective_value(r.x_average);
    r.g_average = program.constraint_values(r.x_average);
    r.drift = state.t == 0
                  ? 0.0
                  : 0.5 * (r.queue.squaredNorm() - previous_squared_norm);
    trace.records.push_back(std::move(r));
  };

  try {
    record(0.0);
    for (std::int64_t it = 0; it < options.iterations; ++it) {
      const double previous_squared_norm =
          trace.records.back().queue.squaredNorm();
      switch (options.algorithm) {
        case Algorithm::kNew:
          step_new_algorithm(program, state, options.step);
          break;
        case Algorithm::kPdSubgradient:
          step_pd_subgradient(program, state, options.step, lambda_max,
                              options.include_objective_gradient);
          break;
        case Algorithm::kDualType:
          step_dual_type(program, state, options.step, options.inner);
          break;
      }
      record(previous_squared_norm);
      if (options.stop_epsilon && options.algorithm == Algorithm::kNew) {
        const double bound = constants.diameter * constants.diameter /
                             (2.0 * options.step * static_cast<double>(state.t));
        if (bound < *options.stop_epsilon) break;
      }
    }
  } catch (const NumericalFailure& e) {
    trace.failed = true;
    trace.failure = e.what();
  } catch (const ConvergenceFailure& e) {
    trace.failed = true;
    trace.failure = e.what();
  }
  trace.wall_seconds = std::chrono::duration<double>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  return trace;
}

}  // namespace queuegrad
