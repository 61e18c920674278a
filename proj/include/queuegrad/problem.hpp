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

// Constrained convex programs over a box, described by value/gradient oracles:
//
//   minimize f(x)  subject to  g_k(x) <= 0, k = 1..m,  x in [lower, upper].
//
// Every object here is an immutable value once constructed and may be shared
// freely between threads.

#ifndef QUEUEGRAD_PROBLEM_HPP_
#define QUEUEGRAD_PROBLEM_HPP_

#include <functional>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace queuegrad {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// h(x) = x^T curvature x + linear^T x + offset. Attached to functions built
// from quadratic data so solvers can exploit closed forms.
struct QuadraticForm {
  Matrix curvature;
  Vector linear;
  double offset = 0.0;

  // True when curvature is diagonal, i.e. h is a sum of 1-D functions.
  bool separable() const;
};

class DifferentiableFunction {
 public:
  using ValueFn = std::function<double(const Vector&)>;
  using GradientFn = std::function<Vector(const Vector&)>;

  // `smoothness` is a Lipschitz constant of the gradient.
  DifferentiableFunction(ValueFn value, GradientFn gradient, double smoothness);

  // a^T x + offset; smoothness 0.
  static DifferentiableFunction Linear(Vector a, double offset);
  // x^T M x + a^T x + offset. The Hessian is 2M, so the default smoothness
  // modulus is 2 ||M||_F.
  static DifferentiableFunction Quadratic(Matrix m, Vector a, double offset);
  static DifferentiableFunction Quadratic(Matrix m, Vector a, double offset,
                                          double smoothness);

  double value(const Vector& x) const { return value_(x); }
  Vector gradient(const Vector& x) const { return gradient_(x); }
  double smoothness() const { return smoothness_; }
  const std::optional<QuadraticForm>& quadratic_form() const { return form_; }

 private:
  ValueFn value_;
  GradientFn gradient_;
  double smoothness_;
  std::optional<QuadraticForm> form_;
};

class BoxSet {
 public:
  // Throws InvalidInput unless lower <= upper componentwise, both are finite
  // and the diameter is positive.
  BoxSet(Vector lower, Vector upper);

  const Vector& lower() const { return lower_; }
  const Vector& upper() const { return upper_; }
  Eigen::Index dimension() const { return lower_.size(); }

  // ||upper - lower||.
  double diameter() const;
  // Norm of v with v_i = max(|lower_i|, |upper_i|); bounds ||x|| on the box.
  double radius_bound() const;
  Vector center() const { return 0.5 * (lower_ + upper_); }
  bool contains(const Vector& x, double tolerance = 0.0) const;

 private:
  Vector lower_;
  Vector upper_;
};

// Euclidean projection onto the box: an exact componentwise clip.
Vector project(const BoxSet& set, const Vector& x);

// g(x) and its Jacobian (row k is grad g_k(x)).
struct ConstraintEvaluation {
  Vector values;
  Matrix jacobian;
};

class ConvexProgram {
 public:
  ConvexProgram(DifferentiableFunction objective,
                std::vector<DifferentiableFunction> constraints, BoxSet box);

  const DifferentiableFunction& objective() const { return objective_; }
  const std::vector<DifferentiableFunction>& constraints() const {
    return constraints_;
  }
  const BoxSet& box() const { return box_; }
  Eigen::Index dimension() const { return box_.dimension(); }
  Eigen::Index num_constraints() const {
    return static_cast<Eigen::Index>(constraints_.size());
  }

  // Throw NumericalFailure on non-finite oracle output and InvalidInput on a
  // dimension mismatch.
  double objective_value(const Vector& x) const;
  Vector objective_gradient(const Vector& x) const;
  Vector constraint_values(const Vector& x) const;
  ConstraintEvaluation evaluate_constraints(const Vector& x) const;

 private:
  void check_dimension(const Vector& x) const;

  DifferentiableFunction objective_;
  std::vector<DifferentiableFunction> constraints_;
  BoxSet box_;
};

inline ConstraintEvaluation evaluate_constraints(const ConvexProgram& program,
                                                 const Vector& x) {
  return program.evaluate_constraints(x);
}

// Max over coordinates of |analytic - central difference| / (1 + |analytic|)
// with step h = 1e-6 (1 + ||x||_inf).
double check_gradient(const DifferentiableFunction& fn, const Vector& x);

// Constants entering the step-size rule
//   gamma <= 1 / (||L_g|| R + sqrt(D))^2,
//   D = beta^2 + L_f + 2 ||lambda*|| ||L_g|| + 2 C ||L_g||.
struct ConstantsPack {
  double objective_smoothness = 0.0;  // L_f
  Vector constraint_smoothness;       // L_g, one entry per constraint
  double constraint_smoothness_norm = 0.0;
  double constraint_lipschitz = 0.0;  // beta: ||g(x) - g(y)|| <= beta ||x-y||
  double constraint_bound = 0.0;      // C: ||g(x)|| <= C on the box
  double diameter = 0.0;              // R
  std::optional<double> multiplier_bound;  // upper bound on ||lambda*||
  // NaN while multiplier_bound is missing and ||L_g|| > 0.
  double drift_constant = 0.0;  // D
  double max_step = 0.0;        // largest admissible gamma

  // True when D and max_step are computable.
  bool complete() const;
};

// Fills constraint_smoothness_norm, drift_constant and max_step from the
// other fields. Throws InvalidInput on negative or non-finite inputs.
ConstantsPack finalize_constants(ConstantsPack pack);
ConstantsPack with_multiplier_bound(ConstantsPack pack, double bound);

}  // namespace queuegrad

#endif  // QUEUEGRAD_PROBLEM_HPP_
