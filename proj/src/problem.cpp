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

#include "queuegrad/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "queuegrad/errors.hpp"

namespace queuegrad {

bool QuadraticForm::separable() const {
  for (Eigen::Index i = 0; i < curvature.rows(); ++i) {
    for (Eigen::Index j = 0; j < curvature.cols(); ++j) {
      if (i != j && curvature(i, j) != 0.0) return false;
    }
  }
  return true;
}

DifferentiableFunction::DifferentiableFunction(ValueFn value,
                                               GradientFn gradient,
                                               double smoothness)
    : value_(std::move(value)),
      gradient_(std::move(gradient)),
      smoothness_(smoothness) {
  if (!value_ || !gradient_) {
    throw InvalidInput("DifferentiableFunction needs both oracles");
  }
  if (!(smoothness_ >= 0.0) || !std::isfinite(smoothness_)) {
    throw InvalidInput("smoothness modulus must be finite and nonnegative");
  }
}

DifferentiableFunction DifferentiableFunction::Linear(Vector a, double offset) {
  const Eigen::Index n = a.size();
  return Quadratic(Matrix::Zero(n, n), std::move(a), offset, 0.0);
}

DifferentiableFunction DifferentiableFunction::Quadratic(Matrix m, Vector a,
                                                         double offset) {
  const double smoothness = 2.0 * m.norm();
  return Quadratic(std::move(m), std::move(a), offset, smoothness);
}

DifferentiableFunction DifferentiableFunction::Quadratic(Matrix m, Vector a,
                                                         double offset,
                                                         double smoothness) {
  if (m.rows() != m.cols() || m.rows() != a.size()) {
    throw InvalidInput("quadratic form dimensions disagree");
  }
  QuadraticForm form{std::move(m), std::move(a), offset};
  const bool has_curvature = !form.curvature.isZero(0.0);
  // Symmetrized copy for the gradient: grad(x^T M x) = (M + M^T) x.
  Matrix sym = form.curvature + form.curvature.transpose();
  auto value = [form, has_curvature](const Vector& x) {
    double v = form.linear.dot(x) + form.offset;
    if (has_curvature) v += x.dot(form.curvature * x);
    return v;
  };
  auto gradient = [sym = std::move(sym), linear = form.linear,
                   has_curvature](const Vector& x) -> Vector {
    if (!has_curvature) return linear;
    return sym * x + linear;
  };
  DifferentiableFunction fn(std::move(value), std::move(gradient), smoothness);
  fn.form_ = std::move(form);
  return fn;
}

BoxSet::BoxSet(Vector lower, Vector upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != upper_.size()) {
    throw InvalidInput("box bounds have different dimensions");
  }
  if (lower_.size() == 0) throw InvalidInput("box must have dimension >= 1");
  if (!lower_.allFinite() || !upper_.allFinite()) {
    throw InvalidInput("box bounds must be finite");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (lower_[i] > upper_[i]) {
      std::ostringstream msg;
      msg << "box lower bound exceeds upper bound at coordinate " << i;
      throw InvalidInput(msg.str());
    }
  }
  if (!(diameter() > 0.0)) throw InvalidInput("box diameter must be positive");
}

double BoxSet::diameter() const { return (upper_ - lower_).norm(); }

double BoxSet::radius_bound() const {
  return lower_.cwiseAbs().cwiseMax(upper_.cwiseAbs()).norm();
}

bool BoxSet::contains(const Vector& x, double tolerance) const {
  if (x.size() != lower_.size()) return false;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x[i] < lower_[i] - tolerance || x[i] > upper_[i] + tolerance) {
      return false;
    }
  }
  return true;
}

Vector project(const BoxSet& set, const Vector& x) {
  if (x.size() != set.dimension()) {
    std::ostringstream msg;
    msg << "cannot project a vector of dimension " << x.size()
        << " onto a box of dimension " << set.dimension();
    throw InvalidInput(msg.str());
  }
  return x.cwiseMax(set.lower()).cwiseMin(set.upper());
}

ConvexProgram::ConvexProgram(DifferentiableFunction objective,
                             std::vector<DifferentiableFunction> constraints,
                             BoxSet box)
    : objective_(std::move(objective)),
      constraints_(std::move(constraints)),
      box_(std::move(box)) {
  if (constraints_.empty()) {
    throw InvalidInput("a program needs at least one constraint");
  }
  // Probe every oracle once at the box center so mismatched gradients are
  // caught at construction rather than mid-run.
  const Vector probe = box_.center();
  if (objective_.gradient(probe).size() != dimension()) {
    throw InvalidInput("objective gradient dimension differs from the box");
  }
  for (std::size_t k = 0; k < constraints_.size(); ++k) {
    if (constraints_[k].gradient(probe).size() != dimension()) {
      std::ostringstream msg;
      msg << "gradient of constraint " << k + 1
          << " has the wrong dimension";
      throw InvalidInput(msg.str());
    }
  }
}

void ConvexProgram::check_dimension(const Vector& x) const {
  if (x.size() != dimension()) {
    std::ostringstream msg;
    msg << "point has dimension " << x.size() << ", program has "
        << dimension();
    throw InvalidInput(msg.str());
  }
}

double ConvexProgram::objective_value(const Vector& x) const {
  check_dimension(x);
  const double v = objective_.value(x);
  if (!std::isfinite(v)) throw NumericalFailure("objective value is not finite");
  return v;
}

Vector ConvexProgram::objective_gradient(const Vector& x) const {
  check_dimension(x);
  Vector g = objective_.gradient(x);
  if (!g.allFinite()) {
    throw NumericalFailure("objective gradient is not finite");
  }
  return g;
}

Vector ConvexProgram::constraint_values(const Vector& x) const {
  check_dimension(x);
  Vector values(num_constraints());
  for (Eigen::Index k = 0; k < num_constraints(); ++k) {
    values[k] = constraints_[static_cast<std::size_t>(k)].value(x);
  }
  if (!values.allFinite()) {
    throw NumericalFailure("constraint value is not finite");
  }
  return values;
}

ConstraintEvaluation ConvexProgram::evaluate_constraints(const Vector& x) const {
  ConstraintEvaluation out;
  out.values = constraint_values(x);
  out.jacobian.resize(num_constraints(), dimension());
  for (Eigen::Index k = 0; k < num_constraints(); ++k) {
    out.jacobian.row(k) =
        constraints_[static_cast<std::size_t>(k)].gradient(x).transpose();
  }
  if (!out.jacobian.allFinite()) {
    throw NumericalFailure("constraint gradient is not finite");
  }
  return out;
}

double check_gradient(const DifferentiableFunction& fn, const Vector& x) {
  const Vector analytic = fn.gradient(x);
  const double h = 1e-6 * (1.0 + x.cwiseAbs().maxCoeff());
  double worst = 0.0;
  Vector probe = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    probe[i] = x[i] + h;
    const double forward = fn.value(probe);
    probe[i] = x[i] - h;
    const double backward = fn.value(probe);
    probe[i] = x[i];
    const double numeric = (forward - backward) / (2.0 * h);
    const double err =
        std::abs(analytic[i] - numeric) / (1.0 + std::abs(analytic[i]));
    worst = std::max(worst, err);
  }
  return worst;
}

bool ConstantsPack::complete() const {
  return std::isfinite(drift_constant) && std::isfinite(max_step);
}

ConstantsPack finalize_constants(ConstantsPack pack) {
  const auto check = [](double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidInput(std::string(name) + " must be finite and nonnegative");
    }
  };
  check(pack.objective_smoothness, "objective smoothness");
  check(pack.constraint_lipschitz, "constraint Lipschitz modulus");
  check(pack.constraint_bound, "constraint bound");
  check(pack.diameter, "diameter");
  for (Eigen::Index k = 0; k < pack.constraint_smoothness.size(); ++k) {
    check(pack.constraint_smoothness[k], "constraint smoothness");
  }
  if (pack.multiplier_bound) check(*pack.multiplier_bound, "multiplier bound");

  const double lg = pack.constraint_smoothness.norm();
  pack.constraint_smoothness_norm = lg;
  const double beta2 = pack.constraint_lipschitz * pack.constraint_lipschitz;
  if (lg == 0.0) {
    // Linear constraints: the multiplier term vanishes.
    pack.drift_constant = beta2 + pack.objective_smoothness;
    pack.max_step = 1.0 / pack.drift_constant;
  } else if (pack.multiplier_bound) {
    pack.drift_constant = beta2 + pack.objective_smoothness +
                          2.0 * *pack.multiplier_bound * lg +
                          2.0 * pack.constraint_bound * lg;
    const double root = lg * pack.diameter + std::sqrt(pack.drift_constant);
    pack.max_step = 1.0 / (root * root);
  } else {
    pack.drift_constant = std::numeric_limits<double>::quiet_NaN();
    pack.max_step = std::numeric_limits<double>::quiet_NaN();
  }
  return pack;
}

ConstantsPack with_multiplier_bound(ConstantsPack pack, double bound) {
  pack.multiplier_bound = bound;
  return finalize_constants(std::move(pack));
}

}  // namespace queuegrad
