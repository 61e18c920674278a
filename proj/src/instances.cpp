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

#include "queuegrad/instances.hpp"

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "queuegrad/errors.hpp"
#include "queuegrad/solvers.hpp"

namespace queuegrad {
namespace {

void check_box(const Vector& lower, const Vector& upper, Eigen::Index n) {
  if (lower.size() != n || upper.size() != n) {
    std::ostringstream msg;
    msg << "box bounds must have dimension " << n;
    throw InvalidInput(msg.str());
  }
  // BoxSet performs the ordering and diameter checks.
  BoxSet(lower, upper);
}

void check_rows(const Matrix& A, const Vector& b, Eigen::Index n) {
  if (A.rows() > 0 && A.cols() != n) {
    std::ostringstream msg;
    msg << "A has " << A.cols() << " columns, expected " << n;
    throw InvalidInput(msg.str());
  }
  if (A.rows() != b.size()) {
    std::ostringstream msg;
    msg << "A has " << A.rows() << " rows but b has " << b.size()
        << " entries";
    throw InvalidInput(msg.str());
  }
}

void check_psd(const Matrix& M, Eigen::Index n, const char* name) {
  if (M.rows() != n || M.cols() != n) {
    std::ostringstream msg;
    msg << name << " must be " << n << "x" << n;
    throw InvalidInput(msg.str());
  }
  if (!M.allFinite()) throw InvalidInput(std::string(name) + " is not finite");
  const double scale = 1.0 + M.cwiseAbs().maxCoeff();
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    throw InvalidInput(std::string(name) + " is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(M, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-10) {
    std::ostringstream msg;
    msg << name << " is not positive semidefinite (min eigenvalue "
        << eig.eigenvalues().minCoeff() << ")";
    throw InvalidInput(msg.str());
  }
}

std::vector<DifferentiableFunction> linear_rows(const Matrix& A,
                                                const Vector& b) {
  std::vector<DifferentiableFunction> rows;
  rows.reserve(static_cast<std::size_t>(A.rows()));
  for (Eigen::Index k = 0; k < A.rows(); ++k) {
    rows.push_back(DifferentiableFunction::Linear(A.row(k).transpose(), -b[k]));
  }
  return rows;
}

}  // namespace

void LpSpec::validate() const {
  const Eigen::Index n = c.size();
  if (n < 1) throw InvalidInput("LP needs at least one variable");
  check_rows(A, b, n);
  if (!c.allFinite() || !A.allFinite() || !b.allFinite()) {
    throw InvalidInput("LP data must be finite");
  }
  check_box(lower, upper, n);
}

void QpSpec::validate() const {
  const Eigen::Index n = c.size();
  if (n < 1) throw InvalidInput("QP needs at least one variable");
  check_rows(A, b, n);
  if (d.size() != n) throw InvalidInput("d must have the dimension of c");
  if (!c.allFinite() || !A.allFinite() || !b.allFinite() || !d.allFinite() ||
      !std::isfinite(e)) {
    throw InvalidInput("QP data must be finite");
  }
  check_psd(P, n, "P");
  check_psd(Q, n, "Q");
  check_box(lower, upper, n);
}

std::string_view to_string(Family family) {
  return family == Family::kLp ? "lp" : "qp";
}

Family parse_family(std::string_view name) {
  if (name == "lp") return Family::kLp;
  if (name == "qp") return Family::kQp;
  throw InvalidInput("unknown problem family '" + std::string(name) +
                     "' (expected lp or qp)");
}

BuiltProgram build_lp(const LpSpec& spec,
                      std::optional<double> multiplier_bound) {
  spec.validate();
  BoxSet box(spec.lower, spec.upper);
  const double a_norm = spec.A.norm();

  ConstantsPack constants;
  constants.objective_smoothness = 0.0;
  constants.constraint_smoothness = Vector::Zero(spec.A.rows());
  constants.constraint_lipschitz = a_norm;
  constants.constraint_bound = a_norm * box.radius_bound() + spec.b.norm();
  constants.diameter = box.diameter();
  constants.multiplier_bound = multiplier_bound;

  ConvexProgram program(DifferentiableFunction::Linear(spec.c, 0.0),
                        linear_rows(spec.A, spec.b), std::move(box));
  return {std::move(program), finalize_constants(std::move(constants))};
}

BuiltProgram build_qp(const QpSpec& spec,
                      std::optional<double> multiplier_bound) {
  spec.validate();
  BoxSet box(spec.lower, spec.upper);
  const double rho = spec.lower.norm() + spec.upper.norm();
  const double a_norm = spec.A.norm();
  const double q_norm = spec.Q.norm();
  const double d_norm = spec.d.norm();

  ConstantsPack constants;
  constants.objective_smoothness = 2.0 * spec.P.norm();
  constants.constraint_smoothness = Vector::Zero(spec.A.rows() + 1);
  constants.constraint_smoothness[spec.A.rows()] = 2.0 * q_norm;
  constants.constraint_lipschitz = a_norm + 2.0 * q_norm * rho + d_norm;
  constants.constraint_bound = a_norm * rho + spec.b.norm() +
                               q_norm * rho * rho + d_norm * rho +
                               std::abs(spec.e);
  constants.diameter = rho;
  constants.multiplier_bound = multiplier_bound;

  std::vector<DifferentiableFunction> constraints = linear_rows(spec.A, spec.b);
  constraints.push_back(
      DifferentiableFunction::Quadratic(spec.Q, spec.d, -spec.e));
  ConvexProgram program(DifferentiableFunction::Quadratic(spec.P, spec.c, 0.0),
                        std::move(constraints), std::move(box));
  return {std::move(program), finalize_constants(std::move(constants))};
}

BuiltProgram build(const ProblemSpec& spec,
                   std::optional<double> multiplier_bound) {
  return std::visit(
      [&](const auto& s) -> BuiltProgram {
        if constexpr (std::is_same_v<std::decay_t<decltype(s)>, LpSpec>) {
          return build_lp(s, multiplier_bound);
        } else {
          return build_qp(s, multiplier_bound);
        }
      },
      spec);
}

LpSpec paper_lp_instance() {
  LpSpec spec;
  spec.c = Vector{{-1.0, -4.0, -3.0, -2.0}};
  spec.A = Matrix{{6.0, 1.0, 5.0, 1.0}, {0.0, 3.0, 6.0, 6.0}, {5.0, 6.0, 4.0, 6.0}};
  spec.b = Vector{{6.0, 4.0, 10.0}};
  spec.lower = Vector::Zero(4);
  spec.upper = Vector::Constant(4, 10.0);
  return spec;
}

QpSpec paper_qp_instance() {
  QpSpec spec;
  spec.P = Matrix{{1.0, 2.0}, {2.0, 4.0}};
  spec.c = Vector{{-8.0, -2.0}};
  spec.A = Matrix{{3.0, 1.0}, {2.0, 2.0}};
  spec.b = Vector{{4.0, 1.0}};
  spec.Q = Matrix{{2.0, 1.0}, {1.0, 3.0}};
  spec.d = Vector{{-1.0, 2.0}};
  spec.e = 5.0;
  spec.lower = Vector::Zero(2);
  spec.upper = Vector::Constant(2, 5.0);
  return spec;
}

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

// Draw order is part of the format: box, objective, constraint rows, slacks.
ProblemSpec random_instance(Family family, int n, int m, std::uint64_t seed) {
  if (n < 1 || m < 1) throw InvalidInput("random instance needs n, m >= 1");
  SplitMix64 rng(seed);
  Vector lower(n), upper(n);
  for (int i = 0; i < n; ++i) {
    lower[i] = rng.uniform(-5.0, -0.5);
    upper[i] = rng.uniform(0.5, 5.0);
  }
  const Vector center = 0.5 * (lower + upper);
  const int rows = family == Family::kLp ? m : m - 1;

  Matrix curvature_root(n, n);
  if (family == Family::kQp) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) curvature_root(i, j) = rng.uniform(-1.0, 1.0);
    }
  }
  Vector c(n);
  for (int i = 0; i < n; ++i) c[i] = rng.uniform(-5.0, 5.0);
  Matrix A(rows, n);
  Vector b(rows);
  for (int k = 0; k < rows; ++k) {
    for (int i = 0; i < n; ++i) A(k, i) = rng.uniform(-5.0, 5.0);
    b[k] = A.row(k).dot(center) + rng.uniform(0.5, 5.0);
  }

  if (family == Family::kLp) {
    return LpSpec{std::move(c), std::move(A), std::move(b), std::move(lower),
                  std::move(upper)};
  }

  QpSpec spec;
  spec.P = curvature_root.transpose() * curvature_root / n;
  Matrix root(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) root(i, j) = rng.uniform(-1.0, 1.0);
  }
  spec.Q = root.transpose() * root / n;
  spec.d.resize(n);
  for (int i = 0; i < n; ++i) spec.d[i] = rng.uniform(-5.0, 5.0);
  spec.e = center.dot(spec.Q * center) + spec.d.dot(center) +
           rng.uniform(0.5, 5.0);
  spec.c = std::move(c);
  spec.A = std::move(A);
  spec.b = std::move(b);
  spec.lower = std::move(lower);
  spec.upper = std::move(upper);
  return spec;
}

double objective_lower_bound(const ProblemSpec& spec) {
  const auto linear_min = [](const Vector& c, const Vector& lo,
                             const Vector& hi) {
    return c.cwiseProduct(lo).cwiseMin(c.cwiseProduct(hi)).sum();
  };
  return std::visit(
      [&](const auto& s) { return linear_min(s.c, s.lower, s.upper); }, spec);
}

std::optional<double> estimate_multiplier_bound(const ProblemSpec& spec) {
  const BuiltProgram built = build(spec);
  const BoxSet& box = built.program.box();
  const double dual_lower = objective_lower_bound(spec);
  std::optional<double> best;
  for (const Vector& candidate : {box.center(), box.lower(), box.upper()}) {
    const Vector g = built.program.constraint_values(candidate);
    if (g.maxCoeff() >= 0.0) continue;
    const double bound =
        multiplier_bound(built.program, candidate, dual_lower);
    if (!best || bound < *best) best = bound;
  }
  return best;
}

Vector default_initial_point(const ProblemSpec& spec) {
  if (const auto* lp = std::get_if<LpSpec>(&spec)) return lp->upper;
  return std::get<QpSpec>(spec).lower;
}

const Vector& lower_bound(const ProblemSpec& spec) {
  return std::visit([](const auto& s) -> const Vector& { return s.lower; },
                    spec);
}

const Vector& upper_bound(const ProblemSpec& spec) {
  return std::visit([](const auto& s) -> const Vector& { return s.upper; },
                    spec);
}

}  // namespace queuegrad
