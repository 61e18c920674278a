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

// LP and QP families over boxes, the two reference instances, and a seeded
// random generator.

#ifndef QUEUEGRAD_INSTANCES_HPP_
#define QUEUEGRAD_INSTANCES_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>

#include "queuegrad/problem.hpp"

namespace queuegrad {

// min c^T x  s.t.  A x <= b,  lower <= x <= upper.
struct LpSpec {
  Vector c;
  Matrix A;
  Vector b;
  Vector lower;
  Vector upper;

  // Throws InvalidInput naming the first inconsistency.
  void validate() const;
};

// min x^T P x + c^T x  s.t.  A x <= b,  x^T Q x + d^T x <= e,  box.
// A may have zero rows; the quadratic constraint is always present.
struct QpSpec {
  Matrix P;
  Vector c;
  Matrix A;
  Vector b;
  Matrix Q;
  Vector d;
  double e = 0.0;
  Vector lower;
  Vector upper;

  // Also checks that P and Q are symmetric and PSD (min eigenvalue >= -1e-10).
  void validate() const;
};

using ProblemSpec = std::variant<LpSpec, QpSpec>;

enum class Family { kLp, kQp };
std::string_view to_string(Family family);
Family parse_family(std::string_view name);

struct BuiltProgram {
  ConvexProgram program;
  ConstantsPack constants;
};

// g(x) = A x - b. L_f = 0, L_g = 0, beta = ||A||_F, R = ||upper - lower||,
// C = ||A||_F r + ||b|| where r bounds ||x|| on the box.
BuiltProgram build_lp(const LpSpec& spec,
                      std::optional<double> multiplier_bound = std::nullopt);

// Constraints are the rows of A x - b followed by x^T Q x + d^T x - e.
// With rho = ||lower|| + ||upper||:
//   R = rho, beta = ||A|| + 2||Q|| rho + ||d||,
//   C = ||A|| rho + ||b|| + ||Q|| rho^2 + ||d|| rho + |e|,
//   L_f = 2||P||, L_g = (0, ..., 0, 2||Q||), Frobenius norms throughout.
BuiltProgram build_qp(const QpSpec& spec,
                      std::optional<double> multiplier_bound = std::nullopt);

BuiltProgram build(const ProblemSpec& spec,
                   std::optional<double> multiplier_bound = std::nullopt);

// The two reference experiments: a 4-variable LP with three rows and a
// 2-variable QP with two linear rows and one quadratic constraint.
LpSpec paper_lp_instance();
QpSpec paper_qp_instance();

// SplitMix64 (Steele, Lea, Flood 2014): state += 0x9E3779B97F4A7C15, then
// two xor-shift-multiply rounds. Fixed so random instances are reproducible
// across platforms and language bindings.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next();
  // Uniform in [0, 1) from the top 53 bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::uint64_t state_;
};

// Deterministic instance with entries in [-5, 5] and a strictly feasible box
// center. For QP, m counts the quadratic constraint, so A has m - 1 rows.
ProblemSpec random_instance(Family family, int n, int m, std::uint64_t seed);

// A certified lower bound on min_{x in box} f(x), i.e. on the dual function
// at lambda = 0. Exact for LPs; for QPs it drops x^T P x >= 0.
double objective_lower_bound(const ProblemSpec& spec);

// Multiplier bound from the best strictly feasible candidate among the box
// center and the two box corners; nullopt when none is strictly feasible.
std::optional<double> estimate_multiplier_bound(const ProblemSpec& spec);

// The default x(-1): upper corner for LPs, lower corner for QPs.
Vector default_initial_point(const ProblemSpec& spec);

const Vector& lower_bound(const ProblemSpec& spec);
const Vector& upper_bound(const ProblemSpec& spec);

}  // namespace queuegrad

#endif  // QUEUEGRAD_INSTANCES_HPP_
