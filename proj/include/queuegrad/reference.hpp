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

// Independent ground truth for desk-scale instances. Deliberately simple:
// exhaustive vertex enumeration for LPs, grid search plus local polishing for
// QPs in up to three variables.

#ifndef QUEUEGRAD_REFERENCE_HPP_
#define QUEUEGRAD_REFERENCE_HPP_

#include <string_view>

#include "queuegrad/instances.hpp"

namespace queuegrad {

enum class ReferenceMethod { kVertexEnumeration, kGridPolish };
std::string_view to_string(ReferenceMethod method);

struct ReferenceSolution {
  Vector x_star;
  double f_star = 0.0;
  ReferenceMethod method = ReferenceMethod::kVertexEnumeration;
  double certificate = 0.0;      // max constraint violation at x_star
  double active_residual = 0.0;  // vertex enumeration only
};

// Solves every n x n system of n active constraints drawn from the rows of A
// and the box faces, keeps feasible points (violation <= 1e-9) and returns
// the best; ties resolve to the lexicographically smallest x. Requires
// n + rows <= 20. Throws InfeasibleProblem when no basic point is feasible.
ReferenceSolution lp_vertex_solve(const LpSpec& spec);

// Best feasible point of a uniform grid, refined by projected gradient with
// a feasibility-preserving step-halving line search and then by repeated
// local grids of shrinking spacing. Requires n <= 3 and
// grid_points_per_axis >= 50.
ReferenceSolution qp_grid_polish(const QpSpec& spec, int grid_points_per_axis);

}  // namespace queuegrad

#endif  // QUEUEGRAD_REFERENCE_HPP_
