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

#include "queuegrad/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "queuegrad/errors.hpp"

namespace queuegrad {
namespace {

constexpr double kPivotTolerance = 1e-10;
constexpr double kFeasibilityTolerance = 1e-9;

// Solves M x = r in place by Gaussian elimination with partial pivoting.
// Rows are pre-scaled to unit max-norm so the pivot threshold is relative.
std::optional<Vector> solve_square(Matrix M, Vector r) {
  const Eigen::Index n = M.rows();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double scale = M.row(i).cwiseAbs().maxCoeff();
    if (scale == 0.0) return std::nullopt;
    M.row(i) /= scale;
    r[i] /= scale;
  }
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index i = col + 1; i < n; ++i) {
      if (std::abs(M(i, col)) > std::abs(M(pivot, col))) pivot = i;
    }
    if (std::abs(M(pivot, col)) < kPivotTolerance) return std::nullopt;
    if (pivot != col) {
      M.row(pivot).swap(M.row(col));
      std::swap(r[pivot], r[col]);
    }
    for (Eigen::Index i = col + 1; i < n; ++i) {
      const double factor = M(i, col) / M(col, col);
      M.row(i) -= factor * M.row(col);
      r[i] -= factor * r[col];
    }
  }
  Vector x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = r[i];
    for (Eigen::Index j = i + 1; j < n; ++j) s -= M(i, j) * x[j];
    x[i] = s / M(i, i);
  }
  return x;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (std::abs(a[i] - b[i]) <= 1e-12 * (1.0 + std::abs(b[i]))) continue;
    return a[i] < b[i];
  }
  return false;
}

bool next_combination(std::vector<int>& idx, int total) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[static_cast<std::size_t>(i)] < total - k + i) {
      ++idx[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < k; ++j) {
        idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
      }
      return true;
    }
  }
  return false;
}

double max_violation(const QpSpec& spec, const Vector& x) {
  double v = 0.0;
  if (spec.A.rows() > 0) v = std::max(v, (spec.A * x - spec.b).maxCoeff());
  v = std::max(v, x.dot(spec.Q * x) + spec.d.dot(x) - spec.e);
  return v;
}

}  // namespace

std::string_view to_string(ReferenceMethod method) {
  return method == ReferenceMethod::kVertexEnumeration ? "vertex-enumeration"
                                                       : "grid-polish";
}

ReferenceSolution lp_vertex_solve(const LpSpec& spec) {
  spec.validate();
  const auto n = static_cast<int>(spec.c.size());
  const auto rows = static_cast<int>(spec.A.rows());
  if (n + rows > 20) {
    std::ostringstream msg;
    msg << "vertex enumeration is limited to n + rows <= 20 (got " << n + rows
        << ")";
    throw InvalidInput(msg.str());
  }
  // All constraints as G x <= h: rows of A, then -x <= -lower, then x <= upper.
  const int total = rows + 2 * n;
  Matrix G = Matrix::Zero(total, n);
  Vector h(total);
  G.topRows(rows) = spec.A;
  h.head(rows) = spec.b;
  for (int i = 0; i < n; ++i) {
    G(rows + i, i) = -1.0;
    h[rows + i] = -spec.lower[i];
    G(rows + n + i, i) = 1.0;
    h[rows + n + i] = spec.upper[i];
  }

  std::optional<ReferenceSolution> best;
  std::vector<int> active(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) active[static_cast<std::size_t>(i)] = i;
  do {
    Matrix M(n, n);
    Vector r(n);
    for (int i = 0; i < n; ++i) {
      M.row(i) = G.row(active[static_cast<std::size_t>(i)]);
      r[i] = h[active[static_cast<std::size_t>(i)]];
    }
    const std::optional<Vector> x = solve_square(M, r);
    if (!x) continue;
    const double violation = std::max(0.0, (G * *x - h).maxCoeff());
    if (violation > kFeasibilityTolerance) continue;
    const double f = spec.c.dot(*x);
    const double tie = 1e-12 * (1.0 + std::abs(f));
    if (!best || f < best->f_star - tie ||
        (std::abs(f - best->f_star) <= tie && lex_less(*x, best->x_star))) {
      ReferenceSolution candidate;
      candidate.x_star = *x;
      candidate.f_star = f;
      candidate.method = ReferenceMethod::kVertexEnumeration;
      candidate.certificate = violation;
      candidate.active_residual = (M * *x - r).cwiseAbs().maxCoeff();
      best = std::move(candidate);
    }
  } while (next_combination(active, total));

  if (!best) throw InfeasibleProblem("LP has no feasible basic point");
  best->x_star = best->x_star.cwiseMax(spec.lower).cwiseMin(spec.upper);
  best->f_star = spec.c.dot(best->x_star);
  best->certificate =
      rows == 0 ? 0.0 : std::max(0.0, (spec.A * best->x_star - spec.b).maxCoeff());
  return *best;
}

ReferenceSolution qp_grid_polish(const QpSpec& spec, int grid_points_per_axis) {
  spec.validate();
  const auto n = static_cast<int>(spec.c.size());
  if (n > 3) throw InvalidInput("grid polish supports at most 3 variables");
  if (grid_points_per_axis < 50) {
    throw InvalidInput("grid polish needs at least 50 points per axis");
  }
  const auto objective = [&](const Vector& x) {
    return x.dot(spec.P * x) + spec.c.dot(x);
  };
  const auto feasible = [&](const Vector& x) {
    return max_violation(spec, x) <= 0.0;
  };

  // Coarse grid.
  const Vector spacing =
      (spec.upper - spec.lower) / static_cast<double>(grid_points_per_axis - 1);
  std::optional<Vector> best;
  double best_f = std::numeric_limits<double>::infinity();
  std::vector<int> counter(static_cast<std::size_t>(n), 0);
  Vector x(n);
  while (true) {
    for (int i = 0; i < n; ++i) {
      x[i] = counter[static_cast<std::size_t>(i)] == grid_points_per_axis - 1
                 ? spec.upper[i]
                 : spec.lower[i] + counter[static_cast<std::size_t>(i)] * spacing[i];
    }
    if (feasible(x)) {
      const double f = objective(x);
      if (f < best_f) {
        best_f = f;
        best = x;
      }
    }
    int axis = 0;
    while (axis < n &&
           ++counter[static_cast<std::size_t>(axis)] == grid_points_per_axis) {
      counter[static_cast<std::size_t>(axis)] = 0;
      ++axis;
    }
    if (axis == n) break;
  }
  if (!best) throw InfeasibleProblem("no feasible grid point");
  x = *best;

  // Projected gradient with a feasibility line search.
  const double step = 1.0 / std::max(2.0 * spec.P.norm(), 1e-3);
  for (int it = 0; it < 10000; ++it) {
    const Vector grad = 2.0 * spec.P * x + spec.c;
    const Vector target =
        (x - step * grad).cwiseMax(spec.lower).cwiseMin(spec.upper);
    bool accepted = false;
    for (double theta = 1.0; theta > 1e-20; theta *= 0.5) {
      const Vector z = x + theta * (target - x);
      if (feasible(z) && objective(z) < best_f) {
        x = z;
        best_f = objective(z);
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }

  // Local grids around the incumbent, shrinking 4x per round.
  constexpr int kHalfWidth = 10;
  const int window = 2 * kHalfWidth + 1;
  Vector radius = spacing;
  for (int round = 0; round < 60; ++round) {
    const Vector center = x;
    std::fill(counter.begin(), counter.end(), 0);
    while (true) {
      Vector z(n);
      for (int i = 0; i < n; ++i) {
        const double offset =
            static_cast<double>(counter[static_cast<std::size_t>(i)] - kHalfWidth) /
            (kHalfWidth / 2.0);
        z[i] = std::clamp(center[i] + radius[i] * offset, spec.lower[i],
                          spec.upper[i]);
      }
      if (feasible(z)) {
        const double f = objective(z);
        if (f < best_f) {
          best_f = f;
          x = z;
        }
      }
      int axis = 0;
      while (axis < n && ++counter[static_cast<std::size_t>(axis)] == window) {
        counter[static_cast<std::size_t>(axis)] = 0;
        ++axis;
      }
      if (axis == n) break;
    }
    radius /= 4.0;
  }

  ReferenceSolution out;
  out.x_star = x;
  out.f_star = best_f;
  out.method = ReferenceMethod::kGridPolish;
  out.certificate = std::max(0.0, max_violation(spec, x));
  return out;
}

}  // namespace queuegrad
