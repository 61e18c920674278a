# Copyright 2026 The queuegrad Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""First-order primal-dual solvers for box-constrained convex programs."""

from queuegrad._core import (
    ConfigurationError,
    ConvergenceFailure,
    Error,
    InfeasibleProblem,
    InvalidInput,
    LpSpec,
    NumericalFailure,
    ParseError,
    Problem,
    QpSpec,
    Trace,
    fit_rate,
    lp_vertex_solve,
    main,
    paper_lp_instance,
    paper_qp_instance,
    parse_problem,
    problem_to_json,
    qp_grid_polish,
    random_instance,
)

__all__ = [
    "ConfigurationError",
    "ConvergenceFailure",
    "Error",
    "InfeasibleProblem",
    "InvalidInput",
    "LpSpec",
    "NumericalFailure",
    "ParseError",
    "Problem",
    "QpSpec",
    "Trace",
    "fit_rate",
    "lp_vertex_solve",
    "main",
    "paper_lp_instance",
    "paper_qp_instance",
    "parse_problem",
    "problem_to_json",
    "qp_grid_polish",
    "random_instance",
]
