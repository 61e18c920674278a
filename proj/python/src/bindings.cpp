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

// Python bindings: problem specs, the three solvers, diagnostics and the
// reference oracle. Vectors and matrices cross the boundary as NumPy arrays.

#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "queuegrad/cli.hpp"
#include "queuegrad/diagnostics.hpp"
#include "queuegrad/errors.hpp"
#include "queuegrad/instances.hpp"
#include "queuegrad/io.hpp"
#include "queuegrad/reference.hpp"
#include "queuegrad/solvers.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace queuegrad {
namespace {

// A spec together with its built program, so Python never sees the
// std::function oracles directly.
class Problem {
 public:
  Problem(ProblemSpec spec, std::optional<double> multiplier_bound)
      : spec_(std::move(spec)),
        built_(build(spec_, multiplier_bound ? multiplier_bound
                                             : estimate_multiplier_bound(spec_))) {}

  const ProblemSpec& spec() const { return spec_; }
  const BuiltProgram& built() const { return built_; }

  py::dict constants() const {
    const ConstantsPack& c = built_.constants;
    py::dict d;
    d["objective_smoothness"] = c.objective_smoothness;
    d["constraint_smoothness"] = c.constraint_smoothness;
    d["constraint_lipschitz"] = c.constraint_lipschitz;
    d["constraint_bound"] = c.constraint_bound;
    d["diameter"] = c.diameter;
    d["multiplier_bound"] = c.multiplier_bound;
    d["drift_constant"] = c.drift_constant;
    d["max_step"] = c.max_step;
    return d;
  }

  SolverTrace solve(const std::string& algorithm, std::int64_t iterations,
                    std::optional<double> step, std::optional<Vector> x_init,
                    bool include_objective_gradient,
                    std::optional<double> lambda_bound) const {
    RunOptions options;
    options.algorithm = parse_algorithm(algorithm);
    options.iterations = iterations;
    options.include_objective_gradient = include_objective_gradient;
    options.x_init = x_init ? *x_init : default_initial_point(spec_);
    if (step) {
      options.step = *step;
    } else {
      const double gamma = select_gamma(built_.constants);
      options.step = options.algorithm == Algorithm::kDualType ? 1.0 / (2.0 * gamma) : gamma;
    }
    if (options.algorithm == Algorithm::kPdSubgradient) {
      const Eigen::Index m = built_.program.num_constraints();
      options.lambda_max = lambda_bound ? Vector::Constant(m, *lambda_bound)
                                        : default_lambda_max(built_.constants, m);
    }
    py::gil_scoped_release release;
    return run(built_.program, built_.constants, options);
  }

 private:
  ProblemSpec spec_;
  BuiltProgram built_;
};

template <typename Get>
Vector column(const SolverTrace& trace, Get get) {
  Vector out(static_cast<Eigen::Index>(trace.records.size()));
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = get(trace.records[i]);
  }
  return out;
}

template <typename Get>
Matrix rows(const SolverTrace& trace, Eigen::Index width, Get get) {
  Matrix out(static_cast<Eigen::Index>(trace.records.size()), width);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = get(trace.records[i]).transpose();
  }
  return out;
}

Eigen::Index trace_width(const SolverTrace& trace, bool constraints) {
  if (trace.records.empty()) return 0;
  return constraints ? trace.records.front().g_average.size() : trace.records.front().x.size();
}

py::dict solution_dict(const ReferenceSolution& s) {
  return py::dict("x_star"_a = s.x_star, "f_star"_a = s.f_star,
                  "method"_a = std::string(to_string(s.method)),
                  "certificate"_a = s.certificate, "active_residual"_a = s.active_residual);
}

}  // namespace
}  // namespace queuegrad

PYBIND11_MODULE(_core, m) {
  using namespace queuegrad;
  m.doc() = "First-order primal-dual solvers for box-constrained convex programs";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto invalid = py::register_exception<InvalidInput>(m, "InvalidInput", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", invalid.ptr());
  py::register_exception<ConfigurationError>(m, "ConfigurationError", base.ptr());
  py::register_exception<NumericalFailure>(m, "NumericalFailure", base.ptr());
  py::register_exception<InfeasibleProblem>(m, "InfeasibleProblem", base.ptr());
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", base.ptr());

  py::class_<LpSpec>(m, "LpSpec")
      .def(py::init<>())
      .def(py::init([](Vector c, Matrix A, Vector b, Vector lower, Vector upper) {
             LpSpec s{std::move(c), std::move(A), std::move(b), std::move(lower), std::move(upper)};
             s.validate();
             return s;
           }),
           "c"_a, "A"_a, "b"_a, "lower"_a, "upper"_a)
      .def_readwrite("c", &LpSpec::c)
      .def_readwrite("A", &LpSpec::A)
      .def_readwrite("b", &LpSpec::b)
      .def_readwrite("lower", &LpSpec::lower)
      .def_readwrite("upper", &LpSpec::upper)
      .def("validate", &LpSpec::validate);

  py::class_<QpSpec>(m, "QpSpec")
      .def(py::init<>())
      .def(py::init([](Matrix P, Vector c, Matrix A, Vector b, Matrix Q, Vector d, double e,
                       Vector lower, Vector upper) {
             QpSpec s{std::move(P), std::move(c), std::move(A), std::move(b), std::move(Q),
                      std::move(d), e, std::move(lower), std::move(upper)};
             s.validate();
             return s;
           }),
           "P"_a, "c"_a, "A"_a, "b"_a, "Q"_a, "d"_a, "e"_a, "lower"_a, "upper"_a)
      .def_readwrite("P", &QpSpec::P)
      .def_readwrite("c", &QpSpec::c)
      .def_readwrite("A", &QpSpec::A)
      .def_readwrite("b", &QpSpec::b)
      .def_readwrite("Q", &QpSpec::Q)
      .def_readwrite("d", &QpSpec::d)
      .def_readwrite("e", &QpSpec::e)
      .def_readwrite("lower", &QpSpec::lower)
      .def_readwrite("upper", &QpSpec::upper)
      .def("validate", &QpSpec::validate);

  m.def("paper_lp_instance", &paper_lp_instance);
  m.def("paper_qp_instance", &paper_qp_instance);
  m.def(
      "random_instance",
      [](const std::string& family, int n, int m_, std::uint64_t seed) {
        return random_instance(parse_family(family), n, m_, seed);
      },
      "family"_a, "n"_a, "m"_a, "seed"_a);
  m.def("parse_problem", &parse_problem_json, "text"_a, "source"_a = "<string>");
  m.def("problem_to_json", &problem_to_json, "spec"_a);

  py::class_<SolverTrace>(m, "Trace")
      .def_property_readonly("algorithm",
                             [](const SolverTrace& t) { return std::string(to_string(t.algorithm)); })
      .def_readonly("step", &SolverTrace::step)
      .def_readonly("x_init", &SolverTrace::x_init)
      .def_readonly("failed", &SolverTrace::failed)
      .def_readonly("failure", &SolverTrace::failure)
      .def_property_readonly("t", [](const SolverTrace& t) {
        return column(t, [](const TraceRecord& r) { return static_cast<double>(r.t); });
      })
      .def_property_readonly("f_x", [](const SolverTrace& t) {
        return column(t, [](const TraceRecord& r) { return r.f_x; });
      })
      .def_property_readonly("f_xbar", [](const SolverTrace& t) {
        return column(t, [](const TraceRecord& r) { return r.f_average; });
      })
      .def_property_readonly("q_norm", [](const SolverTrace& t) {
        return column(t, [](const TraceRecord& r) { return r.queue_norm; });
      })
      .def_property_readonly("drift", [](const SolverTrace& t) {
        return column(t, [](const TraceRecord& r) { return r.drift; });
      })
      .def_property_readonly("g_xbar", [](const SolverTrace& t) {
        return rows(t, trace_width(t, true), [](const TraceRecord& r) { return r.g_average; });
      })
      .def_property_readonly("queue", [](const SolverTrace& t) {
        return rows(t, trace_width(t, true), [](const TraceRecord& r) { return r.queue; });
      })
      .def_property_readonly("x", [](const SolverTrace& t) {
        return rows(t, trace_width(t, false), [](const TraceRecord& r) { return r.x; });
      })
      .def_property_readonly("x_bar", [](const SolverTrace& t) {
        return rows(t, trace_width(t, false), [](const TraceRecord& r) { return r.x_average; });
      })
      .def("__len__", [](const SolverTrace& t) { return t.records.size(); })
      .def(
          "to_csv",
          [](const SolverTrace& t, bool x_columns) {
            std::ostringstream out;
            write_trace_csv(out, t, CsvOptions{x_columns});
            return out.str();
          },
          "x_columns"_a = true);

  py::class_<Problem>(m, "Problem")
      .def(py::init([](const LpSpec& s, std::optional<double> mb) { return Problem(s, mb); }),
           "spec"_a, "multiplier_bound"_a = py::none())
      .def(py::init([](const QpSpec& s, std::optional<double> mb) { return Problem(s, mb); }),
           "spec"_a, "multiplier_bound"_a = py::none())
      .def_property_readonly("dimension",
                             [](const Problem& p) { return p.built().program.dimension(); })
      .def_property_readonly("num_constraints",
                             [](const Problem& p) { return p.built().program.num_constraints(); })
      .def_property_readonly("constants", &Problem::constants)
      .def("objective", [](const Problem& p, const Vector& x) {
        return p.built().program.objective_value(x);
      })
      .def("constraints", [](const Problem& p, const Vector& x) {
        return p.built().program.constraint_values(x);
      })
      .def("select_gamma", [](const Problem& p) { return select_gamma(p.built().constants); })
      .def("multiplier_bound",
           [](const Problem& p, const Vector& x_hat, double dual_lower) {
             return multiplier_bound(p.built().program, x_hat, dual_lower);
           },
           "slater_point"_a, "dual_value_lower"_a)
      .def("solve", &Problem::solve, "algorithm"_a = "new", "iterations"_a = 100000,
           "step"_a = py::none(), "x_init"_a = py::none(),
           "include_objective_gradient"_a = true, "lambda_bound"_a = py::none())
      .def(
          "check",
          [](const Problem& p, const SolverTrace& trace, std::optional<double> f_star) {
            CheckOptions options;
            options.f_star = f_star;
            const InvariantReport report =
                check_trace(trace, p.built().program, p.built().constants, options);
            py::list out;
            for (const auto& c : report.checks) {
              out.append(py::dict("name"_a = c.name,
                                  "status"_a = std::string(to_string(c.status)),
                                  "worst_violation"_a = c.worst_violation,
                                  "worst_iteration"_a = c.worst_iteration, "note"_a = c.note));
            }
            return out;
          },
          "trace"_a, "f_star"_a = py::none())
      .def("reference", [](const Problem& p, int grid_points) {
        if (const auto* lp = std::get_if<LpSpec>(&p.spec())) {
          return solution_dict(lp_vertex_solve(*lp));
        }
        return solution_dict(qp_grid_polish(std::get<QpSpec>(p.spec()), grid_points));
      }, "grid_points"_a = 200);

  m.def("lp_vertex_solve", [](const LpSpec& s) { return solution_dict(lp_vertex_solve(s)); });
  m.def("qp_grid_polish", [](const QpSpec& s, int grid) {
    return solution_dict(qp_grid_polish(s, grid));
  }, "spec"_a, "grid_points_per_axis"_a = 200);

  m.def(
      "fit_rate",
      [](const std::vector<double>& t, const std::vector<double>& error, double t_lo,
         double t_hi) {
        if (t.size() != error.size()) throw InvalidInput("t and error differ in length");
        std::vector<std::pair<double, double>> series;
        for (std::size_t i = 0; i < t.size(); ++i) series.emplace_back(t[i], error[i]);
        const RateFit fit = fit_rate(series, t_lo, t_hi);
        return py::dict("slope"_a = fit.slope, "intercept"_a = fit.intercept,
                        "residual"_a = fit.residual, "points"_a = fit.points);
      },
      "t"_a, "error"_a, "t_lo"_a, "t_hi"_a);

  m.def(
      "main",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "queuegrad");
        std::ostringstream out, err;
        const int code = cli::run_main(args, out, err);
        py::print(out.str(), "end"_a = "");
        if (!err.str().empty()) {
          py::print(err.str(), "end"_a = "", "file"_a = py::module_::import("sys").attr("stderr"));
        }
        return code;
      },
      "args"_a);
}
