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

#include "queuegrad/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "queuegrad/diagnostics.hpp"
#include "queuegrad/errors.hpp"
#include "queuegrad/io.hpp"
#include "queuegrad/reference.hpp"

namespace queuegrad::cli {
namespace {

double parse_real(const std::string& text, const std::string& what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end) {
    throw ConfigurationError(what + ": '" + text + "' is not a number");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  return parts;
}

std::string_view step_label(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::kNew: return "gamma";
    case Algorithm::kPdSubgradient: return "c";
    case Algorithm::kDualType: return "alpha";
  }
  return "step";
}

double max_entry(const Vector& v) {
  return v.size() == 0 ? -INFINITY : v.maxCoeff();
}

// Report helper: exceptions map to exit codes in one place.
template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const NumericalFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const ConvergenceFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigurationError("cannot write " + path);
  file << contents;
  if (!file) throw ConfigurationError("failed writing " + path);
}

// Rate and onset need only t, f(xbar) and g(xbar), so no program is needed.
SolverTrace summary_trace(const ParsedTrace& parsed) {
  const std::size_t t_col = parsed.column("t");
  const std::size_t f_col = parsed.column("f_xbar");
  const Eigen::Index m = parsed.num_constraints();
  const std::size_t g_col = m > 0 ? parsed.column("g_xbar_1") : 0;
  SolverTrace trace;
  trace.records.reserve(parsed.rows.size());
  for (const auto& row : parsed.rows) {
    TraceRecord r;
    r.t = static_cast<std::int64_t>(row[t_col]);
    r.f_average = row[f_col];
    r.g_average.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      r.g_average[k] = row[g_col + static_cast<std::size_t>(k)];
    }
    trace.records.push_back(std::move(r));
  }
  return trace;
}

struct CompareJob {
  Algorithm algorithm;
  std::optional<RunOptions> options;
  std::string unavailable;
  SolverTrace trace;
  std::string error;
};

}  // namespace

ProblemSpec load_problem(const std::string& source, std::uint64_t seed) {
  if (source.rfind("random:", 0) == 0) {
    const auto parts = split_list(source, ':');
    if (parts.size() != 4) {
      throw ConfigurationError("random problems are written random:<lp|qp>:<n>:<m>");
    }
    const Family family = parse_family(parts[1]);
    const double n = parse_real(parts[2], "random n");
    const double m = parse_real(parts[3], "random m");
    return random_instance(family, static_cast<int>(n), static_cast<int>(m), seed);
  }
  return parse_problem_file(source);
}

Vector resolve_initial_point(const ProblemSpec& spec, const std::string& text) {
  if (text.empty() || text == "default") return default_initial_point(spec);
  if (text == "lower") return lower_bound(spec);
  if (text == "upper") return upper_bound(spec);
  const auto parts = split_list(text, ',');
  Vector x(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = parse_real(parts[i], "--x-init");
  }
  return x;
}

BuiltProgram build_with_estimate(const ProblemSpec& spec) {
  return build(spec, estimate_multiplier_bound(spec));
}

std::optional<double> reference_optimum(const ProblemSpec& spec) {
  try {
    if (const auto* lp = std::get_if<LpSpec>(&spec)) {
      if (lp->c.size() + lp->A.rows() > 20) return std::nullopt;
      return lp_vertex_solve(*lp).f_star;
    }
    const auto& qp = std::get<QpSpec>(spec);
    if (qp.c.size() > 3) return std::nullopt;
    return qp_grid_polish(qp, 200).f_star;
  } catch (const Error&) {
    return std::nullopt;
  }
}

RunOptions make_run_options(const ProblemSpec& spec, const BuiltProgram& built,
                            const RunConfig& config) {
  if (config.iterations < 1) throw ConfigurationError("iterations must be ≥ 1");
  RunOptions options;
  options.algorithm = config.algorithm;
  options.iterations = config.iterations;
  options.x_init = resolve_initial_point(spec, config.x_init);
  options.include_objective_gradient = config.include_objective_gradient;
  options.inner.tolerance = config.inner_tolerance;
  options.inner.max_iterations = config.inner_max_iterations;
  if (config.step == "auto") {
    const double gamma = select_gamma(built.constants);
    options.step = config.algorithm == Algorithm::kDualType ? 1.0 / (2.0 * gamma)
                                                            : gamma;
  } else {
    options.step = parse_real(config.step, "--step");
  }
  if (config.algorithm == Algorithm::kPdSubgradient) {
    const Eigen::Index m = built.program.num_constraints();
    if (config.lambda_bound) {
      options.lambda_max = Vector::Constant(m, *config.lambda_bound);
    } else if (built.constants.multiplier_bound) {
      options.lambda_max = default_lambda_max(built.constants, m);
    } else {
      throw ConfigurationError(
          "pd-subgradient needs --lambda-bound: no strictly feasible point "
          "was found to bound the multipliers");
    }
  }
  return options;
}

int cmd_solve(const std::string& problem, const RunConfig& config,
              std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemSpec spec = load_problem(problem, config.seed);
    const BuiltProgram built = build_with_estimate(spec);
    const RunOptions options = make_run_options(spec, built, config);
    const SolverTrace trace = run(built.program, built.constants, options);

    if (!config.output.empty()) {
      std::ostringstream csv;
      write_trace_csv(csv, trace, CsvOptions{config.x_columns});
      write_file(config.output, csv.str());
    }
    const TraceRecord& last = trace.records.back();
    out << "algorithm    " << to_string(trace.algorithm) << "\n";
    out << step_label(trace.algorithm) << std::string(13 - step_label(trace.algorithm).size(), ' ')
        << format_double(trace.step) << "\n";
    out << "iterations   " << last.t << "\n";
    out << "f(xbar)      " << format_double(last.f_average) << "\n";
    out << "max g(xbar)  " << format_double(max_entry(last.g_average)) << "\n";
    if (trace.failed) {
      err << "error: run stopped at t = " << last.t << ": " << trace.failure << "\n";
      return kExitNumerical;
    }
    return kExitOk;
  });
}

int cmd_verify(const std::string& trace_path, const std::string& problem,
               std::optional<double> f_star, std::ostream& out,
               std::ostream& err) {
  return guarded(err, [&] {
    const ParsedTrace parsed = read_trace_file(trace_path);
    const auto it = parsed.metadata.find("algorithm");
    if (it == parsed.metadata.end() ||
        parse_algorithm(it->second) != Algorithm::kNew) {
      err << "error: verify expects a trace of the 'new' algorithm, got '"
          << (it == parsed.metadata.end() ? std::string("unknown") : it->second)
          << "'\n";
      return kExitConfig;
    }
    const ProblemSpec spec = load_problem(problem);
    const BuiltProgram built = build_with_estimate(spec);
    const SolverTrace trace = trace_from_csv(parsed, built.program);
    CheckOptions options;
    options.f_star = f_star;
    const InvariantReport report =
        check_trace(trace, built.program, built.constants, options);
    out << report.to_table();
    const bool ok = report.all_passed();
    out << "result: " << (ok ? "PASS" : "FAIL") << "\n";
    return ok ? kExitOk : kExitVerifyFailed;
  });
}

int cmd_rate(const std::string& trace_path, const RateConfig& config,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ParsedTrace parsed = read_trace_file(trace_path);
    const SolverTrace trace = summary_trace(parsed);
    const auto gaps = gap_series(trace, config.f_star);
    const auto onset = constraint_onset(trace);

    if (!config.series_output.empty()) {
      std::ostringstream csv;
      csv << "t,log10_t,log10_gap";
      for (std::size_t k = 1; k <= onset.size(); ++k) csv << ",g_xbar_" << k;
      csv << "\n";
      std::size_t gi = 0;
      for (const auto& r : trace.records) {
        if (r.t < 1) continue;
        const double gap = gaps[gi++].second;
        csv << r.t << "," << format_double(std::log10(static_cast<double>(r.t)))
            << "," << (gap > 0.0 ? format_double(std::log10(gap)) : "nan");
        for (Eigen::Index k = 0; k < r.g_average.size(); ++k) {
          csv << "," << format_double(r.g_average[k]);
        }
        csv << "\n";
      }
      write_file(config.series_output, csv.str());
    }

    for (std::size_t k = 0; k < onset.size(); ++k) {
      out << "onset g_" << (k + 1) << "  ";
      if (onset[k]) {
        out << *onset[k] << "\n";
      } else {
        out << "never\n";
      }
    }
    RateFit fit;
    try {
      fit = fit_rate(gaps, config.t_lo, config.t_hi);
    } catch (const InvalidInput&) {
      err << "error: no fit: fewer than 10 positive gaps |f(xbar) - f*| in ["
          << config.t_lo << ", " << config.t_hi << "]\n";
      return kExitConfig;
    }
    char line[160];
    std::snprintf(line, sizeof(line),
                  "slope      %.6f\nintercept  %.6f\nwindow     [%g, %g]\n"
                  "points     %zu\nresidual   %.3e\n",
                  fit.slope, fit.intercept, fit.t_lo, fit.t_hi, fit.points,
                  fit.residual);
    out << line;
    return kExitOk;
  });
}

int cmd_compare(const std::string& problem, std::int64_t iterations,
                std::uint64_t seed, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (iterations < 1) throw ConfigurationError("iterations must be ≥ 1");
    const ProblemSpec spec = load_problem(problem, seed);
    const BuiltProgram built = build_with_estimate(spec);
    const double gamma = select_gamma(built.constants);
    const std::optional<double> f_star = reference_optimum(spec);

    std::vector<CompareJob> jobs;
    for (const Algorithm a :
         {Algorithm::kNew, Algorithm::kPdSubgradient, Algorithm::kDualType}) {
      CompareJob job{a, std::nullopt, {}, {}, {}};
      RunConfig config;
      config.algorithm = a;
      config.iterations = iterations;
      config.step = format_double(a == Algorithm::kDualType ? 1.0 / (2.0 * gamma) : gamma);
      try {
        job.options = make_run_options(spec, built, config);
      } catch (const ConfigurationError& e) {
        job.unavailable = e.what();
      }
      jobs.push_back(std::move(job));
    }

    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
      for (std::size_t i = next++; i < jobs.size(); i = next++) {
        CompareJob& job = jobs[i];
        if (!job.options) continue;
        try {
          job.trace = run(built.program, built.constants, *job.options);
          if (job.trace.failed) job.error = job.trace.failure;
        } catch (const std::exception& e) {
          job.error = e.what();
        }
      }
    };
    const unsigned workers =
        std::max(1u, std::min<unsigned>(thread_limit(), static_cast<unsigned>(jobs.size())));
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();

    out << "gamma " << format_double(gamma) << "  c " << format_double(gamma)
        << "  alpha " << format_double(1.0 / (2.0 * gamma)) << "\n";
    if (f_star) {
      out << "f*    " << format_double(*f_star) << "\n";
    } else {
      out << "f*    unavailable (table shows f(xbar))\n";
    }
    for (const auto& job : jobs) {
      if (!job.unavailable.empty()) {
        out << "note: " << to_string(job.algorithm) << " skipped: " << job.unavailable << "\n";
      } else if (!job.error.empty()) {
        out << "note: " << to_string(job.algorithm) << " failed: " << job.error << "\n";
      }
    }

    std::vector<std::int64_t> ts;
    for (const std::int64_t t : {std::int64_t{100}, std::int64_t{1000},
                                 std::int64_t{10000}, iterations}) {
      if (t <= iterations && std::find(ts.begin(), ts.end(), t) == ts.end()) {
        ts.push_back(t);
      }
    }
    const auto cell = [&](const CompareJob& job, std::int64_t t, bool gap) {
      char buf[40];
      if (!job.options || t >= static_cast<std::int64_t>(job.trace.records.size())) {
        std::snprintf(buf, sizeof(buf), "%24s", "n/a");
        return std::string(buf);
      }
      const TraceRecord& r = job.trace.records[static_cast<std::size_t>(t)];
      const double v = gap ? (f_star ? r.f_average - *f_star : r.f_average)
                           : max_entry(r.g_average);
      std::snprintf(buf, sizeof(buf), "%24.15e", v);
      return std::string(buf);
    };
    for (const bool gap : {true, false}) {
      char head[160];
      std::snprintf(head, sizeof(head), "%-8s%24s%24s%24s\n",
                    gap ? (f_star ? "gap t" : "f t") : "maxg t", "new",
                    "pd-subgradient", "dual-type");
      out << head;
      for (const std::int64_t t : ts) {
        char lead[16];
        std::snprintf(lead, sizeof(lead), "%-8lld", static_cast<long long>(t));
        out << lead;
        for (const auto& job : jobs) out << cell(job, t, gap);
        out << "\n";
      }
    }
    for (const auto& job : jobs) {
      if (!job.error.empty()) return kExitNumerical;
    }
    return kExitOk;
  });
}

int cmd_oracle(const std::string& problem, int grid_points, std::uint64_t seed,
               std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ProblemSpec spec = load_problem(problem, seed);
    const ReferenceSolution sol =
        std::holds_alternative<LpSpec>(spec)
            ? lp_vertex_solve(std::get<LpSpec>(spec))
            : qp_grid_polish(std::get<QpSpec>(spec), grid_points);
    out << "method       " << to_string(sol.method) << "\n";
    out << "f_star       " << format_double(sol.f_star) << "\n";
    out << "x_star       ";
    for (Eigen::Index i = 0; i < sol.x_star.size(); ++i) {
      out << (i ? "," : "") << format_double(sol.x_star[i]);
    }
    out << "\n";
    out << "violation    " << format_double(sol.certificate) << "\n";
    return kExitOk;
  });
}

int cmd_random(Family family, int n, int m, std::uint64_t seed,
               const std::string& output, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const std::string json = problem_to_json(random_instance(family, n, m, seed));
    if (output.empty()) {
      out << json;
    } else {
      write_file(output, json);
    }
    return kExitOk;
  });
}

unsigned thread_limit() {
  if (const char* env = std::getenv("QUEUEGRAD_THREADS")) {
    unsigned v = 0;
    const char* end = env + std::char_traits<char>::length(env);
    const auto res = std::from_chars(env, end, v);
    if (res.ec == std::errc() && res.ptr == end && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

int run_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"First-order primal-dual solvers for box-constrained convex programs"};
  app.name(args.empty() ? "queuegrad" : args.front());
  app.require_subcommand(1);

  RunConfig solve_config;
  std::string solve_problem, algorithm_name = "new";
  auto* solve = app.add_subcommand("solve", "Run one solver and write its trace");
  solve->add_option("problem", solve_problem,
                    "Problem JSON file or random:<lp|qp>:<n>:<m>")->required();
  solve->add_option("-a,--algorithm", algorithm_name, "new | pd-subgradient | dual-type");
  solve->add_option("-T,--iterations", solve_config.iterations, "Iteration budget");
  solve->add_option("--step", solve_config.step, "auto or an explicit gamma / c / alpha");
  solve->add_option("--x-init", solve_config.x_init, "default | lower | upper | comma list");
  solve->add_option("--seed", solve_config.seed, "Seed for random problems");
  solve->add_option("-o,--output", solve_config.output, "Trace CSV path");
  bool no_x_columns = false, no_objective_gradient = false;
  solve->add_flag("--no-x-columns", no_x_columns, "Omit x_1..x_n from the CSV");
  solve->add_flag("--no-objective-gradient", no_objective_gradient,
                  "pd-subgradient: drop the objective gradient from the primal step");
  solve->add_option("--inner-tol", solve_config.inner_tolerance, "dual-type inner tolerance");
  solve->add_option("--inner-max", solve_config.inner_max_iterations,
                    "dual-type inner iteration cap");
  double lambda_bound = 0.0;
  auto* lambda_opt = solve->add_option("--lambda-bound", lambda_bound,
                                       "pd-subgradient multiplier clip");

  std::string verify_trace, verify_problem;
  double verify_fstar = 0.0;
  auto* verify = app.add_subcommand("verify", "Check a trace against the provable invariants");
  verify->add_option("trace", verify_trace, "Trace CSV")->required();
  verify->add_option("-p,--problem", verify_problem, "Problem JSON file")->required();
  auto* verify_fstar_opt = verify->add_option("--f-star", verify_fstar, "Known optimal value");

  std::string rate_trace;
  RateConfig rate_config;
  auto* rate = app.add_subcommand("rate", "Fit the log-log convergence slope of a trace");
  rate->add_option("trace", rate_trace, "Trace CSV")->required();
  rate->add_option("--f-star", rate_config.f_star, "Optimal value")->required();
  rate->add_option("--t-lo", rate_config.t_lo, "Window start");
  rate->add_option("--t-hi", rate_config.t_hi, "Window end");
  rate->add_option("--series", rate_config.series_output, "Write the log-log series CSV here");

  std::string compare_problem;
  std::int64_t compare_iterations = 100000;
  std::uint64_t compare_seed = 0;
  auto* compare = app.add_subcommand("compare", "Run all three algorithms side by side");
  compare->add_option("problem", compare_problem, "Problem JSON file or random:...")->required();
  compare->add_option("-T,--iterations", compare_iterations, "Iteration budget");
  compare->add_option("--seed", compare_seed, "Seed for random problems");

  std::string oracle_problem;
  int oracle_grid = 200;
  std::uint64_t oracle_seed = 0;
  auto* oracle = app.add_subcommand("oracle", "Solve a small problem by the reference method");
  oracle->add_option("problem", oracle_problem, "Problem JSON file or random:...")->required();
  oracle->add_option("--grid", oracle_grid, "QP grid points per axis");
  oracle->add_option("--seed", oracle_seed, "Seed for random problems");

  std::string random_family = "lp", random_output;
  int random_n = 4, random_m = 3;
  std::uint64_t random_seed = 0;
  auto* random = app.add_subcommand("random", "Write a seeded random problem as JSON");
  random->add_option("--family", random_family, "lp | qp");
  random->add_option("-n", random_n, "Variables");
  random->add_option("-m", random_m, "Constraints");
  random->add_option("--seed", random_seed, "Seed");
  random->add_option("-o,--output", random_output, "Output path (stdout if absent)");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  if (args.empty()) argv.push_back("queuegrad");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  if (solve->parsed()) {
    return guarded(err, [&] {
      solve_config.algorithm = parse_algorithm(algorithm_name);
      solve_config.x_columns = !no_x_columns;
      solve_config.include_objective_gradient = !no_objective_gradient;
      if (lambda_opt->count() > 0) solve_config.lambda_bound = lambda_bound;
      return cmd_solve(solve_problem, solve_config, out, err);
    });
  }
  if (verify->parsed()) {
    std::optional<double> f_star;
    if (verify_fstar_opt->count() > 0) f_star = verify_fstar;
    return cmd_verify(verify_trace, verify_problem, f_star, out, err);
  }
  if (rate->parsed()) return cmd_rate(rate_trace, rate_config, out, err);
  if (compare->parsed()) {
    return cmd_compare(compare_problem, compare_iterations, compare_seed, out, err);
  }
  if (oracle->parsed()) {
    return cmd_oracle(oracle_problem, oracle_grid, oracle_seed, out, err);
  }
  return guarded(err, [&] {
    return cmd_random(parse_family(random_family), random_n, random_m, random_seed,
                      random_output, out, err);
  });
}

}  // namespace queuegrad::cli
