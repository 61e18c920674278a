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

// Problem files (JSON) and solver traces (CSV).
//
// Problem schema:
//   {"family": "lp" | "qp", "c": [...], "A": [[...], ...], "b": [...],
//    "P": [[...]], "Q": [[...]], "d": [...], "e": 1.0,   // qp only
//    "lower": [...], "upper": [...]}
//
// Trace CSV: optional '#' metadata lines (key=value), then the header
//   t,f_x,f_xbar,g_xbar_1..g_xbar_m,q_norm,drift[,x_1..x_n]
// and one row per record, floats printed with 17 significant digits.

#ifndef QUEUEGRAD_IO_HPP_
#define QUEUEGRAD_IO_HPP_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "queuegrad/instances.hpp"
#include "queuegrad/solvers.hpp"

namespace queuegrad {

// Throws ParseError with the source name and line where it can be located.
ProblemSpec parse_problem_json(std::string_view text,
                               std::string_view source = "<string>");
ProblemSpec parse_problem_file(const std::filesystem::path& path);
std::string problem_to_json(const ProblemSpec& spec);

// 17 significant digits; round-trips every double.
std::string format_double(double v);

struct CsvOptions {
  bool x_columns = true;
};

void write_trace_csv(std::ostream& out, const SolverTrace& trace,
                     const CsvOptions& options = {});

struct ParsedTrace {
  std::map<std::string, std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Index of a column; throws ParseError if absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
  Eigen::Index num_constraints() const;
  Eigen::Index num_variables() const;  // 0 without x columns
};

ParsedTrace read_trace_csv(std::istream& in);
ParsedTrace read_trace_file(const std::filesystem::path& path);

// Rebuilds a SolverTrace from a parsed CSV. Recorded columns (f values,
// g(xbar), q_norm, drift) are taken as written; the queue vector and g(x) are
// replayed from the x columns, which are therefore required.
SolverTrace trace_from_csv(const ParsedTrace& parsed,
                           const ConvexProgram& program);

}  // namespace queuegrad

#endif  // QUEUEGRAD_IO_HPP_
