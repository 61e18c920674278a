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

#include "queuegrad/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "queuegrad/errors.hpp"

namespace queuegrad {
namespace {

using nlohmann::json;

class ProblemReader {
 public:
  ProblemReader(std::string_view text, std::string_view source)
      : text_(text), source_(source) {}

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    std::ostringstream msg;
    msg << source_;
    if (const int line = line_of(key); line > 0) msg << ":" << line;
    msg << ": " << what;
    throw ParseError(msg.str());
  }

  const json& field(const json& root, const std::string& key) const {
    const auto it = root.find(key);
    if (it == root.end()) fail(key, "missing field \"" + key + "\"");
    return *it;
  }

  double number(const json& v, const std::string& key) const {
    if (!v.is_number()) fail(key, "field \"" + key + "\" must be a number");
    return v.get<double>();
  }

  Vector vector(const json& root, const std::string& key) const {
    const json& v = field(root, key);
    if (!v.is_array()) fail(key, "field \"" + key + "\" must be an array");
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_number()) {
        fail(key, "entry " + std::to_string(i + 1) + " of \"" + key +
                      "\" is not a number");
      }
      out[static_cast<Eigen::Index>(i)] = v[i].get<double>();
    }
    return out;
  }

  // Rows must all have `cols` entries.
  Matrix matrix(const json& root, const std::string& key, Eigen::Index cols,
                bool allow_empty = false) const {
    const auto it = root.find(key);
    if (it == root.end()) {
      if (allow_empty) return Matrix(0, cols);
      fail(key, "missing field \"" + key + "\"");
    }
    const json& v = *it;
    if (!v.is_array()) fail(key, "field \"" + key + "\" must be an array of rows");
    Matrix out(static_cast<Eigen::Index>(v.size()), cols);
    for (std::size_t r = 0; r < v.size(); ++r) {
      const json& row = v[r];
      if (!row.is_array()) {
        fail(key, key + " row " + std::to_string(r + 1) + " is not an array");
      }
      if (static_cast<Eigen::Index>(row.size()) != cols) {
        fail(key, key + " row " + std::to_string(r + 1) + " has " +
                      std::to_string(row.size()) + " entries, expected " +
                      std::to_string(cols));
      }
      for (std::size_t j = 0; j < row.size(); ++j) {
        if (!row[j].is_number()) {
          fail(key, key + " row " + std::to_string(r + 1) + " entry " +
                        std::to_string(j + 1) + " is not a number");
        }
        out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
            row[j].get<double>();
      }
    }
    return out;
  }

  int line_of(const std::string& key) const {
    const std::string needle = "\"" + key + "\"";
    const auto pos = text_.find(needle);
    if (pos == std::string_view::npos) return 0;
    return 1 + static_cast<int>(std::count(text_.begin(),
                                           text_.begin() + static_cast<long>(pos),
                                           '\n'));
  }

 private:
  std::string_view text_;
  std::string_view source_;
};

std::pair<int, int> line_and_column(std::string_view text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

json to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out.push_back(to_json(Vector(m.row(r).transpose())));
  }
  return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

double parse_number(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("trace line " + std::to_string(line) + ": bad number '" +
                     s + "'");
  }
}

Vector parse_vector_list(const std::string& s) {
  const auto cells = split(s, ',');
  Vector v(static_cast<Eigen::Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = parse_number(cells[i], 0);
  }
  return v;
}

}  // namespace

ProblemSpec parse_problem_json(std::string_view text, std::string_view source) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::ostringstream msg;
    msg << source << ":" << line << ":" << col << ": malformed JSON ("
        << e.what() << ")";
    throw ParseError(msg.str());
  }
  ProblemReader reader(text, source);
  if (!root.is_object()) reader.fail("", "top level must be a JSON object");
  const json& family_field = reader.field(root, "family");
  if (!family_field.is_string()) reader.fail("family", "\"family\" must be a string");
  Family family;
  try {
    family = parse_family(family_field.get<std::string>());
  } catch (const InvalidInput& e) {
    reader.fail("family", e.what());
  }

  const Vector c = reader.vector(root, "c");
  const Eigen::Index n = c.size();
  if (n < 1) reader.fail("c", "\"c\" must have at least one entry");
  const Vector lower = reader.vector(root, "lower");
  const Vector upper = reader.vector(root, "upper");
  if (lower.size() != n) reader.fail("lower", "\"lower\" must have " + std::to_string(n) + " entries");
  if (upper.size() != n) reader.fail("upper", "\"upper\" must have " + std::to_string(n) + " entries");

  try {
    if (family == Family::kLp) {
      LpSpec spec;
      spec.c = c;
      spec.A = reader.matrix(root, "A", n);
      spec.b = reader.vector(root, "b");
      spec.lower = lower;
      spec.upper = upper;
      if (spec.b.size() != spec.A.rows()) {
        reader.fail("b", "\"b\" has " + std::to_string(spec.b.size()) +
                             " entries but A has " +
                             std::to_string(spec.A.rows()) + " rows");
      }
      spec.validate();
      return spec;
    }
    QpSpec spec;
    spec.c = c;
    spec.P = reader.matrix(root, "P", n);
    spec.A = reader.matrix(root, "A", n, /*allow_empty=*/true);
    spec.b = root.contains("b") ? reader.vector(root, "b") : Vector(0);
    spec.Q = reader.matrix(root, "Q", n);
    spec.d = reader.vector(root, "d");
    spec.e = reader.number(reader.field(root, "e"), "e");
    spec.lower = lower;
    spec.upper = upper;
    if (spec.b.size() != spec.A.rows()) {
      reader.fail("b", "\"b\" has " + std::to_string(spec.b.size()) +
                           " entries but A has " +
                           std::to_string(spec.A.rows()) + " rows");
    }
    if (spec.d.size() != n) reader.fail("d", "\"d\" must have " + std::to_string(n) + " entries");
    spec.validate();
    return spec;
  } catch (const ParseError&) {
    throw;
  } catch (const InvalidInput& e) {
    throw ParseError(std::string(source) + ": " + e.what());
  }
}

ProblemSpec parse_problem_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open problem file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_problem_json(text.str(), path.string());
}

std::string problem_to_json(const ProblemSpec& spec) {
  json root;
  if (const auto* lp = std::get_if<LpSpec>(&spec)) {
    root["family"] = "lp";
    root["c"] = to_json(lp->c);
    root["A"] = to_json(lp->A);
    root["b"] = to_json(lp->b);
    root["lower"] = to_json(lp->lower);
    root["upper"] = to_json(lp->upper);
  } else {
    const auto& qp = std::get<QpSpec>(spec);
    root["family"] = "qp";
    root["P"] = to_json(qp.P);
    root["c"] = to_json(qp.c);
    root["A"] = to_json(qp.A);
    root["b"] = to_json(qp.b);
    root["Q"] = to_json(qp.Q);
    root["d"] = to_json(qp.d);
    root["e"] = qp.e;
    root["lower"] = to_json(qp.lower);
    root["upper"] = to_json(qp.upper);
  }
  return root.dump(2) + "\n";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const SolverTrace& trace,
                     const CsvOptions& options) {
  const Eigen::Index m =
      trace.records.empty() ? 0 : trace.records.front().g_average.size();
  const Eigen::Index n = trace.x_init.size();
  out << "# algorithm=" << to_string(trace.algorithm) << "\n";
  out << "# step=" << format_double(trace.step) << "\n";
  out << "# x_init=";
  for (Eigen::Index i = 0; i < n; ++i) {
    out << (i ? "," : "") << format_double(trace.x_init[i]);
  }
  out << "\n";
  out << "t,f_x,f_xbar";
  for (Eigen::Index k = 1; k <= m; ++k) out << ",g_xbar_" << k;
  out << ",q_norm,drift";
  if (options.x_columns) {
    for (Eigen::Index i = 1; i <= n; ++i) out << ",x_" << i;
  }
  out << "\n";
  for (const auto& r : trace.records) {
    out << r.t << "," << format_double(r.f_x) << "," << format_double(r.f_average);
    for (Eigen::Index k = 0; k < m; ++k) out << "," << format_double(r.g_average[k]);
    out << "," << format_double(r.queue_norm) << "," << format_double(r.drift);
    if (options.x_columns) {
      for (Eigen::Index i = 0; i < n; ++i) out << "," << format_double(r.x[i]);
    }
    out << "\n";
  }
}

std::size_t ParsedTrace::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) {
    throw ParseError("trace has no column '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - columns.begin());
}

bool ParsedTrace::has_column(std::string_view name) const {
  return std::find(columns.begin(), columns.end(), name) != columns.end();
}

Eigen::Index ParsedTrace::num_constraints() const {
  return std::count_if(columns.begin(), columns.end(), [](const std::string& c) {
    return c.rfind("g_xbar_", 0) == 0;
  });
}

Eigen::Index ParsedTrace::num_variables() const {
  return std::count_if(columns.begin(), columns.end(), [](const std::string& c) {
    return c.rfind("x_", 0) == 0;
  });
}

ParsedTrace read_trace_csv(std::istream& in) {
  ParsedTrace parsed;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto body = line.substr(1);
      const auto eq = body.find('=');
      if (eq != std::string::npos) {
        auto key = body.substr(0, eq);
        key.erase(0, key.find_first_not_of(' '));
        parsed.metadata[key] = body.substr(eq + 1);
      }
      continue;
    }
    if (parsed.columns.empty()) {
      parsed.columns = split(line, ',');
      if (parsed.columns.empty() || parsed.columns.front() != "t") {
        throw ParseError("trace line " + std::to_string(line_no) +
                         ": header must start with 't'");
      }
      continue;
    }
    const auto cells = split(line, ',');
    if (cells.size() != parsed.columns.size()) {
      throw ParseError("trace line " + std::to_string(line_no) + ": expected " +
                       std::to_string(parsed.columns.size()) + " fields, got " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      row[i] = parse_number(cells[i], line_no);
    }
    parsed.rows.push_back(std::move(row));
  }
  if (parsed.columns.empty()) throw ParseError("trace has no header");
  return parsed;
}

ParsedTrace read_trace_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open trace file " + path.string());
  return read_trace_csv(in);
}

SolverTrace trace_from_csv(const ParsedTrace& parsed,
                           const ConvexProgram& program) {
  const Eigen::Index m = parsed.num_constraints();
  const Eigen::Index n = parsed.num_variables();
  if (m != program.num_constraints()) {
    throw ConfigurationError("trace has " + std::to_string(m) +
                             " constraint columns, program has " +
                             std::to_string(program.num_constraints()));
  }
  if (n != program.dimension()) {
    throw ConfigurationError(
        "trace needs x_1..x_n columns matching the program dimension");
  }
  if (parsed.rows.empty()) throw ConfigurationError("trace has no rows");

  SolverTrace trace;
  const auto meta = [&](const std::string& key) -> const std::string* {
    const auto it = parsed.metadata.find(key);
    return it == parsed.metadata.end() ? nullptr : &it->second;
  };
  if (const auto* a = meta("algorithm")) trace.algorithm = parse_algorithm(*a);
  if (const auto* s = meta("step")) trace.step = parse_number(*s, 0);

  const std::size_t t_col = parsed.column("t");
  const std::size_t f_col = parsed.column("f_x");
  const std::size_t fbar_col = parsed.column("f_xbar");
  const std::size_t g_col = parsed.column("g_xbar_1");
  const std::size_t q_col = parsed.column("q_norm");
  const std::size_t drift_col = parsed.column("drift");
  const std::size_t x_col = parsed.column("x_1");

  Vector running_sum = Vector::Zero(n);
  VirtualQueue queue;
  for (std::size_t i = 0; i < parsed.rows.size(); ++i) {
    const auto& row = parsed.rows[i];
    TraceRecord r;
    r.t = static_cast<std::int64_t>(row[t_col]);
    r.x.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) r.x[j] = row[x_col + static_cast<std::size_t>(j)];
    r.g_x = program.constraint_values(r.x);
    if (i == 0) {
      queue = VirtualQueue((-r.g_x).cwiseMax(0.0));
      r.x_average = r.x;
      trace.x_init = r.x;
    } else {
      queue.update(r.g_x);
      running_sum += r.x;
      r.x_average = running_sum / static_cast<double>(r.t);
    }
    r.queue = queue.backlog();
    r.queue_norm = row[q_col];
    r.f_x = row[f_col];
    r.f_average = row[fbar_col];
    r.g_average.resize(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      r.g_average[k] = row[g_col + static_cast<std::size_t>(k)];
    }
    r.drift = row[drift_col];
    trace.records.push_back(std::move(r));
  }
  if (const auto* x = meta("x_init")) trace.x_init = parse_vector_list(*x);
  return trace;
}

}  // namespace queuegrad
