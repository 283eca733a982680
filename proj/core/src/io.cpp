// Copyright 2026 The ktransfer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ktransfer/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "ktransfer/error.hpp"

namespace ktransfer {
namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(sep, start);
    fields.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return fields;
}

template <typename Int>
Int parse_int(std::string_view field, std::size_t line_no, const char* what) {
  Int value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                     " '" + std::string(field) + "'");
  }
  return value;
}

double parse_real(std::string_view field, std::size_t line_no,
                  const char* what) {
  const std::string buf(field);
  char* end = nullptr;
  const double value = std::strtod(buf.c_str(), &end);
  if (buf.empty() || end != buf.c_str() + buf.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": bad " + what +
                     " '" + buf + "'");
  }
  return value;
}

void write_row(std::ostream& out, std::span<const double> values) {
  char buf[32];
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6f", values[i]);
    if (i > 0) out << ' ';
    out << buf;
  }
  out << '\n';
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_risk_csv(std::ostream& out, const RiskTable& table) {
  out << kRiskCsvHeader << '\n';
  for (const auto& row : table.rows()) {
    out << to_string(row.instance) << ',' << to_string(row.estimator) << ','
        << row.num_inputs << ',' << row.num_labels << ',' << row.n << ','
        << row.risk.repeats << ',' << format_double(row.risk.mean) << ','
        << format_double(row.risk.std_error) << ',' << row.seed << '\n';
  }
}

RiskTable read_risk_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw ParseError("line 1: missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRiskCsvHeader) {
    throw ParseError("line 1: unexpected header '" + line + "'");
  }
  RiskTable table;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 9) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 9 fields, got " +
                       std::to_string(f.size()));
    }
    RiskRow row;
    auto inst = parse_instance(f[0]);
    if (!inst) {
      throw ParseError("line " + std::to_string(line_no) + ": bad instance '" +
                       std::string(f[0]) + "'");
    }
    auto est = parse_estimator(f[1]);
    if (!est) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": bad estimator '" + std::string(f[1]) + "'");
    }
    row.instance = *inst;
    row.estimator = *est;
    row.num_inputs = parse_int<std::size_t>(f[2], line_no, "S");
    row.num_labels = parse_int<std::size_t>(f[3], line_no, "A");
    row.n = parse_int<Count>(f[4], line_no, "n");
    row.risk.repeats = parse_int<std::size_t>(f[5], line_no, "repeats");
    row.risk.mean = parse_real(f[6], line_no, "mean_risk");
    row.risk.std_error = parse_real(f[7], line_no, "stderr");
    row.seed = parse_int<std::uint64_t>(f[8], line_no, "seed");
    try {
      table.add(row);
    } catch (const PreconditionError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return table;
}

void write_table(std::ostream& out, const InputDistribution& rho) {
  write_row(out, rho.probs());
}

void write_table(std::ostream& out, const ConditionalDensity& pi) {
  for (std::size_t s = 0; s < pi.num_inputs(); ++s) write_row(out, pi.row(s));
}

void write_rate_report(std::ostream& out,
                       const std::vector<RateRecord>& records) {
  bool first = true;
  for (const auto& r : records) {
    if (!first) out << '\n';
    first = false;
    out << "instance: " << to_string(r.instance) << '\n'
        << "estimator: " << to_string(r.estimator) << '\n'
        << "points: " << r.fit.points << '\n'
        << "dropped: " << r.fit.dropped << '\n'
        << "slope: " << format_double(r.fit.slope) << '\n'
        << "intercept: " << format_double(r.fit.intercept) << '\n'
        << "r_squared: " << format_double(r.fit.r_squared) << '\n';
  }
}

}  // namespace ktransfer
