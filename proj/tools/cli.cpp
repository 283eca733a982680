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

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "ktransfer/error.hpp"
#include "ktransfer/estimators.hpp"
#include "ktransfer/harness.hpp"
#include "ktransfer/instances.hpp"
#include "ktransfer/io.hpp"
#include "ktransfer/verify.hpp"

namespace ktransfer::cli {
namespace {

struct RunConfig {
  std::string instance;
  std::size_t num_inputs = 0;
  std::size_t num_labels = 0;
  std::vector<Count> n_list;
  std::vector<std::string> estimators;
  std::size_t repeats = kDefaultRepeats;
  // Monte Carlo replicates for `verify --scope exact-risk`.
  std::size_t verify_repeats = 200000;
  std::uint64_t seed = 0;
  std::string in_path;
  std::string out_path;
  unsigned workers = 1;
  std::string scope = "all";
  double step = 0.02;
};

const auto kInstanceTags = std::vector<std::string>{"0", "1", "2", "3"};
const auto kEstimatorTags =
    std::vector<std::string>{"mle", "empce", "empsel", "fullkl"};

std::vector<EstimatorKind> estimator_kinds(const std::vector<std::string>& tags) {
  std::vector<EstimatorKind> kinds;
  for (const auto& t : tags) kinds.push_back(*parse_estimator(t));
  return kinds;
}

// Writes through `out` unless a path is given.
template <typename Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw PreconditionError("cannot open '" + path + "' for writing");
  write(file);
  if (!file) throw PreconditionError("failed writing '" + path + "'");
}

int cmd_simulate(const RunConfig& c, std::ostream& out) {
  SweepConfig sweep_config;
  sweep_config.instance = *parse_instance(c.instance);
  sweep_config.num_inputs = c.num_inputs;
  sweep_config.num_labels = c.num_labels;
  sweep_config.n_list = c.n_list;
  sweep_config.estimators = estimator_kinds(c.estimators);
  sweep_config.repeats = c.repeats;
  sweep_config.seed = c.seed;
  sweep_config.workers = c.workers;
  if (c.repeats < 2) throw PreconditionError("--repeats must be >= 2");
  const RiskTable table = sweep(sweep_config);
  emit(c.out_path, out, [&](std::ostream& os) { write_risk_csv(os, table); });
  return kExitOk;
}

int cmd_rates(const RunConfig& c, std::ostream& out) {
  std::ifstream file(c.in_path, std::ios::binary);
  if (!file) throw ParseError("cannot open '" + c.in_path + "'");
  const RiskTable table = read_risk_csv(file);

  std::optional<InstanceKind> instance_filter;
  if (!c.instance.empty()) instance_filter = parse_instance(c.instance);
  const auto estimator_filter = estimator_kinds(c.estimators);
  auto wanted = [&](const RiskRow& row) {
    if (instance_filter && row.instance != *instance_filter) return false;
    if (estimator_filter.empty()) return true;
    return std::find(estimator_filter.begin(), estimator_filter.end(),
                     row.estimator) != estimator_filter.end();
  };

  // Groups in order of first appearance.
  std::vector<std::pair<InstanceKind, EstimatorKind>> keys;
  std::vector<std::vector<std::pair<double, double>>> points;
  for (const auto& row : table.rows()) {
    if (!wanted(row)) continue;
    const auto key = std::pair(row.instance, row.estimator);
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) {
      keys.push_back(key);
      points.emplace_back();
      it = keys.end() - 1;
    }
    points[static_cast<std::size_t>(it - keys.begin())].emplace_back(
        static_cast<double>(row.n), row.risk.mean);
  }
  if (keys.empty()) throw InsufficientData("no rows match the filter");

  std::vector<RateRecord> records;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    records.push_back({keys[i].first, keys[i].second, fit_rate(points[i])});
  }
  emit(c.out_path, out,
       [&](std::ostream& os) { write_rate_report(os, records); });
  return kExitOk;
}

int cmd_instance_dump(const RunConfig& c, std::ostream& out) {
  const Count n = c.n_list.empty() ? 0 : c.n_list.front();
  const auto inst = make_instance(
      {*parse_instance(c.instance), c.num_inputs, c.num_labels, n});
  emit(c.out_path, out, [&](std::ostream& os) {
    os << "rho\n";
    write_table(os, inst.rho);
    os << "pi_star\n";
    write_table(os, inst.pi_star);
  });
  return kExitOk;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  std::vector<Check> checks;
  if (c.scope == "closed-forms" || c.scope == "all") {
    auto part = closed_form_checks(c.step, c.seed);
    checks.insert(checks.end(), part.begin(), part.end());
  }
  if (c.scope == "exact-risk" || c.scope == "all") {
    auto part = exact_risk_checks(c.seed, c.verify_repeats, c.workers);
    checks.insert(checks.end(), part.begin(), part.end());
  }
  std::size_t failed = 0;
  for (const auto& check : checks) {
    if (!check.pass) ++failed;
    out << (check.pass ? "PASS " : "FAIL ") << check.name << ' '
        << format_double(check.observed) << ' ' << format_double(check.bound)
        << '\n';
  }
  out << "summary: " << checks.size() << " checks, " << failed << " failed\n";
  return failed == 0 ? kExitOk : kExitFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Knowledge-transfer simulation laboratory"};
  app.require_subcommand(1);
  RunConfig c;

  auto* simulate = app.add_subcommand(
      "simulate", "Monte Carlo risk sweep; writes the risk CSV");
  simulate->add_option("--instance", c.instance, "Instance tag")
      ->required()
      ->check(CLI::IsMember(kInstanceTags));
  simulate->add_option("--S", c.num_inputs, "Number of inputs")->required();
  simulate->add_option("--A", c.num_labels, "Number of labels")->required();
  simulate->add_option("--n", c.n_list, "Comma-separated sample sizes")
      ->required()
      ->delimiter(',');
  simulate->add_option("--estimators", c.estimators, "mle,empce,empsel,fullkl")
      ->required()
      ->delimiter(',')
      ->check(CLI::IsMember(kEstimatorTags));
  simulate->add_option("--repeats", c.repeats, "Replicates per point")
      ->capture_default_str();
  simulate->add_option("--seed", c.seed, "Master seed")->capture_default_str();
  simulate->add_option("--out", c.out_path, "Output CSV (default stdout)");
  simulate->add_option("--workers", c.workers, "Worker threads")
      ->capture_default_str();

  auto* rates = app.add_subcommand("rates", "Log-log slope report from a CSV");
  rates->add_option("--in", c.in_path, "Risk CSV")->required();
  rates->add_option("--estimators", c.estimators, "Estimator filter")
      ->delimiter(',')
      ->check(CLI::IsMember(kEstimatorTags));
  rates->add_option("--instance", c.instance, "Instance filter")
      ->check(CLI::IsMember(kInstanceTags));
  rates->add_option("--out", c.out_path, "Report path (default stdout)");

  auto* dump = app.add_subcommand("instance-dump", "Print rho and pi*");
  dump->add_option("--instance", c.instance, "Instance tag")
      ->required()
      ->check(CLI::IsMember(kInstanceTags));
  dump->add_option("--S", c.num_inputs, "Number of inputs")->required();
  dump->add_option("--A", c.num_labels, "Number of labels")->required();
  dump->add_option("--n", c.n_list, "Sample size (I1-I3)")->expected(1);
  dump->add_option("--out", c.out_path, "Output path (default stdout)");

  auto* verify = app.add_subcommand("verify", "Run the oracle suites");
  verify->add_option("--scope", c.scope, "closed-forms | exact-risk | all")
      ->check(CLI::IsMember({"closed-forms", "exact-risk", "all"}))
      ->capture_default_str();
  verify->add_option("--step", c.step, "Grid step")->capture_default_str();
  verify->add_option("--seed", c.seed, "Seed")->capture_default_str();
  verify->add_option("--repeats", c.verify_repeats, "Monte Carlo replicates")
      ->capture_default_str();
  verify->add_option("--workers", c.workers, "Worker threads")
      ->capture_default_str();

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    if (simulate->parsed()) return cmd_simulate(c, out);
    if (rates->parsed()) return cmd_rates(c, out);
    if (dump->parsed()) return cmd_instance_dump(c, out);
    if (verify->parsed()) return cmd_verify(c, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace ktransfer::cli
