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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cli.hpp"
#include "ktransfer/core_model.hpp"
#include "ktransfer/estimators.hpp"
#include "ktransfer/harness.hpp"
#include "ktransfer/instances.hpp"
#include "ktransfer/sampling.hpp"
#include "ktransfer/verify.hpp"

namespace kt = ktransfer;

namespace {

// Tolerances and configurations.
constexpr double kGridStep = 0.02;
constexpr std::uint64_t kClosedFormSeed = 1;
constexpr std::size_t kClosedFormProblems = 100;

constexpr std::uint64_t kExactRiskSeed = 2;
constexpr std::size_t kExactRiskReplicates = 200000;

constexpr kt::Count kBiasN = 100000;
constexpr double kBiasLow = 0.13;
constexpr double kBiasHigh = 0.17;

constexpr std::size_t kRateInputs = 16;
constexpr std::size_t kRateLabels = 4;
constexpr std::size_t kRateRepeats = 2000;
constexpr std::uint64_t kRateSeed = 7;
constexpr double kRootLow = -0.60, kRootHigh = -0.40;
constexpr double kFastLow = -1.15, kFastHigh = -0.85;
constexpr double kMinRSquared = 0.98;

constexpr std::size_t kRankInputs = 100;
constexpr std::size_t kRankLabels = 25;
constexpr kt::Count kRankN = 10000;
constexpr std::size_t kRankRepeats = 200;
constexpr std::uint64_t kRankSeed = 11;
constexpr double kRankGap = 2.0;

constexpr std::size_t kMissingInputs = 50;
constexpr kt::Count kMissingN = 500;
constexpr std::size_t kMissingReplicates = 100000;
constexpr std::uint64_t kMissingSeed = 13;
constexpr double kMissingStderrs = 4.0;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Outcome closed_form_optimality() {
  const auto checks =
      kt::closed_form_checks(kGridStep, kClosedFormSeed, kClosedFormProblems);
  std::size_t failed = 0;
  std::string first;
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (failed++ == 0) first = c.name;
  }
  return {failed == 0 && !checks.empty(),
          fmt("%zu checks, %zu failed%s%s", checks.size(), failed,
              failed ? ", first " : "", first.c_str())};
}

Outcome exact_risk_agreement() {
  const auto checks =
      kt::exact_risk_checks(kExactRiskSeed, kExactRiskReplicates, workers());
  std::size_t failed = 0;
  std::string first;
  for (const auto& c : checks) {
    if (c.pass) continue;
    if (failed++ == 0) first = c.name;
  }
  // The MLE S=1 A=2 n=2 Monte Carlo case against the enumerated 0.25.
  const kt::ConditionalDensity fair({{0.5, 0.5}});
  const auto mle = kt::estimate_risk(kt::InputDistribution({1.0}), fair,
                                     kt::EstimatorKind::kMle, 2,
                                     {kExactRiskReplicates, kExactRiskSeed, 0,
                                      workers()});
  const bool mle_ok = std::abs(mle.mean - 0.25) <= 4.0 * mle.std_error;
  if (!mle_ok) ++failed;
  return {failed == 0,
          fmt("%zu checks + mle n=2 (mean %.6f vs 0.25, stderr %.2e), %zu "
              "failed%s%s",
              checks.size(), mle.mean, mle.std_error, failed,
              first.empty() ? "" : ", first ", first.c_str())};
}

Outcome empce_bias() {
  const kt::ConditionalDensity pi({{0.75, 0.25}});
  const auto d =
      kt::draw_dataset(kt::InputDistribution({1.0}), pi, kBiasN, {kBiasN, 0, 1});
  const auto fit = kt::fit_empce(d, kt::derive_partial(d, pi));
  const double dist = kt::tv(fit.row(0), pi.row(0));
  return {dist >= kBiasLow && dist <= kBiasHigh,
          fmt("tv %.6f in [%.2f, %.2f]", dist, kBiasLow, kBiasHigh)};
}

Outcome rate_slopes() {
  std::vector<kt::Count> n_list;
  for (kt::Count n = 1024; n <= 65536; n *= 2) n_list.push_back(n);
  struct Target {
    kt::InstanceKind instance;
    kt::EstimatorKind estimator;
    double low, high;
  };
  const Target targets[] = {
      {kt::InstanceKind::kI1, kt::EstimatorKind::kMle, kRootLow, kRootHigh},
      {kt::InstanceKind::kI2, kt::EstimatorKind::kEmpSel, kFastLow, kFastHigh},
      {kt::InstanceKind::kI3, kt::EstimatorKind::kFullKl, kFastLow, kFastHigh},
  };
  bool pass = true;
  std::string detail;
  for (const auto& t : targets) {
    kt::SweepConfig config;
    config.instance = t.instance;
    config.num_inputs = kRateInputs;
    config.num_labels = kRateLabels;
    config.n_list = n_list;
    config.estimators = {t.estimator};
    config.repeats = kRateRepeats;
    config.seed = kRateSeed;
    config.workers = workers();
    const auto table = kt::sweep(config);
    std::vector<std::pair<double, double>> points;
    for (const auto& row : table.rows()) {
      points.emplace_back(static_cast<double>(row.n), row.risk.mean);
    }
    const auto fit = kt::fit_rate(points);
    const bool ok = fit.dropped == 0 && fit.slope >= t.low &&
                    fit.slope <= t.high && fit.r_squared >= kMinRSquared;
    pass = pass && ok;
    detail += fmt("%sI%s %s slope %.4f r2 %.5f", detail.empty() ? "" : "; ",
                  std::string(kt::to_string(t.instance)).c_str(),
                  std::string(kt::to_string(t.estimator)).c_str(), fit.slope,
                  fit.r_squared);
  }
  return {pass, detail};
}

Outcome instance0_ranking() {
  kt::SweepConfig config;
  config.instance = kt::InstanceKind::kI0;
  config.num_inputs = kRankInputs;
  config.num_labels = kRankLabels;
  config.n_list = {kRankN};
  config.estimators = {kt::kAllEstimators.begin(), kt::kAllEstimators.end()};
  config.repeats = kRankRepeats;
  config.seed = kRankSeed;
  config.workers = workers();
  const auto table = kt::sweep(config);
  auto risk = [&](kt::EstimatorKind e) {
    for (const auto& row : table.rows()) {
      if (row.estimator == e) return row.risk;
    }
    return kt::RiskEstimate{};
  };
  const auto mle = risk(kt::EstimatorKind::kMle);
  const auto ce = risk(kt::EstimatorKind::kEmpCe);
  const auto sel = risk(kt::EstimatorKind::kEmpSel);
  const auto full = risk(kt::EstimatorKind::kFullKl);
  // Gap of `hi` over `lo` exceeds kRankGap combined standard errors.
  auto separated = [](const kt::RiskEstimate& lo, const kt::RiskEstimate& hi) {
    const double combined = std::hypot(lo.std_error, hi.std_error);
    return hi.mean - lo.mean > kRankGap * combined;
  };
  const bool ordered = full.mean <= sel.mean && sel.mean <= mle.mean;
  const bool full_sel = separated(full, sel);
  const bool sel_mle = separated(sel, mle);
  const bool mle_ce = separated(mle, ce);
  return {ordered && full_sel && sel_mle && mle_ce,
          fmt("fullkl %.3e (%.1e) empsel %.3e (%.1e) mle %.4f (%.1e) empce "
              "%.4f (%.1e); gaps fullkl<empsel %s empsel<mle %s mle<empce %s",
              full.mean, full.std_error, sel.mean, sel.std_error, mle.mean,
              mle.std_error, ce.mean, ce.std_error, full_sel ? "ok" : "no",
              sel_mle ? "ok" : "no", mle_ce ? "ok" : "no")};
}

Outcome missing_mass_law() {
  const auto rho = kt::InputDistribution::uniform(kMissingInputs);
  const kt::CategoricalSampler sampler(rho.probs());
  std::vector<double> values(kMissingReplicates);
  for (std::size_t r = 0; r < kMissingReplicates; ++r) {
    auto engine = kt::make_engine({kMissingSeed, 0, 0, kMissingN, r});
    std::vector<kt::Count> visits(kMissingInputs, 0);
    for (kt::Count i = 0; i < kMissingN; ++i) ++visits[sampler(engine)];
    values[r] = kt::missing_mass(rho.probs(), visits);
  }
  const auto mc = kt::summarize(values);
  const double exact = kt::expected_missing_mass(rho.probs(), kMissingN);
  const double bound = 4.0 * static_cast<double>(kMissingInputs) /
                       (9.0 * static_cast<double>(kMissingN));
  const bool agree = std::abs(mc.mean - exact) <= kMissingStderrs * mc.std_error;
  return {agree && exact <= bound,
          fmt("mc %.4e (stderr %.1e) exact %.4e bound %.4e", mc.mean,
              mc.std_error, exact, bound)};
}

Outcome simulate_determinism(const std::string& tmpdir) {
  const std::vector<std::string> base{
      "ktransfer", "simulate",     "--instance", "2",     "--S",
      "8",         "--A",          "5",          "--n",   "64,128,256",
      "--estimators", "mle,empce,empsel,fullkl", "--repeats", "200",
      "--seed",    "5"};
  std::vector<std::string> bytes;
  for (const char* w : {"1", "4"}) {
    const std::string path = tmpdir + "/acceptance_sim_w" + w + ".csv";
    auto args = base;
    args.insert(args.end(), {"--workers", w, "--out", path});
    std::ostringstream out, err;
    if (ktransfer::cli::run(args, out, err) != ktransfer::cli::kExitOk) {
      return {false, "simulate failed: " + err.str()};
    }
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    bytes.push_back(ss.str());
  }
  const bool same = !bytes[0].empty() && bytes[0] == bytes[1];
  return {same, fmt("workers 1 vs 4: %zu bytes, %s", bytes[0].size(),
                    same ? "identical" : "different")};
}

}  // namespace

int main(int argc, char** argv) {
  std::string tmpdir = ".";
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--tmpdir" && i + 1 < argc) tmpdir = argv[++i];
  }

  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const Criterion criteria[] = {
      {"1 closed-form optimality", closed_form_optimality},
      {"2 exact-risk agreement", exact_risk_agreement},
      {"3 empce asymptotic bias", empce_bias},
      {"4 rate slopes", rate_slopes},
      {"5 instance-0 ranking", instance0_ranking},
      {"6 missing-mass law", missing_mass_law},
      {"7 simulate determinism", [&] { return simulate_determinism(tmpdir); }},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(
                            std::chrono::steady_clock::now() - start)
                            .count();
    if (!outcome.pass) ++failures;
    std::printf("%s criterion %s: %s [%.1fs]\n", outcome.pass ? "PASS" : "FAIL",
                c.name, outcome.detail.c_str(), secs);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
