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

#pragma once

// Monte Carlo estimation of E cond_tv(student, pi*, rho) and log-log rate
// regression over sample-size sweeps.

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "ktransfer/core_model.hpp"
#include "ktransfer/estimators.hpp"
#include "ktransfer/instances.hpp"

namespace ktransfer {

inline constexpr std::size_t kDefaultRepeats = 2000;

struct RiskEstimate {
  double mean = 0.0;
  // Sample standard deviation / sqrt(repeats).
  double std_error = 0.0;
  std::size_t repeats = 0;

  friend bool operator==(const RiskEstimate&, const RiskEstimate&) = default;
};

struct RiskOptions {
  std::size_t repeats = kDefaultRepeats;
  std::uint64_t master_seed = 0;
  // Stream label for the instance; see RngSeed.
  std::uint64_t instance_tag = 0;
  unsigned workers = 1;
};

// Mean and standard error from per-replicate values, reduced in index order.
RiskEstimate summarize(std::span<const double> values);

// Draws `repeats` datasets of size n, fits `est` on each with the
// side-information its protocol allows, and averages the realized risk.
// Replicate r uses the stream (master, instance_tag, est, n, r), so the
// result is bit-identical for any worker count.
RiskEstimate estimate_risk(const InputDistribution& rho,
                           const ConditionalDensity& pi_star,
                           EstimatorKind est, Count n,
                           const RiskOptions& options);

struct RiskRow {
  InstanceKind instance = InstanceKind::kI0;
  EstimatorKind estimator = EstimatorKind::kMle;
  std::size_t num_inputs = 0;
  std::size_t num_labels = 0;
  Count n = 0;
  RiskEstimate risk;
  std::uint64_t seed = 0;

  friend bool operator==(const RiskRow&, const RiskRow&) = default;
};

// Rows keyed uniquely by (instance, estimator, n).
class RiskTable {
 public:
  // Throws PreconditionError on a duplicate key.
  void add(RiskRow row);

  const std::vector<RiskRow>& rows() const { return rows_; }
  std::size_t size() const { return rows_.size(); }

  friend bool operator==(const RiskTable&, const RiskTable&) = default;

 private:
  std::vector<RiskRow> rows_;
};

struct SweepConfig {
  InstanceKind instance = InstanceKind::kI0;
  std::size_t num_inputs = 1;
  std::size_t num_labels = 2;
  std::vector<Count> n_list;
  std::vector<EstimatorKind> estimators;
  std::size_t repeats = kDefaultRepeats;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

// One row per (estimator, n). I0 is built once and reused for every n; I1-I3
// are rebuilt at each n. Every n is validated before any simulation runs.
RiskTable sweep(const SweepConfig& config);

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  // Points dropped because their risk was not positive.
  std::size_t dropped = 0;
};

// OLS of log(risk) on log(n). Throws InsufficientData when fewer than three
// points have positive risk. r^2 is 1 when the residuals vanish.
RegressionResult fit_rate(std::span<const std::pair<double, double>> points);

}  // namespace ktransfer
