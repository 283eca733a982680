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

#include "ktransfer/harness.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "ktransfer/error.hpp"
#include "ktransfer/parallel.hpp"
#include "ktransfer/sampling.hpp"

namespace ktransfer {

RiskEstimate summarize(std::span<const double> values) {
  if (values.empty()) throw PreconditionError("no replicate values");
  const double count = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / count;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = values.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
  return {mean, sd / std::sqrt(count), values.size()};
}

RiskEstimate estimate_risk(const InputDistribution& rho,
                           const ConditionalDensity& pi_star,
                           EstimatorKind est, Count n,
                           const RiskOptions& options) {
  if (options.repeats < 2) throw PreconditionError("repeats must be >= 2");
  if (n == 0) throw PreconditionError("sample size n must be >= 1");
  const JointSampler sampler(rho, pi_star);
  const auto level = required_level(est);
  std::vector<double> risks(options.repeats);
  parallel_for(options.repeats, options.workers, [&](std::size_t r) {
    auto engine = make_engine({options.master_seed, options.instance_tag,
                               static_cast<std::uint64_t>(est), n, r});
    const Dataset d = sampler.draw(n, engine);
    const auto student = fit(est, d, disclose(level, d, pi_star));
    risks[r] = cond_tv(student, pi_star, rho);
  });
  return summarize(risks);
}

void RiskTable::add(RiskRow row) {
  for (const auto& existing : rows_) {
    if (existing.instance == row.instance &&
        existing.estimator == row.estimator && existing.n == row.n) {
      throw PreconditionError("duplicate risk row for instance " +
                              std::string(to_string(row.instance)) + ", " +
                              std::string(to_string(row.estimator)) +
                              ", n = " + std::to_string(row.n));
    }
  }
  rows_.push_back(row);
}

RiskTable sweep(const SweepConfig& config) {
  if (config.n_list.empty()) throw PreconditionError("empty n list");
  if (config.estimators.empty()) throw PreconditionError("no estimators");
  auto spec_at = [&](Count n) {
    return InstanceSpec{config.instance, config.num_inputs, config.num_labels,
                        n};
  };
  for (Count n : config.n_list) {
    if (n == 0) throw PreconditionError("sample size n must be >= 1");
    try {
      validate(spec_at(n));
    } catch (const InvalidInstance& e) {
      throw InvalidInstance(std::string(e.what()) + " at n = " +
                            std::to_string(n));
    }
  }

  std::optional<Instance> fixed;
  if (config.instance == InstanceKind::kI0) fixed = make_instance(spec_at(0));

  RiskTable table;
  RiskOptions options{config.repeats, config.seed,
                      static_cast<std::uint64_t>(config.instance),
                      config.workers};
  for (Count n : config.n_list) {
    const Instance inst = fixed ? *fixed : make_instance(spec_at(n));
    for (auto est : config.estimators) {
      table.add({config.instance, est, config.num_inputs, config.num_labels, n,
                 estimate_risk(inst.rho, inst.pi_star, est, n, options),
                 config.seed});
    }
  }
  return table;
}

RegressionResult fit_rate(std::span<const std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> logs;
  RegressionResult result;
  for (const auto& [n, risk] : points) {
    if (!(risk > 0.0) || !(n > 0.0)) {
      ++result.dropped;
      continue;
    }
    logs.emplace_back(std::log(n), std::log(risk));
  }
  if (logs.size() < 3) {
    throw InsufficientData("rate fit needs >= 3 points with positive risk, got " +
                           std::to_string(logs.size()));
  }
  const double m = static_cast<double>(logs.size());
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : logs) {
    mx += x;
    my += y;
  }
  mx /= m;
  my /= m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : logs) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("rate fit needs distinct n values");
  result.slope = sxy / sxx;
  result.intercept = my - result.slope * mx;
  double ss_res = 0.0;
  for (const auto& [x, y] : logs) {
    const double e = y - (result.intercept + result.slope * x);
    ss_res += e * e;
  }
  // Constant risks (up to round-off in the mean) have nothing to explain.
  const bool flat = syy <= 1e-24 * m * std::max(1.0, my * my);
  result.r_squared = flat ? 1.0 : std::clamp(1.0 - ss_res / syy, 0.0, 1.0);
  result.points = logs.size();
  return result;
}

}  // namespace ktransfer
