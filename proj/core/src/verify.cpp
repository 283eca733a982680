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

#include "ktransfer/verify.hpp"

#include <cmath>
#include <string>

#include "ktransfer/estimators.hpp"
#include "ktransfer/harness.hpp"
#include "ktransfer/oracle.hpp"
#include "ktransfer/sampling.hpp"

namespace ktransfer {
namespace {

constexpr double kOptimalityTolerance = 1e-9;

std::vector<double> random_row(std::size_t A, double floor, Engine& engine) {
  std::vector<double> row(A);
  double z = 0.0;
  for (double& v : row) {
    v = -std::log(1.0 - uniform01(engine));
    z += v;
  }
  const double scale = 1.0 - floor * static_cast<double>(A);
  double sum = 0.0;
  for (double& v : row) {
    v = floor + scale * v / z;
    sum += v;
  }
  for (double& v : row) v /= sum;
  return row;
}

Check make_check(std::string name, double observed, double bound) {
  return {std::move(name), observed <= bound, observed, bound};
}

}  // namespace

SmallProblem exact_grid_problem(std::size_t num_inputs, std::size_t num_labels,
                                std::uint64_t seed) {
  if (num_inputs == 1 && num_labels == 2) {
    return {InputDistribution({1.0}), ConditionalDensity({{0.5, 0.5}})};
  }
  auto engine = make_engine({seed, 0xE1, num_inputs, num_labels, 0});
  std::vector<std::vector<double>> rows;
  for (std::size_t s = 0; s < num_inputs; ++s) {
    rows.push_back(random_row(num_labels, 0.1 / num_labels, engine));
  }
  if (num_inputs == 2 && num_labels == 3) {
    // One zero-mass label exercises sampling and side-information on a
    // degenerate row.
    rows[1][2] = 0.0;
    const double z = rows[1][0] + rows[1][1];
    rows[1][0] /= z;
    rows[1][1] = 1.0 - rows[1][0];
  }
  std::vector<double> rho = num_inputs == 1
                                ? std::vector<double>{1.0}
                                : random_row(num_inputs, 0.1, engine);
  return {InputDistribution(std::move(rho)), ConditionalDensity(rows)};
}

std::vector<Check> closed_form_checks(double step, std::uint64_t seed,
                                      std::size_t problems) {
  std::vector<Check> checks;
  constexpr std::size_t A = 3;
  for (std::size_t p = 0; p < problems; ++p) {
    auto engine = make_engine({seed, 0xC1, p, 0, 0});
    const std::size_t S = 1 + static_cast<std::size_t>(engine() % 2);
    const Count n = 1 + engine() % 6;
    std::vector<std::vector<double>> rows;
    for (std::size_t s = 0; s < S; ++s) rows.push_back(random_row(A, 0.05, engine));
    const ConditionalDensity pi_star(rows);
    const auto rho = InputDistribution::uniform(S);
    const Dataset d = JointSampler(rho, pi_star).draw(n, engine);
    const auto partial = derive_partial(d, pi_star);
    const std::string prefix = "closed-forms/p" + std::to_string(p) + "/";

    const auto mle = fit_mle(d, A);
    const double mle_loss = loss_eval(LossKind::kHardCe, mle, d);
    const auto hard_grid = grid_minimize(LossKind::kHardCe, d, std::nullopt, step);
    checks.push_back(make_check(prefix + "mle-optimal", mle_loss,
                                hard_grid.loss + kOptimalityTolerance));
    checks.push_back(make_check(
        prefix + "mle-grid-tight", hard_grid.loss,
        mle_loss + grid_slack(LossKind::kHardCe, mle, d, std::nullopt, step)));

    const auto empce = fit_empce(d, partial);
    const double empce_loss = loss_eval(LossKind::kPartialCe, empce, d, partial);
    const auto ce_grid = grid_minimize(LossKind::kPartialCe, d, partial, step);
    checks.push_back(make_check(prefix + "empce-optimal", empce_loss,
                                ce_grid.loss + kOptimalityTolerance));
    checks.push_back(make_check(
        prefix + "empce-grid-tight", ce_grid.loss,
        empce_loss + grid_slack(LossKind::kPartialCe, empce, d, partial, step)));

    const auto empsel = fit_empsel(d, partial);
    const double sel_loss = loss_eval(LossKind::kPartialSel, empsel, d, partial);
    const auto sel_grid = grid_minimize(LossKind::kPartialSel, d, partial, step);
    checks.push_back(make_check(prefix + "empsel-zero-loss", sel_loss, 1e-12));
    checks.push_back(make_check(prefix + "empsel-optimal", sel_loss,
                                sel_grid.loss + kOptimalityTolerance));
  }
  return checks;
}

std::vector<Check> exact_risk_checks(std::uint64_t seed,
                                     std::size_t replicates, unsigned workers) {
  std::vector<Check> checks;
  const auto pinned = [&](std::string name, const InputDistribution& rho,
                          const ConditionalDensity& pi, EstimatorKind est,
                          Count n, double expected) {
    const double exact = exact_expected_risk(rho, pi, est, n);
    checks.push_back(
        make_check(std::move(name), std::abs(exact - expected), 1e-12));
  };
  const ConditionalDensity fair({{0.5, 0.5}});
  pinned("exact-risk/pinned/mle-S1-A2-n2", InputDistribution({1.0}), fair,
         EstimatorKind::kMle, 2, 0.25);
  pinned("exact-risk/pinned/empsel-S1-A2-n1", InputDistribution({1.0}), fair,
         EstimatorKind::kEmpSel, 1, 0.0);
  pinned("exact-risk/pinned/fullkl-S2-A2-n1-dirac",
         InputDistribution({0.5, 0.5}),
         ConditionalDensity({{1.0, 0.0}, {0.0, 1.0}}), EstimatorKind::kFullKl,
         1, 0.25);

  for (std::size_t S : {1, 2}) {
    for (std::size_t A : {2, 3}) {
      const auto problem = exact_grid_problem(S, A, seed);
      for (Count n : {1, 2, 3}) {
        for (auto est : kAllEstimators) {
          const double exact =
              exact_expected_risk(problem.rho, problem.pi_star, est, n);
          RiskOptions options{replicates, seed, 0xE2 + 16 * S + A, workers};
          const auto mc =
              estimate_risk(problem.rho, problem.pi_star, est, n, options);
          checks.push_back(make_check(
              "exact-risk/mc/" + std::string(to_string(est)) + "-S" +
                  std::to_string(S) + "-A" + std::to_string(A) + "-n" +
                  std::to_string(n),
              std::abs(mc.mean - exact), 4.0 * mc.std_error + 1e-12));
        }
      }
    }
  }
  return checks;
}

}  // namespace ktransfer
