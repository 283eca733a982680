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

#include "ktransfer/core_model.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ktransfer/error.hpp"
#include "ktransfer/sampling.hpp"

namespace ktransfer {
namespace {

std::vector<double> random_simplex(std::size_t k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(k);
  double z = 0.0;
  for (double& x : v) z += (x = e(rng));
  for (double& x : v) x /= z;
  return v;
}

TEST(TvTest, Examples) {
  EXPECT_DOUBLE_EQ(tv(std::vector{1.0, 0.0}, std::vector{0.0, 1.0}), 1.0);
  EXPECT_DOUBLE_EQ(tv(std::vector{0.5, 0.5}, std::vector{0.5, 0.5}), 0.0);
  EXPECT_NEAR(tv(std::vector{0.9, 0.1}, std::vector{0.75, 0.25}), 0.15, 1e-15);
}

TEST(TvTest, LengthMismatchThrows) {
  EXPECT_THROW(tv(std::vector{1.0}, std::vector{0.5, 0.5}), DimensionError);
}

TEST(TvTest, IsAMetricOnRandomTriples) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t k = 2 + trial % 6;
    const auto p = random_simplex(k, rng);
    const auto q = random_simplex(k, rng);
    const auto r = random_simplex(k, rng);
    EXPECT_DOUBLE_EQ(tv(p, q), tv(q, p));
    EXPECT_NEAR(tv(p, p), 0.0, 1e-12);
    EXPECT_LE(tv(p, r), tv(p, q) + tv(q, r) + 1e-12);
    EXPECT_GE(tv(p, q), 0.0);
    EXPECT_LE(tv(p, q), 1.0);
  }
}

TEST(CondTvTest, Examples) {
  const ConditionalDensity a({{1.0, 0.0}, {0.3, 0.7}});
  const ConditionalDensity b({{0.0, 1.0}, {0.3, 0.7}});
  EXPECT_DOUBLE_EQ(cond_tv(a, a, InputDistribution({0.5, 0.5})), 0.0);
  EXPECT_DOUBLE_EQ(cond_tv(a, b, InputDistribution({0.5, 0.5})), 0.5);

  const ConditionalDensity c({{0.6, 0.4}, {1.0, 0.0}});
  const ConditionalDensity d({{0.8, 0.2}, {0.1, 0.9}});
  // Row TVs 0.2 and 0.9; the second input carries no weight.
  EXPECT_NEAR(cond_tv(c, d, InputDistribution({1.0, 0.0})), 0.2, 1e-15);
}

TEST(CondTvTest, MatchesDirectSummation) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t S = 1 + trial % 5, A = 2 + trial % 4;
    std::vector<std::vector<double>> r1, r2;
    for (std::size_t s = 0; s < S; ++s) {
      r1.push_back(random_simplex(A, rng));
      r2.push_back(random_simplex(A, rng));
    }
    const InputDistribution rho(random_simplex(S, rng));
    const ConditionalDensity p1(r1), p2(r2);
    double direct = 0.0;
    for (std::size_t s = 0; s < S; ++s) {
      double row = 0.0;
      for (std::size_t a = 0; a < A; ++a) row += std::abs(p1(s, a) - p2(s, a));
      direct += rho[s] * 0.5 * row;
    }
    const double v = cond_tv(p1, p2, rho);
    EXPECT_NEAR(v, direct, 1e-14);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(CondTvTest, DimensionMismatchThrows) {
  const ConditionalDensity a({{1.0, 0.0}});
  const ConditionalDensity b({{1.0, 0.0, 0.0}});
  EXPECT_THROW(cond_tv(a, b, InputDistribution({1.0})), DimensionError);
  EXPECT_THROW(cond_tv(a, a, InputDistribution({0.5, 0.5})), DimensionError);
}

TEST(KlTest, Examples) {
  const std::vector p{0.2, 0.3, 0.5};
  EXPECT_DOUBLE_EQ(kl(p, p), 0.0);
  EXPECT_NEAR(kl(std::vector{1.0, 0.0}, std::vector{0.5, 0.5}), std::log(2.0),
              1e-15);
  EXPECT_THROW(kl(std::vector{0.5, 0.5}, std::vector{1.0, 0.0}),
               DivergenceUndefined);
}

TEST(MissingMassTest, Examples) {
  EXPECT_DOUBLE_EQ(missing_mass(std::vector{0.5, 0.5}, std::vector<Count>{3, 0}),
                   0.5);
  EXPECT_DOUBLE_EQ(missing_mass(std::vector{0.5, 0.5}, std::vector<Count>{1, 2}),
                   0.0);
  EXPECT_NEAR(missing_mass(std::vector{0.1, 0.1, 0.8},
                           std::vector<Count>{0, 0, 5}),
              0.2, 1e-15);
  EXPECT_THROW(missing_mass(std::vector{1.0}, std::vector<Count>{1, 2}),
               DimensionError);
}

TEST(MissingMassTest, NonIncreasingAsSamplesAccumulate) {
  std::mt19937_64 rng(5);
  const auto nu = random_simplex(12, rng);
  std::discrete_distribution<std::size_t> draw(nu.begin(), nu.end());
  std::vector<Count> counts(nu.size(), 0);
  double previous = missing_mass(nu, counts);
  EXPECT_DOUBLE_EQ(previous, 1.0);
  for (int i = 0; i < 200; ++i) {
    ++counts[draw(rng)];
    const double now = missing_mass(nu, counts);
    EXPECT_LE(now, previous);
    previous = now;
  }
}

TEST(ExpectedMissingMassTest, Examples) {
  EXPECT_DOUBLE_EQ(expected_missing_mass(std::vector{0.5, 0.5}, 1), 0.5);
  EXPECT_DOUBLE_EQ(expected_missing_mass(std::vector{1.0}, 5), 0.0);
  EXPECT_DOUBLE_EQ(expected_missing_mass(std::vector{0.5, 0.5}, 2), 0.25);
}

TEST(ExpectedMissingMassTest, BoundedByFourSOverNineN) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t S = 1 + trial % 40;
    const Count n = 1 + static_cast<Count>(trial * 7 % 500);
    const auto nu = random_simplex(S, rng);
    EXPECT_LE(expected_missing_mass(nu, n),
              4.0 * static_cast<double>(S) / (9.0 * static_cast<double>(n)) +
                  1e-15);
  }
}

TEST(ExpectedMissingMassTest, MonteCarloMeanAgrees) {
  const std::vector nu{0.05, 0.15, 0.3, 0.5};
  const Count n = 6;
  const CategoricalSampler sampler(nu);
  constexpr int kReplicates = 100000;
  double sum = 0.0, sum_sq = 0.0;
  for (int r = 0; r < kReplicates; ++r) {
    auto engine = make_engine({42, 0, 0, n, static_cast<std::uint64_t>(r)});
    std::vector<Count> counts(nu.size(), 0);
    for (Count i = 0; i < n; ++i) ++counts[sampler(engine)];
    const double m = missing_mass(nu, counts);
    sum += m;
    sum_sq += m * m;
  }
  const double mean = sum / kReplicates;
  const double var = (sum_sq - kReplicates * mean * mean) / (kReplicates - 1);
  const double se = std::sqrt(var / kReplicates);
  EXPECT_NEAR(mean, expected_missing_mass(nu, n), 4.0 * se);
}

TEST(XiTest, Examples) {
  EXPECT_DOUBLE_EQ(xi(ConditionalDensity({{1.0, 0.0}, {0.0, 1.0}})), 0.0);
  EXPECT_DOUBLE_EQ(xi(ConditionalDensity::uniform(3, 4)), 1.5);
  EXPECT_DOUBLE_EQ(xi(ConditionalDensity({{0.75, 0.25}, {0.25, 0.75}})), 0.5);
}

TEST(ProbabilityVectorTest, RenormalizesSmallDriftAndRejectsLarge) {
  const InputDistribution rho({0.5, 0.5 + 5e-10});
  EXPECT_NEAR(rho[0] + rho[1], 1.0, kSumTolerance);
  EXPECT_THROW(InputDistribution({0.5, 0.6}), InvalidDistribution);
  EXPECT_THROW(InputDistribution({1.2, -0.2}), InvalidDistribution);
  EXPECT_THROW(ConditionalDensity({{0.5, 0.5}, {0.5}}), DimensionError);
  // Exact inputs are stored bit-for-bit.
  const ConditionalDensity pi({{0.2, 0.3, 0.5}});
  EXPECT_EQ(pi(0, 1), 0.3);
}

TEST(DatasetTest, CountsSumToN) {
  Dataset d(2, 3);
  d.add(0, 1);
  d.add(1, 2, 4);
  EXPECT_EQ(d.size(), 5u);
  EXPECT_EQ(d.visits(0), 1u);
  EXPECT_EQ(d.visits(1), 4u);
  const Dataset e(2, 3, {1, 0, 2, 0, 0, 3});
  EXPECT_EQ(e.size(), 6u);
  EXPECT_EQ(e.count(1, 2), 3u);
  EXPECT_THROW(Dataset(2, 3, {1, 2}), DimensionError);
  EXPECT_THROW(d.add(2, 0), DimensionError);
}

TEST(TransferDataTest, CoverageIsChecked) {
  const Dataset d(1, 3, {0, 2, 1});
  const auto ok = TransferData::partial({{0, 1, 0.5}, {0, 2, 0.3}});
  EXPECT_NO_THROW(ok.check_covers(d));
  const auto missing = TransferData::partial({{0, 1, 0.5}});
  EXPECT_THROW(missing.check_covers(d), InconsistentData);
  const auto extra =
      TransferData::partial({{0, 0, 0.2}, {0, 1, 0.5}, {0, 2, 0.3}});
  EXPECT_THROW(extra.check_covers(d), InconsistentData);
  EXPECT_THROW(TransferData::partial({{0, 1, 0.0}}), InconsistentData);
}

}  // namespace
}  // namespace ktransfer
