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

#include "ktransfer/sampling.hpp"

#include <algorithm>
#include <string>

#include "ktransfer/error.hpp"

namespace ktransfer {
namespace {

// SplitMix64 finalizer.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_dims(const InputDistribution& rho, const ConditionalDensity& pi) {
  if (rho.size() != pi.num_inputs()) {
    throw DimensionError("rho has " + std::to_string(rho.size()) +
                         " inputs, pi* has " +
                         std::to_string(pi.num_inputs()));
  }
}

}  // namespace

std::uint64_t RngSeed::derive() const {
  std::uint64_t h = mix(master);
  for (std::uint64_t field : {instance, estimator, n, replicate}) {
    h = mix(h ^ mix(field));
  }
  return h;
}

Engine make_engine(const RngSeed& seed) { return Engine(seed.derive()); }

CategoricalSampler::CategoricalSampler(std::span<const double> probs) {
  if (probs.empty()) throw DimensionError("sampler over an empty support");
  cdf_.resize(probs.size());
  double acc = 0.0;
  std::size_t last_positive = probs.size();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    cdf_[i] = acc;
    if (probs[i] > 0.0) last_positive = i;
  }
  if (last_positive == probs.size()) {
    throw InvalidDistribution("sampler over a zero vector");
  }
  std::fill(cdf_.begin() + static_cast<std::ptrdiff_t>(last_positive),
            cdf_.end(), 1.0);
}

std::size_t CategoricalSampler::operator()(Engine& engine) const {
  const double u = uniform01(engine);
  // First bucket whose cumulative mass exceeds u; u < 1 = cdf at the last
  // positive bucket, so the result is always in range.
  return static_cast<std::size_t>(
      std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

JointSampler::JointSampler(const InputDistribution& rho,
                           const ConditionalDensity& pi_star)
    : inputs_((check_dims(rho, pi_star), rho.probs())),
      num_labels_(pi_star.num_labels()) {
  labels_.reserve(pi_star.num_inputs());
  for (std::size_t s = 0; s < pi_star.num_inputs(); ++s) {
    labels_.emplace_back(pi_star.row(s));
  }
}

Dataset JointSampler::draw(Count n, Engine& engine) const {
  if (n == 0) throw PreconditionError("sample size n must be >= 1");
  std::vector<Count> counts(inputs_.size() * num_labels_, 0);
  for (Count i = 0; i < n; ++i) {
    const std::size_t s = inputs_(engine);
    const std::size_t a = labels_[s](engine);
    ++counts[s * num_labels_ + a];
  }
  return Dataset(inputs_.size(), num_labels_, std::move(counts));
}

Dataset draw_dataset(const InputDistribution& rho,
                     const ConditionalDensity& pi_star, Count n,
                     const RngSeed& seed) {
  if (n == 0) throw PreconditionError("sample size n must be >= 1");
  auto engine = make_engine(seed);
  return JointSampler(rho, pi_star).draw(n, engine);
}

TransferData derive_partial(const Dataset& d,
                            const ConditionalDensity& pi_star) {
  if (d.size() == 0) throw PreconditionError("empty dataset (n = 0)");
  if (d.num_inputs() != pi_star.num_inputs() ||
      d.num_labels() != pi_star.num_labels()) {
    throw DimensionError("dataset and pi* shapes differ");
  }
  std::vector<PartialEntry> entries;
  for (std::size_t s = 0; s < d.num_inputs(); ++s) {
    if (d.visits(s) == 0) continue;
    for (std::size_t a = 0; a < d.num_labels(); ++a) {
      if (d.count(s, a) == 0) continue;
      const double p = pi_star(s, a);
      if (p <= 0.0) {
        throw InconsistentData("observed pair (" + std::to_string(s) + ", " +
                               std::to_string(a) +
                               ") has zero teacher probability");
      }
      entries.push_back({s, a, p});
    }
  }
  return TransferData::partial(std::move(entries));
}

TransferData derive_full(const Dataset& d, const ConditionalDensity& pi_star) {
  if (d.num_inputs() != pi_star.num_inputs() ||
      d.num_labels() != pi_star.num_labels()) {
    throw DimensionError("dataset and pi* shapes differ");
  }
  std::vector<SoftRow> rows;
  for (std::size_t s = 0; s < d.num_inputs(); ++s) {
    if (d.visits(s) == 0) continue;
    const auto r = pi_star.row(s);
    rows.push_back({s, std::vector<double>(r.begin(), r.end())});
  }
  return TransferData::full(std::move(rows));
}

TransferData disclose(DisclosureLevel level, const Dataset& d,
                      const ConditionalDensity& pi_star) {
  switch (level) {
    case DisclosureLevel::kHardLabels:
      return TransferData::hard_labels();
    case DisclosureLevel::kPartialSoftLabels:
      return derive_partial(d, pi_star);
    case DisclosureLevel::kSoftLabels:
      return derive_full(d, pi_star);
  }
  return TransferData::hard_labels();
}

}  // namespace ktransfer
