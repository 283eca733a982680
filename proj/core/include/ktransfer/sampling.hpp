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

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "ktransfer/core_model.hpp"

namespace ktransfer {

// Labels of one replicate's random stream. Equal seeds give equal streams;
// the derived engine seed is a hash of every field, so results do not depend
// on which worker runs which replicate.
struct RngSeed {
  std::uint64_t master = 0;
  std::uint64_t instance = 0;
  std::uint64_t estimator = 0;
  std::uint64_t n = 0;
  std::uint64_t replicate = 0;

  std::uint64_t derive() const;
};

using Engine = std::mt19937_64;

Engine make_engine(const RngSeed& seed);

// Uniform double in [0, 1) from the top 53 bits of one engine draw.
inline double uniform01(Engine& engine) {
  return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// Inverse-CDF sampler over a fixed probability vector. The last bucket with
// positive mass absorbs all residual round-off, so a draw can never land on
// an out-of-range or zero-mass index.
class CategoricalSampler {
 public:
  explicit CategoricalSampler(std::span<const double> probs);

  std::size_t operator()(Engine& engine) const;
  std::size_t size() const { return cdf_.size(); }

 private:
  std::vector<double> cdf_;
};

// Precomputed samplers for rho x pi*.
class JointSampler {
 public:
  JointSampler(const InputDistribution& rho, const ConditionalDensity& pi_star);

  // Draws n i.i.d. pairs and accumulates them into a count table.
  Dataset draw(Count n, Engine& engine) const;

  std::size_t num_inputs() const { return inputs_.size(); }
  std::size_t num_labels() const { return num_labels_; }

 private:
  CategoricalSampler inputs_;
  std::vector<CategoricalSampler> labels_;
  std::size_t num_labels_;
};

// n i.i.d. draws from rho x pi*; deterministic given `seed`. n = 0 is rejected.
Dataset draw_dataset(const InputDistribution& rho,
                     const ConditionalDensity& pi_star, Count n,
                     const RngSeed& seed);

// Teacher probabilities of exactly the sampled (s, a) pairs.
TransferData derive_partial(const Dataset& d, const ConditionalDensity& pi_star);

// Full teacher rows of exactly the visited inputs.
TransferData derive_full(const Dataset& d, const ConditionalDensity& pi_star);

// Side-information for `d` at `level`: nothing, derive_partial or derive_full.
TransferData disclose(DisclosureLevel level, const Dataset& d,
                      const ConditionalDensity& pi_star);

}  // namespace ktransfer
