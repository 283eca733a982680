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

// Domain types shared by every module: input distributions, conditional
// densities (row-stochastic tables), count datasets and the teacher's
// side-information, plus the scalar metrics computed on them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ktransfer {

using Count = std::uint64_t;

// Probability vectors whose sum is off by at most this much are renormalized;
// anything further off is rejected.
inline constexpr double kRenormalizeTolerance = 1e-9;
// Target accuracy of a stored probability vector's sum.
inline constexpr double kSumTolerance = 1e-12;

// Validates `probs` as a probability vector and returns it normalized.
// Throws InvalidDistribution on negative/non-finite entries or a sum outside
// 1 +- kRenormalizeTolerance.
std::vector<double> normalized_probabilities(std::vector<double> probs);

// A probability vector over the S inputs (rho).
class InputDistribution {
 public:
  explicit InputDistribution(std::vector<double> probs);

  static InputDistribution uniform(std::size_t num_inputs);

  std::size_t size() const { return probs_.size(); }
  double operator[](std::size_t s) const { return probs_[s]; }
  std::span<const double> probs() const { return probs_; }

  friend bool operator==(const InputDistribution&,
                         const InputDistribution&) = default;

 private:
  std::vector<double> probs_;
};

// A row-stochastic S x A table: one label distribution per input.
class ConditionalDensity {
 public:
  // `rows[s]` is the label distribution of input s; all rows share one length.
  explicit ConditionalDensity(const std::vector<std::vector<double>>& rows);
  // Row-major flat storage of an S x A table.
  ConditionalDensity(std::size_t num_inputs, std::size_t num_labels,
                     std::vector<double> flat);

  static ConditionalDensity uniform(std::size_t num_inputs,
                                    std::size_t num_labels);

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_labels() const { return num_labels_; }

  std::span<const double> row(std::size_t s) const {
    return {values_.data() + s * num_labels_, num_labels_};
  }
  double operator()(std::size_t s, std::size_t a) const {
    return values_[s * num_labels_ + a];
  }
  std::span<const double> flat() const { return values_; }

  friend bool operator==(const ConditionalDensity&,
                         const ConditionalDensity&) = default;

 private:
  std::size_t num_inputs_ = 0;
  std::size_t num_labels_ = 0;
  std::vector<double> values_;
};

// Occurrence counts n(s, a) of a sample of size n. The learners depend on the
// sample only through this table.
class Dataset {
 public:
  // Empty table (n = 0).
  Dataset(std::size_t num_inputs, std::size_t num_labels);
  // Row-major counts; n is their sum.
  Dataset(std::size_t num_inputs, std::size_t num_labels,
          std::vector<Count> counts);

  void add(std::size_t s, std::size_t a, Count times = 1);

  std::size_t num_inputs() const { return num_inputs_; }
  std::size_t num_labels() const { return num_labels_; }
  Count size() const { return total_; }
  Count count(std::size_t s, std::size_t a) const {
    return counts_[s * num_labels_ + a];
  }
  std::span<const Count> row(std::size_t s) const {
    return {counts_.data() + s * num_labels_, num_labels_};
  }
  // n(s, S(D)): how many samples hit input s.
  Count visits(std::size_t s) const { return visits_[s]; }
  std::span<const Count> visit_counts() const { return visits_; }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t num_inputs_ = 0;
  std::size_t num_labels_ = 0;
  std::vector<Count> counts_;
  std::vector<Count> visits_;
  Count total_ = 0;
};

// How much the teacher discloses beyond the raw samples.
enum class DisclosureLevel { kHardLabels, kPartialSoftLabels, kSoftLabels };

// Teacher probability of one sampled (input, label) pair.
struct PartialEntry {
  std::size_t input = 0;
  std::size_t label = 0;
  double prob = 0.0;

  friend bool operator==(const PartialEntry&, const PartialEntry&) = default;
};

// Teacher row of one visited input.
struct SoftRow {
  std::size_t input = 0;
  std::vector<double> probs;

  friend bool operator==(const SoftRow&, const SoftRow&) = default;
};

// Privileged side-information attached to a dataset. Partial entries are
// sorted by (input, label); soft rows by input.
class TransferData {
 public:
  static TransferData hard_labels();
  static TransferData partial(std::vector<PartialEntry> entries);
  static TransferData full(std::vector<SoftRow> rows);

  DisclosureLevel level() const { return level_; }
  const std::optional<std::vector<PartialEntry>>& partial_entries() const {
    return partial_;
  }
  const std::optional<std::vector<SoftRow>>& soft_rows() const {
    return full_;
  }

  // Teacher probability of (s, a) if disclosed: from the partial map, or from
  // the full row of s at SoftLabels level.
  std::optional<double> teacher_prob(std::size_t s, std::size_t a) const;

  // Throws InconsistentData unless the disclosed content covers exactly what
  // the protocol promises for `d`.
  void check_covers(const Dataset& d) const;

 private:
  TransferData() = default;

  DisclosureLevel level_ = DisclosureLevel::kHardLabels;
  std::optional<std::vector<PartialEntry>> partial_;
  std::optional<std::vector<SoftRow>> full_;
};

// Total variation 0.5 * sum |p - q|.
double tv(std::span<const double> p, std::span<const double> q);

// sum_s rho(s) * tv(pi1(.|s), pi2(.|s)).
double cond_tv(const ConditionalDensity& pi1, const ConditionalDensity& pi2,
               const InputDistribution& rho);

// KL(p || q) in nats with 0 log 0 = 0.
double kl(std::span<const double> p, std::span<const double> q);

// Mass of the atoms of nu whose count is zero.
double missing_mass(std::span<const double> nu, std::span<const Count> counts);

// E m(nu, X^n) = sum_x nu(x) (1 - nu(x))^n for an i.i.d. n-sample from nu.
double expected_missing_mass(std::span<const double> nu, Count n);

// xi(pi*) = 2 max_s min_a (1 - pi*(a|s)): distance to the nearest
// deterministic policy.
double xi(const ConditionalDensity& pi_star);

}  // namespace ktransfer
