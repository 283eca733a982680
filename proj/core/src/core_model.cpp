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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ktransfer/error.hpp"

namespace ktransfer {

std::vector<double> normalized_probabilities(std::vector<double> probs) {
  if (probs.empty()) {
    throw InvalidDistribution("probability vector is empty");
  }
  double sum = 0.0;
  for (double p : probs) {
    if (!std::isfinite(p) || p < 0.0) {
      throw InvalidDistribution("probability entry " + std::to_string(p) +
                                " is negative or not finite");
    }
    sum += p;
  }
  const double drift = std::abs(sum - 1.0);
  if (drift > kRenormalizeTolerance) {
    throw InvalidDistribution("probabilities sum to " + std::to_string(sum));
  }
  // Values already within kSumTolerance are kept bit-exact.
  if (drift > kSumTolerance) {
    for (double& p : probs) p /= sum;
  }
  for (double& p : probs) p = std::min(p, 1.0);
  return probs;
}

InputDistribution::InputDistribution(std::vector<double> probs)
    : probs_(normalized_probabilities(std::move(probs))) {}

InputDistribution InputDistribution::uniform(std::size_t num_inputs) {
  if (num_inputs == 0) throw DimensionError("uniform over zero inputs");
  return InputDistribution(
      std::vector<double>(num_inputs, 1.0 / static_cast<double>(num_inputs)));
}

ConditionalDensity::ConditionalDensity(
    const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw DimensionError("conditional density with no rows");
  num_inputs_ = rows.size();
  num_labels_ = rows.front().size();
  values_.reserve(num_inputs_ * num_labels_);
  for (const auto& r : rows) {
    if (r.size() != num_labels_) {
      throw DimensionError("ragged conditional density rows");
    }
    auto normalized = normalized_probabilities(r);
    values_.insert(values_.end(), normalized.begin(), normalized.end());
  }
}

ConditionalDensity::ConditionalDensity(std::size_t num_inputs,
                                       std::size_t num_labels,
                                       std::vector<double> flat)
    : num_inputs_(num_inputs), num_labels_(num_labels) {
  if (num_inputs == 0 || num_labels == 0) {
    throw DimensionError("conditional density needs S >= 1 and A >= 1");
  }
  if (flat.size() != num_inputs * num_labels) {
    throw DimensionError("flat table has " + std::to_string(flat.size()) +
                         " entries, expected S*A = " +
                         std::to_string(num_inputs * num_labels));
  }
  values_ = std::move(flat);
  std::vector<double> row_buf(num_labels);
  for (std::size_t s = 0; s < num_inputs; ++s) {
    auto first = values_.begin() + static_cast<std::ptrdiff_t>(s * num_labels);
    std::copy(first, first + static_cast<std::ptrdiff_t>(num_labels),
              row_buf.begin());
    auto normalized = normalized_probabilities(row_buf);
    std::copy(normalized.begin(), normalized.end(), first);
  }
}

ConditionalDensity ConditionalDensity::uniform(std::size_t num_inputs,
                                               std::size_t num_labels) {
  if (num_labels == 0) throw DimensionError("uniform over zero labels");
  return ConditionalDensity(
      num_inputs, num_labels,
      std::vector<double>(num_inputs * num_labels,
                          1.0 / static_cast<double>(num_labels)));
}

Dataset::Dataset(std::size_t num_inputs, std::size_t num_labels)
    : num_inputs_(num_inputs),
      num_labels_(num_labels),
      counts_(num_inputs * num_labels, 0),
      visits_(num_inputs, 0) {
  if (num_inputs == 0 || num_labels == 0) {
    throw DimensionError("dataset needs S >= 1 and A >= 1");
  }
}

Dataset::Dataset(std::size_t num_inputs, std::size_t num_labels,
                 std::vector<Count> counts)
    : Dataset(num_inputs, num_labels) {
  if (counts.size() != num_inputs * num_labels) {
    throw DimensionError("count table has " + std::to_string(counts.size()) +
                         " entries, expected S*A = " +
                         std::to_string(num_inputs * num_labels));
  }
  counts_ = std::move(counts);
  for (std::size_t s = 0; s < num_inputs_; ++s) {
    const auto r = row(s);
    visits_[s] = std::accumulate(r.begin(), r.end(), Count{0});
    total_ += visits_[s];
  }
}

void Dataset::add(std::size_t s, std::size_t a, Count times) {
  if (s >= num_inputs_ || a >= num_labels_) {
    throw DimensionError("sample (" + std::to_string(s) + ", " +
                         std::to_string(a) + ") outside the table");
  }
  counts_[s * num_labels_ + a] += times;
  visits_[s] += times;
  total_ += times;
}

TransferData TransferData::hard_labels() { return TransferData(); }

TransferData TransferData::partial(std::vector<PartialEntry> entries) {
  std::sort(entries.begin(), entries.end(), [](const auto& x, const auto& y) {
    return std::pair(x.input, x.label) < std::pair(y.input, y.label);
  });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const auto& e = entries[i];
    if (!(e.prob > 0.0) || e.prob > 1.0) {
      throw InconsistentData("sampled pair (" + std::to_string(e.input) +
                             ", " + std::to_string(e.label) +
                             ") carries teacher probability " +
                             std::to_string(e.prob));
    }
    if (i > 0 && entries[i - 1].input == e.input &&
        entries[i - 1].label == e.label) {
      throw InconsistentData("duplicate partial entry");
    }
  }
  TransferData t;
  t.level_ = DisclosureLevel::kPartialSoftLabels;
  t.partial_ = std::move(entries);
  return t;
}

TransferData TransferData::full(std::vector<SoftRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const auto& x, const auto& y) { return x.input < y.input; });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0 && rows[i - 1].input == rows[i].input) {
      throw InconsistentData("duplicate soft row for input " +
                             std::to_string(rows[i].input));
    }
    rows[i].probs = normalized_probabilities(std::move(rows[i].probs));
  }
  TransferData t;
  t.level_ = DisclosureLevel::kSoftLabels;
  t.full_ = std::move(rows);
  return t;
}

std::optional<double> TransferData::teacher_prob(std::size_t s,
                                                 std::size_t a) const {
  if (partial_) {
    auto it = std::lower_bound(
        partial_->begin(), partial_->end(), std::pair(s, a),
        [](const PartialEntry& e, const std::pair<std::size_t, std::size_t>& k) {
          return std::pair(e.input, e.label) < k;
        });
    if (it != partial_->end() && it->input == s && it->label == a) {
      return it->prob;
    }
  }
  if (full_) {
    auto it = std::lower_bound(
        full_->begin(), full_->end(), s,
        [](const SoftRow& r, std::size_t k) { return r.input < k; });
    if (it != full_->end() && it->input == s && a < it->probs.size()) {
      return it->probs[a];
    }
  }
  return std::nullopt;
}

void TransferData::check_covers(const Dataset& d) const {
  switch (level_) {
    case DisclosureLevel::kHardLabels:
      return;
    case DisclosureLevel::kPartialSoftLabels: {
      std::size_t idx = 0;
      for (std::size_t s = 0; s < d.num_inputs(); ++s) {
        for (std::size_t a = 0; a < d.num_labels(); ++a) {
          if (d.count(s, a) == 0) continue;
          if (idx >= partial_->size() || (*partial_)[idx].input != s ||
              (*partial_)[idx].label != a) {
            throw InconsistentData("partial side-information misses (" +
                                   std::to_string(s) + ", " +
                                   std::to_string(a) + ")");
          }
          ++idx;
        }
      }
      if (idx != partial_->size()) {
        throw InconsistentData(
            "partial side-information covers unsampled pairs");
      }
      return;
    }
    case DisclosureLevel::kSoftLabels: {
      std::size_t idx = 0;
      for (std::size_t s = 0; s < d.num_inputs(); ++s) {
        if (d.visits(s) == 0) continue;
        if (idx >= full_->size() || (*full_)[idx].input != s) {
          throw InconsistentData("soft side-information misses input " +
                                 std::to_string(s));
        }
        if ((*full_)[idx].probs.size() != d.num_labels()) {
          throw DimensionError("soft row length differs from A");
        }
        ++idx;
      }
      if (idx != full_->size()) {
        throw InconsistentData("soft side-information covers unvisited inputs");
      }
      return;
    }
  }
}

double tv(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DimensionError("tv of vectors with lengths " +
                         std::to_string(p.size()) + " and " +
                         std::to_string(q.size()));
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
  return std::clamp(0.5 * acc, 0.0, 1.0);
}

double cond_tv(const ConditionalDensity& pi1, const ConditionalDensity& pi2,
               const InputDistribution& rho) {
  if (pi1.num_inputs() != pi2.num_inputs() ||
      pi1.num_labels() != pi2.num_labels() ||
      pi1.num_inputs() != rho.size()) {
    throw DimensionError("cond_tv dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t s = 0; s < rho.size(); ++s) {
    if (rho[s] == 0.0) continue;
    acc += rho[s] * tv(pi1.row(s), pi2.row(s));
  }
  return std::clamp(acc, 0.0, 1.0);
}

double kl(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw DimensionError("kl length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      throw DivergenceUndefined("p(" + std::to_string(i) +
                                ") > 0 but q(" + std::to_string(i) + ") = 0");
    }
    acc += p[i] * std::log(p[i] / q[i]);
  }
  return std::max(acc, 0.0);
}

double missing_mass(std::span<const double> nu, std::span<const Count> counts) {
  if (nu.size() != counts.size()) {
    throw DimensionError("missing_mass length mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    if (counts[i] == 0) acc += nu[i];
  }
  return std::clamp(acc, 0.0, 1.0);
}

double expected_missing_mass(std::span<const double> nu, Count n) {
  double acc = 0.0;
  for (double p : nu) {
    acc += p * std::pow(1.0 - p, static_cast<double>(n));
  }
  return acc;
}

double xi(const ConditionalDensity& pi_star) {
  double worst = 0.0;
  for (std::size_t s = 0; s < pi_star.num_inputs(); ++s) {
    const auto r = pi_star.row(s);
    // min_a (1 - pi(a|s)) = 1 - max_a pi(a|s)
    worst = std::max(worst, 1.0 - *std::max_element(r.begin(), r.end()));
  }
  return 2.0 * worst;
}

}  // namespace ktransfer
