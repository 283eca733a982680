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

#include "ktransfer/instances.hpp"

#include <cmath>
#include <string>

#include "ktransfer/error.hpp"

namespace ktransfer {
namespace {

std::string instance_name(InstanceKind kind) {
  return "Instance " + std::string(to_string(kind));
}

// Teacher shared by I2 and I3 on `labels` (odd) columns; columns past
// `labels` stay at zero.
std::vector<double> sparse_sink_row(std::size_t S, std::size_t labels,
                                    std::size_t A, Count n) {
  std::vector<double> row(A, 0.0);
  const double n1 = static_cast<double>(n) + 1.0;
  const double odd_mass = static_cast<double>(S) / n1;
  // Formula labels 2j - 1 (j = 1 .. (labels-1)/2) are columns 0, 2, 4, ...
  for (std::size_t j = 1; 2 * j <= labels - 1; ++j) row[2 * j - 2] = odd_mass;
  row[labels - 1] = 1.0 - 0.5 * static_cast<double>(S) *
                              static_cast<double>(labels - 1) / n1;
  return row;
}

}  // namespace

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kI0:
      return "0";
    case InstanceKind::kI1:
      return "1";
    case InstanceKind::kI2:
      return "2";
    case InstanceKind::kI3:
      return "3";
  }
  return "?";
}

std::optional<InstanceKind> parse_instance(std::string_view tag) {
  if (tag == "0") return InstanceKind::kI0;
  if (tag == "1") return InstanceKind::kI1;
  if (tag == "2") return InstanceKind::kI2;
  if (tag == "3") return InstanceKind::kI3;
  return std::nullopt;
}

void validate(const InstanceSpec& spec) {
  const auto name = instance_name(spec.kind);
  if (spec.num_inputs < 1) throw InvalidInstance(name + " needs S >= 1");
  if (spec.num_labels < 2) throw InvalidInstance(name + " needs A >= 2");
  if (spec.kind == InstanceKind::kI0) return;

  const Count S = spec.num_inputs;
  const Count A = spec.num_labels;
  const Count n = spec.n;
  if (n < 1) throw InvalidInstance(name + " needs n >= 1");
  switch (spec.kind) {
    case InstanceKind::kI1:
      // n >= S A / 4
      if (4 * n < S * A) {
        throw InvalidInstance("n below burn-in for " + name + " (n = " +
                              std::to_string(n) + " < S*A/4)");
      }
      break;
    case InstanceKind::kI2:
    case InstanceKind::kI3:
      // n >= S (A - 1) / 2 - 1
      if (2 * (n + 1) < S * (A - 1)) {
        throw InvalidInstance("n below burn-in for " + name + " (n = " +
                              std::to_string(n) + " < S*(A-1)/2 - 1)");
      }
      if (spec.kind == InstanceKind::kI3 && n + 1 <= S) {
        throw InvalidInstance("n below burn-in for " + name + " (n = " +
                              std::to_string(n) + " <= S - 1)");
      }
      break;
    case InstanceKind::kI0:
      break;
  }
}

Instance make_instance(const InstanceSpec& spec) {
  validate(spec);
  const std::size_t S = spec.num_inputs;
  const std::size_t A = spec.num_labels;
  std::vector<double> flat;
  flat.reserve(S * A);

  switch (spec.kind) {
    case InstanceKind::kI0: {
      const double floor = 0.5 / static_cast<double>(A);
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
          flat.push_back(floor + (a == s % A ? 0.5 : 0.0));
        }
      }
      return {InputDistribution::uniform(S),
              ConditionalDensity(S, A, std::move(flat))};
    }
    case InstanceKind::kI1: {
      const std::size_t labels = A % 2 == 0 ? A : A - 1;
      const double delta =
          0.25 * std::sqrt(static_cast<double>(S) *
                           static_cast<double>(labels) /
                           static_cast<double>(spec.n));
      if (delta > 1.0) {
        throw InvalidInstance("perturbation above 1 for Instance 1");
      }
      const double hi = (1.0 + delta) / static_cast<double>(labels);
      const double lo = (1.0 - delta) / static_cast<double>(labels);
      for (std::size_t s = 0; s < S; ++s) {
        for (std::size_t a = 0; a < A; ++a) {
          flat.push_back(a >= labels ? 0.0 : (a % 2 == 0 ? hi : lo));
        }
      }
      return {InputDistribution::uniform(S),
              ConditionalDensity(S, A, std::move(flat))};
    }
    case InstanceKind::kI2:
    case InstanceKind::kI3: {
      const std::size_t labels = A % 2 == 1 ? A : A - 1;
      const auto row = sparse_sink_row(S, labels, A, spec.n);
      for (std::size_t s = 0; s < S; ++s) {
        flat.insert(flat.end(), row.begin(), row.end());
      }
      ConditionalDensity pi_star(S, A, std::move(flat));
      if (spec.kind == InstanceKind::kI2) {
        return {InputDistribution::uniform(S), std::move(pi_star)};
      }
      const double n1 = static_cast<double>(spec.n) + 1.0;
      std::vector<double> rho(S, 1.0 / n1);
      rho.back() = 1.0 - static_cast<double>(S - 1) / n1;
      return {InputDistribution(std::move(rho)), std::move(pi_star)};
    }
  }
  throw InvalidInstance("unknown instance kind");
}

}  // namespace ktransfer
