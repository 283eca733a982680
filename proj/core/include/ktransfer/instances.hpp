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

// Data-generating distributions used in the simulations. Formulas index
// labels from 1; storage indexes them from 0, so formula label k lives at
// column k - 1. Where a construction needs an even (I1) or odd (I2, I3)
// number of labels, the last column is given zero mass and the construction
// runs on the first A - 1 columns.
//
//   I0  rho uniform; pi*(.|s) = 0.5 Uniform(A) + 0.5 Dirac(s mod A + 1)
//   I1  rho uniform; pi*(2j-1|s) = (1 + D)/A, pi*(2j|s) = (1 - D)/A,
//       D = 0.25 sqrt(S A / n)
//   I2  rho uniform; pi*(2j-1|s) = S/(n+1), pi*(2j|s) = 0,
//       pi*(A|s) = 1 - (S/2)(A-1)/(n+1)
//   I3  rho(s) = 1/(n+1) except the last input; pi* as in I2

#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>

#include "ktransfer/core_model.hpp"

namespace ktransfer {

enum class InstanceKind { kI0 = 0, kI1 = 1, kI2 = 2, kI3 = 3 };

// "0" | "1" | "2" | "3".
std::string_view to_string(InstanceKind kind);
std::optional<InstanceKind> parse_instance(std::string_view tag);

struct InstanceSpec {
  InstanceKind kind = InstanceKind::kI0;
  std::size_t num_inputs = 1;
  std::size_t num_labels = 2;
  // Required for I1-I3, ignored by I0.
  Count n = 0;
};

struct Instance {
  InputDistribution rho;
  ConditionalDensity pi_star;
};

// Throws InvalidInstance naming the violated bound.
void validate(const InstanceSpec& spec);

Instance make_instance(const InstanceSpec& spec);

}  // namespace ktransfer
