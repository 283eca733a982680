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

// The four students, each in exact closed form:
//
//   kMle     hard labels only        row = empirical label frequencies
//   kEmpCe   partial soft labels     row proportional to n(s,a) * pi*(a|s)
//   kEmpSel  partial soft labels     pi* on seen labels, residual amortized
//   kFullKl  soft labels             pi* row on every visited input
//
// Unvisited inputs get the initializer's row (uniform by default).

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string_view>

#include "ktransfer/core_model.hpp"

namespace ktransfer {

enum class EstimatorKind { kMle, kEmpCe, kEmpSel, kFullKl };

inline constexpr std::array<EstimatorKind, 4> kAllEstimators = {
    EstimatorKind::kMle, EstimatorKind::kEmpCe, EstimatorKind::kEmpSel,
    EstimatorKind::kFullKl};

// Lowercase file tag: mle | empce | empsel | fullkl.
std::string_view to_string(EstimatorKind kind);
std::optional<EstimatorKind> parse_estimator(std::string_view tag);

// Weakest disclosure level the estimator may consume.
DisclosureLevel required_level(EstimatorKind kind);

// Behaviour off the data's support. Both hooks default to uniform.
struct Initializer {
  // Fills the row of an input that was never visited.
  std::function<void(std::size_t input, std::span<double> row)> unseen_input;
  // Distributes `residual` over the labels of a visited input with
  // seen[a] == false. Entries at seen labels are already set and must not be
  // touched.
  std::function<void(std::size_t input, double residual,
                     std::span<const bool> seen, std::span<double> row)>
      unseen_labels;
};

ConditionalDensity fit_mle(const Dataset& d, std::size_t num_labels,
                           const Initializer& init = {});

ConditionalDensity fit_empce(const Dataset& d, const TransferData& r,
                             const Initializer& init = {});

// Limit of the empirical-CE student as n grows: pi*^2 / sum pi*^2.
std::vector<double> empce_limit_row(std::span<const double> pi_star_row);

ConditionalDensity fit_empsel(const Dataset& d, const TransferData& r,
                              const Initializer& init = {});

ConditionalDensity fit_fullkl(const Dataset& d, const TransferData& q,
                              const Initializer& init = {});

// Dispatches on `kind` after checking that `side` is disclosed at a level the
// estimator may use. Throws ProtocolError otherwise.
ConditionalDensity fit(EstimatorKind kind, const Dataset& d,
                       const TransferData& side, const Initializer& init = {});

}  // namespace ktransfer
