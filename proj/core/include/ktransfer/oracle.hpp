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

// Brute-force references for the closed-form students. Nothing here calls
// into the estimators' closed forms except exact_expected_risk, which needs a
// fitted student per enumerated sample by definition.

#include <optional>
#include <string_view>
#include <utility>

#include "ktransfer/core_model.hpp"
#include "ktransfer/estimators.hpp"

namespace ktransfer {

enum class LossKind {
  kHardCe,      // -sum log pi(a_i|s_i)
  kPartialCe,   // -sum pi*(a_i|s_i) log pi(a_i|s_i)
  kPartialSel,  // sum 0.5 (log pi(a_i|s_i) - log pi*(a_i|s_i))^2
};

std::string_view to_string(LossKind kind);

// Largest (S A)^n that exact_expected_risk will enumerate.
inline constexpr double kMaxEnumeration = 2e6;
// grid_minimize guards.
inline constexpr std::size_t kMaxGridLabels = 4;
inline constexpr double kMinGridStep = 0.01;

// Summed empirical loss over the multiset `d`. Returns +infinity when the
// student puts zero mass on an observed pair.
double loss_eval(LossKind kind, const ConditionalDensity& pi, const Dataset& d,
                 const std::optional<TransferData>& r = std::nullopt);

struct GridResult {
  ConditionalDensity argmin;
  double loss;
};

// Exhaustive search over every simplex point with coordinates on multiples of
// `step`, one row at a time (each loss is a sum of per-input terms). Rows of
// unvisited inputs contribute zero loss everywhere; the first enumerated grid
// point is returned for them.
GridResult grid_minimize(LossKind kind, const Dataset& d,
                         const std::optional<TransferData>& r, double step);

// Upper bound on loss(nearest grid point) - loss(pi): every simplex point has
// a grid point within step in each coordinate, and each observed-pair term
// moves by at most its change under a step-sized shift toward zero.
// +infinity when some observed pair has pi(a|s) <= step.
double grid_slack(LossKind kind, const ConditionalDensity& pi,
                  const Dataset& d, const std::optional<TransferData>& r,
                  double step);

// E cond_tv(fit(D), pi*, rho) over D ~ (rho x pi*)^n, by enumerating every
// ordered n-tuple of pairs. Throws TooLarge when (S A)^n > kMaxEnumeration.
double exact_expected_risk(const InputDistribution& rho,
                           const ConditionalDensity& pi_star,
                           EstimatorKind est, Count n);

}  // namespace ktransfer
