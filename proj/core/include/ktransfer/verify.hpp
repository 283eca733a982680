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

// Oracle equivalence suites: closed forms against grid search, Monte Carlo
// risk against exact enumeration.

#include <cstdint>
#include <string>
#include <vector>

#include "ktransfer/core_model.hpp"

namespace ktransfer {

struct Check {
  std::string name;
  bool pass = false;
  double observed = 0.0;
  double bound = 0.0;
};

// Random problems with S <= 2, A = 3, n <= 6. Per problem:
//   mle/empce loss <= grid minimum of its loss + 1e-9 (optimality),
//   grid minimum <= mle/empce loss + grid_slack (the grid is tight),
//   empsel SEL loss == 0 (within 1e-12) and <= grid minimum.
std::vector<Check> closed_form_checks(double step, std::uint64_t seed,
                                      std::size_t problems = 100);

// Pinned enumeration values plus |MC - exact| <= 4 stderr for every
// estimator on S, A, n in {1,2} x {2,3} x {1,2,3}.
std::vector<Check> exact_risk_checks(std::uint64_t seed,
                                     std::size_t replicates, unsigned workers);

// Teacher used for the (S, A) cell of the exact-risk grid: [0.5, 0.5] for
// S = 1, A = 2, otherwise seeded random rows.
struct SmallProblem {
  InputDistribution rho;
  ConditionalDensity pi_star;
};
SmallProblem exact_grid_problem(std::size_t num_inputs, std::size_t num_labels,
                                std::uint64_t seed);

}  // namespace ktransfer
