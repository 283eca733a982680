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

#include "ktransfer/estimators.hpp"

#include <algorithm>
#include <memory>
#include <string>

#include "ktransfer/error.hpp"

namespace ktransfer {
namespace {

constexpr double kResidualTolerance = 1e-9;

void fill_unseen_input(const Initializer& init, std::size_t s,
                       std::span<double> row) {
  if (init.unseen_input) {
    init.unseen_input(s, row);
    return;
  }
  std::fill(row.begin(), row.end(), 1.0 / static_cast<double>(row.size()));
}

double teacher_prob_or_throw(const TransferData& r, std::size_t s,
                             std::size_t a) {
  auto p = r.teacher_prob(s, a);
  if (!p) {
    throw InconsistentData("no teacher probability for sampled pair (" +
                           std::to_string(s) + ", " + std::to_string(a) + ")");
  }
  return *p;
}

void require_level(EstimatorKind kind, const TransferData& side) {
  if (static_cast<int>(side.level()) <
      static_cast<int>(required_level(kind))) {
    throw ProtocolError(std::string(to_string(kind)) +
                        " needs more side-information than was disclosed");
  }
}

}  // namespace

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kMle:
      return "mle";
    case EstimatorKind::kEmpCe:
      return "empce";
    case EstimatorKind::kEmpSel:
      return "empsel";
    case EstimatorKind::kFullKl:
      return "fullkl";
  }
  return "?";
}

std::optional<EstimatorKind> parse_estimator(std::string_view tag) {
  for (auto kind : kAllEstimators) {
    if (to_string(kind) == tag) return kind;
  }
  return std::nullopt;
}

DisclosureLevel required_level(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kMle:
      return DisclosureLevel::kHardLabels;
    case EstimatorKind::kEmpCe:
    case EstimatorKind::kEmpSel:
      return DisclosureLevel::kPartialSoftLabels;
    case EstimatorKind::kFullKl:
      return DisclosureLevel::kSoftLabels;
  }
  return DisclosureLevel::kSoftLabels;
}

ConditionalDensity fit_mle(const Dataset& d, std::size_t num_labels,
                           const Initializer& init) {
  if (num_labels != d.num_labels()) {
    throw DimensionError("label count differs from the dataset's");
  }
  if (d.size() == 0) throw PreconditionError("empty dataset (n = 0)");
  const std::size_t S = d.num_inputs();
  std::vector<double> flat(S * num_labels);
  for (std::size_t s = 0; s < S; ++s) {
    std::span<double> row(flat.data() + s * num_labels, num_labels);
    const Count visits = d.visits(s);
    if (visits == 0) {
      fill_unseen_input(init, s, row);
      continue;
    }
    const auto counts = d.row(s);
    for (std::size_t a = 0; a < num_labels; ++a) {
      row[a] = static_cast<double>(counts[a]) / static_cast<double>(visits);
    }
  }
  return ConditionalDensity(S, num_labels, std::move(flat));
}

ConditionalDensity fit_empce(const Dataset& d, const TransferData& r,
                             const Initializer& init) {
  require_level(EstimatorKind::kEmpCe, r);
  r.check_covers(d);
  const std::size_t S = d.num_inputs();
  const std::size_t A = d.num_labels();
  std::vector<double> flat(S * A, 0.0);
  for (std::size_t s = 0; s < S; ++s) {
    std::span<double> row(flat.data() + s * A, A);
    if (d.visits(s) == 0) {
      fill_unseen_input(init, s, row);
      continue;
    }
    double z = 0.0;
    for (std::size_t a = 0; a < A; ++a) {
      const Count c = d.count(s, a);
      if (c == 0) continue;
      row[a] = static_cast<double>(c) * teacher_prob_or_throw(r, s, a);
      z += row[a];
    }
    if (!(z > 0.0)) {
      throw InconsistentData("zero normalizer at visited input " +
                             std::to_string(s));
    }
    for (double& v : row) v /= z;
  }
  return ConditionalDensity(S, A, std::move(flat));
}

std::vector<double> empce_limit_row(std::span<const double> pi_star_row) {
  std::vector<double> out(pi_star_row.begin(), pi_star_row.end());
  double z = 0.0;
  for (double& v : out) {
    v *= v;
    z += v;
  }
  if (!(z > 0.0)) throw InvalidDistribution("limit of a zero row");
  for (double& v : out) v /= z;
  return out;
}

ConditionalDensity fit_empsel(const Dataset& d, const TransferData& r,
                              const Initializer& init) {
  require_level(EstimatorKind::kEmpSel, r);
  r.check_covers(d);
  const std::size_t S = d.num_inputs();
  const std::size_t A = d.num_labels();
  std::vector<double> flat(S * A, 0.0);
  auto seen = std::make_unique<bool[]>(A);
  for (std::size_t s = 0; s < S; ++s) {
    std::span<double> row(flat.data() + s * A, A);
    if (d.visits(s) == 0) {
      fill_unseen_input(init, s, row);
      continue;
    }
    double seen_mass = 0.0;
    std::size_t unseen = 0;
    for (std::size_t a = 0; a < A; ++a) {
      seen[a] = d.count(s, a) > 0;
      if (seen[a]) {
        row[a] = teacher_prob_or_throw(r, s, a);
        seen_mass += row[a];
      } else {
        ++unseen;
      }
    }
    double residual = 1.0 - seen_mass;
    if (residual < -kResidualTolerance) {
      throw InconsistentData("teacher probabilities of seen labels at input " +
                             std::to_string(s) + " sum past 1");
    }
    residual = std::clamp(residual, 0.0, 1.0);
    if (unseen == 0) continue;
    if (init.unseen_labels) {
      init.unseen_labels(s, residual, std::span<const bool>(seen.get(), A),
                         row);
      continue;
    }
    const double share = residual / static_cast<double>(unseen);
    for (std::size_t a = 0; a < A; ++a) {
      if (!seen[a]) row[a] = share;
    }
  }
  return ConditionalDensity(S, A, std::move(flat));
}

ConditionalDensity fit_fullkl(const Dataset& d, const TransferData& q,
                              const Initializer& init) {
  require_level(EstimatorKind::kFullKl, q);
  q.check_covers(d);
  const std::size_t S = d.num_inputs();
  const std::size_t A = d.num_labels();
  std::vector<double> flat(S * A, 0.0);
  const auto& rows = *q.soft_rows();
  auto next = rows.begin();
  for (std::size_t s = 0; s < S; ++s) {
    std::span<double> row(flat.data() + s * A, A);
    if (next != rows.end() && next->input == s) {
      std::copy(next->probs.begin(), next->probs.end(), row.begin());
      ++next;
    } else {
      fill_unseen_input(init, s, row);
    }
  }
  return ConditionalDensity(S, A, std::move(flat));
}

ConditionalDensity fit(EstimatorKind kind, const Dataset& d,
                       const TransferData& side, const Initializer& init) {
  require_level(kind, side);
  switch (kind) {
    case EstimatorKind::kMle:
      return fit_mle(d, d.num_labels(), init);
    case EstimatorKind::kEmpCe:
      return fit_empce(d, side, init);
    case EstimatorKind::kEmpSel:
      return fit_empsel(d, side, init);
    case EstimatorKind::kFullKl:
      return fit_fullkl(d, side, init);
  }
  throw ProtocolError("unknown estimator");
}

}  // namespace ktransfer
