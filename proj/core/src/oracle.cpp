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

#include "ktransfer/oracle.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ktransfer/error.hpp"
#include "ktransfer/sampling.hpp"

namespace ktransfer {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool needs_teacher(LossKind kind) { return kind != LossKind::kHardCe; }

void check_side_info(LossKind kind, const Dataset& d,
                     const std::optional<TransferData>& r) {
  if (!needs_teacher(kind)) return;
  if (!r || r->level() == DisclosureLevel::kHardLabels) {
    throw ProtocolError(std::string(to_string(kind)) +
                        " needs partial soft labels");
  }
  r->check_covers(d);
}

// Per-observed-label weights of one row: (label, count, teacher prob).
struct Observed {
  std::size_t label;
  double count;
  double teacher;
};

std::vector<Observed> observed_row(LossKind kind, const Dataset& d,
                                   const std::optional<TransferData>& r,
                                   std::size_t s) {
  std::vector<Observed> out;
  for (std::size_t a = 0; a < d.num_labels(); ++a) {
    const Count c = d.count(s, a);
    if (c == 0) continue;
    double teacher = 1.0;
    if (needs_teacher(kind)) {
      auto p = r->teacher_prob(s, a);
      if (!p) throw InconsistentData("missing teacher probability");
      teacher = *p;
    }
    out.push_back({a, static_cast<double>(c), teacher});
  }
  return out;
}

double row_loss(LossKind kind, const std::vector<Observed>& obs,
                std::span<const double> row) {
  double acc = 0.0;
  for (const auto& o : obs) {
    const double p = row[o.label];
    if (!(p > 0.0)) return kInf;
    switch (kind) {
      case LossKind::kHardCe:
        acc -= o.count * std::log(p);
        break;
      case LossKind::kPartialCe:
        acc -= o.count * o.teacher * std::log(p);
        break;
      case LossKind::kPartialSel: {
        const double diff = std::log(p) - std::log(o.teacher);
        acc += o.count * 0.5 * diff * diff;
        break;
      }
    }
  }
  return acc;
}

// Calls visit(units) for every composition of `total` into units.size() parts.
template <typename Visit>
void for_each_composition(std::vector<int>& units, std::size_t pos, int left,
                          Visit&& visit) {
  if (pos + 1 == units.size()) {
    units[pos] = left;
    visit(units);
    return;
  }
  for (int k = 0; k <= left; ++k) {
    units[pos] = k;
    for_each_composition(units, pos + 1, left - k, visit);
  }
}

}  // namespace

std::string_view to_string(LossKind kind) {
  switch (kind) {
    case LossKind::kHardCe:
      return "hard-ce";
    case LossKind::kPartialCe:
      return "partial-ce";
    case LossKind::kPartialSel:
      return "partial-sel";
  }
  return "?";
}

double loss_eval(LossKind kind, const ConditionalDensity& pi, const Dataset& d,
                 const std::optional<TransferData>& r) {
  if (pi.num_inputs() != d.num_inputs() || pi.num_labels() != d.num_labels()) {
    throw DimensionError("student and dataset shapes differ");
  }
  check_side_info(kind, d, r);
  double total = 0.0;
  for (std::size_t s = 0; s < d.num_inputs(); ++s) {
    if (d.visits(s) == 0) continue;
    total += row_loss(kind, observed_row(kind, d, r, s), pi.row(s));
    if (std::isinf(total)) return kInf;
  }
  return total;
}

GridResult grid_minimize(LossKind kind, const Dataset& d,
                         const std::optional<TransferData>& r, double step) {
  const std::size_t A = d.num_labels();
  if (A > kMaxGridLabels || step < kMinGridStep) {
    throw TooLarge("grid search needs A <= 4 and step >= 0.01");
  }
  const double units_real = 1.0 / step;
  const int units = static_cast<int>(std::lround(units_real));
  if (std::abs(units_real - units) > 1e-9) {
    throw PreconditionError("grid step must divide 1");
  }
  check_side_info(kind, d, r);

  const std::size_t S = d.num_inputs();
  std::vector<double> best_flat(S * A);
  double total = 0.0;
  std::vector<int> comp(A);
  std::vector<double> candidate(A);
  for (std::size_t s = 0; s < S; ++s) {
    const auto obs = observed_row(kind, d, r, s);
    double best = kInf;
    std::vector<double> best_row;
    for_each_composition(comp, 0, units, [&](const std::vector<int>& c) {
      for (std::size_t a = 0; a < A; ++a) {
        candidate[a] = static_cast<double>(c[a]) / units;
      }
      const double loss = row_loss(kind, obs, candidate);
      if (best_row.empty() || loss < best) {
        best = loss;
        best_row = candidate;
      }
    });
    std::copy(best_row.begin(), best_row.end(), best_flat.begin() + s * A);
    total += best;
  }
  return {ConditionalDensity(S, A, std::move(best_flat)), total};
}

double grid_slack(LossKind kind, const ConditionalDensity& pi,
                  const Dataset& d, const std::optional<TransferData>& r,
                  double step) {
  check_side_info(kind, d, r);
  double slack = 0.0;
  for (std::size_t s = 0; s < d.num_inputs(); ++s) {
    for (const auto& o : observed_row(kind, d, r, s)) {
      const double p = pi(s, o.label);
      if (p <= step) return kInf;
      const double shift = std::log(p / (p - step));
      switch (kind) {
        case LossKind::kHardCe:
          slack += o.count * shift;
          break;
        case LossKind::kPartialCe:
          slack += o.count * o.teacher * shift;
          break;
        case LossKind::kPartialSel: {
          // |log q - log pi*| <= |log p - log pi*| + shift
          const double dev = std::abs(std::log(p) - std::log(o.teacher));
          slack += o.count * 0.5 * ((dev + shift) * (dev + shift) - dev * dev);
          break;
        }
      }
    }
  }
  return slack;
}

double exact_expected_risk(const InputDistribution& rho,
                           const ConditionalDensity& pi_star,
                           EstimatorKind est, Count n) {
  if (n == 0) throw PreconditionError("sample size n must be >= 1");
  const std::size_t S = pi_star.num_inputs();
  const std::size_t A = pi_star.num_labels();
  if (rho.size() != S) throw DimensionError("rho and pi* disagree on S");
  const std::size_t cells = S * A;
  if (std::pow(static_cast<double>(cells), static_cast<double>(n)) >
      kMaxEnumeration) {
    throw TooLarge("(S*A)^n exceeds the enumeration guard");
  }

  std::vector<double> cell_prob(cells);
  for (std::size_t s = 0; s < S; ++s) {
    for (std::size_t a = 0; a < A; ++a) cell_prob[s * A + a] = rho[s] * pi_star(s, a);
  }

  // Odometer over ordered tuples of cell indices.
  std::vector<std::size_t> tuple(n, 0);
  double expectation = 0.0;
  const auto level = required_level(est);
  while (true) {
    double weight = 1.0;
    for (std::size_t c : tuple) weight *= cell_prob[c];
    if (weight > 0.0) {
      Dataset d(S, A);
      for (std::size_t c : tuple) d.add(c / A, c % A);
      const auto student = fit(est, d, disclose(level, d, pi_star));
      expectation += weight * cond_tv(student, pi_star, rho);
    }
    std::size_t pos = 0;
    while (pos < n && ++tuple[pos] == cells) tuple[pos++] = 0;
    if (pos == n) break;
  }
  return expectation;
}

}  // namespace ktransfer
