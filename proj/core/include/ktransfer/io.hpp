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

// Text formats shared with external tools.
//
// Risk CSV: header
//   instance,estimator,S,A,n,repeats,mean_risk,stderr,seed
// one row per (instance, estimator, n); floats with 17 significant digits so
// a parse/serialize round trip is byte-identical.
//
// Rate report: records of `key: value` lines separated by a blank line.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ktransfer/core_model.hpp"
#include "ktransfer/harness.hpp"

namespace ktransfer {

inline constexpr std::string_view kRiskCsvHeader =
    "instance,estimator,S,A,n,repeats,mean_risk,stderr,seed";

// %.17g
std::string format_double(double x);

void write_risk_csv(std::ostream& out, const RiskTable& table);
// Throws ParseError naming the offending line.
RiskTable read_risk_csv(std::istream& in);

// One line per input, six decimals, space separated.
void write_table(std::ostream& out, const InputDistribution& rho);
void write_table(std::ostream& out, const ConditionalDensity& pi);

struct RateRecord {
  InstanceKind instance = InstanceKind::kI0;
  EstimatorKind estimator = EstimatorKind::kMle;
  RegressionResult fit;
};

void write_rate_report(std::ostream& out, const std::vector<RateRecord>& records);

}  // namespace ktransfer
