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

#include <stdexcept>
#include <string>

namespace ktransfer {

// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Shapes disagree (vector lengths, S or A mismatch).
class DimensionError : public Error {
 public:
  using Error::Error;
};

// A probability vector or count table violates its invariants.
class InvalidDistribution : public Error {
 public:
  using Error::Error;
};

// KL(p || q) with p not absolutely continuous w.r.t. q.
class DivergenceUndefined : public Error {
 public:
  using Error::Error;
};

// Side-information disagrees with the dataset it is supposed to describe.
class InconsistentData : public Error {
 public:
  using Error::Error;
};

// An estimator was handed side-information of the wrong disclosure level.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

// Instance parameters violate a burn-in or mass constraint.
class InvalidInstance : public Error {
 public:
  using Error::Error;
};

// Enumeration or grid search would exceed its combinatorial guard.
class TooLarge : public Error {
 public:
  using Error::Error;
};

// Too few usable points for a regression.
class InsufficientData : public Error {
 public:
  using Error::Error;
};

// Generic API precondition failure (n = 0, repeats < 2, ...).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Malformed input file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace ktransfer
