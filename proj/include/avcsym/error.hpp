/**
 * Copyright 2026 The avcsym Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace avcsym {

// Base of every error raised by the library. Callers that only care about
// "something went wrong" catch this; tests match the concrete subclasses.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define AVCSYM_DEFINE_ERROR(Name)            \
  class Name : public Error {                \
   public:                                   \
    explicit Name(const std::string& what)   \
        : Error(#Name ": " + what) {}        \
  }

// Generic precondition failure (bad flag, out-of-range argument).
AVCSYM_DEFINE_ERROR(InvalidArgument);

// avc-core
AVCSYM_DEFINE_ERROR(ShapeMismatch);
AVCSYM_DEFINE_ERROR(NegativeEntry);
AVCSYM_DEFINE_ERROR(RowSumViolation);
AVCSYM_DEFINE_ERROR(DimensionMismatch);
AVCSYM_DEFINE_ERROR(AlphabetTooSmall);
AVCSYM_DEFINE_ERROR(NonPositivePower);

// lp-core
AVCSYM_DEFINE_ERROR(NumericalBreakdown);
AVCSYM_DEFINE_ERROR(IterationLimit);

// symmetrizability
AVCSYM_DEFINE_ERROR(GridTooLarge);

// bosonic-channel
AVCSYM_DEFINE_ERROR(BadConstellation);
AVCSYM_DEFINE_ERROR(EtaOutOfRange);
AVCSYM_DEFINE_ERROR(QuadratureFailure);

// jammer-discretization
AVCSYM_DEFINE_ERROR(PitchTooLarge);
AVCSYM_DEFINE_ERROR(NormalizationFailure);

#undef AVCSYM_DEFINE_ERROR

}  // namespace avcsym
