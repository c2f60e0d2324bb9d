// Copyright 2026 The metaprecomp Authors.
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

#ifndef METAPRECOMP_ERRORS_H_
#define METAPRECOMP_ERRORS_H_

#include <stdexcept>
#include <string>

namespace metaprecomp {

// Malformed queries, out-of-domain parameters and invalid input files.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Exact enumeration would visit more histories than the configured guard.
// Callers should fall back to sampled estimates.
class EnumerationLimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A distribution with zero normalizer (e.g. an advantage set that the
// precompute policy never reaches).
class EmptyDistribution : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Engine process crashed, timed out or closed its pipes. Retriable.
class EngineTransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace metaprecomp

#endif  // METAPRECOMP_ERRORS_H_
