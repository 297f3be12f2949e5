// Copyright 2026 The DPDP Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPDP_COMMON_HPP_
#define DPDP_COMMON_HPP_

#include <limits>
#include <stdexcept>
#include <string>

namespace dpdp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Index of the depot / start node in every instance.
inline constexpr int kDepot = 0;

// Base of every error raised by the library. The C API maps each subclass to
// its own status code.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (JSON, heatmap file).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Problem size above a configured cap (oracles).
class LimitError : public Error {
 public:
  using Error::Error;
};

// Broken internal invariant, e.g. a corrupted trace.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace dpdp

#endif  // DPDP_COMMON_HPP_
