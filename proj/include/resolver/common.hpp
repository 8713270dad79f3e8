// Copyright 2026 The resolver Authors
//
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

#ifndef RESOLVER_COMMON_HPP_
#define RESOLVER_COMMON_HPP_

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace resolver {

// Record, entity and attribute indices.
using Index = std::int32_t;

// Interned attribute value: an index into AttributeSpec::domain.
using ValueId = std::int32_t;

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Raised for malformed inputs: bad configs, invalid tables, out-of-range
// parameters. Maps to exit code 2 on the command line.
class InvalidInput : public std::invalid_argument {
 public:
  explicit InvalidInput(const std::string& what)
      : std::invalid_argument(what) {}
};

// Raised when a numeric quantity becomes NaN or otherwise unusable during
// sampling. Maps to exit code 3.
class NumericFailure : public std::runtime_error {
 public:
  explicit NumericFailure(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace resolver

#endif  // RESOLVER_COMMON_HPP_
