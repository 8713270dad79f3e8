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

// String distance measures over attribute values and the range-query index
// used to restrict distortions to nearby values.

#ifndef RESOLVER_DISTANCE_HPP_
#define RESOLVER_DISTANCE_HPP_

#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "resolver/common.hpp"

namespace resolver {

enum class DistanceKind { kConstant, kNormalizedLevenshtein, kHybrid };

// Costs for the token-level hybrid measure. Each token operation costs its
// weight times the inner Levenshtein distance.
struct HybridWeights {
  double insertion = 1.0;
  double deletion = 1.0;
  double substitution = 1.0;
  char separator = ' ';
};

struct DistanceMeasure {
  DistanceKind kind = DistanceKind::kConstant;
  HybridWeights hybrid;
  // Distances above the cutoff are treated as infinite.
  double cutoff = kInf;

  // Raw (uncut) distance from truth y to observed x.
  double operator()(std::string_view y, std::string_view x) const;
};

// Unit-cost edit distance.
int Levenshtein(std::string_view a, std::string_view b);

inline double ConstantDistance(std::string_view, std::string_view) {
  return 0.0;
}

// Levenshtein divided by the longer length; 0 for two empty strings.
double NormalizedLevenshtein(std::string_view y, std::string_view x);

// Minimum-cost alignment of the token multisets of y and x, divided by the
// number of non-null operations in the optimal alignment. Among optimal
// alignments the one with fewest substitutions is used.
double HybridDistance(std::string_view y, std::string_view x,
                      const HybridWeights& weights = {});

std::vector<std::string> Tokenize(std::string_view s, char separator);

using DistanceFn = std::function<double(std::string_view, std::string_view)>;

struct Neighbor {
  ValueId value;
  double distance;
};

// Precomputed neighbor lists over a finite domain. Distances need not be
// symmetric: Query(x) lists truths y that can be distorted into x, while
// Forward(y) lists observations x reachable from y.
class RangeIndex {
 public:
  RangeIndex() = default;

  static RangeIndex Build(const std::vector<std::string>& domain,
                          const DistanceMeasure& measure);
  static RangeIndex Build(const std::vector<std::string>& domain,
                          const DistanceFn& dist, double cutoff);

  // {(y, dist(y, x)) : dist(y, x) <= cutoff}, sorted by y.
  std::span<const Neighbor> Query(ValueId x) const;
  // {(x, dist(y, x)) : dist(y, x) <= cutoff}, sorted by x.
  std::span<const Neighbor> Forward(ValueId y) const;

  // Cut distance dist(y, x), or +inf beyond the cutoff.
  double CutDistance(ValueId y, ValueId x) const;

  // Minimum cut distance from y to any other value (+inf if none).
  double d_min(ValueId y) const;
  // Maximum raw distance over ordered pairs of distinct values.
  double d_max() const { return d_max_; }

  int domain_size() const { return domain_size_; }
  // True when every pair lies within the cutoff with distance zero.
  bool complete() const { return complete_; }

 private:
  int domain_size_ = 0;
  bool complete_ = false;
  double d_max_ = 0.0;
  std::vector<double> d_min_;
  // Complete indices share one list of all values.
  std::vector<Neighbor> all_;
  std::vector<std::vector<Neighbor>> reverse_;
  std::vector<std::vector<Neighbor>> forward_;
};

}  // namespace resolver

#endif  // RESOLVER_DISTANCE_HPP_
