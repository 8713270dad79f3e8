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

// Hit-miss distortion: value-specific propensities and the base
// distribution psi(x | y) a distorted value is drawn around.

#ifndef RESOLVER_DISTORTION_HPP_
#define RESOLVER_DISTORTION_HPP_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "resolver/common.hpp"
#include "resolver/distance.hpp"
#include "resolver/model.hpp"

namespace resolver {

// Distortion propensity from the nearest-neighbor distance d_min of a value
// and the largest distance d_max in its domain.
double Propensity(double d_min, double d_max);

// Propensity of every value of an attribute; identically 1 under the blink
// preset.
Eigen::VectorXd PropensityTable(const RangeIndex& index,
                                DistortionModel model);

// (1 - theta omega) [x == y] + theta omega h, where h is the mass the
// distortion distribution puts on x.
double CollapsedRecordLikelihood(ValueId x, ValueId y, double theta_omega,
                                 double h);

struct WeightedValue {
  ValueId value;
  double prob;
};

// psi(. | y) for every truth y of one attribute.
//
// Complete attributes (constant distance) are stored in closed form; all
// others as sparse lists restricted to the cutoff neighborhood.
class BaseDistribution {
 public:
  BaseDistribution() = default;

  // frequencies[v] is the number of records with value v. Under the blink
  // preset the support keeps y and every attribute gets the frequency
  // factor.
  static BaseDistribution Build(const AttributeSpec& spec,
                                const RangeIndex& index,
                                std::span<const Index> frequencies,
                                DistortionModel model);

  // psi(x | y).
  double Prob(ValueId x, ValueId y) const;

  // Calls fn(x, psi(x|y)) for each x with positive mass.
  template <typename Fn>
  void ForEachOutcome(ValueId y, Fn&& fn) const;

  // Calls fn(y, psi(x|y)) for each truth y giving x positive mass, in
  // increasing order of y.
  template <typename Fn>
  void ForEachTruth(ValueId x, Fn&& fn) const;

  bool includes_truth() const { return include_truth_; }
  int domain_size() const { return domain_size_; }

 private:
  enum class Form { kUniform, kFrequency, kSparse };

  Form form_ = Form::kSparse;
  bool include_truth_ = false;
  int domain_size_ = 0;
  // Closed forms.
  std::vector<double> frequency_;
  double frequency_total_ = 0.0;
  // Sparse form, sorted by value.
  std::vector<std::vector<WeightedValue>> forward_;
  std::vector<std::vector<WeightedValue>> reverse_;
};

// Applies the blink preset to a spec list and prior: beta = (N/1000, N/10)
// and the fixed coupon prior with m = N. The distortion model switch itself
// lives in RunConfig::distortion_model.
ModelDefaults BlinkVariantOverrides(ModelDefaults defaults,
                                    Index num_records);

template <typename Fn>
void BaseDistribution::ForEachOutcome(ValueId y, Fn&& fn) const {
  switch (form_) {
    case Form::kUniform:
    case Form::kFrequency:
      for (ValueId x = 0; x < domain_size_; ++x) {
        const double p = Prob(x, y);
        if (p > 0) fn(x, p);
      }
      return;
    case Form::kSparse:
      for (const WeightedValue& w : forward_[y]) fn(w.value, w.prob);
      return;
  }
}

template <typename Fn>
void BaseDistribution::ForEachTruth(ValueId x, Fn&& fn) const {
  switch (form_) {
    case Form::kUniform:
    case Form::kFrequency:
      for (ValueId y = 0; y < domain_size_; ++y) {
        const double p = Prob(x, y);
        if (p > 0) fn(y, p);
      }
      return;
    case Form::kSparse:
      for (const WeightedValue& w : reverse_[x]) fn(w.value, w.prob);
      return;
  }
}

}  // namespace resolver

#endif  // RESOLVER_DISTORTION_HPP_
