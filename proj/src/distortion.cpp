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

#include "resolver/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace resolver {

double Propensity(double d_min, double d_max) {
  if (d_min == kInf) return 0.0;
  if (d_min == 0.0 && d_max == 0.0) return 1.0;
  if (d_max == 0.0) {
    throw std::logic_error("propensity: d_min exceeds d_max");
  }
  return std::exp(-d_min / (2.0 * d_max));
}

Eigen::VectorXd PropensityTable(const RangeIndex& index,
                                DistortionModel model) {
  const int n = index.domain_size();
  if (model == DistortionModel::kBlink) return Eigen::VectorXd::Ones(n);
  Eigen::VectorXd omega(n);
  for (ValueId y = 0; y < n; ++y) {
    omega[y] = Propensity(index.d_min(y), index.d_max());
  }
  return omega;
}

double CollapsedRecordLikelihood(ValueId x, ValueId y, double theta_omega,
                                 double h) {
  return (x == y ? 1.0 - theta_omega : 0.0) + theta_omega * h;
}

BaseDistribution BaseDistribution::Build(const AttributeSpec& spec,
                                         const RangeIndex& index,
                                         std::span<const Index> frequencies,
                                         DistortionModel model) {
  BaseDistribution psi;
  const int n = index.domain_size();
  psi.domain_size_ = n;
  psi.include_truth_ = model == DistortionModel::kBlink;
  const bool use_frequency = psi.include_truth_ ||
                             spec.base_mode == BaseDistributionMode::kFrequency;
  psi.frequency_.assign(frequencies.begin(), frequencies.end());
  psi.frequency_.resize(n, 0.0);
  psi.frequency_total_ = 0.0;
  for (double f : psi.frequency_) psi.frequency_total_ += f;

  if (index.complete()) {
    psi.form_ = use_frequency ? Form::kFrequency : Form::kUniform;
    return psi;
  }

  psi.form_ = Form::kSparse;
  psi.forward_.resize(n);
  psi.reverse_.resize(n);
  for (ValueId y = 0; y < n; ++y) {
    auto& out = psi.forward_[y];
    double total = 0.0;
    for (const Neighbor& nb : index.Forward(y)) {
      if (nb.value == y && !psi.include_truth_) continue;
      double w = std::exp(-nb.distance);
      if (use_frequency) w *= psi.frequency_[nb.value];
      if (w <= 0) continue;
      out.push_back({nb.value, w});
      total += w;
    }
    for (WeightedValue& w : out) w.prob /= total;
  }
  for (ValueId y = 0; y < n; ++y) {
    for (const WeightedValue& w : psi.forward_[y]) {
      psi.reverse_[w.value].push_back({y, w.prob});
    }
  }
  return psi;
}

double BaseDistribution::Prob(ValueId x, ValueId y) const {
  switch (form_) {
    case Form::kUniform:
      if (x == y || domain_size_ < 2) return 0.0;
      return 1.0 / (domain_size_ - 1);
    case Form::kFrequency: {
      if (include_truth_) {
        return frequency_total_ > 0 ? frequency_[x] / frequency_total_ : 0.0;
      }
      if (x == y) return 0.0;
      const double rest = frequency_total_ - frequency_[y];
      return rest > 0 ? frequency_[x] / rest : 0.0;
    }
    case Form::kSparse: {
      const auto& list = reverse_[x];
      auto it = std::lower_bound(
          list.begin(), list.end(), y,
          [](const WeightedValue& w, ValueId v) { return w.value < v; });
      if (it == list.end() || it->value != y) return 0.0;
      return it->prob;
    }
  }
  return 0.0;
}

ModelDefaults BlinkVariantOverrides(ModelDefaults defaults,
                                    Index num_records) {
  const double n = num_records;
  for (AttributeSpec& spec : defaults.specs) {
    for (BetaPrior& prior : spec.distortion_prior) {
      prior = BetaPrior{n / 1000.0, n / 10.0};
    }
  }
  defaults.ep = EpPrior::CouponFixed(num_records);
  return defaults;
}

}  // namespace resolver
