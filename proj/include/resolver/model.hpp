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

// Domain types for the entity resolution model: attribute specifications,
// the observed record table, the linkage prior and run configuration.

#ifndef RESOLVER_MODEL_HPP_
#define RESOLVER_MODEL_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "resolver/common.hpp"
#include "resolver/distance.hpp"

namespace resolver {

enum class BaseDistributionMode {
  // psi(x|y) proportional to exp(-dist(y, x)) for x != y.
  kSoftmax,
  // psi(x|y) proportional to the observed frequency of x, for x != y.
  kFrequency,
};

struct BetaPrior {
  double shape0 = 1.0;
  double shape1 = 4.0;
};

// Gamma prior with shape/rate parameterization.
struct GammaPrior {
  double shape = 2.0;
  double rate = 1e-4;
};

struct AttributeSpec {
  std::string name;
  // Ordered, distinct values; value ids index into this list.
  std::vector<std::string> domain;
  DistanceMeasure distance;
  BaseDistributionMode base_mode = BaseDistributionMode::kSoftmax;
  // Dirichlet concentration and base pmf for the entity distribution G.
  double entity_concentration = 1.0;
  Eigen::VectorXd entity_base;
  // One entry per source.
  std::vector<BetaPrior> distortion_prior;
  GammaPrior rho_prior;

  int domain_size() const { return static_cast<int>(domain.size()); }
};

// Throws InvalidInput describing the first problem found.
void ValidateAttributeSpec(const AttributeSpec& spec, int num_sources);

// Observed records: an N x A matrix of value ids plus a source per record.
// Immutable once constructed.
class RecordTable {
 public:
  using ValueMatrix =
      Eigen::Matrix<ValueId, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  RecordTable() = default;
  // Validates all invariants; throws InvalidInput.
  RecordTable(std::vector<AttributeSpec> specs, ValueMatrix values,
              std::vector<Index> sources, int num_sources);

  // Interns string columns. Attributes with an empty domain get the sorted
  // distinct observed values; a pre-set domain must contain every value.
  static RecordTable FromColumns(
      std::vector<AttributeSpec> specs,
      const std::vector<std::vector<std::string>>& columns,
      std::vector<Index> sources, int num_sources);

  int num_records() const { return static_cast<int>(values_.rows()); }
  int num_attributes() const { return static_cast<int>(specs_.size()); }
  int num_sources() const { return num_sources_; }

  ValueId value(Index i, int a) const { return values_(i, a); }
  Index source(Index i) const { return sources_[i]; }
  const ValueMatrix& values() const { return values_; }
  const std::vector<Index>& sources() const { return sources_; }
  const AttributeSpec& spec(int a) const { return specs_[a]; }
  const std::vector<AttributeSpec>& specs() const { return specs_; }
  const std::string& text(Index i, int a) const {
    return specs_[a].domain[values_(i, a)];
  }

  // Number of records carrying each domain value of attribute a.
  std::vector<Index> ValueCounts(int a) const;

 private:
  std::vector<AttributeSpec> specs_;
  ValueMatrix values_;
  std::vector<Index> sources_;
  int num_sources_ = 1;
};

enum class EpRegime { kPitmanYor, kEwens, kGenCoupon, kCouponFixed };

struct EpHyper {
  // Beta prior on sigma (Pitman-Yor).
  double zeta0 = 1.0;
  double zeta1 = 1.0;
  // Gamma prior (shape, rate) on alpha or kappa.
  double chi0 = 1.0;
  double chi1 = 1e-2;
  // m - 1 ~ NegativeBinomial(r, nu) for the generalized coupon prior.
  double r = 1.0;
  double nu = 0.5;
};

// Ewens-Pitman linkage prior: regime, hyperparameters and current values.
struct EpPrior {
  EpRegime regime = EpRegime::kGenCoupon;
  EpHyper hyper;
  double sigma = 0.0;  // Pitman-Yor / Ewens
  double alpha = 1.0;  // Pitman-Yor / Ewens
  double kappa = 1.0;  // generalized coupon
  std::int64_t m = 1;  // generalized coupon and fixed coupon

  static EpPrior PitmanYor(double sigma, double alpha, EpHyper hyper = {});
  static EpPrior Ewens(double alpha, EpHyper hyper = {});
  static EpPrior GenCoupon(double kappa, std::int64_t m, EpHyper hyper = {});
  static EpPrior CouponFixed(std::int64_t m);

  // Discount and concentration in the common (sigma, alpha)
  // parameterization. Undefined for the fixed coupon limit.
  double EffectiveSigma() const;
  double EffectiveAlpha() const;

  // Throws InvalidInput if the current values violate the regime's range.
  void Validate() const;
};

const char* RegimeName(EpRegime regime);
std::optional<EpRegime> ParseRegime(const std::string& name);

enum class DistortionModel { kOurs, kBlink };

struct RunConfig {
  std::int64_t iterations = 200000;
  std::int64_t burn_in = 100000;
  std::int64_t thin = 10;
  std::uint64_t seed = 0;
  DistortionModel distortion_model = DistortionModel::kOurs;
  // Scalar names to record; empty records all.
  std::vector<std::string> monitored;

  // Parameter blocks can be frozen at their initial values.
  bool update_theta = true;
  bool update_rho = true;
  bool update_ep = true;
  bool update_g = true;
  // Visit records and entities in a random order each sweep.
  bool random_scan = false;
  // Sweeps between full state validations; 0 disables.
  std::int64_t check_interval = 1000;

  void Validate() const;
  // Stored samples; a trailing remainder after burn-in is dropped.
  std::int64_t num_samples() const { return (iterations - burn_in) / thin; }
};

struct ModelDefaults {
  std::vector<AttributeSpec> specs;
  EpPrior ep;
};

// Vague defaults for N records from S sources: Beta(1, 4) distortion,
// Gamma(2, 1e-4) concentration, unit Dirichlet concentration with uniform
// base, and a generalized coupon prior whose m has mean N and variance N^2.
// Only name, domain, distance and base_mode of the input specs are read.
ModelDefaults DefaultHyperparameters(Index num_records, int num_sources,
                                     std::vector<AttributeSpec> specs);

// (r, nu) such that 1 + NegativeBinomial(r, nu) has mean N and variance N^2.
EpHyper GenCouponHyper(Index num_records);

}  // namespace resolver

#endif  // RESOLVER_MODEL_HPP_
