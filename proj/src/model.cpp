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

#include "resolver/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

namespace resolver {

void ValidateAttributeSpec(const AttributeSpec& spec, int num_sources) {
  const std::string where = "attribute '" + spec.name + "': ";
  if (spec.domain.empty()) throw InvalidInput(where + "empty domain");
  std::set<std::string> seen(spec.domain.begin(), spec.domain.end());
  if (seen.size() != spec.domain.size()) {
    throw InvalidInput(where + "duplicate domain entries");
  }
  if (!(spec.distance.cutoff > 0)) {
    throw InvalidInput(where + "cutoff must be positive");
  }
  const HybridWeights& w = spec.distance.hybrid;
  if (w.insertion < 0 || w.deletion < 0 || w.substitution < 0) {
    throw InvalidInput(where + "hybrid weights must be non-negative");
  }
  if (!(spec.entity_concentration > 0)) {
    throw InvalidInput(where + "entity concentration must be positive");
  }
  if (spec.entity_base.size() != spec.domain_size()) {
    throw InvalidInput(where + "entity base pmf has wrong length");
  }
  if ((spec.entity_base.array() < 0).any() ||
      std::fabs(spec.entity_base.sum() - 1.0) > 1e-12) {
    throw InvalidInput(where + "entity base must be a pmf");
  }
  if (static_cast<int>(spec.distortion_prior.size()) != num_sources) {
    throw InvalidInput(where + "need one distortion prior per source");
  }
  for (const BetaPrior& b : spec.distortion_prior) {
    if (!(b.shape0 > 0 && b.shape1 > 0)) {
      throw InvalidInput(where + "distortion prior must be positive");
    }
  }
  if (!(spec.rho_prior.shape > 0 && spec.rho_prior.rate > 0)) {
    throw InvalidInput(where + "concentration prior must be positive");
  }
}

RecordTable::RecordTable(std::vector<AttributeSpec> specs, ValueMatrix values,
                         std::vector<Index> sources, int num_sources)
    : specs_(std::move(specs)),
      values_(std::move(values)),
      sources_(std::move(sources)),
      num_sources_(num_sources) {
  if (num_sources_ < 1) throw InvalidInput("need at least one source");
  if (specs_.empty()) throw InvalidInput("need at least one attribute");
  if (values_.rows() < 1) throw InvalidInput("need at least one record");
  if (values_.cols() != static_cast<Eigen::Index>(specs_.size())) {
    throw InvalidInput("value matrix has wrong number of columns");
  }
  if (static_cast<Eigen::Index>(sources_.size()) != values_.rows()) {
    throw InvalidInput("need one source id per record");
  }
  for (Index s : sources_) {
    if (s < 0 || s >= num_sources_) throw InvalidInput("source id out of range");
  }
  for (int a = 0; a < num_attributes(); ++a) {
    ValidateAttributeSpec(specs_[a], num_sources_);
    const int d = specs_[a].domain_size();
    for (Index i = 0; i < num_records(); ++i) {
      if (values_(i, a) < 0 || values_(i, a) >= d) {
        throw InvalidInput("value id out of range for attribute '" +
                           specs_[a].name + "'");
      }
    }
  }
}

RecordTable RecordTable::FromColumns(
    std::vector<AttributeSpec> specs,
    const std::vector<std::vector<std::string>>& columns,
    std::vector<Index> sources, int num_sources) {
  if (columns.size() != specs.size()) {
    throw InvalidInput("need one column per attribute");
  }
  const Index n = columns.empty() ? 0 : static_cast<Index>(columns[0].size());
  ValueMatrix values(n, static_cast<Eigen::Index>(specs.size()));
  for (size_t a = 0; a < specs.size(); ++a) {
    AttributeSpec& spec = specs[a];
    if (static_cast<Index>(columns[a].size()) != n) {
      throw InvalidInput("ragged columns");
    }
    if (spec.domain.empty()) {
      std::set<std::string> distinct(columns[a].begin(), columns[a].end());
      spec.domain.assign(distinct.begin(), distinct.end());
    }
    std::unordered_map<std::string, ValueId> ids;
    for (size_t v = 0; v < spec.domain.size(); ++v) {
      ids.emplace(spec.domain[v], static_cast<ValueId>(v));
    }
    for (Index i = 0; i < n; ++i) {
      auto it = ids.find(columns[a][i]);
      if (it == ids.end()) {
        throw InvalidInput("value '" + columns[a][i] +
                           "' missing from domain of attribute '" + spec.name +
                           "'");
      }
      values(i, static_cast<Eigen::Index>(a)) = it->second;
    }
    if (spec.entity_base.size() == 0) {
      spec.entity_base = Eigen::VectorXd::Constant(
          spec.domain_size(), 1.0 / spec.domain_size());
    }
  }
  return RecordTable(std::move(specs), std::move(values), std::move(sources),
                     num_sources);
}

std::vector<Index> RecordTable::ValueCounts(int a) const {
  std::vector<Index> counts(specs_[a].domain_size(), 0);
  for (Index i = 0; i < num_records(); ++i) ++counts[values_(i, a)];
  return counts;
}

EpPrior EpPrior::PitmanYor(double sigma, double alpha, EpHyper hyper) {
  EpPrior ep;
  ep.regime = EpRegime::kPitmanYor;
  ep.hyper = hyper;
  ep.sigma = sigma;
  ep.alpha = alpha;
  ep.Validate();
  return ep;
}

EpPrior EpPrior::Ewens(double alpha, EpHyper hyper) {
  EpPrior ep;
  ep.regime = EpRegime::kEwens;
  ep.hyper = hyper;
  ep.sigma = 0.0;
  ep.alpha = alpha;
  ep.Validate();
  return ep;
}

EpPrior EpPrior::GenCoupon(double kappa, std::int64_t m, EpHyper hyper) {
  EpPrior ep;
  ep.regime = EpRegime::kGenCoupon;
  ep.hyper = hyper;
  ep.kappa = kappa;
  ep.m = m;
  ep.Validate();
  return ep;
}

EpPrior EpPrior::CouponFixed(std::int64_t m) {
  EpPrior ep;
  ep.regime = EpRegime::kCouponFixed;
  ep.m = m;
  ep.Validate();
  return ep;
}

double EpPrior::EffectiveSigma() const {
  return regime == EpRegime::kGenCoupon ? -kappa : sigma;
}

double EpPrior::EffectiveAlpha() const {
  return regime == EpRegime::kGenCoupon ? static_cast<double>(m) * kappa
                                        : alpha;
}

void EpPrior::Validate() const {
  switch (regime) {
    case EpRegime::kPitmanYor:
      if (!(sigma > 0 && sigma < 1)) {
        throw InvalidInput("Pitman-Yor sigma must lie in (0, 1)");
      }
      if (!(alpha > 0)) throw InvalidInput("alpha must be positive");
      if (!(hyper.zeta0 > 0 && hyper.zeta1 > 0)) {
        throw InvalidInput("zeta hyperparameters must be positive");
      }
      break;
    case EpRegime::kEwens:
      if (sigma != 0) throw InvalidInput("Ewens sigma must be 0");
      if (!(alpha > 0)) throw InvalidInput("alpha must be positive");
      break;
    case EpRegime::kGenCoupon:
      if (!(kappa > 0)) throw InvalidInput("kappa must be positive");
      if (m < 1) throw InvalidInput("m must be at least 1");
      if (!(hyper.r > 0 && hyper.nu > 0 && hyper.nu <= 1)) {
        throw InvalidInput("need r > 0 and nu in (0, 1]");
      }
      break;
    case EpRegime::kCouponFixed:
      if (m < 1) throw InvalidInput("m must be at least 1");
      return;
  }
  if (!(hyper.chi0 > 0 && hyper.chi1 > 0)) {
    throw InvalidInput("chi hyperparameters must be positive");
  }
}

const char* RegimeName(EpRegime regime) {
  switch (regime) {
    case EpRegime::kPitmanYor:
      return "pitman-yor";
    case EpRegime::kEwens:
      return "ewens";
    case EpRegime::kGenCoupon:
      return "gen-coupon";
    case EpRegime::kCouponFixed:
      return "coupon-fixed";
  }
  return "";
}

std::optional<EpRegime> ParseRegime(const std::string& name) {
  for (EpRegime r : {EpRegime::kPitmanYor, EpRegime::kEwens,
                     EpRegime::kGenCoupon, EpRegime::kCouponFixed}) {
    if (name == RegimeName(r)) return r;
  }
  return std::nullopt;
}

void RunConfig::Validate() const {
  if (iterations < 1) throw InvalidInput("iterations must be positive");
  if (burn_in < 0 || burn_in > iterations) {
    throw InvalidInput("burn_in must lie in [0, iterations]");
  }
  if (thin < 1) throw InvalidInput("thin must be positive");
  if (check_interval < 0) throw InvalidInput("check_interval must be >= 0");
}

EpHyper GenCouponHyper(Index num_records) {
  if (num_records < 1) throw InvalidInput("need at least one record");
  EpHyper hyper;
  if (num_records == 1) {
    // Point mass at m = 1.
    hyper.nu = 1.0;
    hyper.r = 1.0;
    return hyper;
  }
  const double n = num_records;
  hyper.nu = (n - 1) / (n * n);
  hyper.r = (n - 1) * hyper.nu / (1 - hyper.nu);
  return hyper;
}

ModelDefaults DefaultHyperparameters(Index num_records, int num_sources,
                                     std::vector<AttributeSpec> specs) {
  if (num_records < 1) throw InvalidInput("need at least one record");
  if (num_sources < 1) throw InvalidInput("need at least one source");
  for (AttributeSpec& spec : specs) {
    spec.entity_concentration = 1.0;
    const int d = spec.domain_size();
    if (d > 0) spec.entity_base = Eigen::VectorXd::Constant(d, 1.0 / d);
    spec.distortion_prior.assign(num_sources, BetaPrior{1.0, 4.0});
    spec.rho_prior = GammaPrior{2.0, 1e-4};
  }
  ModelDefaults out;
  out.specs = std::move(specs);
  out.ep.regime = EpRegime::kGenCoupon;
  out.ep.hyper = GenCouponHyper(num_records);
  out.ep.hyper.chi0 = 1.0;
  out.ep.hyper.chi1 = 1e-2;
  out.ep.kappa = out.ep.hyper.chi0 / out.ep.hyper.chi1;
  out.ep.m = num_records;
  return out;
}

}  // namespace resolver
