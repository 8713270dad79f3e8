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

#include "resolver/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "resolver/ep_partition.hpp"

namespace resolver {
namespace {

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

bool IsBlink(const ModelState& state) {
  return state.context->model == DistortionModel::kBlink;
}

// sum_{j=0}^{n-1} log(c + j).
double LogRisingSum(double c, Index n) {
  if (n <= 16) {
    double total = 0.0;
    for (Index j = 0; j < n; ++j) total += std::log(c + j);
    return total;
  }
  return LogRising(c, n);
}

// P(z = 1 | x = y) under the blink preset.
double BlinkMatchDistortionProb(double theta, double psi_self) {
  const double hit = theta * psi_self;
  return hit / (hit + 1.0 - theta);
}

void ClearNewMass(ModelState& state, int a) {
  std::fill(state.log_new_mass[a].begin(), state.log_new_mass[a].end(),
            kUnset);
}

double LogNewMass(const ModelState& state, int a, ValueId x) {
  double& cached = state.log_new_mass[a][x];
  if (!std::isnan(cached)) return cached;
  const AttributeModel& attr = state.context->attributes[a];
  const Eigen::VectorXd& log_g = state.log_g[a];
  double total = kNegInf;
  attr.psi.ForEachTruth(x, [&](ValueId y, double p) {
    const double omega = attr.omega[y];
    if (omega <= 0) return;
    total = LogAddExp(total, log_g[y] + std::log(omega) + std::log(p));
  });
  cached = total;
  return total;
}

// Resets the indicators of e's members on attribute a after y_ea changed.
void RefreshEntityIndicators(ModelState& state, Index e, int a, Rng* rng) {
  const Entity& ent = state.entities[e];
  const RecordTable& table = state.table();
  const ValueId y = ent.values[a];
  for (Index i : ent.members) {
    const ValueId x = table.value(i, a);
    if (x != y) {
      state.distorted(i, a) = 1;
    } else if (IsBlink(state)) {
      const double p = BlinkMatchDistortionProb(
          state.theta(table.source(i), a),
          state.context->attributes[a].psi.Prob(y, y));
      state.distorted(i, a) = Bernoulli(*rng, p) ? 1 : 0;
    } else {
      state.distorted(i, a) = 0;
    }
  }
}

}  // namespace

ModelState Initialize(std::shared_ptr<const ModelContext> context,
                      const EpPrior& ep, Rng& rng) {
  ep.Validate();
  ModelState state;
  state.context = std::move(context);
  const RecordTable& table = state.table();
  const Index n = table.num_records();
  const int num_attributes = table.num_attributes();
  const int num_sources = table.num_sources();

  state.ep = ep;
  if (ep.regime == EpRegime::kGenCoupon || ep.regime == EpRegime::kCouponFixed) {
    if (state.ep.m < n) {
      if (ep.regime == EpRegime::kCouponFixed) {
        throw InvalidInput("fixed coupon prior needs m >= number of records");
      }
      state.ep.m = n;
    }
  }

  std::vector<int> domain_sizes(num_attributes);
  for (int a = 0; a < num_attributes; ++a) {
    domain_sizes[a] = table.spec(a).domain_size();
  }
  state.inverted.Reset(domain_sizes, n);

  state.links.resize(n);
  state.entities.resize(n);
  state.member_pos.assign(n, 0);
  state.occupied.resize(n);
  state.occupied_pos.resize(n);
  for (Index i = 0; i < n; ++i) {
    state.links[i] = i;
    Entity& ent = state.entities[i];
    ent.values.resize(num_attributes);
    ent.counts.resize(num_attributes);
    ent.members = {i};
    for (int a = 0; a < num_attributes; ++a) {
      ent.values[a] = table.value(i, a);
      ent.counts[a] = {{table.value(i, a), 1}};
      state.inverted.Insert(a, ent.values[a], i);
    }
    state.occupied[i] = i;
    state.occupied_pos[i] = i;
  }
  state.distorted.setZero(n, num_attributes);

  state.rho.resize(num_attributes);
  state.theta.resize(num_sources, num_attributes);
  state.log_g.resize(num_attributes);
  state.log_new_mass.resize(num_attributes);
  for (int a = 0; a < num_attributes; ++a) {
    const AttributeSpec& spec = table.spec(a);
    state.rho[a] = spec.rho_prior.shape / spec.rho_prior.rate;
    for (int s = 0; s < num_sources; ++s) {
      const BetaPrior& b = spec.distortion_prior[s];
      state.theta(s, a) = b.shape0 / (b.shape0 + b.shape1);
    }
    state.log_g[a] = spec.entity_base.array().log();
    state.log_new_mass[a].assign(spec.domain_size(), kUnset);
  }
  UpdateTheta(state, rng);
  for (int a = 0; a < num_attributes; ++a) UpdateEntityDistribution(state, a, rng);
  return state;
}

void RefreshIndicators(ModelState& state) {
  const RecordTable& table = state.table();
  for (Index i = 0; i < table.num_records(); ++i) {
    for (int a = 0; a < table.num_attributes(); ++a) {
      state.distorted(i, a) = table.value(i, a) != state.truth(i, a) ? 1 : 0;
    }
  }
}

void ResampleIndicators(ModelState& state, Rng& rng) {
  for (Index e : state.occupied) {
    for (int a = 0; a < state.table().num_attributes(); ++a) {
      RefreshEntityIndicators(state, e, a, &rng);
    }
  }
}

double AuxiliaryCoinProbability(double theta, double omega) {
  const double keep = omega * (1.0 - theta);
  return keep / (keep + 1.0 - omega);
}

void UpdateTheta(ModelState& state, Rng& rng) {
  const RecordTable& table = state.table();
  const int num_sources = table.num_sources();
  const int num_attributes = table.num_attributes();
  const bool blink = IsBlink(state);
  Eigen::MatrixXd hits = Eigen::MatrixXd::Zero(num_sources, num_attributes);
  Eigen::MatrixXd misses = Eigen::MatrixXd::Zero(num_sources, num_attributes);
  for (Index i = 0; i < table.num_records(); ++i) {
    const Index s = table.source(i);
    for (int a = 0; a < num_attributes; ++a) {
      if (state.distorted(i, a)) {
        hits(s, a) += 1;
        continue;
      }
      // q_ia = 1 is forced when z_ia = 1.
      bool q = true;
      if (!blink) {
        const double omega =
            state.context->attributes[a].omega[state.truth(i, a)];
        q = Bernoulli(rng, AuxiliaryCoinProbability(state.theta(s, a), omega));
      }
      if (q) misses(s, a) += 1;
    }
  }
  for (int s = 0; s < num_sources; ++s) {
    for (int a = 0; a < num_attributes; ++a) {
      const BetaPrior& b = table.spec(a).distortion_prior[s];
      double theta =
          BetaVariate(rng, b.shape0 + hits(s, a), b.shape1 + misses(s, a));
      theta = std::clamp(theta, std::nextafter(0.0, 1.0),
                         std::nextafter(1.0, 0.0));
      state.theta(s, a) = theta;
    }
  }
}

std::vector<std::pair<ValueId, double>> EntityAttributeLogPmf(
    const ModelState& state, Index e, int a) {
  const Entity& ent = state.entities[e];
  const RecordTable& table = state.table();
  const AttributeModel& attr = state.context->attributes[a];
  const Eigen::VectorXd& log_g = state.log_g[a];
  const bool blink = IsBlink(state);
  const double rho = state.rho[a];
  std::vector<std::pair<ValueId, double>> pmf;

  if (ent.size() == 0) {
    for (ValueId y = 0; y < log_g.size(); ++y) pmf.push_back({y, log_g[y]});
    return pmf;
  }

  // The feasible support is contained in the range query of any one linked
  // value; start from the smallest.
  const auto& counts = ent.counts[a];
  ValueId pivot = counts[0].value;
  for (const ValueCount& vc : counts) {
    if (attr.index.Query(vc.value).size() < attr.index.Query(pivot).size()) {
      pivot = vc.value;
    }
  }

  double total_log_theta = 0.0;
  for (Index i : ent.members) {
    total_log_theta += std::log(state.theta(table.source(i), a));
  }

  for (const Neighbor& nb : attr.index.Query(pivot)) {
    const ValueId y = nb.value;
    double lp = log_g[y];
    if (lp == kNegInf) continue;
    bool feasible = true;
    if (blink) {
      for (Index i : ent.members) {
        const ValueId x = table.value(i, a);
        const double theta = state.theta(table.source(i), a);
        const double mass =
            (x == y ? 1.0 - theta : 0.0) + theta * attr.psi.Prob(x, y);
        if (mass <= 0) {
          feasible = false;
          break;
        }
        lp += std::log(mass);
      }
    } else {
      Index n_match = 0;
      for (const ValueCount& vc : counts) {
        if (vc.value == y) {
          n_match = vc.count;
          continue;
        }
        const double p = attr.psi.Prob(vc.value, y);
        if (p <= 0) {
          feasible = false;
          break;
        }
        lp += LogRisingSum(rho * p, vc.count);
      }
      if (!feasible) continue;
      const Index n_distorted = ent.size() - n_match;
      lp -= LogRisingSum(rho, n_distorted);
      const double omega = attr.omega[y];
      double match_log_theta = 0.0;
      if (n_match > 0) {
        for (Index i : ent.members) {
          if (table.value(i, a) != y) continue;
          const double theta = state.theta(table.source(i), a);
          match_log_theta += std::log(theta);
          lp += std::log1p(-theta * omega);
        }
      }
      if (n_distorted > 0) {
        if (omega <= 0) continue;
        lp += total_log_theta - match_log_theta + n_distorted * std::log(omega);
      }
    }
    if (feasible) pmf.push_back({y, lp});
  }
  return pmf;
}

void UpdateEntityAttribute(ModelState& state, Index e, int a, Rng& rng) {
  const auto pmf = EntityAttributeLogPmf(state, e, a);
  std::vector<double> log_weights(pmf.size());
  for (size_t k = 0; k < pmf.size(); ++k) log_weights[k] = pmf[k].second;
  const int k = SampleLogWeights(rng, log_weights);
  Entity& ent = state.entities[e];
  const ValueId old_value = ent.values[a];
  // An empty support can only arise from inconsistent inputs; keep y.
  const ValueId new_value = k < 0 ? old_value : pmf[k].first;
  if (new_value != old_value) {
    state.inverted.Remove(a, old_value, e);
    state.inverted.Insert(a, new_value, e);
    ent.values[a] = new_value;
  }
  if (new_value != old_value || IsBlink(state)) {
    RefreshEntityIndicators(state, e, a, &rng);
  }
}

void DetachRecord(ModelState& state, Index i) {
  const RecordTable& table = state.table();
  const Index e = state.links[i];
  Entity& ent = state.entities[e];
  const Index pos = state.member_pos[i];
  const Index last = ent.members.back();
  ent.members[pos] = last;
  state.member_pos[last] = pos;
  ent.members.pop_back();
  for (int a = 0; a < table.num_attributes(); ++a) {
    ent.RemoveValue(a, table.value(i, a));
  }
  if (ent.size() == 0) {
    for (int a = 0; a < table.num_attributes(); ++a) {
      state.inverted.Remove(a, ent.values[a], e);
    }
    const Index slot = state.occupied_pos[e];
    const Index moved = state.occupied.back();
    state.occupied[slot] = moved;
    state.occupied_pos[moved] = slot;
    state.occupied.pop_back();
    state.occupied_pos[e] = -1;
    state.free_labels.push_back(e);
  }
  state.links[i] = -1;
}

std::vector<LinkOption> LinkOptions(const ModelState& state, Index i,
                                    bool use_index) {
  const RecordTable& table = state.table();
  const int num_attributes = table.num_attributes();
  const bool blink = IsBlink(state);
  std::vector<LinkOption> options;

  int pivot = -1;
  if (use_index) {
    size_t best = 0;
    for (int a = 0; a < num_attributes; ++a) {
      if (state.distorted(i, a)) continue;
      const size_t size = state.inverted.Lookup(a, table.value(i, a)).size();
      if (pivot < 0 || size < best) {
        pivot = a;
        best = size;
      }
    }
  }
  const std::span<const Index> candidates =
      pivot >= 0 ? state.inverted.Lookup(pivot, table.value(i, pivot))
                 : std::span<const Index>(state.occupied);

  for (Index e : candidates) {
    const Entity& ent = state.entities[e];
    double lw = LogExistingWeight(state.ep, ent.size());
    for (int a = 0; a < num_attributes && lw != kNegInf; ++a) {
      const ValueId x = table.value(i, a);
      const ValueId y = ent.values[a];
      if (!state.distorted(i, a)) {
        if (x != y) lw = kNegInf;
        continue;
      }
      const AttributeModel& attr = state.context->attributes[a];
      const double p = attr.psi.Prob(x, y);
      if (blink) {
        lw = p > 0 ? lw + std::log(p) : kNegInf;
        continue;
      }
      if (x == y || p <= 0 || attr.omega[y] <= 0) {
        lw = kNegInf;
        continue;
      }
      const double rho = state.rho[a];
      const Index n_distorted = ent.size() - ent.Count(a, y);
      lw += std::log(attr.omega[y]) + std::log(rho * p + ent.Count(a, x)) -
            std::log(rho + n_distorted);
    }
    if (lw != kNegInf) options.push_back({e, lw});
  }

  double lw = LogNewWeight(state.ep, state.num_entities());
  for (int a = 0; a < num_attributes && lw != kNegInf; ++a) {
    const ValueId x = table.value(i, a);
    lw += state.distorted(i, a) ? LogNewMass(state, a, x) : state.log_g[a][x];
  }
  if (lw != kNegInf) options.push_back({-1, lw});
  return options;
}

void AttachRecord(ModelState& state, Index i, Index label) {
  const RecordTable& table = state.table();
  Entity& ent = state.entities[label];
  state.member_pos[i] = ent.size();
  ent.members.push_back(i);
  for (int a = 0; a < table.num_attributes(); ++a) {
    ent.AddValue(a, table.value(i, a));
  }
  state.links[i] = label;
}

void AttachNew(ModelState& state, Index i, Rng& rng) {
  const RecordTable& table = state.table();
  const int num_attributes = table.num_attributes();
  if (state.free_labels.empty()) {
    throw std::logic_error("no free entity label");
  }
  const Index label = state.free_labels.back();
  state.free_labels.pop_back();
  Entity& ent = state.entities[label];
  ent.values.resize(num_attributes);
  ent.counts.resize(num_attributes);

  std::vector<ValueId> truths;
  std::vector<double> log_weights;
  for (int a = 0; a < num_attributes; ++a) {
    const ValueId x = table.value(i, a);
    ValueId y = x;
    if (state.distorted(i, a)) {
      const AttributeModel& attr = state.context->attributes[a];
      truths.clear();
      log_weights.clear();
      attr.psi.ForEachTruth(x, [&](ValueId v, double p) {
        if (attr.omega[v] <= 0) return;
        truths.push_back(v);
        log_weights.push_back(state.log_g[a][v] + std::log(attr.omega[v]) +
                              std::log(p));
      });
      const int k = SampleLogWeights(rng, log_weights);
      if (k < 0) throw NumericFailure("new entity has no feasible value");
      y = truths[k];
    }
    ent.values[a] = y;
    ent.counts[a].clear();
    state.inverted.Insert(a, y, label);
  }
  state.occupied_pos[label] = static_cast<Index>(state.occupied.size());
  state.occupied.push_back(label);
  AttachRecord(state, i, label);
}

void UpdateLink(ModelState& state, Index i, Rng& rng) {
  DetachRecord(state, i);
  const std::vector<LinkOption> options = LinkOptions(state, i, true);
  std::vector<double> log_weights(options.size());
  for (size_t k = 0; k < options.size(); ++k) {
    log_weights[k] = options[k].log_weight;
  }
  const int k = SampleLogWeights(rng, log_weights);
  if (k < 0) {
    throw NumericFailure("record " + std::to_string(i) +
                         " has no feasible entity");
  }
  if (options[k].label < 0) {
    AttachNew(state, i, rng);
  } else {
    AttachRecord(state, i, options[k].label);
  }
}

RhoData CollectRhoData(const ModelState& state, int a) {
  RhoData data;
  const AttributeModel& attr = state.context->attributes[a];
  for (Index e : state.occupied) {
    const Entity& ent = state.entities[e];
    const ValueId y = ent.values[a];
    Index distorted = 0;
    for (const ValueCount& vc : ent.counts[a]) {
      if (vc.value == y) continue;
      distorted += vc.count;
      data.terms.push_back({attr.psi.Prob(vc.value, y), vc.count});
    }
    if (distorted > 0) data.distorted_totals.push_back(distorted);
  }
  return data;
}

double SampleRhoConditional(double rho, const RhoData& data,
                            const GammaPrior& prior, Rng& rng) {
  double sum_log_w = 0.0;
  for (Index total : data.distorted_totals) {
    sum_log_w += LogBetaVariate(rng, rho, total);
  }
  double sum_u = 0.0;
  for (const auto& [psi, count] : data.terms) {
    const double c = rho * psi;
    for (Index j = 1; j <= count; ++j) {
      sum_u += Bernoulli(rng, c / (j - 1 + c)) ? 1 : 0;
    }
  }
  return GammaVariate(rng, prior.shape + sum_u, prior.rate - sum_log_w);
}

void UpdateRho(ModelState& state, int a, Rng& rng) {
  const RhoData data = CollectRhoData(state, a);
  state.rho[a] = SampleRhoConditional(state.rho[a], data,
                                      state.table().spec(a).rho_prior, rng);
}

void UpdateEntityDistribution(ModelState& state, int a, Rng& rng) {
  const AttributeSpec& spec = state.table().spec(a);
  const int d = spec.domain_size();
  std::vector<double> alpha(d);
  for (ValueId v = 0; v < d; ++v) {
    alpha[v] = spec.entity_concentration * spec.entity_base[v] +
               static_cast<double>(state.inverted.Lookup(a, v).size());
  }
  Eigen::VectorXd& log_g = state.log_g[a];
  log_g.resize(d);
  for (ValueId v = 0; v < d; ++v) {
    log_g[v] = alpha[v] > 0 ? 0.0 : kNegInf;
  }
  // Zero-mass values stay at -inf; the rest get a Dirichlet draw.
  std::vector<double> positive_alpha, draw;
  for (ValueId v = 0; v < d; ++v) {
    if (alpha[v] > 0) positive_alpha.push_back(alpha[v]);
  }
  draw.resize(positive_alpha.size());
  LogDirichletVariate(rng, positive_alpha, draw);
  size_t k = 0;
  for (ValueId v = 0; v < d; ++v) {
    if (alpha[v] > 0) log_g[v] = draw[k++];
  }
  ClearNewMass(state, a);
}

void UpdateEpParameters(ModelState& state, Rng& rng) {
  std::vector<Index> sizes;
  sizes.reserve(state.occupied.size());
  for (Index e : state.occupied) sizes.push_back(state.entities[e].size());
  state.ep = UpdateEpParams(ViewOfSizes(std::move(sizes)), state.ep, rng);
}

void Sweep(ModelState& state, const RunConfig& config, Rng& rng) {
  const RecordTable& table = state.table();
  const int num_attributes = table.num_attributes();
  const bool blink = IsBlink(state);

  if (blink) {
    ResampleIndicators(state, rng);
  } else {
    RefreshIndicators(state);
  }
  if (config.update_theta) UpdateTheta(state, rng);

  std::vector<Index> entities = state.occupied;
  if (config.random_scan) std::shuffle(entities.begin(), entities.end(), rng);
  for (Index e : entities) {
    for (int a = 0; a < num_attributes; ++a) {
      UpdateEntityAttribute(state, e, a, rng);
    }
  }

  std::vector<Index> records(table.num_records());
  std::iota(records.begin(), records.end(), 0);
  if (config.random_scan) std::shuffle(records.begin(), records.end(), rng);
  for (Index i : records) UpdateLink(state, i, rng);

  if (config.update_rho && !blink) {
    for (int a = 0; a < num_attributes; ++a) UpdateRho(state, a, rng);
  }
  if (config.update_ep) UpdateEpParameters(state, rng);
  if (config.update_g) {
    for (int a = 0; a < num_attributes; ++a) {
      UpdateEntityDistribution(state, a, rng);
    }
  }
}

std::vector<std::string> ScalarNames(const ModelState& state) {
  const RecordTable& table = state.table();
  std::vector<std::string> names = {"num_entities"};
  for (int a = 0; a < table.num_attributes(); ++a) {
    const std::string& attr = table.spec(a).name;
    for (int s = 0; s < table.num_sources(); ++s) {
      names.push_back(table.num_sources() == 1
                          ? "theta." + attr
                          : "theta." + attr + "." + std::to_string(s));
    }
  }
  for (int a = 0; a < table.num_attributes(); ++a) {
    names.push_back("rho." + table.spec(a).name);
  }
  for (int a = 0; a < table.num_attributes(); ++a) {
    names.push_back("distortion." + table.spec(a).name);
  }
  switch (state.ep.regime) {
    case EpRegime::kPitmanYor:
      names.push_back("sigma");
      names.push_back("alpha");
      break;
    case EpRegime::kEwens:
      names.push_back("alpha");
      break;
    case EpRegime::kGenCoupon:
      names.push_back("kappa");
      names.push_back("m");
      break;
    case EpRegime::kCouponFixed:
      names.push_back("m");
      break;
  }
  return names;
}

std::vector<double> ScalarValues(const ModelState& state) {
  const RecordTable& table = state.table();
  std::vector<double> values = {static_cast<double>(state.num_entities())};
  for (int a = 0; a < table.num_attributes(); ++a) {
    for (int s = 0; s < table.num_sources(); ++s) {
      values.push_back(state.theta(s, a));
    }
  }
  for (int a = 0; a < table.num_attributes(); ++a) {
    values.push_back(state.rho[a]);
  }
  const double n = table.num_records();
  for (int a = 0; a < table.num_attributes(); ++a) {
    values.push_back(state.distorted.col(a).cast<double>().sum() / n);
  }
  switch (state.ep.regime) {
    case EpRegime::kPitmanYor:
      values.push_back(state.ep.sigma);
      values.push_back(state.ep.alpha);
      break;
    case EpRegime::kEwens:
      values.push_back(state.ep.alpha);
      break;
    case EpRegime::kGenCoupon:
      values.push_back(state.ep.kappa);
      values.push_back(static_cast<double>(state.ep.m));
      break;
    case EpRegime::kCouponFixed:
      values.push_back(static_cast<double>(state.ep.m));
      break;
  }
  return values;
}

PosteriorChain RunChainFrom(ModelState& state, const RunConfig& config,
                            Rng& rng, const SampleObserver& observer) {
  config.Validate();
  PosteriorChain chain;
  const std::vector<std::string> all_names = ScalarNames(state);
  std::vector<int> keep;
  if (config.monitored.empty()) {
    keep.resize(all_names.size());
    std::iota(keep.begin(), keep.end(), 0);
  } else {
    for (const std::string& name : config.monitored) {
      auto it = std::find(all_names.begin(), all_names.end(), name);
      if (it == all_names.end()) {
        throw InvalidInput("unknown monitored scalar '" + name + "'");
      }
      keep.push_back(static_cast<int>(it - all_names.begin()));
    }
  }
  for (int k : keep) chain.scalar_names.push_back(all_names[k]);

  std::int64_t sample_index = 0;
  std::vector<double> monitored(keep.size());
  for (std::int64_t iteration = 1; iteration <= config.iterations;
       ++iteration) {
    Sweep(state, config, rng);
    if (config.check_interval > 0 && iteration % config.check_interval == 0) {
      const auto problems = ValidateState(state);
      if (!problems.empty()) {
        throw std::logic_error("state invariant violated: " + problems[0]);
      }
    }
    if (iteration <= config.burn_in ||
        (iteration - config.burn_in) % config.thin != 0) {
      continue;
    }
    const std::vector<double> values = ScalarValues(state);
    for (size_t k = 0; k < keep.size(); ++k) {
      monitored[k] = values[keep[k]];
      if (!std::isfinite(monitored[k])) {
        throw NumericFailure("scalar '" + chain.scalar_names[k] +
                             "' is not finite at iteration " +
                             std::to_string(iteration));
      }
    }
    if (observer) {
      observer(sample_index, iteration, state, monitored);
    } else {
      chain.iterations.push_back(iteration);
      chain.links.push_back(CanonicalLinks(state.links));
      chain.scalars.push_back(monitored);
    }
    ++sample_index;
  }
  return chain;
}

PosteriorChain RunChain(std::shared_ptr<const ModelContext> context,
                        const EpPrior& ep, const RunConfig& config,
                        const SampleObserver& observer) {
  config.Validate();
  if (context->model != config.distortion_model) {
    throw InvalidInput("context was built for a different distortion model");
  }
  Rng rng(config.seed);
  ModelState state = Initialize(std::move(context), ep, rng);
  return RunChainFrom(state, config, rng, observer);
}

}  // namespace resolver
