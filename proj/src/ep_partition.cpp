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

#include "resolver/ep_partition.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace resolver {
namespace {

// Shared denominator of the seating rule with n records already seated.
double LogSeatDenominator(const EpPrior& ep, Index n) {
  switch (ep.regime) {
    case EpRegime::kPitmanYor:
    case EpRegime::kEwens:
      return std::log(n + ep.alpha);
    case EpRegime::kGenCoupon:
      return std::log(n + static_cast<double>(ep.m) * ep.kappa);
    case EpRegime::kCouponFixed:
      return std::log(static_cast<double>(ep.m));
  }
  return 0.0;
}

double ClampOpenUnit(double x) {
  if (x <= 0.0) return std::nextafter(0.0, 1.0);
  if (x >= 1.0) return std::nextafter(1.0, 0.0);
  return x;
}

}  // namespace

PartitionView ViewOf(std::span<const Index> links) {
  PartitionView view;
  std::unordered_map<Index, int> slot;
  for (Index label : links) {
    auto [it, inserted] = slot.emplace(label, view.num_clusters());
    if (inserted) view.sizes.push_back(0);
    ++view.sizes[it->second];
  }
  view.total = static_cast<Index>(links.size());
  return view;
}

PartitionView ViewOfSizes(std::vector<Index> sizes) {
  PartitionView view;
  view.sizes = std::move(sizes);
  view.total = 0;
  for (Index s : view.sizes) view.total += s;
  return view;
}

double LogExistingWeight(const EpPrior& ep, Index cluster_size) {
  switch (ep.regime) {
    case EpRegime::kPitmanYor:
    case EpRegime::kEwens:
      return std::log(cluster_size - ep.sigma);
    case EpRegime::kGenCoupon:
      return std::log(cluster_size + ep.kappa);
    case EpRegime::kCouponFixed:
      return 0.0;
  }
  return kNegInf;
}

double LogNewWeight(const EpPrior& ep, Index num_clusters) {
  switch (ep.regime) {
    case EpRegime::kPitmanYor:
    case EpRegime::kEwens:
      return std::log(ep.alpha + num_clusters * ep.sigma);
    case EpRegime::kGenCoupon:
      if (ep.m <= num_clusters) return kNegInf;
      return std::log(ep.kappa) +
             std::log(static_cast<double>(ep.m - num_clusters));
    case EpRegime::kCouponFixed:
      if (ep.m <= num_clusters) return kNegInf;
      return std::log(static_cast<double>(ep.m - num_clusters));
  }
  return kNegInf;
}

std::vector<double> SeatProbabilities(const PartitionView& view,
                                      const EpPrior& ep) {
  std::vector<double> probs;
  probs.reserve(view.sizes.size() + 1);
  const double log_denominator = LogSeatDenominator(ep, view.total);
  for (Index size : view.sizes) {
    probs.push_back(std::exp(LogExistingWeight(ep, size) - log_denominator));
  }
  probs.push_back(
      std::exp(LogNewWeight(ep, view.num_clusters()) - log_denominator));
  return probs;
}

std::vector<Index> SamplePartition(Index n, const EpPrior& ep, Rng& rng) {
  if (n < 1) throw InvalidInput("partition size must be positive");
  std::vector<Index> links(n);
  std::vector<Index> sizes;
  std::vector<double> log_weights;
  for (Index i = 0; i < n; ++i) {
    log_weights.clear();
    for (Index size : sizes) log_weights.push_back(LogExistingWeight(ep, size));
    log_weights.push_back(LogNewWeight(ep, static_cast<Index>(sizes.size())));
    const int k = SampleLogWeights(rng, log_weights);
    if (k == static_cast<int>(sizes.size())) sizes.push_back(0);
    ++sizes[k];
    links[i] = k;
  }
  return links;
}

double LogSequentialProb(std::span<const Index> links, const EpPrior& ep) {
  std::unordered_map<Index, int> slot;
  std::vector<Index> sizes;
  double total = 0.0;
  Index seated = 0;
  for (Index label : links) {
    auto it = slot.find(label);
    double log_weight;
    if (it == slot.end()) {
      log_weight = LogNewWeight(ep, static_cast<Index>(sizes.size()));
      slot.emplace(label, static_cast<int>(sizes.size()));
      sizes.push_back(1);
    } else {
      log_weight = LogExistingWeight(ep, sizes[it->second]);
      ++sizes[it->second];
    }
    total += log_weight - LogSeatDenominator(ep, seated);
    ++seated;
  }
  return total;
}

double LogGenCouponEppf(const PartitionView& view, double kappa,
                        std::int64_t m) {
  const int e = view.num_clusters();
  if (e > m) return kNegInf;
  double total = LogFalling(static_cast<double>(m), e) -
                 LogRising(static_cast<double>(m) * kappa, view.total);
  for (Index size : view.sizes) total += LogRising(kappa, size);
  return total;
}

double LogPartitionProb(std::span<const Index> links, const EpPrior& ep) {
  if (ep.regime == EpRegime::kGenCoupon) {
    return LogGenCouponEppf(ViewOf(links), ep.kappa, ep.m);
  }
  return LogSequentialProb(links, ep);
}

EpPrior UpdatePyParams(const PartitionView& view, const EpPrior& ep,
                       Rng& rng) {
  if (ep.regime != EpRegime::kPitmanYor && ep.regime != EpRegime::kEwens) {
    throw InvalidInput("UpdatePyParams needs a Pitman-Yor or Ewens prior");
  }
  const Index n = view.total;
  if (n < 2) return ep;
  const int e = view.num_clusters();
  const double log_w = LogBetaVariate(rng, ep.alpha + 1.0, n - 1.0);

  double sum_u = 0;
  for (int k = 1; k < e; ++k) {
    sum_u += Bernoulli(rng, ep.alpha / (ep.alpha + ep.sigma * k)) ? 1 : 0;
  }
  double sum_not_v = 0;
  for (Index size : view.sizes) {
    for (Index j = 1; j < size; ++j) {
      sum_not_v += Bernoulli(rng, (j - 1.0) / (j - ep.sigma)) ? 0 : 1;
    }
  }

  EpPrior next = ep;
  if (ep.regime == EpRegime::kPitmanYor) {
    next.sigma = ClampOpenUnit(BetaVariate(rng, ep.hyper.zeta0 + (e - 1) - sum_u,
                                           ep.hyper.zeta1 + sum_not_v));
  }
  next.alpha = GammaVariate(rng, ep.hyper.chi0 + sum_u, ep.hyper.chi1 - log_w);
  return next;
}

EpPrior UpdateGenCouponParams(const PartitionView& view, const EpPrior& ep,
                              Rng& rng) {
  if (ep.regime != EpRegime::kGenCoupon) {
    throw InvalidInput("UpdateGenCouponParams needs a generalized coupon prior");
  }
  const Index n = view.total;
  if (n < 2) return ep;
  const int e = view.num_clusters();
  const double log_w =
      LogBetaVariate(rng, static_cast<double>(ep.m) * ep.kappa + 1.0, n - 1.0);

  double sum_v = 0;
  for (Index size : view.sizes) {
    for (Index j = 1; j < size; ++j) {
      sum_v += Bernoulli(rng, ep.kappa / (ep.kappa + j)) ? 1 : 0;
    }
  }

  EpPrior next = ep;
  // p = 1 - (1 - nu) w^kappa, computed without cancellation.
  const double p = -std::expm1(std::log1p(-ep.hyper.nu) + ep.kappa * log_w);
  next.m = e + NegativeBinomialVariate(rng, ep.hyper.r + e - 1.0, p);
  next.kappa = GammaVariate(rng, ep.hyper.chi0 + (e - 1) + sum_v,
                            ep.hyper.chi1 - static_cast<double>(next.m) * log_w);
  return next;
}

EpPrior UpdateEpParams(const PartitionView& view, const EpPrior& ep,
                       Rng& rng) {
  switch (ep.regime) {
    case EpRegime::kPitmanYor:
    case EpRegime::kEwens:
      return UpdatePyParams(view, ep, rng);
    case EpRegime::kGenCoupon:
      return UpdateGenCouponParams(view, ep, rng);
    case EpRegime::kCouponFixed:
      return ep;
  }
  return ep;
}

EpPrior SampleEpPrior(const EpPrior& ep, Rng& rng) {
  EpPrior next = ep;
  switch (ep.regime) {
    case EpRegime::kPitmanYor:
      next.sigma =
          ClampOpenUnit(BetaVariate(rng, ep.hyper.zeta0, ep.hyper.zeta1));
      next.alpha = GammaVariate(rng, ep.hyper.chi0, ep.hyper.chi1);
      break;
    case EpRegime::kEwens:
      next.alpha = GammaVariate(rng, ep.hyper.chi0, ep.hyper.chi1);
      break;
    case EpRegime::kGenCoupon:
      next.kappa = GammaVariate(rng, ep.hyper.chi0, ep.hyper.chi1);
      next.m = 1 + NegativeBinomialVariate(rng, ep.hyper.r, ep.hyper.nu);
      break;
    case EpRegime::kCouponFixed:
      break;
  }
  return next;
}

}  // namespace resolver
