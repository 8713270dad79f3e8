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

#include "resolver/random.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "resolver/common.hpp"

namespace resolver {

double Uniform01(Rng& rng) {
  // 53 random mantissa bits; never returns 1.
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

bool Bernoulli(Rng& rng, double p) {
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return Uniform01(rng) < p;
}

double GammaVariate(Rng& rng, double shape, double rate) {
  assert(shape > 0 && rate > 0);
  std::gamma_distribution<double> gamma(shape, 1.0 / rate);
  return gamma(rng);
}

double LogGammaVariate(Rng& rng, double shape) {
  assert(shape > 0);
  if (shape >= 1.0) {
    std::gamma_distribution<double> gamma(shape, 1.0);
    return std::log(gamma(rng));
  }
  // X = Y * U^(1/shape) with Y ~ Gamma(shape + 1).
  std::gamma_distribution<double> gamma(shape + 1.0, 1.0);
  const double u = 1.0 - Uniform01(rng);
  return std::log(gamma(rng)) + std::log(u) / shape;
}

double LogBetaVariate(Rng& rng, double a, double b) {
  const double lx = LogGammaVariate(rng, a);
  const double ly = LogGammaVariate(rng, b);
  return lx - LogAddExp(lx, ly);
}

double BetaVariate(Rng& rng, double a, double b) {
  return std::exp(LogBetaVariate(rng, a, b));
}

std::int64_t PoissonVariate(Rng& rng, double mean) {
  if (!(mean > 0)) return 0;
  std::poisson_distribution<std::int64_t> poisson(mean);
  return poisson(rng);
}

std::int64_t NegativeBinomialVariate(Rng& rng, double r, double p) {
  if (p >= 1.0 || r <= 0.0) return 0;
  const double lambda = GammaVariate(rng, r, p / (1.0 - p));
  return PoissonVariate(rng, lambda);
}

int SampleLogWeights(Rng& rng, std::span<const double> log_weights) {
  double max = kNegInf;
  for (double w : log_weights) max = std::max(max, w);
  if (max == kNegInf) return -1;
  double total = 0;
  for (double w : log_weights) total += std::exp(w - max);
  double u = Uniform01(rng) * total;
  int last = -1;
  for (int k = 0; k < static_cast<int>(log_weights.size()); ++k) {
    if (log_weights[k] == kNegInf) continue;
    last = k;
    u -= std::exp(log_weights[k] - max);
    if (u < 0) return k;
  }
  return last;
}

int SampleWeights(Rng& rng, std::span<const double> weights) {
  double total = 0;
  for (double w : weights) total += w;
  if (!(total > 0)) return -1;
  double u = Uniform01(rng) * total;
  int last = -1;
  for (int k = 0; k < static_cast<int>(weights.size()); ++k) {
    if (weights[k] <= 0) continue;
    last = k;
    u -= weights[k];
    if (u < 0) return k;
  }
  return last;
}

void LogDirichletVariate(Rng& rng, std::span<const double> alpha,
                         std::span<double> out) {
  assert(alpha.size() == out.size());
  double total = kNegInf;
  for (size_t k = 0; k < alpha.size(); ++k) {
    out[k] = LogGammaVariate(rng, alpha[k]);
    total = LogAddExp(total, out[k]);
  }
  for (double& v : out) v -= total;
}

AliasTable::AliasTable(std::span<const double> weights) {
  const int n = static_cast<int>(weights.size());
  prob_.assign(n, 0.0);
  alias_.assign(n, 0);
  double total = 0;
  for (double w : weights) total += w;
  std::vector<double> scaled(n);
  std::vector<int> small, large;
  for (int k = 0; k < n; ++k) {
    scaled[k] = weights[k] * n / total;
    (scaled[k] < 1.0 ? small : large).push_back(k);
  }
  while (!small.empty() && !large.empty()) {
    const int s = small.back();
    small.pop_back();
    const int l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  for (int k : large) prob_[k] = 1.0;
  // Leftovers from rounding.
  for (int k : small) prob_[k] = 1.0;
}

int AliasTable::Sample(Rng& rng) const {
  const double u = Uniform01(rng) * size();
  const int k = static_cast<int>(u);
  return (u - k) < prob_[k] ? k : alias_[k];
}

double LogAddExp(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log1p(std::exp(-std::fabs(a - b)));
}

double LogRising(double x, double n) {
  if (n == 0) return 0.0;
  return std::lgamma(x + n) - std::lgamma(x);
}

double LogFalling(double x, double n) {
  if (n == 0) return 0.0;
  if (n > x + 1) return kNegInf;
  const double rest = x - n + 1;
  if (rest <= 0) return kNegInf;
  return std::lgamma(x + 1) - std::lgamma(rest);
}

}  // namespace resolver
