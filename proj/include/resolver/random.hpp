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

// Random variate generation on top of <random>. Every sampler entry point
// takes an explicit Rng so chains are reproducible from a single seed.

#ifndef RESOLVER_RANDOM_HPP_
#define RESOLVER_RANDOM_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace resolver {

using Rng = std::mt19937_64;

double Uniform01(Rng& rng);

bool Bernoulli(Rng& rng, double p);

// Gamma with shape/rate parameterization.
double GammaVariate(Rng& rng, double shape, double rate);

// log of a Gamma(shape, 1) variate. Stays finite for tiny shapes, where the
// variate itself underflows.
double LogGammaVariate(Rng& rng, double shape);

double BetaVariate(Rng& rng, double a, double b);

// log X for X ~ Beta(a, b); accurate when X is close to zero.
double LogBetaVariate(Rng& rng, double a, double b);

std::int64_t PoissonVariate(Rng& rng, double mean);

// Number of failures before r successes with success probability p,
// sampled as a Gamma-Poisson mixture. r may be non-integer.
std::int64_t NegativeBinomialVariate(Rng& rng, double r, double p);

// Index drawn with probability proportional to exp(log_weights[k]).
// Entries equal to -inf get zero mass. Returns -1 if all entries are -inf.
int SampleLogWeights(Rng& rng, std::span<const double> log_weights);

// Index drawn with probability proportional to weights[k] >= 0.
int SampleWeights(Rng& rng, std::span<const double> weights);

// Writes log of a Dirichlet(alpha) draw into out.
void LogDirichletVariate(Rng& rng, std::span<const double> alpha,
                         std::span<double> out);

// Walker/Vose alias table: O(n) construction, O(1) draws.
class AliasTable {
 public:
  AliasTable() = default;
  explicit AliasTable(std::span<const double> weights);

  int Sample(Rng& rng) const;
  int size() const { return static_cast<int>(prob_.size()); }

 private:
  std::vector<double> prob_;
  std::vector<int> alias_;
};

// log(exp(a) + exp(b)) without overflow.
double LogAddExp(double a, double b);

// log of x^(n) = x (x+1) ... (x+n-1), via log-gamma.
double LogRising(double x, double n);

// log of x (x-1) ... (x-n+1), via log-gamma.
double LogFalling(double x, double n);

}  // namespace resolver

#endif  // RESOLVER_RANDOM_HPP_
