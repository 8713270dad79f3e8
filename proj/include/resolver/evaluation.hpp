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

// Pairwise linkage metrics, posterior summaries and convergence checks.

#ifndef RESOLVER_EVALUATION_HPP_
#define RESOLVER_EVALUATION_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "resolver/common.hpp"

namespace resolver {

struct PairCounts {
  std::int64_t true_positives = 0;
  std::int64_t predicted_pairs = 0;
  std::int64_t true_pairs = 0;
};

struct MetricSample {
  double precision = 1.0;
  double recall = 1.0;
  double f1 = 1.0;
  Index num_entities = 0;
  std::int64_t iteration = 0;
};

struct PosteriorSummary {
  double median = 0.0;
  double lower = 0.0;  // 2.5% quantile
  double upper = 0.0;  // 97.5% quantile
};

// Linked-pair counts from the cluster contingency table.
PairCounts CountPairs(std::span<const Index> predicted,
                      std::span<const Index> truth);

// Precision is 1 when nothing is linked, recall is 1 when nothing should
// be. Throws InvalidInput on a length mismatch.
MetricSample PairwiseMetrics(std::span<const Index> predicted,
                             std::span<const Index> truth);

// Linear-interpolation quantile of unsorted values.
double Quantile(std::vector<double> values, double p);

// Median and equi-tailed 95% interval. Throws InvalidInput when empty.
PosteriorSummary Summarize(std::span<const double> samples);

// (E_hat - E) / E per sample.
std::vector<double> RelativeEntityError(std::span<const Index> num_entities,
                                        Index true_entities);

// Variance of the mean of a trace: batch-means estimate with batches of
// length floor(sqrt(n)), divided by n.
double BatchMeansVariance(std::span<const double> trace);

// Geweke statistic comparing the first and last segments of a trace.
// Empty when the trace is too short or has no variability.
std::optional<double> GewekeZ(std::span<const double> trace,
                              double first_frac = 0.1,
                              double last_frac = 0.5);

}  // namespace resolver

#endif  // RESOLVER_EVALUATION_HPP_
