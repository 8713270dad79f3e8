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

#include "resolver/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <unordered_set>

namespace resolver {
namespace {

std::int64_t Choose2(std::int64_t n) { return n * (n - 1) / 2; }

std::int64_t PairsWithin(std::span<const Index> links) {
  std::unordered_map<Index, std::int64_t> sizes;
  for (Index label : links) ++sizes[label];
  std::int64_t total = 0;
  for (const auto& [label, size] : sizes) total += Choose2(size);
  return total;
}

}  // namespace

PairCounts CountPairs(std::span<const Index> predicted,
                      std::span<const Index> truth) {
  if (predicted.size() != truth.size()) {
    throw InvalidInput("linkage arrays differ in length");
  }
  std::unordered_map<std::uint64_t, std::int64_t> cells;
  for (size_t i = 0; i < predicted.size(); ++i) {
    const std::uint64_t key =
        (static_cast<std::uint64_t>(static_cast<std::uint32_t>(predicted[i]))
         << 32) |
        static_cast<std::uint32_t>(truth[i]);
    ++cells[key];
  }
  PairCounts counts;
  for (const auto& [key, size] : cells) counts.true_positives += Choose2(size);
  counts.predicted_pairs = PairsWithin(predicted);
  counts.true_pairs = PairsWithin(truth);
  return counts;
}

MetricSample PairwiseMetrics(std::span<const Index> predicted,
                             std::span<const Index> truth) {
  const PairCounts counts = CountPairs(predicted, truth);
  MetricSample sample;
  sample.precision =
      counts.predicted_pairs == 0
          ? 1.0
          : static_cast<double>(counts.true_positives) / counts.predicted_pairs;
  sample.recall =
      counts.true_pairs == 0
          ? 1.0
          : static_cast<double>(counts.true_positives) / counts.true_pairs;
  const double denom = sample.precision + sample.recall;
  sample.f1 = denom > 0 ? 2.0 * sample.precision * sample.recall / denom : 0.0;
  std::unordered_set<Index> labels(predicted.begin(), predicted.end());
  sample.num_entities = static_cast<Index>(labels.size());
  return sample;
}

double Quantile(std::vector<double> values, double p) {
  if (values.empty()) throw InvalidInput("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (values.size() - 1) * p;
  const size_t lo = static_cast<size_t>(std::floor(h));
  const size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - lo) * (values[hi] - values[lo]);
}

PosteriorSummary Summarize(std::span<const double> samples) {
  if (samples.empty()) throw InvalidInput("cannot summarize zero samples");
  std::vector<double> values(samples.begin(), samples.end());
  PosteriorSummary summary;
  summary.median = Quantile(values, 0.5);
  summary.lower = Quantile(values, 0.025);
  summary.upper = Quantile(values, 0.975);
  return summary;
}

std::vector<double> RelativeEntityError(std::span<const Index> num_entities,
                                        Index true_entities) {
  if (true_entities <= 0) throw InvalidInput("true entity count must be > 0");
  std::vector<double> out;
  out.reserve(num_entities.size());
  for (Index e : num_entities) {
    out.push_back(static_cast<double>(e - true_entities) / true_entities);
  }
  return out;
}

double BatchMeansVariance(std::span<const double> trace) {
  const size_t n = trace.size();
  const size_t batch = static_cast<size_t>(std::floor(std::sqrt(n)));
  if (batch == 0) return std::nan("");
  const size_t num_batches = n / batch;
  if (num_batches < 2) return std::nan("");
  std::vector<double> means(num_batches, 0.0);
  for (size_t k = 0; k < num_batches; ++k) {
    for (size_t j = 0; j < batch; ++j) means[k] += trace[k * batch + j];
    means[k] /= batch;
  }
  double grand = 0.0;
  for (double m : means) grand += m;
  grand /= num_batches;
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  // Variance of a batch mean, scaled down to the variance of the
  // whole-segment mean.
  return ss / (num_batches - 1) / num_batches;
}

std::optional<double> GewekeZ(std::span<const double> trace,
                              double first_frac, double last_frac) {
  const size_t n = trace.size();
  if (n < 20) return std::nullopt;
  const size_t n1 = static_cast<size_t>(std::floor(first_frac * n));
  const size_t n2 = static_cast<size_t>(std::floor(last_frac * n));
  if (n1 < 2 || n2 < 2) return std::nullopt;
  const auto first = trace.first(n1);
  const auto last = trace.last(n2);
  auto mean = [](std::span<const double> s) {
    double total = 0.0;
    for (double v : s) total += v;
    return total / s.size();
  };
  const double var = BatchMeansVariance(first) + BatchMeansVariance(last);
  if (!(var > 0)) return std::nullopt;
  return (mean(first) - mean(last)) / std::sqrt(var);
}

}  // namespace resolver
