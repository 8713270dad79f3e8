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

// Ewens-Pitman random partitions: sequential seating rule, exact partition
// probabilities and auxiliary-variable updates of the prior parameters.

#ifndef RESOLVER_EP_PARTITION_HPP_
#define RESOLVER_EP_PARTITION_HPP_

#include <span>
#include <vector>

#include "resolver/common.hpp"
#include "resolver/model.hpp"
#include "resolver/random.hpp"

namespace resolver {

struct PartitionView {
  std::vector<Index> sizes;
  Index total = 0;

  int num_clusters() const { return static_cast<int>(sizes.size()); }
};

// Cluster sizes of a linkage array, in order of first appearance.
PartitionView ViewOf(std::span<const Index> links);
PartitionView ViewOfSizes(std::vector<Index> sizes);

// Unnormalized log weights of the seating rule. The shared denominator
// N + alpha is omitted.
double LogExistingWeight(const EpPrior& ep, Index cluster_size);
double LogNewWeight(const EpPrior& ep, Index num_clusters);

// Probability of joining each existing cluster, followed by the probability
// of opening a new one.
std::vector<double> SeatProbabilities(const PartitionView& view,
                                      const EpPrior& ep);

// Linkage array drawn by seating N records one at a time. Labels are
// numbered in order of first appearance.
std::vector<Index> SamplePartition(Index n, const EpPrior& ep, Rng& rng);

// Log probability of the partition. Uses the closed form for the
// generalized coupon regime and the sequential product otherwise.
double LogPartitionProb(std::span<const Index> links, const EpPrior& ep);

// Product of seating probabilities in record order.
double LogSequentialProb(std::span<const Index> links, const EpPrior& ep);

// (m)_E falling / (m kappa)_N rising * prod_e (kappa)_{N_e} rising.
double LogGenCouponEppf(const PartitionView& view, double kappa,
                        std::int64_t m);

// Auxiliary-variable Gibbs update of (sigma, alpha); Ewens keeps sigma at 0.
// Returns ep unchanged when N < 2.
EpPrior UpdatePyParams(const PartitionView& view, const EpPrior& ep,
                       Rng& rng);

// Auxiliary-variable Gibbs update of (kappa, m). Returns ep unchanged when
// N < 2.
EpPrior UpdateGenCouponParams(const PartitionView& view, const EpPrior& ep,
                              Rng& rng);

// Dispatches on the regime; the fixed coupon prior has nothing to update.
EpPrior UpdateEpParams(const PartitionView& view, const EpPrior& ep,
                       Rng& rng);

// Draws the regime's parameters from their hyperprior.
EpPrior SampleEpPrior(const EpPrior& ep, Rng& rng);

}  // namespace resolver

#endif  // RESOLVER_EP_PARTITION_HPP_
