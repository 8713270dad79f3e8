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

// Partially collapsed Gibbs sampler. One sweep updates, in order: the
// distortion indicators, distortion probabilities, entity attributes, links,
// distortion concentrations, linkage prior parameters and the entity
// distributions.

#ifndef RESOLVER_SAMPLER_HPP_
#define RESOLVER_SAMPLER_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "resolver/common.hpp"
#include "resolver/model.hpp"
#include "resolver/random.hpp"
#include "resolver/state.hpp"

namespace resolver {

// Every record linked to its own entity with undistorted values. Theta and
// G are drawn from their conditionals; rho starts at its prior mean.
ModelState Initialize(std::shared_ptr<const ModelContext> context,
                      const EpPrior& ep, Rng& rng);

// z_ia = [x_ia != y]. Only meaningful for the corrected model.
void RefreshIndicators(ModelState& state);

// Blink preset: z_ia = 1 when x_ia != y, otherwise a draw from its
// conditional.
void ResampleIndicators(ModelState& state, Rng& rng);

// P(q = 1 | z = 0) for the auxiliary coin q ~ Bernoulli(omega) with
// z ~ Bernoulli(theta q): omega (1 - theta) / (omega (1 - theta) + 1 - omega).
double AuxiliaryCoinProbability(double theta, double omega);

void UpdateTheta(ModelState& state, Rng& rng);

// Log of the unnormalized conditional of y_ea over its feasible support,
// sorted by value. Z is integrated out.
std::vector<std::pair<ValueId, double>> EntityAttributeLogPmf(
    const ModelState& state, Index e, int a);

void UpdateEntityAttribute(ModelState& state, Index e, int a, Rng& rng);

// Removes record i from its entity, freeing the entity if it empties.
void DetachRecord(ModelState& state, Index i);

struct LinkOption {
  // Entity label, or -1 for a new entity.
  Index label;
  double log_weight;
};

// Link conditional for a detached record. With use_index the candidates
// come from the inverted index; otherwise every occupied entity is scored.
// Options with zero weight are omitted.
std::vector<LinkOption> LinkOptions(const ModelState& state, Index i,
                                    bool use_index);

void AttachRecord(ModelState& state, Index i, Index label);

// Links i to a fresh entity whose values are drawn given the record.
void AttachNew(ModelState& state, Index i, Rng& rng);

void UpdateLink(ModelState& state, Index i, Rng& rng);

// Sufficient statistics of the concentration update for one attribute.
struct RhoData {
  // Distorted record count of each entity with at least one.
  std::vector<Index> distorted_totals;
  // (psi(v | y_e), n_e(v)) for each distorted value v of each entity.
  std::vector<std::pair<double, Index>> terms;
};

RhoData CollectRhoData(const ModelState& state, int a);

// One auxiliary-variable draw of rho given its current value.
double SampleRhoConditional(double rho, const RhoData& data,
                            const GammaPrior& prior, Rng& rng);

void UpdateRho(ModelState& state, int a, Rng& rng);

void UpdateEntityDistribution(ModelState& state, int a, Rng& rng);

void UpdateEpParameters(ModelState& state, Rng& rng);

// One full sweep under the given configuration.
void Sweep(ModelState& state, const RunConfig& config, Rng& rng);

// Names of all scalars a chain can record.
std::vector<std::string> ScalarNames(const ModelState& state);
std::vector<double> ScalarValues(const ModelState& state);

struct PosteriorChain {
  std::vector<std::string> scalar_names;
  std::vector<std::int64_t> iterations;
  // Canonical linkage per stored sample.
  std::vector<std::vector<Index>> links;
  std::vector<std::vector<double>> scalars;
};

// Called for every stored sample with its index, the iteration number, the
// state and the monitored scalar values.
using SampleObserver =
    std::function<void(std::int64_t, std::int64_t, const ModelState&,
                       const std::vector<double>&)>;

// Runs a chain from Initialize. Samples go to the observer if one is
// given, otherwise they are kept in the returned chain.
PosteriorChain RunChain(std::shared_ptr<const ModelContext> context,
                        const EpPrior& ep, const RunConfig& config,
                        const SampleObserver& observer = nullptr);

// Continues from an existing state.
PosteriorChain RunChainFrom(ModelState& state, const RunConfig& config,
                            Rng& rng, const SampleObserver& observer = nullptr);

}  // namespace resolver

#endif  // RESOLVER_SAMPLER_HPP_
