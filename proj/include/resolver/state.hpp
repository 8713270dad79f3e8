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

// Latent state of one chain and the immutable context it refers to.

#ifndef RESOLVER_STATE_HPP_
#define RESOLVER_STATE_HPP_

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "resolver/common.hpp"
#include "resolver/distance.hpp"
#include "resolver/distortion.hpp"
#include "resolver/model.hpp"

namespace resolver {

// Everything about one attribute that stays fixed during sampling.
struct AttributeModel {
  RangeIndex index;
  BaseDistribution psi;
  // Propensity omega(y) per domain value.
  Eigen::VectorXd omega;
};

// Shared read-only inputs of a run. Safe to use from several chains.
struct ModelContext {
  RecordTable table;
  std::vector<AttributeModel> attributes;
  DistortionModel model = DistortionModel::kOurs;

  // Builds range indices, base distributions and propensities, one thread
  // per attribute.
  static std::shared_ptr<const ModelContext> Build(RecordTable table,
                                                   DistortionModel model);
};

struct ValueCount {
  ValueId value;
  Index count;
};

// A latent entity. Label slots are recycled, so an entity with no members
// is a free slot.
struct Entity {
  std::vector<ValueId> values;
  std::vector<Index> members;
  // Per attribute: how many linked records carry each value.
  std::vector<std::vector<ValueCount>> counts;

  Index size() const { return static_cast<Index>(members.size()); }
  Index Count(int a, ValueId v) const;
  void AddValue(int a, ValueId v);
  void RemoveValue(int a, ValueId v);
};

// Attribute value -> entities currently carrying it.
class InvertedIndex {
 public:
  void Reset(const std::vector<int>& domain_sizes, Index num_labels);
  void Insert(int a, ValueId v, Index e);
  void Remove(int a, ValueId v, Index e);
  std::span<const Index> Lookup(int a, ValueId v) const {
    return lists_[a][v];
  }

 private:
  std::vector<std::vector<std::vector<Index>>> lists_;
  // position_[a][e]: slot of e in lists_[a][y_ea].
  std::vector<std::vector<Index>> position_;
};

struct ModelState {
  std::shared_ptr<const ModelContext> context;

  // lambda_i per record.
  std::vector<Index> links;
  // One slot per possible label 0..N-1.
  std::vector<Entity> entities;
  std::vector<Index> free_labels;
  // Labels with at least one member, and each label's slot in that list
  // (-1 when free).
  std::vector<Index> occupied;
  std::vector<Index> occupied_pos;
  // Position of each record in its entity's member list.
  std::vector<Index> member_pos;

  // z_ia.
  Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      distorted;
  // theta_sa, S x A.
  Eigen::MatrixXd theta;
  // rho_a.
  Eigen::VectorXd rho;
  // log G_a over the domain of each attribute.
  std::vector<Eigen::VectorXd> log_g;
  EpPrior ep;
  InvertedIndex inverted;

  // log sum_y G_a(y) omega(y) psi(x | y) per observed value x, filled on
  // demand and cleared whenever G_a changes. NaN marks an unset entry.
  mutable std::vector<std::vector<double>> log_new_mass;

  const RecordTable& table() const { return context->table; }
  int num_entities() const { return static_cast<int>(occupied.size()); }
  ValueId truth(Index i, int a) const { return entities[links[i]].values[a]; }
};

// Checks every structural invariant and returns all violations found.
std::vector<std::string> ValidateState(const ModelState& state);

// Relabels so each cluster is named by its smallest record id.
std::vector<Index> CanonicalLinks(std::span<const Index> links);

}  // namespace resolver

#endif  // RESOLVER_STATE_HPP_
