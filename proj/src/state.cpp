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

#include "resolver/state.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <unordered_map>

#include "resolver/random.hpp"

namespace resolver {

std::shared_ptr<const ModelContext> ModelContext::Build(RecordTable table,
                                                        DistortionModel model) {
  auto context = std::make_shared<ModelContext>();
  context->table = std::move(table);
  context->model = model;
  const RecordTable& t = context->table;
  const int num_attributes = t.num_attributes();
  context->attributes.resize(num_attributes);

  std::vector<std::future<void>> jobs;
  for (int a = 0; a < num_attributes; ++a) {
    jobs.push_back(std::async(std::launch::async, [&t, &context, model, a] {
      AttributeModel& attr = context->attributes[a];
      const AttributeSpec& spec = t.spec(a);
      attr.index = RangeIndex::Build(spec.domain, spec.distance);
      const std::vector<Index> frequencies = t.ValueCounts(a);
      attr.psi = BaseDistribution::Build(spec, attr.index, frequencies, model);
      attr.omega = PropensityTable(attr.index, model);
    }));
  }
  for (auto& job : jobs) job.get();
  return context;
}

Index Entity::Count(int a, ValueId v) const {
  for (const ValueCount& vc : counts[a]) {
    if (vc.value == v) return vc.count;
  }
  return 0;
}

void Entity::AddValue(int a, ValueId v) {
  for (ValueCount& vc : counts[a]) {
    if (vc.value == v) {
      ++vc.count;
      return;
    }
  }
  counts[a].push_back({v, 1});
}

void Entity::RemoveValue(int a, ValueId v) {
  auto& list = counts[a];
  for (size_t k = 0; k < list.size(); ++k) {
    if (list[k].value != v) continue;
    if (--list[k].count == 0) {
      list[k] = list.back();
      list.pop_back();
    }
    return;
  }
}

void InvertedIndex::Reset(const std::vector<int>& domain_sizes,
                          Index num_labels) {
  lists_.assign(domain_sizes.size(), {});
  position_.assign(domain_sizes.size(), std::vector<Index>(num_labels, -1));
  for (size_t a = 0; a < domain_sizes.size(); ++a) {
    lists_[a].resize(domain_sizes[a]);
  }
}

void InvertedIndex::Insert(int a, ValueId v, Index e) {
  auto& list = lists_[a][v];
  position_[a][e] = static_cast<Index>(list.size());
  list.push_back(e);
}

void InvertedIndex::Remove(int a, ValueId v, Index e) {
  auto& list = lists_[a][v];
  const Index pos = position_[a][e];
  const Index last = list.back();
  list[pos] = last;
  position_[a][last] = pos;
  list.pop_back();
  position_[a][e] = -1;
}

std::vector<std::string> ValidateState(const ModelState& state) {
  std::vector<std::string> problems;
  const RecordTable& table = state.table();
  const Index n = table.num_records();
  const int num_attributes = table.num_attributes();
  const bool blink = state.context->model == DistortionModel::kBlink;

  if (static_cast<Index>(state.links.size()) != n) {
    problems.push_back("linkage has wrong length");
    return problems;
  }
  if (static_cast<Index>(state.entities.size()) < n) {
    problems.push_back("too few entity slots");
    return problems;
  }

  std::vector<Index> sizes(state.entities.size(), 0);
  for (Index i = 0; i < n; ++i) {
    const Index e = state.links[i];
    if (e < 0 || e >= static_cast<Index>(state.entities.size())) {
      problems.push_back("record " + std::to_string(i) + " has invalid label");
      return problems;
    }
    ++sizes[e];
  }

  int occupied = 0;
  for (size_t e = 0; e < state.entities.size(); ++e) {
    const Entity& ent = state.entities[e];
    if (sizes[e] != ent.size()) {
      problems.push_back("cluster size mismatch for entity " +
                         std::to_string(e));
    }
    if (ent.size() > 0) ++occupied;
    for (Index k = 0; k < ent.size(); ++k) {
      const Index i = ent.members[k];
      if (state.links[i] != static_cast<Index>(e) || state.member_pos[i] != k) {
        problems.push_back("member list of entity " + std::to_string(e) +
                           " disagrees with linkage");
      }
    }
  }
  if (occupied != state.num_entities()) {
    problems.push_back("occupied entity count mismatch");
  }
  for (size_t k = 0; k < state.occupied.size(); ++k) {
    const Index e = state.occupied[k];
    if (state.entities[e].size() == 0 ||
        state.occupied_pos[e] != static_cast<Index>(k)) {
      problems.push_back("occupied list inconsistent at label " +
                         std::to_string(e));
    }
  }
  if (state.free_labels.size() + state.occupied.size() !=
      state.entities.size()) {
    problems.push_back("free list size mismatch");
  }

  for (Index e : state.occupied) {
    const Entity& ent = state.entities[e];
    for (int a = 0; a < num_attributes; ++a) {
      std::map<ValueId, Index> expected;
      for (Index i : ent.members) ++expected[table.value(i, a)];
      std::map<ValueId, Index> actual;
      for (const ValueCount& vc : ent.counts[a]) actual[vc.value] += vc.count;
      if (expected != actual) {
        problems.push_back("value counts stale for entity " +
                           std::to_string(e));
      }
      const auto list = state.inverted.Lookup(a, ent.values[a]);
      if (std::find(list.begin(), list.end(), e) == list.end()) {
        problems.push_back("inverted index misses entity " +
                           std::to_string(e));
      }
    }
  }
  for (int a = 0; a < num_attributes; ++a) {
    size_t total = 0;
    for (ValueId v = 0; v < table.spec(a).domain_size(); ++v) {
      for (Index e : state.inverted.Lookup(a, v)) {
        ++total;
        if (state.entities[e].size() == 0 || state.entities[e].values[a] != v) {
          problems.push_back("inverted index has stale entry");
        }
      }
    }
    if (total != state.occupied.size()) {
      problems.push_back("inverted index size mismatch");
    }
  }

  for (Index i = 0; i < n; ++i) {
    for (int a = 0; a < num_attributes; ++a) {
      const bool differs = table.value(i, a) != state.truth(i, a);
      const bool z = state.distorted(i, a) != 0;
      if (blink ? (differs && !z) : (differs != z)) {
        problems.push_back("indicator/point-mass mismatch at record " +
                           std::to_string(i));
      }
    }
  }

  if (!((state.theta.array() > 0).all() && (state.theta.array() < 1).all())) {
    problems.push_back("distortion probability outside (0, 1)");
  }
  if (!(state.rho.array() > 0).all()) {
    problems.push_back("concentration not positive");
  }
  for (int a = 0; a < num_attributes; ++a) {
    double total = kNegInf;
    for (double v : state.log_g[a]) total = LogAddExp(total, v);
    if (!(std::fabs(total) < 1e-8)) {
      problems.push_back("entity distribution does not sum to one");
    }
  }
  return problems;
}

std::vector<Index> CanonicalLinks(std::span<const Index> links) {
  std::unordered_map<Index, Index> first;
  std::vector<Index> out(links.size());
  for (size_t i = 0; i < links.size(); ++i) {
    auto [it, inserted] = first.emplace(links[i], static_cast<Index>(i));
    out[i] = it->second;
  }
  return out;
}

}  // namespace resolver
