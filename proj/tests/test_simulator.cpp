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

#include <doctest.h>

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "resolver/simulator.hpp"
#include "test_util.hpp"

namespace resolver {
namespace {

const SimTables& Tables() {
  static const SimTables tables =
      SimTables::Load(std::string(RESOLVER_SOURCE_DIR) + "/data/simulator");
  return tables;
}

SimConfig Config(Index records, double mu, std::uint64_t seed,
                 DistortionLevel level = DistortionLevel::kLow) {
  SimConfig config;
  config.expected_records = records;
  config.duplication_mu = mu;
  config.seed = seed;
  config.distortion_level = level;
  config.tables = Tables();
  return config;
}

TEST_CASE("simulator: records-per-entity pmf") {
  // Poisson(1) over {1, 2, 3, 4} is proportional to (1, 1/2, 1/6, 1/24).
  const auto one = RecordsPerEntityPmf(1.0);
  const double total = 1 + 1.0 / 2 + 1.0 / 6 + 1.0 / 24;
  CHECK(one[0] == doctest::Approx(1 / total).epsilon(1e-12));
  CHECK(one[1] == doctest::Approx(0.5 / total).epsilon(1e-12));
  CHECK(one[2] == doctest::Approx(1.0 / 6 / total).epsilon(1e-12));
  CHECK(one[3] == doctest::Approx(1.0 / 24 / total).epsilon(1e-12));
  CHECK(RecordsPerEntityPmf(1e-8)[0] == doctest::Approx(1.0));
  CHECK(RecordsPerEntityPmf(100.0)[3] > 0.95);
  // Large rates must not overflow.
  const auto huge = RecordsPerEntityPmf(1e6);
  CHECK(huge[3] == doctest::Approx(1.0));
}

TEST_CASE("simulator: configuration is validated") {
  SimConfig config = Config(100, 1.0, 1);
  config.duplication_mu = 0.0;
  CHECK_THROWS_AS(config.Validate(), InvalidInput);
  config = Config(100, 1.0, 1);
  config.p_inc = 1.5;
  CHECK_THROWS_AS(config.Validate(), InvalidInput);
  config = Config(100, 1.0, 1);
  CHECK_NOTHROW(config.Validate());
}

TEST_CASE("simulator: household structure") {
  SimConfig config = Config(5000, 1.0, 2);
  Rng rng(config.seed);
  const auto population = GeneratePopulation(config, rng);
  std::set<Index> ids;
  std::map<HouseholdType, int> types;
  for (const Household& house : population) {
    REQUIRE_FALSE(house.members.empty());
    ++types[house.type];
    for (const Individual& person : house.members) {
      CHECK(ids.insert(person.id).second);
      CHECK(person.values[kZipcode] == house.members[0].values[kZipcode]);
    }
    if (house.type == HouseholdType::kWithChildren) {
      const Individual& child = house.members.back();
      CHECK(child.values[kLastName] == house.members[0].values[kLastName]);
      CHECK(std::stoi(child.values[kBirthYear]) >=
            std::stoi(house.members[0].values[kBirthYear]) + 18);
    }
    if (house.type == HouseholdType::kCouple) {
      CHECK(house.members.size() == 2);
    }
  }
  CHECK(types.size() == 4);
}

TEST_CASE("simulator: output is deterministic for a seed") {
  const SimulatedData a = Simulate(Config(500, 1.0, 3));
  const SimulatedData b = Simulate(Config(500, 1.0, 3));
  CHECK(a.records == b.records);
  CHECK(a.entity == b.entity);
  CHECK((a.activated == b.activated).all());
  const SimulatedData c = Simulate(Config(500, 1.0, 4));
  CHECK(a.records != c.records);
}

TEST_CASE("simulator: record count is steered to the target") {
  for (double mu : {0.1, 1.0, 8.0}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const SimulatedData data = Simulate(Config(10000, mu, seed));
      CAPTURE(mu);
      CAPTURE(seed);
      CHECK(std::abs(static_cast<double>(data.records.size()) - 10000) <=
            1000);
    }
  }
}

TEST_CASE("simulator: activation rates and truth") {
  const SimulatedData data = Simulate(Config(20000, 1.0, 5));
  const auto probs = DistortionProbabilities(DistortionLevel::kLow);
  const double n = static_cast<double>(data.records.size());
  for (int a = 0; a < kNumSimAttributes; ++a) {
    CAPTURE(a);
    const double hits = data.activated.col(a).cast<double>().sum();
    CHECK(testing::BinomialZ(hits, n, probs[a]) < 2.576);
  }
  // Records sharing a truth id share undistorted attributes.
  std::map<Index, std::string> gender;
  for (size_t i = 0; i < data.records.size(); ++i) {
    if (data.activated(i, kGender)) continue;
    auto [it, fresh] = gender.emplace(data.entity[i], data.records[i][kGender]);
    if (!fresh) CHECK(it->second == data.records[i][kGender]);
  }
}

TEST_CASE("simulator: distorted birth years always change") {
  SimConfig config = Config(3000, 2.0, 6, DistortionLevel::kHigh);
  Rng rng(config.seed);
  const auto population = GeneratePopulation(config, rng);
  std::map<Index, std::string> year;
  for (const Household& house : population) {
    for (const Individual& person : house.members) {
      year[person.id] = person.values[kBirthYear];
    }
  }
  const SimulatedData data = GenerateRecords(population, config, rng);
  int distorted = 0;
  for (size_t i = 0; i < data.records.size(); ++i) {
    if (!data.activated(i, kBirthYear)) {
      CHECK(data.records[i][kBirthYear] == year.at(data.entity[i]));
      continue;
    }
    ++distorted;
    CHECK(data.records[i][kBirthYear] != year.at(data.entity[i]));
  }
  CHECK(distorted > 0);
}

TEST_CASE("simulator: records intern into a valid table") {
  const SimulatedData data = Simulate(Config(300, 1.0, 7));
  const RecordTable table =
      SimulatedTable(data, SimulatorAttributeSpecs(0.35));
  CHECK(table.num_records() == static_cast<int>(data.records.size()));
  CHECK(table.num_attributes() == kNumSimAttributes);
  CHECK(table.num_sources() == 1);
  for (int a = 0; a < kNumSimAttributes; ++a) {
    CHECK(table.spec(a).name == kSimAttributeNames[a]);
  }
  CHECK(table.spec(kFirstName).distance.kind ==
        DistanceKind::kNormalizedLevenshtein);
  CHECK(table.spec(kGender).distance.kind == DistanceKind::kConstant);
}

}  // namespace
}  // namespace resolver
