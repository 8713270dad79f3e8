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

// Synthetic household survey data with known ground truth. A population of
// households is generated first; records are then sampled from individuals
// and distorted attribute by attribute.

#ifndef RESOLVER_SIMULATOR_HPP_
#define RESOLVER_SIMULATOR_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

#include "resolver/common.hpp"
#include "resolver/model.hpp"
#include "resolver/random.hpp"

namespace resolver {

enum class DistortionLevel { kLow, kHigh };

// Simulated attributes, in output column order.
inline constexpr int kNumSimAttributes = 7;
enum SimAttribute {
  kFirstName = 0,
  kLastName,
  kGender,
  kZipcode,
  kBirthYear,
  kBirthMonth,
  kBirthDay,
};
extern const std::array<const char*, kNumSimAttributes> kSimAttributeNames;

// Per-attribute probability that a record copy gets distorted.
std::array<double, kNumSimAttributes> DistortionProbabilities(
    DistortionLevel level);

struct FrequencyTable {
  std::vector<std::string> values;
  std::vector<double> weights;

  const std::string& Draw(Rng& rng) const;

 private:
  mutable AliasTable alias_;
};

struct SimTables {
  FrequencyTable first_names_male;
  FrequencyTable first_names_female;
  FrequencyTable last_names;
  FrequencyTable zipcodes;
  // Symmetric nickname / variant relation.
  std::unordered_map<std::string, std::vector<std::string>> variants;

  // Reads first_names_{male,female}.csv, last_names.csv, zipcodes.csv and
  // name_variants.csv, keeping the top entries by frequency.
  static SimTables Load(const std::string& directory, int top_first = 200,
                        int top_last = 500, int top_zip = 100);
};

struct HouseholdMix {
  double single = 0.28;
  double couple = 0.34;
  double with_children = 0.30;
  double unrelated_adults = 0.08;
};

struct SimConfig {
  Index expected_records = 1000;
  DistortionLevel distortion_level = DistortionLevel::kLow;
  // Poisson rate of records per included individual, truncated to [1, 4].
  double duplication_mu = 1.0;
  double p_inc = 0.9;
  std::uint64_t seed = 0;
  SimTables tables;

  HouseholdMix mix;
  double shared_last_name = 0.9;
  // Mean of the truncated geometric age gap within a couple.
  double couple_gap_mean = 3.0;
  int couple_gap_max = 15;
  int child_gap_min = 18;
  int child_gap_max = 45;
  int max_children = 3;
  int max_unrelated_adults = 2;
  // Share of households with children headed by a single parent.
  double single_parent = 0.3;
  int adult_year_min = 1935;
  int adult_year_max = 1990;
  int current_year = 2025;
  // Name distortion mechanism mix.
  double typo_prob = 0.5;
  double variant_prob = 0.3;
  double redraw_prob = 0.2;
  double birth_year_noise_sd = 2.0;

  void Validate() const;
};

enum class HouseholdType { kSingle, kCouple, kWithChildren, kUnrelatedAdults };

struct Individual {
  Index id = 0;
  std::array<std::string, kNumSimAttributes> values;
};

struct Household {
  HouseholdType type = HouseholdType::kSingle;
  std::vector<Individual> members;
};

struct SimulatedData {
  // One row of attribute strings per record.
  std::vector<std::array<std::string, kNumSimAttributes>> records;
  // Ground-truth individual id per record.
  std::vector<Index> entity;
  // activated(i, a) = 1 when a distortion was applied to attribute a of
  // record i (the value may still coincide with the truth).
  Eigen::Array<std::uint8_t, Eigen::Dynamic, kNumSimAttributes,
               Eigen::RowMajor>
      activated;
};

// Poisson(mu) restricted to {1, 2, 3, 4}; entry k is P(k + 1 records).
std::array<double, 4> RecordsPerEntityPmf(double mu);

std::vector<Household> GeneratePopulation(const SimConfig& config, Rng& rng);

SimulatedData GenerateRecords(const std::vector<Household>& population,
                              const SimConfig& config, Rng& rng);

// Population and records from config.seed.
SimulatedData Simulate(const SimConfig& config);

// Attribute specs for the simulated schema: names use normalized
// Levenshtein with the given cutoff, all other attributes the constant
// distance.
std::vector<AttributeSpec> SimulatorAttributeSpecs(double name_cutoff);

// Interns simulated records into a single-source table with default
// hyperparameters.
RecordTable SimulatedTable(const SimulatedData& data,
                           std::vector<AttributeSpec> specs);

}  // namespace resolver

#endif  // RESOLVER_SIMULATOR_HPP_
