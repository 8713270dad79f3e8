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

#include "resolver/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "resolver/csv.hpp"

namespace resolver {

const std::array<const char*, kNumSimAttributes> kSimAttributeNames = {
    "first_name", "last_name",   "gender",   "zipcode",
    "birth_year", "birth_month", "birth_day"};

std::array<double, kNumSimAttributes> DistortionProbabilities(
    DistortionLevel level) {
  if (level == DistortionLevel::kLow) {
    return {0.10, 0.10, 0.01, 0.05, 0.01, 0.01, 0.01};
  }
  return {0.40, 0.40, 0.01, 0.10, 0.10, 0.10, 0.10};
}

const std::string& FrequencyTable::Draw(Rng& rng) const {
  if (alias_.size() != static_cast<int>(weights.size())) {
    alias_ = AliasTable(weights);
  }
  return values[alias_.Sample(rng)];
}

namespace {

FrequencyTable LoadFrequencies(const std::string& path, int top) {
  const CsvTable csv = ReadCsv(path);
  if (csv.header.size() < 2) throw InvalidInput("bad frequency file " + path);
  std::vector<std::pair<double, std::string>> entries;
  for (const auto& row : csv.rows) {
    entries.emplace_back(std::stod(row[1]), row[0]);
  }
  std::stable_sort(entries.begin(), entries.end(),
                   [](const auto& l, const auto& r) { return l.first > r.first; });
  if (static_cast<int>(entries.size()) > top) entries.resize(top);
  FrequencyTable table;
  for (auto& [weight, value] : entries) {
    table.values.push_back(value);
    table.weights.push_back(weight);
  }
  if (table.values.empty()) throw InvalidInput("empty frequency file " + path);
  return table;
}

int DaysInMonth(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30,
                                  31, 31, 30, 31, 30, 31};
  if (month == 2) {
    const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
    return leap ? 29 : 28;
  }
  return kDays[month - 1];
}

int UniformInt(Rng& rng, int lo, int hi) {
  std::uniform_int_distribution<int> dist(lo, hi);
  return dist(rng);
}

// Geometric on {0, 1, ...} with the given mean, truncated at max.
int TruncatedGeometric(Rng& rng, double mean, int max) {
  const double p = 1.0 / (1.0 + mean);
  std::geometric_distribution<int> dist(p);
  int k;
  do {
    k = dist(rng);
  } while (k > max);
  return k;
}

class PopulationBuilder {
 public:
  PopulationBuilder(const SimConfig& config, Rng& rng)
      : config_(config), rng_(rng) {}

  Individual Adult(const std::string& gender, int year,
                   const std::string& last_name, const std::string& zipcode) {
    Individual person;
    person.id = next_id_++;
    auto& v = person.values;
    v[kGender] = gender;
    v[kFirstName] = FirstName(gender);
    v[kLastName] = last_name;
    v[kZipcode] = zipcode;
    const int month = UniformInt(rng_, 1, 12);
    v[kBirthYear] = std::to_string(year);
    v[kBirthMonth] = std::to_string(month);
    v[kBirthDay] = std::to_string(UniformInt(rng_, 1, DaysInMonth(year, month)));
    return person;
  }

  std::string Gender() { return Bernoulli(rng_, 0.5) ? "M" : "F"; }

  std::string FirstName(const std::string& gender) {
    return gender == "M" ? config_.tables.first_names_male.Draw(rng_)
                         : config_.tables.first_names_female.Draw(rng_);
  }

  std::string LastName() { return config_.tables.last_names.Draw(rng_); }

  int AdultYear() {
    return UniformInt(rng_, config_.adult_year_min, config_.adult_year_max);
  }

  // One or two heads of household.
  std::vector<Individual> Heads(bool couple, const std::string& zipcode) {
    std::vector<Individual> heads;
    const int year = AdultYear();
    if (!couple) {
      heads.push_back(Adult(Gender(), year, LastName(), zipcode));
      return heads;
    }
    const std::string last = LastName();
    heads.push_back(Adult("M", year, last, zipcode));
    int gap = TruncatedGeometric(rng_, config_.couple_gap_mean,
                                 config_.couple_gap_max);
    if (Bernoulli(rng_, 0.5)) gap = -gap;
    const std::string partner_last =
        Bernoulli(rng_, config_.shared_last_name) ? last : LastName();
    heads.push_back(Adult("F", year + gap, partner_last, zipcode));
    return heads;
  }

  Household Make() {
    Household house;
    const std::string zipcode = config_.tables.zipcodes.Draw(rng_);
    const HouseholdMix& mix = config_.mix;
    const double weights[] = {mix.single, mix.couple, mix.with_children,
                              mix.unrelated_adults};
    house.type = static_cast<HouseholdType>(SampleWeights(rng_, weights));
    switch (house.type) {
      case HouseholdType::kSingle:
        house.members = Heads(false, zipcode);
        break;
      case HouseholdType::kCouple:
        house.members = Heads(true, zipcode);
        break;
      case HouseholdType::kWithChildren: {
        house.members =
            Heads(!Bernoulli(rng_, config_.single_parent), zipcode);
        int younger = 0;
        for (const Individual& h : house.members) {
          younger = std::max(younger, std::stoi(h.values[kBirthYear]));
        }
        const std::string last = house.members[0].values[kLastName];
        int children = 1;
        while (children < config_.max_children && Bernoulli(rng_, 0.5)) {
          ++children;
        }
        const int max_gap =
            std::min(config_.child_gap_max, config_.current_year - younger);
        for (int c = 0; c < children; ++c) {
          const int year =
              younger + UniformInt(rng_, config_.child_gap_min,
                                   std::max(config_.child_gap_min, max_gap));
          house.members.push_back(Adult(Gender(), year, last, zipcode));
        }
        break;
      }
      case HouseholdType::kUnrelatedAdults: {
        house.members = Heads(Bernoulli(rng_, 0.5), zipcode);
        const int base = std::stoi(house.members[0].values[kBirthYear]);
        const int others = UniformInt(rng_, 1, config_.max_unrelated_adults);
        for (int k = 0; k < others; ++k) {
          house.members.push_back(Adult(Gender(), base + UniformInt(rng_, -5, 5),
                                        LastName(), zipcode));
        }
        break;
      }
    }
    return house;
  }

 private:
  const SimConfig& config_;
  Rng& rng_;
  Index next_id_ = 0;
};

const char kLetters[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";

std::string Typo(const std::string& name, Rng& rng) {
  std::string out = name;
  int op = UniformInt(rng, 0, 3);  // insert, delete, substitute, transpose
  if (op == 1 && out.size() < 2) op = 0;
  if (op == 3 && out.size() < 2) op = 2;
  if (op == 2 && out.empty()) op = 0;
  switch (op) {
    case 0: {
      const int pos = UniformInt(rng, 0, static_cast<int>(out.size()));
      out.insert(out.begin() + pos, kLetters[UniformInt(rng, 0, 25)]);
      break;
    }
    case 1:
      out.erase(out.begin() + UniformInt(rng, 0, static_cast<int>(out.size()) - 1));
      break;
    case 2: {
      const int pos = UniformInt(rng, 0, static_cast<int>(out.size()) - 1);
      char c;
      do {
        c = kLetters[UniformInt(rng, 0, 25)];
      } while (c == out[pos]);
      out[pos] = c;
      break;
    }
    case 3: {
      const int pos = UniformInt(rng, 0, static_cast<int>(out.size()) - 2);
      std::swap(out[pos], out[pos + 1]);
      break;
    }
  }
  return out;
}

}  // namespace

SimTables SimTables::Load(const std::string& directory, int top_first,
                          int top_last, int top_zip) {
  SimTables tables;
  tables.first_names_male =
      LoadFrequencies(directory + "/first_names_male.csv", top_first);
  tables.first_names_female =
      LoadFrequencies(directory + "/first_names_female.csv", top_first);
  tables.last_names = LoadFrequencies(directory + "/last_names.csv", top_last);
  tables.zipcodes = LoadFrequencies(directory + "/zipcodes.csv", top_zip);
  const CsvTable variants = ReadCsv(directory + "/name_variants.csv");
  for (const auto& row : variants.rows) {
    tables.variants[row[0]].push_back(row[1]);
    tables.variants[row[1]].push_back(row[0]);
  }
  return tables;
}

void SimConfig::Validate() const {
  if (expected_records < 1) throw InvalidInput("expected_records must be >= 1");
  if (!(duplication_mu > 0)) throw InvalidInput("duplication mu must be > 0");
  if (!(p_inc > 0 && p_inc <= 1)) throw InvalidInput("p_inc must lie in (0, 1]");
  if (tables.first_names_male.values.empty() ||
      tables.first_names_female.values.empty() ||
      tables.last_names.values.empty() || tables.zipcodes.values.empty()) {
    throw InvalidInput("simulator frequency tables are not loaded");
  }
  if (!(typo_prob >= 0 && variant_prob >= 0 && redraw_prob >= 0 &&
        typo_prob + variant_prob + redraw_prob > 0)) {
    throw InvalidInput("name distortion mix must be non-negative");
  }
  if (child_gap_min > child_gap_max) throw InvalidInput("bad child age gap");
  if (adult_year_max + couple_gap_max + child_gap_min > current_year) {
    throw InvalidInput("adult birth years leave no room for children");
  }
}

std::array<double, 4> RecordsPerEntityPmf(double mu) {
  if (!(mu > 0)) throw InvalidInput("mu must be positive");
  // Ratios p(k)/p(1) = mu^(k-1) / k!, stable for any mu.
  std::array<double, 4> log_pmf;
  double log_fact = 0.0;
  for (int k = 1; k <= 4; ++k) {
    log_fact += std::log(static_cast<double>(k));
    log_pmf[k - 1] = (k - 1) * std::log(mu) - log_fact;
  }
  const double max = *std::max_element(log_pmf.begin(), log_pmf.end());
  std::array<double, 4> pmf;
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    pmf[k] = std::exp(log_pmf[k] - max);
    total += pmf[k];
  }
  for (double& p : pmf) p /= total;
  return pmf;
}

std::vector<Household> GeneratePopulation(const SimConfig& config, Rng& rng) {
  config.Validate();
  const auto pmf = RecordsPerEntityPmf(config.duplication_mu);
  double mean_records = 0.0;
  for (int k = 0; k < 4; ++k) mean_records += (k + 1) * pmf[k];
  const double target_individuals =
      config.expected_records / (config.p_inc * mean_records);

  PopulationBuilder builder(config, rng);
  std::vector<Household> population;
  double individuals = 0;
  while (individuals < target_individuals) {
    population.push_back(builder.Make());
    individuals += population.back().members.size();
  }
  return population;
}

SimulatedData GenerateRecords(const std::vector<Household>& population,
                              const SimConfig& config, Rng& rng) {
  config.Validate();
  if (population.empty()) throw InvalidInput("empty population");
  const auto pmf = RecordsPerEntityPmf(config.duplication_mu);
  const auto probs = DistortionProbabilities(config.distortion_level);
  const double name_mix[] = {config.typo_prob, config.variant_prob,
                             config.redraw_prob};
  std::normal_distribution<double> noise(0.0, config.birth_year_noise_sd);

  SimulatedData data;
  std::vector<std::array<std::uint8_t, kNumSimAttributes>> flags;
  std::array<int, kNumSimAttributes> order;
  std::iota(order.begin(), order.end(), 0);

  auto distort_name = [&](std::array<std::string, kNumSimAttributes>& v,
                          int a) {
    std::string& name = v[a];
    const int mechanism = SampleWeights(rng, name_mix);
    if (mechanism == 1) {
      auto it = config.tables.variants.find(name);
      if (it != config.tables.variants.end() && !it->second.empty()) {
        name = it->second[UniformInt(rng, 0,
                                     static_cast<int>(it->second.size()) - 1)];
        return;
      }
    } else if (mechanism == 2) {
      if (a == kFirstName) {
        name = v[kGender] == "M" ? config.tables.first_names_male.Draw(rng)
                                 : config.tables.first_names_female.Draw(rng);
      } else {
        name = config.tables.last_names.Draw(rng);
      }
      return;
    }
    name = Typo(name, rng);
  };

  for (const Household& house : population) {
    for (const Individual& person : house.members) {
      if (!Bernoulli(rng, config.p_inc)) continue;
      const int copies = 1 + SampleWeights(rng, pmf);
      for (int c = 0; c < copies; ++c) {
        auto values = person.values;
        std::array<std::uint8_t, kNumSimAttributes> active{};
        std::shuffle(order.begin(), order.end(), rng);
        for (int a : order) {
          if (!Bernoulli(rng, probs[a])) continue;
          active[a] = 1;
          switch (a) {
            case kFirstName:
            case kLastName:
              distort_name(values, a);
              break;
            case kGender:
              values[a] = Bernoulli(rng, 0.5) ? "M" : "F";
              break;
            case kZipcode:
              values[a] = config.tables.zipcodes.Draw(rng);
              break;
            case kBirthYear: {
              int shift = 0;
              while (shift == 0) shift = static_cast<int>(std::lround(noise(rng)));
              values[a] = std::to_string(std::stoi(values[a]) + shift);
              break;
            }
            case kBirthMonth:
              values[a] = std::to_string(UniformInt(rng, 1, 12));
              break;
            case kBirthDay: {
              const int month = std::stoi(values[kBirthMonth]);
              const int year = std::stoi(person.values[kBirthYear]);
              values[a] =
                  std::to_string(UniformInt(rng, 1, DaysInMonth(year, month)));
              break;
            }
          }
        }
        data.records.push_back(std::move(values));
        data.entity.push_back(person.id);
        flags.push_back(active);
      }
    }
  }

  // Records of one individual should not sit next to each other.
  std::vector<size_t> perm(data.records.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  SimulatedData shuffled;
  shuffled.activated.resize(static_cast<Eigen::Index>(perm.size()),
                            kNumSimAttributes);
  for (size_t k = 0; k < perm.size(); ++k) {
    shuffled.records.push_back(std::move(data.records[perm[k]]));
    shuffled.entity.push_back(data.entity[perm[k]]);
    for (int a = 0; a < kNumSimAttributes; ++a) {
      shuffled.activated(static_cast<Eigen::Index>(k), a) = flags[perm[k]][a];
    }
  }
  return shuffled;
}

SimulatedData Simulate(const SimConfig& config) {
  Rng rng(config.seed);
  const auto population = GeneratePopulation(config, rng);
  return GenerateRecords(population, config, rng);
}

std::vector<AttributeSpec> SimulatorAttributeSpecs(double name_cutoff) {
  std::vector<AttributeSpec> specs(kNumSimAttributes);
  for (int a = 0; a < kNumSimAttributes; ++a) {
    specs[a].name = kSimAttributeNames[a];
    if (a == kFirstName || a == kLastName) {
      specs[a].distance.kind = DistanceKind::kNormalizedLevenshtein;
      specs[a].distance.cutoff = name_cutoff;
    }
  }
  return specs;
}

RecordTable SimulatedTable(const SimulatedData& data,
                           std::vector<AttributeSpec> specs) {
  if (specs.size() != kNumSimAttributes) {
    throw InvalidInput("need one spec per simulated attribute");
  }
  const Index n = static_cast<Index>(data.records.size());
  std::vector<std::vector<std::string>> columns(kNumSimAttributes);
  for (int a = 0; a < kNumSimAttributes; ++a) {
    columns[a].reserve(n);
    for (const auto& record : data.records) columns[a].push_back(record[a]);
  }
  // Domains are needed before the defaults can size the base pmfs.
  for (int a = 0; a < kNumSimAttributes; ++a) {
    if (specs[a].domain.empty()) {
      std::vector<std::string> distinct = columns[a];
      std::sort(distinct.begin(), distinct.end());
      distinct.erase(std::unique(distinct.begin(), distinct.end()),
                     distinct.end());
      specs[a].domain = std::move(distinct);
    }
  }
  ModelDefaults defaults = DefaultHyperparameters(n, 1, std::move(specs));
  return RecordTable::FromColumns(std::move(defaults.specs), columns,
                                  std::vector<Index>(n, 0), 1);
}

}  // namespace resolver
