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

// Experiment configuration files, text preprocessing and dataset loading.

#ifndef RESOLVER_IO_HPP_
#define RESOLVER_IO_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resolver/common.hpp"
#include "resolver/model.hpp"
#include "resolver/simulator.hpp"

namespace resolver {

// Column-wise cleanup applied before domains are built. Rules run in a fixed
// order: split-hyphens, strip-punctuation, uppercase.
struct PreprocessRules {
  bool split_hyphens = false;
  bool strip_punctuation = false;
  bool uppercase = false;
};

// Throws InvalidInput on an unknown rule name.
PreprocessRules ParsePreprocessRules(const std::vector<std::string>& names);
std::string Preprocess(std::string_view value, const PreprocessRules& rules);
void PreprocessColumns(std::vector<std::vector<std::string>>& columns,
                       const PreprocessRules& rules);

// Optional per-attribute prior overrides on top of the vague defaults.
struct AttributeConfig {
  std::string name;
  DistanceMeasure distance;
  BaseDistributionMode base_mode = BaseDistributionMode::kSoftmax;
  std::optional<BetaPrior> distortion_prior;
  std::optional<GammaPrior> rho_prior;
  std::optional<double> entity_concentration;
};

struct ExperimentConfig {
  std::string dataset;
  // Column holding source ids; optional when the data has one source.
  std::string source_column = "source";
  std::vector<std::string> ignore_columns;
  PreprocessRules preprocess;
  std::vector<AttributeConfig> attributes;
  // Linkage prior section; null means the data-driven defaults. Resolved
  // once the record count is known.
  nlohmann::json prior;
  RunConfig run;
  std::string output_dir = "out";
  // Canonical serialization, used for the manifest hash.
  std::string canonical;
};

// Parses a JSON experiment config. Unknown keys are rejected. Relative
// paths resolve against base_dir.
ExperimentConfig ParseExperimentConfig(const nlohmann::json& json,
                                       const std::string& base_dir);
ExperimentConfig LoadExperimentConfig(const std::string& path);

struct Dataset {
  RecordTable table;
  std::vector<std::string> source_names;
  // Per attribute model defaults and the linkage prior actually used.
  EpPrior prior;
};

// Reads and preprocesses the dataset, checks that every attribute column
// has a spec (and vice versa), and fills in hyperparameters.
Dataset LoadDataset(const ExperimentConfig& config);

// Linkage prior for N records from a "prior" config section.
EpPrior ResolvePrior(const nlohmann::json& section, Index num_records);

// Builds attribute specs and the prior for already-loaded columns.
Dataset BuildDataset(const ExperimentConfig& config,
                     const std::vector<std::string>& attribute_names,
                     std::vector<std::vector<std::string>> columns,
                     const std::vector<std::string>& source_column);

struct SimulationConfig {
  SimConfig sim;
  std::string tables_dir;
  std::string output_dir = "sim";
  std::string canonical;
};

SimulationConfig ParseSimulationConfig(const nlohmann::json& json,
                                       const std::string& base_dir);
SimulationConfig LoadSimulationConfig(const std::string& path);

// 64-bit FNV-1a.
std::uint64_t Fnv1a(std::string_view bytes,
                    std::uint64_t seed = 0xcbf29ce484222325ull);
std::string HexDigest(std::uint64_t hash);

// Shortest decimal text that round-trips to the same double.
std::string FormatDouble(double value);

}  // namespace resolver

#endif  // RESOLVER_IO_HPP_
