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

#include "resolver/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "resolver/csv.hpp"
#include "resolver/distortion.hpp"

#ifndef RESOLVER_DEFAULT_TABLES_DIR
#define RESOLVER_DEFAULT_TABLES_DIR "data/simulator"
#endif

namespace resolver {
namespace {

using nlohmann::json;

void CheckKeys(const json& object, std::initializer_list<const char*> allowed,
               const std::string& where) {
  if (!object.is_object()) throw InvalidInput(where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    bool known = false;
    for (const char* name : allowed) known = known || key == name;
    if (!known) throw InvalidInput("unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T Get(const json& object, const char* key, const std::string& where) {
  try {
    return object.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidInput("bad value for '" + std::string(key) + "' in " + where +
                       ": " + e.what());
  }
}

template <typename T>
void GetIf(const json& object, const char* key, const std::string& where,
           T& out) {
  if (object.contains(key)) out = Get<T>(object, key, where);
}

std::string ResolvePath(const std::string& path, const std::string& base_dir) {
  if (path.empty()) return path;
  const std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

std::pair<double, double> Pair(const json& object, const char* key,
                               const std::string& where) {
  const auto values = Get<std::vector<double>>(object, key, where);
  if (values.size() != 2) {
    throw InvalidInput("'" + std::string(key) + "' in " + where +
                       " needs two numbers");
  }
  return {values[0], values[1]};
}

AttributeConfig ParseAttribute(const std::string& name, const json& object) {
  const std::string where = "attribute '" + name + "'";
  CheckKeys(object,
            {"distance", "cutoff", "base", "hybrid", "distortion_prior",
             "rho_prior", "concentration"},
            where);
  AttributeConfig attr;
  attr.name = name;
  const std::string kind =
      object.contains("distance") ? Get<std::string>(object, "distance", where)
                                  : "constant";
  if (kind == "constant") {
    attr.distance.kind = DistanceKind::kConstant;
  } else if (kind == "levenshtein") {
    attr.distance.kind = DistanceKind::kNormalizedLevenshtein;
  } else if (kind == "hybrid") {
    attr.distance.kind = DistanceKind::kHybrid;
  } else {
    throw InvalidInput("unknown distance '" + kind + "' in " + where);
  }
  GetIf(object, "cutoff", where, attr.distance.cutoff);
  if (!(attr.distance.cutoff > 0)) {
    throw InvalidInput("cutoff must be positive in " + where);
  }
  if (object.contains("hybrid")) {
    const json& h = object.at("hybrid");
    CheckKeys(h, {"insertion", "deletion", "substitution", "separator"},
              where + " hybrid");
    GetIf(h, "insertion", where, attr.distance.hybrid.insertion);
    GetIf(h, "deletion", where, attr.distance.hybrid.deletion);
    GetIf(h, "substitution", where, attr.distance.hybrid.substitution);
    if (h.contains("separator")) {
      const auto sep = Get<std::string>(h, "separator", where);
      if (sep.size() != 1) throw InvalidInput("separator must be one character");
      attr.distance.hybrid.separator = sep[0];
    }
  }
  const std::string base =
      object.contains("base") ? Get<std::string>(object, "base", where)
                              : "softmax";
  if (base == "softmax") {
    attr.base_mode = BaseDistributionMode::kSoftmax;
  } else if (base == "frequency") {
    attr.base_mode = BaseDistributionMode::kFrequency;
  } else {
    throw InvalidInput("unknown base '" + base + "' in " + where);
  }
  if (object.contains("distortion_prior")) {
    const auto [a, b] = Pair(object, "distortion_prior", where);
    attr.distortion_prior = BetaPrior{a, b};
  }
  if (object.contains("rho_prior")) {
    const auto [shape, rate] = Pair(object, "rho_prior", where);
    attr.rho_prior = GammaPrior{shape, rate};
  }
  if (object.contains("concentration")) {
    attr.entity_concentration = Get<double>(object, "concentration", where);
  }
  return attr;
}

RunConfig ParseRun(const json& object) {
  const std::string where = "run";
  CheckKeys(object,
            {"iterations", "burn_in", "thin", "seed", "monitored",
             "update_theta", "update_rho", "update_ep", "update_g",
             "random_scan", "check_interval"},
            where);
  RunConfig run;
  GetIf(object, "iterations", where, run.iterations);
  GetIf(object, "burn_in", where, run.burn_in);
  GetIf(object, "thin", where, run.thin);
  GetIf(object, "seed", where, run.seed);
  GetIf(object, "monitored", where, run.monitored);
  GetIf(object, "update_theta", where, run.update_theta);
  GetIf(object, "update_rho", where, run.update_rho);
  GetIf(object, "update_ep", where, run.update_ep);
  GetIf(object, "update_g", where, run.update_g);
  GetIf(object, "random_scan", where, run.random_scan);
  GetIf(object, "check_interval", where, run.check_interval);
  run.Validate();
  return run;
}

json ReadJsonFile(const std::string& path) {
  const std::string text = ReadFileText(path);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput("cannot parse '" + path + "': " + e.what());
  }
}

std::string ParentDir(const std::string& path) {
  return std::filesystem::path(path).parent_path().string();
}

}  // namespace

EpPrior ResolvePrior(const json& object, Index num_records) {
  const std::string where = "prior";
  CheckKeys(object, {"regime", "sigma", "alpha", "kappa", "m", "hyper"}, where);
  const std::string name = Get<std::string>(object, "regime", where);
  const auto regime = ParseRegime(name);
  if (!regime) throw InvalidInput("unknown regime '" + name + "'");
  EpPrior prior;
  switch (*regime) {
    case EpRegime::kPitmanYor:
      prior = EpPrior::PitmanYor(0.5, 1.0);
      break;
    case EpRegime::kEwens:
      prior = EpPrior::Ewens(1.0);
      break;
    case EpRegime::kGenCoupon:
      prior = DefaultHyperparameters(num_records, 1, {}).ep;
      break;
    case EpRegime::kCouponFixed:
      prior = EpPrior::CouponFixed(num_records);
      break;
  }
  GetIf(object, "sigma", where, prior.sigma);
  GetIf(object, "alpha", where, prior.alpha);
  GetIf(object, "kappa", where, prior.kappa);
  GetIf(object, "m", where, prior.m);
  if (object.contains("hyper")) {
    const json& h = object.at("hyper");
    CheckKeys(h, {"zeta0", "zeta1", "chi0", "chi1", "r", "nu"}, "prior hyper");
    GetIf(h, "zeta0", where, prior.hyper.zeta0);
    GetIf(h, "zeta1", where, prior.hyper.zeta1);
    GetIf(h, "chi0", where, prior.hyper.chi0);
    GetIf(h, "chi1", where, prior.hyper.chi1);
    GetIf(h, "r", where, prior.hyper.r);
    GetIf(h, "nu", where, prior.hyper.nu);
  }
  prior.Validate();
  return prior;
}

PreprocessRules ParsePreprocessRules(const std::vector<std::string>& names) {
  PreprocessRules rules;
  for (const std::string& name : names) {
    if (name == "split-hyphens") {
      rules.split_hyphens = true;
    } else if (name == "strip-punctuation") {
      rules.strip_punctuation = true;
    } else if (name == "uppercase") {
      rules.uppercase = true;
    } else {
      throw InvalidInput("unknown preprocess rule '" + name + "'");
    }
  }
  return rules;
}

std::string Preprocess(std::string_view value, const PreprocessRules& rules) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    const auto u = static_cast<unsigned char>(c);
    if (rules.split_hyphens && c == '-') {
      out.push_back(' ');
      continue;
    }
    if (rules.strip_punctuation && std::ispunct(u)) continue;
    out.push_back(rules.uppercase ? static_cast<char>(std::toupper(u)) : c);
  }
  return out;
}

void PreprocessColumns(std::vector<std::vector<std::string>>& columns,
                       const PreprocessRules& rules) {
  if (!rules.split_hyphens && !rules.strip_punctuation && !rules.uppercase) {
    return;
  }
  for (auto& column : columns) {
    for (std::string& value : column) value = Preprocess(value, rules);
  }
}

ExperimentConfig ParseExperimentConfig(const json& object,
                                       const std::string& base_dir) {
  CheckKeys(object,
            {"dataset", "source_column", "ignore_columns", "preprocess",
             "attributes", "prior", "distortion_model", "run", "output_dir"},
            "experiment config");
  ExperimentConfig config;
  config.dataset =
      ResolvePath(Get<std::string>(object, "dataset", "config"), base_dir);
  GetIf(object, "source_column", "config", config.source_column);
  GetIf(object, "ignore_columns", "config", config.ignore_columns);
  if (object.contains("preprocess")) {
    config.preprocess = ParsePreprocessRules(
        Get<std::vector<std::string>>(object, "preprocess", "config"));
  }
  if (!object.contains("attributes") || !object.at("attributes").is_object()) {
    throw InvalidInput("config needs an 'attributes' object");
  }
  for (const auto& [name, spec] : object.at("attributes").items()) {
    config.attributes.push_back(ParseAttribute(name, spec));
  }
  if (object.contains("run")) config.run = ParseRun(object.at("run"));
  if (object.contains("distortion_model")) {
    const auto model = Get<std::string>(object, "distortion_model", "config");
    if (model == "ours") {
      config.run.distortion_model = DistortionModel::kOurs;
    } else if (model == "blink") {
      config.run.distortion_model = DistortionModel::kBlink;
    } else {
      throw InvalidInput("unknown distortion_model '" + model + "'");
    }
  }
  if (object.contains("prior")) {
    const json& prior = object.at("prior");
    if (prior.is_string()) {
      if (prior.get<std::string>() != "auto") {
        throw InvalidInput("prior must be \"auto\" or an object");
      }
    } else {
      // Validate keys now; data-dependent defaults are filled at load time.
      ResolvePrior(prior, 1000);
      config.prior = prior;
    }
  }
  if (object.contains("output_dir")) {
    config.output_dir = ResolvePath(
        Get<std::string>(object, "output_dir", "config"), base_dir);
  } else {
    config.output_dir = ResolvePath(config.output_dir, base_dir);
  }
  config.canonical = object.dump();
  return config;
}

ExperimentConfig LoadExperimentConfig(const std::string& path) {
  return ParseExperimentConfig(ReadJsonFile(path), ParentDir(path));
}

Dataset BuildDataset(const ExperimentConfig& config,
                     const std::vector<std::string>& attribute_names,
                     std::vector<std::vector<std::string>> columns,
                     const std::vector<std::string>& source_column) {
  const Index n = columns.empty() ? 0 : static_cast<Index>(columns[0].size());
  if (n == 0) throw InvalidInput("dataset has no records");
  PreprocessColumns(columns, config.preprocess);

  std::vector<AttributeSpec> specs;
  std::vector<const AttributeConfig*> overrides;
  for (size_t a = 0; a < attribute_names.size(); ++a) {
    auto it = std::find_if(
        config.attributes.begin(), config.attributes.end(),
        [&](const AttributeConfig& c) { return c.name == attribute_names[a]; });
    if (it == config.attributes.end()) {
      throw InvalidInput("no attribute spec for column '" + attribute_names[a] +
                         "'");
    }
    AttributeSpec spec;
    spec.name = it->name;
    spec.distance = it->distance;
    spec.base_mode = it->base_mode;
    std::vector<std::string> domain = columns[a];
    std::sort(domain.begin(), domain.end());
    domain.erase(std::unique(domain.begin(), domain.end()), domain.end());
    spec.domain = std::move(domain);
    specs.push_back(std::move(spec));
    overrides.push_back(&*it);
  }
  for (const AttributeConfig& attr : config.attributes) {
    if (std::find(attribute_names.begin(), attribute_names.end(), attr.name) ==
        attribute_names.end()) {
      throw InvalidInput("attribute spec '" + attr.name +
                         "' has no column in the dataset");
    }
  }

  Dataset out;
  std::vector<Index> sources(n, 0);
  if (!source_column.empty()) {
    std::map<std::string, Index> ids;
    for (const std::string& s : source_column) ids.emplace(s, 0);
    for (auto& [name, id] : ids) {
      id = static_cast<Index>(out.source_names.size());
      out.source_names.push_back(name);
    }
    for (Index i = 0; i < n; ++i) sources[i] = ids.at(source_column[i]);
  } else {
    out.source_names.push_back("0");
  }
  const int num_sources = static_cast<int>(out.source_names.size());

  ModelDefaults defaults = DefaultHyperparameters(n, num_sources, specs);
  if (config.run.distortion_model == DistortionModel::kBlink) {
    defaults = BlinkVariantOverrides(std::move(defaults), n);
  }
  for (size_t a = 0; a < defaults.specs.size(); ++a) {
    AttributeSpec& spec = defaults.specs[a];
    const AttributeConfig& attr = *overrides[a];
    if (attr.distortion_prior) {
      spec.distortion_prior.assign(num_sources, *attr.distortion_prior);
    }
    if (attr.rho_prior) spec.rho_prior = *attr.rho_prior;
    if (attr.entity_concentration) {
      spec.entity_concentration = *attr.entity_concentration;
    }
  }
  out.prior =
      config.prior.is_null() ? defaults.ep : ResolvePrior(config.prior, n);
  out.table = RecordTable::FromColumns(std::move(defaults.specs), columns,
                                       std::move(sources), num_sources);
  return out;
}

Dataset LoadDataset(const ExperimentConfig& config) {
  const CsvTable csv = ReadCsv(config.dataset);
  if (csv.header.empty()) throw InvalidInput("dataset '" + config.dataset +
                                             "' is empty");
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> columns;
  std::vector<std::string> source_column;
  std::set<std::string> ignored(config.ignore_columns.begin(),
                                config.ignore_columns.end());
  for (size_t c = 0; c < csv.header.size(); ++c) {
    const std::string& name = csv.header[c];
    if (ignored.count(name)) continue;
    std::vector<std::string> column;
    column.reserve(csv.rows.size());
    for (const auto& row : csv.rows) column.push_back(row[c]);
    if (name == config.source_column) {
      source_column = std::move(column);
    } else {
      names.push_back(name);
      columns.push_back(std::move(column));
    }
  }
  return BuildDataset(config, names, std::move(columns), source_column);
}

SimulationConfig ParseSimulationConfig(const json& object,
                                       const std::string& base_dir) {
  const std::string where = "simulation config";
  CheckKeys(object,
            {"expected_records", "distortion", "mu", "p_inc", "seed",
             "tables_dir", "output_dir", "household_mix", "name_mechanisms",
             "shared_last_name", "single_parent"},
            where);
  SimulationConfig config;
  SimConfig& sim = config.sim;
  GetIf(object, "expected_records", where, sim.expected_records);
  if (object.contains("distortion")) {
    const auto level = Get<std::string>(object, "distortion", where);
    if (level == "low") {
      sim.distortion_level = DistortionLevel::kLow;
    } else if (level == "high") {
      sim.distortion_level = DistortionLevel::kHigh;
    } else {
      throw InvalidInput("distortion must be \"low\" or \"high\"");
    }
  }
  GetIf(object, "mu", where, sim.duplication_mu);
  GetIf(object, "p_inc", where, sim.p_inc);
  GetIf(object, "seed", where, sim.seed);
  GetIf(object, "shared_last_name", where, sim.shared_last_name);
  GetIf(object, "single_parent", where, sim.single_parent);
  if (object.contains("household_mix")) {
    const json& mix = object.at("household_mix");
    CheckKeys(mix, {"single", "couple", "with_children", "unrelated_adults"},
              "household_mix");
    GetIf(mix, "single", where, sim.mix.single);
    GetIf(mix, "couple", where, sim.mix.couple);
    GetIf(mix, "with_children", where, sim.mix.with_children);
    GetIf(mix, "unrelated_adults", where, sim.mix.unrelated_adults);
  }
  if (object.contains("name_mechanisms")) {
    const json& mix = object.at("name_mechanisms");
    CheckKeys(mix, {"typo", "variant", "redraw"}, "name_mechanisms");
    GetIf(mix, "typo", where, sim.typo_prob);
    GetIf(mix, "variant", where, sim.variant_prob);
    GetIf(mix, "redraw", where, sim.redraw_prob);
  }
  if (!(sim.duplication_mu > 0)) throw InvalidInput("mu must be > 0");
  if (!(sim.p_inc > 0 && sim.p_inc <= 1)) {
    throw InvalidInput("p_inc must lie in (0, 1]");
  }
  config.tables_dir = object.contains("tables_dir")
                          ? ResolvePath(Get<std::string>(object, "tables_dir",
                                                         where),
                                        base_dir)
                          : std::string(RESOLVER_DEFAULT_TABLES_DIR);
  config.output_dir = ResolvePath(
      object.contains("output_dir")
          ? Get<std::string>(object, "output_dir", where)
          : config.output_dir,
      base_dir);
  config.canonical = object.dump();
  return config;
}

SimulationConfig LoadSimulationConfig(const std::string& path) {
  return ParseSimulationConfig(ReadJsonFile(path), ParentDir(path));
}

std::uint64_t Fnv1a(std::string_view bytes, std::uint64_t seed) {
  std::uint64_t hash = seed;
  for (char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001b3ull;
  }
  return hash;
}

std::string HexDigest(std::uint64_t hash) {
  char buffer[17];
  std::snprintf(buffer, sizeof(buffer), "%016llx",
                static_cast<unsigned long long>(hash));
  return buffer;
}

std::string FormatDouble(double value) {
  char buffer[32];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

}  // namespace resolver
