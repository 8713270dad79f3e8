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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "resolver/commands.hpp"
#include "resolver/csv.hpp"
#include "resolver/io.hpp"
#include "test_util.hpp"

namespace resolver {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

std::string Slurp(const std::string& path) { return ReadFileText(path); }

// Ten records of three people from two sources.
const char kToyData[] =
    "first,last,year,source\n"
    "ANNA,SMITH,1980,a\n"
    "ANNA,SMITH,1980,b\n"
    "ANNE,SMITH,1980,b\n"
    "JOHN,BROWN,1975,a\n"
    "JON,BROWN,1975,b\n"
    "JOHN,BROWN,1975,a\n"
    "MARY,JONES,1990,a\n"
    "MARY,JONES,1990,b\n"
    "MARIE,JONES,1990,a\n"
    "MARY,JONES,1991,b\n";

json ToyConfig(const std::string& dir) {
  return json{
      {"dataset", dir + "/toy.csv"},
      {"attributes",
       {{"first", {{"distance", "levenshtein"}, {"cutoff", 0.5}}},
        {"last", {{"distance", "levenshtein"}, {"cutoff", 0.5}}},
        {"year", {{"distance", "constant"}}}}},
      {"prior", {{"regime", "pitman-yor"}}},
      {"run",
       {{"iterations", 60}, {"burn_in", 20}, {"thin", 4}, {"seed", 17}}},
      {"output_dir", dir + "/out"}};
}

std::string WriteToyConfig(const std::string& dir, const json& config) {
  WriteText(dir + "/toy.csv", kToyData);
  const std::string path = dir + "/config.json";
  WriteText(path, config.dump(2));
  return path;
}

int Run(const std::function<void()>& fn, std::string* message = nullptr) {
  std::ostringstream err;
  const int code = RunAndReport(fn, err);
  if (message) *message = err.str();
  return code;
}

TEST_CASE("io: preprocessing rules") {
  const PreprocessRules all =
      ParsePreprocessRules({"split-hyphens", "strip-punctuation", "uppercase"});
  CHECK(Preprocess("Smith-Jones", all) == "SMITH JONES");
  CHECK(Preprocess("o'brien, jr.", all) == "OBRIEN JR");
  CHECK(Preprocess("a-b", ParsePreprocessRules({"strip-punctuation"})) ==
        "ab");
  CHECK(Preprocess("Mixed", {}) == "Mixed");
  CHECK_THROWS_AS(ParsePreprocessRules({"lowercase"}), InvalidInput);
}

TEST_CASE("io: config parsing rejects unknown keys") {
  const std::string dir = testing::ScratchDir("io_keys");
  json config = ToyConfig(dir);
  CHECK_NOTHROW(ParseExperimentConfig(config, dir));
  config["typo"] = 1;
  CHECK_THROWS_AS(ParseExperimentConfig(config, dir), InvalidInput);
  config = ToyConfig(dir);
  config["run"]["iteratons"] = 5;
  CHECK_THROWS_AS(ParseExperimentConfig(config, dir), InvalidInput);
  config = ToyConfig(dir);
  config["attributes"]["first"]["distanse"] = "constant";
  CHECK_THROWS_AS(ParseExperimentConfig(config, dir), InvalidInput);
  config = ToyConfig(dir);
  config["attributes"]["first"]["distance"] = "jaro";
  CHECK_THROWS_AS(ParseExperimentConfig(config, dir), InvalidInput);
  config = ToyConfig(dir);
  config["prior"]["regime"] = "dirichlet";
  CHECK_THROWS_AS(ParseExperimentConfig(config, dir), InvalidInput);
  config = ToyConfig(dir);
  config["run"]["burn_in"] = 100;
  CHECK_THROWS_AS(ParseExperimentConfig(config, dir), InvalidInput);
}

TEST_CASE("io: relative paths resolve against the config directory") {
  const std::string dir = testing::ScratchDir("io_paths");
  json config = ToyConfig(dir);
  config["dataset"] = "toy.csv";
  config["output_dir"] = "results";
  const ExperimentConfig parsed = ParseExperimentConfig(config, dir);
  CHECK(fs::path(parsed.dataset) == fs::path(dir) / "toy.csv");
  CHECK(fs::path(parsed.output_dir) == fs::path(dir) / "results");
}

TEST_CASE("io: dataset loading") {
  const std::string dir = testing::ScratchDir("io_dataset");
  const std::string path = WriteToyConfig(dir, ToyConfig(dir));
  const Dataset data = LoadDataset(LoadExperimentConfig(path));
  CHECK(data.table.num_records() == 10);
  CHECK(data.table.num_attributes() == 3);
  CHECK(data.table.num_sources() == 2);
  CHECK(data.source_names == std::vector<std::string>{"a", "b"});
  CHECK(data.prior.regime == EpRegime::kPitmanYor);
  CHECK(data.table.spec(2).domain ==
        std::vector<std::string>{"1975", "1980", "1990", "1991"});
}

TEST_CASE("io: missing attribute spec is an input error naming the column") {
  const std::string dir = testing::ScratchDir("io_missing");
  json config = ToyConfig(dir);
  config["attributes"].erase("year");
  const std::string path = WriteToyConfig(dir, config);
  std::string message;
  CHECK(Run([&] { CmdFit(path, 1, "", std::cerr); }, &message) ==
        kExitInvalid);
  CHECK(message.find("'year'") != std::string::npos);

  config = ToyConfig(dir);
  config["attributes"]["middle"] = json::object();
  WriteToyConfig(dir, config);
  CHECK(Run([&] { CmdFit(path, 1, "", std::cerr); }, &message) ==
        kExitInvalid);
  CHECK(message.find("'middle'") != std::string::npos);
}

TEST_CASE("io: fit output schema and determinism") {
  const std::string dir = testing::ScratchDir("io_fit");
  const std::string path = WriteToyConfig(dir, ToyConfig(dir));
  std::ostringstream log;
  REQUIRE(Run([&] { CmdFit(path, 1, dir + "/run1", log); }) == kExitOk);
  REQUIRE(Run([&] { CmdFit(path, 1, dir + "/run2", log); }) == kExitOk);
  for (const char* file : {"links.csv", "scalars.csv"}) {
    CHECK(Slurp(dir + "/run1/" + file) == Slurp(dir + "/run2/" + file));
  }

  const CsvTable links = ReadCsv(dir + "/run1/links.csv");
  CHECK(links.header ==
        std::vector<std::string>{"sample_index", "record_id", "entity_label"});
  // (60 - 20) / 4 samples of 10 records.
  CHECK(links.rows.size() == 100);
  for (size_t r = 0; r < links.rows.size(); ++r) {
    CHECK(std::stoi(links.rows[r][0]) == static_cast<int>(r / 10));
    CHECK(std::stoi(links.rows[r][1]) == static_cast<int>(r % 10));
    // Canonical labels never exceed the record id.
    CHECK(std::stoi(links.rows[r][2]) <= std::stoi(links.rows[r][1]));
  }
  const CsvTable scalars = ReadCsv(dir + "/run1/scalars.csv");
  CHECK(scalars.header[0] == "sample_index");
  CHECK(scalars.header[1] == "iteration");
  CHECK(scalars.header[2] == "num_entities");
  CHECK(scalars.rows.size() == 10);
  CHECK(scalars.rows[0][1] == "24");

  const json manifest = json::parse(Slurp(dir + "/run1/run.json"));
  const json other = json::parse(Slurp(dir + "/run2/run.json"));
  CHECK(manifest["seed"] == 17);
  CHECK(manifest["samples"] == 10);
  CHECK(manifest["regime"] == "pitman-yor");
  CHECK(manifest["config_hash"] == other["config_hash"]);
  CHECK(manifest["dataset_hash"] == other["dataset_hash"]);
  CHECK(manifest.contains("versions"));
}

TEST_CASE("io: several chains use consecutive seeds") {
  const std::string dir = testing::ScratchDir("io_chains");
  const std::string path = WriteToyConfig(dir, ToyConfig(dir));
  std::ostringstream log;
  REQUIRE(Run([&] { CmdFit(path, 2, dir + "/multi", log); }) == kExitOk);
  const json c0 = json::parse(Slurp(dir + "/multi/chain_0/run.json"));
  const json c1 = json::parse(Slurp(dir + "/multi/chain_1/run.json"));
  CHECK(c0["seed"] == 17);
  CHECK(c1["seed"] == 18);
  REQUIRE(Run([&] { CmdFit(path, 1, dir + "/single", log); }) == kExitOk);
  CHECK(Slurp(dir + "/multi/chain_0/scalars.csv") ==
        Slurp(dir + "/single/scalars.csv"));
}

TEST_CASE("io: evaluation of links against truth") {
  const std::string dir = testing::ScratchDir("io_eval");
  WriteText(dir + "/truth.csv",
            "record_id,entity_id\n0,x\n1,x\n2,y\n3,z\n");
  SUBCASE("truth equal to the sample scores one") {
    WriteText(dir + "/links.csv",
              "sample_index,record_id,entity_label\n0,0,0\n0,1,0\n0,2,2\n"
              "0,3,3\n");
    const EvaluationResult result =
        EvaluateLinks(dir + "/links.csv", dir + "/truth.csv");
    REQUIRE(result.samples.size() == 1);
    CHECK(result.f1.median == 1.0);
    CHECK(result.f1.lower == 1.0);
    CHECK(result.f1.upper == 1.0);
    CHECK(result.true_entities == 3);
    CHECK(result.entity_error.median == 0.0);
  }
  SUBCASE("two samples") {
    WriteText(dir + "/links.csv",
              "sample_index,record_id,entity_label\n0,0,0\n0,1,0\n0,2,0\n"
              "0,3,3\n1,0,0\n1,1,1\n1,2,2\n1,3,3\n");
    const EvaluationResult result =
        EvaluateLinks(dir + "/links.csv", dir + "/truth.csv");
    REQUIRE(result.samples.size() == 2);
    CHECK(result.samples[0].precision == doctest::Approx(1.0 / 3));
    CHECK(result.samples[0].recall == 1.0);
    CHECK(result.samples[1].recall == 0.0);
    std::ostringstream out;
    CmdEvaluate(dir + "/links.csv", dir + "/truth.csv", dir + "/eval", out);
    CHECK(ReadCsv(dir + "/eval/metrics.csv").rows.size() == 2);
    const CsvTable summary = ReadCsv(dir + "/eval/summary.csv");
    CHECK(summary.header[0] == "metric");
    CHECK(summary.rows.size() >= 5);
  }
  SUBCASE("mismatched record ids are reported") {
    WriteText(dir + "/links.csv",
              "sample_index,record_id,entity_label\n0,0,0\n0,1,0\n0,2,2\n"
              "0,7,3\n");
    std::string message;
    CHECK(Run([&] {
            EvaluateLinks(dir + "/links.csv", dir + "/truth.csv");
          }, &message) == kExitInvalid);
    CHECK(message.find('7') != std::string::npos);
    CHECK(message.find('3') != std::string::npos);
  }
}

TEST_CASE("io: summary formatting") {
  CHECK(FormatSummary({0.9331, 0.9229, 0.9412}) == "0.933 (0.923, 0.941)");
}

TEST_CASE("io: Geweke table and diagnose outputs") {
  const std::string dir = testing::ScratchDir("io_diag");
  std::string text = "sample_index,iteration,flat,shifted\n";
  for (int k = 0; k < 200; ++k) {
    text += std::to_string(k) + "," + std::to_string(k + 1) + ",1," +
            std::to_string(k < 20 ? 10.0 + (k % 3) : (k % 7) * 0.1) + "\n";
  }
  WriteText(dir + "/scalars.csv", text);
  std::ostringstream out;
  CmdDiagnose(dir + "/scalars.csv", "", out);
  const CsvTable geweke = ReadCsv(dir + "/geweke.csv");
  REQUIRE(geweke.rows.size() == 2);
  CHECK(geweke.rows[0][0] == "flat");
  CHECK(geweke.rows[1][0] == "shifted");
  const int status = geweke.Column("status");
  REQUIRE(status >= 0);
  CHECK(geweke.rows[0][status] == "not-applicable");
  CHECK(geweke.rows[1][status] == "flagged");
  const CsvTable trace = ReadCsv(dir + "/trace_long.csv");
  CHECK(trace.rows.size() == 400);
}

TEST_CASE("io: simulation config validation") {
  const std::string dir = testing::ScratchDir("io_sim");
  json config = {{"expected_records", 100}, {"mu", 0.0}};
  WriteText(dir + "/sim.json", config.dump());
  std::string message;
  CHECK(Run([&] { CmdSimulate(dir + "/sim.json", dir + "/out", std::cerr); },
            &message) == kExitInvalid);
  config = {{"expected_records", 100}, {"mu", 1.0}, {"colour", "red"}};
  WriteText(dir + "/sim.json", config.dump());
  CHECK(Run([&] { CmdSimulate(dir + "/sim.json", dir + "/out", std::cerr); })
        == kExitInvalid);
}

TEST_CASE("io: simulate, fit and evaluate round trip") {
  const std::string dir = testing::ScratchDir("io_round_trip");
  const json sim = {{"expected_records", 200},
                    {"mu", 1.0},
                    {"seed", 3},
                    {"tables_dir",
                     std::string(RESOLVER_SOURCE_DIR) + "/data/simulator"},
                    {"output_dir", "sim"}};
  WriteText(dir + "/sim.json", sim.dump());
  std::ostringstream log;
  REQUIRE(Run([&] { CmdSimulate(dir + "/sim.json", "", log); }) == kExitOk);
  for (const char* file :
       {"records.csv", "truth.csv", "distortion.csv", "simulation.json"}) {
    CHECK(fs::exists(dir + "/sim/" + file));
  }
  json attributes;
  for (const char* name : kSimAttributeNames) attributes[name] = json::object();
  attributes["first_name"] = {{"distance", "levenshtein"}, {"cutoff", 0.35}};
  attributes["last_name"] = {{"distance", "levenshtein"}, {"cutoff", 0.35}};
  const json fit = {{"dataset", "sim/records.csv"},
                    {"attributes", attributes},
                    {"run",
                     {{"iterations", 300}, {"burn_in", 200}, {"thin", 10},
                      {"seed", 1}}},
                    {"output_dir", "fit"}};
  WriteText(dir + "/fit.json", fit.dump());
  REQUIRE(Run([&] { CmdFit(dir + "/fit.json", 1, "", log); }) == kExitOk);
  const EvaluationResult result =
      EvaluateLinks(dir + "/fit/links.csv", dir + "/sim/truth.csv");
  CHECK(result.samples.size() == 10);
  CHECK(result.f1.median > 0.5);
}

TEST_CASE("io: number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3, 1e-300, 123456789.0, -2.5}) {
    CHECK(std::stod(FormatDouble(v)) == v);
  }
  CHECK(HexDigest(Fnv1a("")) == "cbf29ce484222325");
  CHECK(HexDigest(Fnv1a("a")) == "af63dc4c8601ec8c");
}

}  // namespace
}  // namespace resolver
