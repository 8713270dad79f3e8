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

// resolver fit|simulate|evaluate|diagnose|preprocess

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "resolver/commands.hpp"

int main(int argc, char** argv) {
  using namespace resolver;
  CLI::App app{"Bayesian entity resolution with Ewens-Pitman linkage priors"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  std::string config_path, output_dir;
  int chains = 1;
  auto* fit = app.add_subcommand("fit", "Run the sampler on a dataset");
  fit->add_option("config", config_path, "Experiment config (JSON)")
      ->required();
  fit->add_option("-o,--output", output_dir, "Override the output directory");
  fit->add_option("--chains", chains, "Independent chains, seeds seed..seed+k-1")
      ->check(CLI::PositiveNumber);

  auto* simulate =
      app.add_subcommand("simulate", "Generate a synthetic dataset with truth");
  simulate->add_option("config", config_path, "Simulation config (JSON)")
      ->required();
  simulate->add_option("-o,--output", output_dir,
                       "Override the output directory");

  std::string links_path, truth_path;
  auto* evaluate = app.add_subcommand(
      "evaluate", "Pairwise precision, recall and F1 of posterior samples");
  evaluate->add_option("links", links_path, "links.csv from fit")->required();
  evaluate->add_option("truth", truth_path, "record_id,entity_id CSV")
      ->required();
  evaluate->add_option("-o,--output", output_dir,
                       "Output directory (default: next to links)");

  std::string scalars_path;
  auto* diagnose = app.add_subcommand(
      "diagnose", "Geweke scores and long-format traces of sampled scalars");
  diagnose->add_option("scalars", scalars_path, "scalars.csv from fit")
      ->required();
  diagnose->add_option("-o,--output", output_dir,
                       "Output directory (default: next to scalars)");

  std::string input_path, output_path;
  std::vector<std::string> rules, columns;
  auto* preprocess =
      app.add_subcommand("preprocess", "Clean text columns of a CSV file");
  preprocess->add_option("input", input_path, "Input CSV")->required();
  preprocess->add_option("output", output_path, "Output CSV")->required();
  preprocess
      ->add_option("-r,--rule", rules,
                   "split-hyphens, strip-punctuation or uppercase")
      ->delimiter(',');
  preprocess->add_option("-c,--column", columns, "Columns to clean (all)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  return RunAndReport(
      [&] {
        if (fit->parsed()) {
          CmdFit(config_path, chains, output_dir, std::cerr);
        } else if (simulate->parsed()) {
          CmdSimulate(config_path, output_dir, std::cerr);
        } else if (evaluate->parsed()) {
          CmdEvaluate(links_path, truth_path, output_dir, std::cout);
        } else if (diagnose->parsed()) {
          CmdDiagnose(scalars_path, output_dir, std::cout);
        } else if (preprocess->parsed()) {
          CmdPreprocess(input_path, output_path, rules, columns);
        }
      },
      std::cerr);
}
