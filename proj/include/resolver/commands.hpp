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

// The command-line operations. Each one throws InvalidInput for bad
// configuration or inputs and NumericFailure for numerical breakdowns;
// ExitCodeFor maps those onto process exit codes.

#ifndef RESOLVER_COMMANDS_HPP_
#define RESOLVER_COMMANDS_HPP_

#include <exception>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "resolver/evaluation.hpp"
#include "resolver/io.hpp"
#include "resolver/simulator.hpp"

namespace resolver {

inline constexpr char kVersion[] = "1.0.0";

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNumeric = 3;

// Runs fn, reporting any exception on err, and returns the exit code.
int RunAndReport(const std::function<void()>& fn, std::ostream& err);

// Number of chains run at once: RESOLVER_THREADS if set, otherwise the
// hardware concurrency, never more than requested.
int ParallelChains(int requested);

// Runs the configured model and writes links.csv, scalars.csv and
// run.json into the output directory. With more than one chain each chain
// c writes to chain_<c>/ and uses seed + c.
void FitExperiment(const ExperimentConfig& config, int chains,
                   std::ostream& log);
void CmdFit(const std::string& config_path, int chains,
            const std::string& output_override, std::ostream& log);

// Writes records.csv, truth.csv (record_id, entity_id) and
// distortion.csv (per-attribute activation flags).
void WriteSimulation(const SimulatedData& data, const std::string& directory);
void CmdSimulate(const std::string& config_path,
                 const std::string& output_override, std::ostream& log);

struct EvaluationResult {
  std::vector<std::int64_t> sample_index;
  std::vector<MetricSample> samples;
  Index true_entities = 0;
  PosteriorSummary precision;
  PosteriorSummary recall;
  PosteriorSummary f1;
  PosteriorSummary num_entities;
  PosteriorSummary entity_error;
};

// Streams a links file against a truth file. Throws InvalidInput listing
// offending record ids when the record sets differ.
EvaluationResult EvaluateLinks(const std::string& links_path,
                               const std::string& truth_path);
// Writes metrics.csv and summary.csv; output defaults to the links
// directory.
void CmdEvaluate(const std::string& links_path, const std::string& truth_path,
                 const std::string& output_dir, std::ostream& log);

// "0.933 (0.923, 0.941)".
std::string FormatSummary(const PosteriorSummary& summary, int digits = 3);

enum class GewekeStatus { kOk, kFlagged, kNotApplicable };

struct GewekeRow {
  std::string scalar;
  std::int64_t samples = 0;
  double z = 0.0;
  GewekeStatus status = GewekeStatus::kNotApplicable;
};

// Flags |Z| > 2; traces that are too short or constant are not applicable.
std::vector<GewekeRow> GewekeTable(
    const std::vector<std::string>& names,
    const std::vector<std::vector<double>>& traces);
// Writes geweke.csv and trace_long.csv; output defaults to the scalars
// directory.
void CmdDiagnose(const std::string& scalars_path, const std::string& output_dir,
                 std::ostream& log);

// Applies preprocessing rules to the named columns (all when empty).
void CmdPreprocess(const std::string& input, const std::string& output,
                   const std::vector<std::string>& rules,
                   const std::vector<std::string>& columns);

}  // namespace resolver

#endif  // RESOLVER_COMMANDS_HPP_
