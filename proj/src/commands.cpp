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

#include "resolver/commands.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <unordered_map>

#include <Eigen/Core>
#include <json.hpp>

#include "resolver/csv.hpp"
#include "resolver/sampler.hpp"
#include "resolver/state.hpp"

namespace resolver {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string Join(const fs::path& dir, const char* name) {
  return (dir / name).string();
}

std::int64_t ParseInt(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidInput("expected an integer " + what + ", got '" + text + "'");
  }
  return value;
}

double ParseDouble(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) {
    throw InvalidInput("expected a number " + what + ", got '" + text + "'");
  }
  return value;
}

int RequireColumn(const std::vector<std::string>& header, const char* name,
                  const std::string& path) {
  for (size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return static_cast<int>(k);
  }
  throw InvalidInput("'" + path + "' has no '" + name + "' column");
}

std::string Versions() {
  return std::string("resolver ") + kVersion + "; eigen " +
         std::to_string(EIGEN_WORLD_VERSION) + "." +
         std::to_string(EIGEN_MAJOR_VERSION) + "." +
         std::to_string(EIGEN_MINOR_VERSION) + "; zlib " + ZlibVersion() +
         "; compiler " + __VERSION__;
}

void WriteJson(const std::string& path, const ordered_json& json) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << json.dump(2) << '\n';
}

std::string ListIds(const std::vector<std::int64_t>& ids) {
  std::string out;
  const size_t shown = std::min<size_t>(ids.size(), 20);
  for (size_t k = 0; k < shown; ++k) {
    if (k > 0) out += ", ";
    out += std::to_string(ids[k]);
  }
  if (ids.size() > shown) {
    out += " and " + std::to_string(ids.size() - shown) + " more";
  }
  return out;
}

struct ChainJob {
  int chain = 0;
  fs::path directory;
  std::uint64_t seed = 0;
};

void RunFitChain(const ExperimentConfig& config, const Dataset& data,
                 const std::shared_ptr<const ModelContext>& context,
                 const ChainJob& job, int num_chains,
                 const std::string& dataset_hash) {
  fs::create_directories(job.directory);
  RunConfig run = config.run;
  run.seed = job.seed;
  const auto start = std::chrono::steady_clock::now();

  Rng rng(run.seed);
  ModelState state = Initialize(context, data.prior, rng);
  const std::vector<std::string> names =
      run.monitored.empty() ? ScalarNames(state) : run.monitored;

  CsvWriter links(Join(job.directory, "links.csv"));
  CsvWriter scalars(Join(job.directory, "scalars.csv"));
  links.WriteRow({"sample_index", "record_id", "entity_label"});
  std::vector<std::string> header = {"sample_index", "iteration"};
  header.insert(header.end(), names.begin(), names.end());
  scalars.WriteRow(header);

  std::ostream& link_out = links.stream();
  std::ostream& scalar_out = scalars.stream();
  std::int64_t written = 0;
  RunChainFrom(state, run, rng,
               [&](std::int64_t sample, std::int64_t iteration,
                   const ModelState& s, const std::vector<double>& values) {
                 const std::vector<Index> canonical = CanonicalLinks(s.links);
                 const std::string prefix = std::to_string(sample) + ',';
                 for (size_t i = 0; i < canonical.size(); ++i) {
                   link_out << prefix << i << ',' << canonical[i] << '\n';
                 }
                 scalar_out << sample << ',' << iteration;
                 for (double v : values) scalar_out << ',' << FormatDouble(v);
                 scalar_out << '\n';
                 ++written;
               });
  const std::string links_path = links.Finish();
  const std::string scalars_path = scalars.Finish();
  const double seconds = std::chrono::duration<double>(
                             std::chrono::steady_clock::now() - start)
                             .count();

  ordered_json manifest;
  manifest["versions"] = Versions();
  manifest["seed"] = run.seed;
  manifest["chain"] = job.chain;
  manifest["num_chains"] = num_chains;
  manifest["config_hash"] = HexDigest(Fnv1a(config.canonical));
  manifest["dataset_hash"] = dataset_hash;
  manifest["num_records"] = data.table.num_records();
  manifest["num_sources"] = data.table.num_sources();
  manifest["regime"] = RegimeName(data.prior.regime);
  manifest["distortion_model"] =
      run.distortion_model == DistortionModel::kOurs ? "ours" : "blink";
  manifest["iterations"] = run.iterations;
  manifest["burn_in"] = run.burn_in;
  manifest["thin"] = run.thin;
  manifest["samples"] = written;
  manifest["links"] = fs::path(links_path).filename().string();
  manifest["scalars"] = fs::path(scalars_path).filename().string();
  manifest["wall_time_seconds"] = seconds;
  manifest["config"] = ordered_json::parse(config.canonical);
  WriteJson(Join(job.directory, "run.json"), manifest);
}

void WriteSummaryRow(CsvWriter& out, const char* metric,
                     const PosteriorSummary& summary) {
  out.WriteRow({metric, FormatDouble(summary.median),
                FormatDouble(summary.lower), FormatDouble(summary.upper),
                FormatSummary(summary)});
}

}  // namespace

int RunAndReport(const std::function<void()>& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericFailure& e) {
    err << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "internal failure: " << e.what() << '\n';
    return kExitNumeric;
  }
}

int ParallelChains(int requested) {
  int cap = static_cast<int>(std::thread::hardware_concurrency());
  if (const char* env = std::getenv("RESOLVER_THREADS")) {
    const std::int64_t parsed = ParseInt(env, "in RESOLVER_THREADS");
    if (parsed < 1) throw InvalidInput("RESOLVER_THREADS must be >= 1");
    cap = static_cast<int>(std::min<std::int64_t>(parsed, 1 << 16));
  }
  return std::max(1, std::min(requested, std::max(cap, 1)));
}

void FitExperiment(const ExperimentConfig& config, int chains,
                   std::ostream& log) {
  if (chains < 1) throw InvalidInput("--chains must be >= 1");
  const Dataset data = LoadDataset(config);
  const std::string dataset_hash =
      HexDigest(Fnv1a(ReadFileText(config.dataset)));
  log << "loaded " << data.table.num_records() << " records, "
      << data.table.num_attributes() << " attributes, "
      << data.table.num_sources() << " source(s); prior "
      << RegimeName(data.prior.regime) << '\n';
  const auto context =
      ModelContext::Build(data.table, config.run.distortion_model);

  std::vector<ChainJob> jobs;
  for (int c = 0; c < chains; ++c) {
    ChainJob job;
    job.chain = c;
    job.directory = chains == 1 ? fs::path(config.output_dir)
                                : fs::path(config.output_dir) /
                                      ("chain_" + std::to_string(c));
    job.seed = config.run.seed + static_cast<std::uint64_t>(c);
    jobs.push_back(job);
  }

  std::mutex mutex;
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < jobs.size(); k = next++) {
      try {
        RunFitChain(config, data, context, jobs[k], chains, dataset_hash);
        std::lock_guard<std::mutex> lock(mutex);
        log << "chain " << jobs[k].chain << " written to "
            << jobs[k].directory.string() << '\n';
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int threads = ParallelChains(chains);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& thread : pool) thread.join();
  }
  for (const auto& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

void CmdFit(const std::string& config_path, int chains,
            const std::string& output_override, std::ostream& log) {
  ExperimentConfig config = LoadExperimentConfig(config_path);
  if (!output_override.empty()) config.output_dir = output_override;
  FitExperiment(config, chains, log);
}

void WriteSimulation(const SimulatedData& data, const std::string& directory) {
  fs::create_directories(directory);
  const fs::path dir(directory);
  CsvWriter records(Join(dir, "records.csv"));
  CsvWriter truth(Join(dir, "truth.csv"));
  CsvWriter flags(Join(dir, "distortion.csv"));
  std::vector<std::string> header(kSimAttributeNames.begin(),
                                  kSimAttributeNames.end());
  records.WriteRow(header);
  truth.WriteRow({"record_id", "entity_id"});
  header.insert(header.begin(), "record_id");
  flags.WriteRow(header);
  for (size_t i = 0; i < data.records.size(); ++i) {
    records.WriteRow(
        std::vector<std::string>(data.records[i].begin(), data.records[i].end()));
    truth.WriteRow({std::to_string(i), std::to_string(data.entity[i])});
    std::vector<std::string> row = {std::to_string(i)};
    for (int a = 0; a < kNumSimAttributes; ++a) {
      row.push_back(std::to_string(
          static_cast<int>(data.activated(static_cast<Eigen::Index>(i), a))));
    }
    flags.WriteRow(row);
  }
  records.Finish();
  truth.Finish();
  flags.Finish();
}

void CmdSimulate(const std::string& config_path,
                 const std::string& output_override, std::ostream& log) {
  SimulationConfig config = LoadSimulationConfig(config_path);
  if (!output_override.empty()) config.output_dir = output_override;
  config.sim.tables = SimTables::Load(config.tables_dir);
  const SimulatedData data = Simulate(config.sim);
  WriteSimulation(data, config.output_dir);

  std::unordered_map<Index, int> entities;
  for (Index e : data.entity) ++entities[e];
  ordered_json manifest;
  manifest["versions"] = Versions();
  manifest["seed"] = config.sim.seed;
  manifest["config_hash"] = HexDigest(Fnv1a(config.canonical));
  manifest["num_records"] = data.records.size();
  manifest["num_entities"] = entities.size();
  manifest["config"] = ordered_json::parse(config.canonical);
  WriteJson(Join(fs::path(config.output_dir), "simulation.json"), manifest);
  log << "simulated " << data.records.size() << " records of "
      << entities.size() << " individuals into " << config.output_dir << '\n';
}

EvaluationResult EvaluateLinks(const std::string& links_path,
                               const std::string& truth_path) {
  // Truth: record ids must be exactly 0..N-1.
  std::vector<Index> truth;
  {
    CsvReader reader(truth_path);
    const int rid_col = RequireColumn(reader.header(), "record_id", truth_path);
    const int eid_col = RequireColumn(reader.header(), "entity_id", truth_path);
    std::unordered_map<std::string, Index> entity_ids;
    std::vector<std::pair<std::int64_t, Index>> rows;
    std::vector<std::string> row;
    while (reader.Next(row)) {
      const auto [it, inserted] = entity_ids.emplace(
          row[eid_col], static_cast<Index>(entity_ids.size()));
      rows.emplace_back(ParseInt(row[rid_col], "record_id in " + truth_path),
                        it->second);
    }
    const std::int64_t n = static_cast<std::int64_t>(rows.size());
    truth.assign(n, -1);
    std::vector<std::int64_t> bad;
    for (const auto& [rid, eid] : rows) {
      if (rid < 0 || rid >= n || truth[rid] != -1) {
        bad.push_back(rid);
      } else {
        truth[rid] = eid;
      }
    }
    if (!bad.empty()) {
      throw InvalidInput("truth record ids must be 0.." + std::to_string(n - 1) +
                         " without repeats; offending ids: " + ListIds(bad));
    }
  }
  const Index n = static_cast<Index>(truth.size());
  EvaluationResult result;
  {
    std::vector<Index> sorted = truth;
    std::sort(sorted.begin(), sorted.end());
    result.true_entities = static_cast<Index>(
        std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }

  CsvReader reader(links_path);
  const int sample_col =
      RequireColumn(reader.header(), "sample_index", links_path);
  const int rid_col = RequireColumn(reader.header(), "record_id", links_path);
  const int label_col =
      RequireColumn(reader.header(), "entity_label", links_path);
  std::vector<Index> predicted(n, -1);
  std::vector<std::int64_t> unknown;
  std::int64_t current = -1;
  bool open = false;

  auto close_sample = [&] {
    std::vector<std::int64_t> missing;
    for (Index i = 0; i < n; ++i) {
      if (predicted[i] == -1) missing.push_back(i);
    }
    if (!unknown.empty() || !missing.empty()) {
      std::string message = "sample " + std::to_string(current) +
                            " does not match the truth record ids";
      if (!unknown.empty()) {
        message += "; unknown or repeated ids: " + ListIds(unknown);
      }
      if (!missing.empty()) message += "; missing ids: " + ListIds(missing);
      throw InvalidInput(message);
    }
    MetricSample metrics = PairwiseMetrics(predicted, truth);
    metrics.iteration = current;
    result.sample_index.push_back(current);
    result.samples.push_back(metrics);
    std::fill(predicted.begin(), predicted.end(), -1);
  };

  std::vector<std::string> row;
  while (reader.Next(row)) {
    const std::int64_t sample =
        ParseInt(row[sample_col], "sample_index in " + links_path);
    if (open && sample != current) close_sample();
    current = sample;
    open = true;
    const std::int64_t rid = ParseInt(row[rid_col], "record_id in " + links_path);
    const std::int64_t label =
        ParseInt(row[label_col], "entity_label in " + links_path);
    if (rid < 0 || rid >= n || predicted[rid] != -1) {
      unknown.push_back(rid);
    } else {
      predicted[rid] = static_cast<Index>(label);
    }
  }
  if (open) close_sample();
  if (result.samples.empty()) {
    throw InvalidInput("'" + links_path + "' holds no samples");
  }

  std::vector<double> precision, recall, f1, entities;
  std::vector<Index> counts;
  for (const MetricSample& s : result.samples) {
    precision.push_back(s.precision);
    recall.push_back(s.recall);
    f1.push_back(s.f1);
    entities.push_back(s.num_entities);
    counts.push_back(s.num_entities);
  }
  result.precision = Summarize(precision);
  result.recall = Summarize(recall);
  result.f1 = Summarize(f1);
  result.num_entities = Summarize(entities);
  result.entity_error =
      Summarize(RelativeEntityError(counts, result.true_entities));
  return result;
}

std::string FormatSummary(const PosteriorSummary& summary, int digits) {
  char buffer[128];
  std::snprintf(buffer, sizeof(buffer), "%.*f (%.*f, %.*f)", digits,
                summary.median, digits, summary.lower, digits, summary.upper);
  return buffer;
}

void CmdEvaluate(const std::string& links_path, const std::string& truth_path,
                 const std::string& output_dir, std::ostream& log) {
  const EvaluationResult result = EvaluateLinks(links_path, truth_path);
  const fs::path dir = output_dir.empty()
                           ? fs::path(links_path).parent_path()
                           : fs::path(output_dir);
  if (!dir.empty()) fs::create_directories(dir);

  CsvWriter metrics(Join(dir, "metrics.csv"));
  metrics.WriteRow({"sample_index", "precision", "recall", "f1",
                    "num_entities", "entity_error"});
  for (size_t k = 0; k < result.samples.size(); ++k) {
    const MetricSample& s = result.samples[k];
    const double error =
        static_cast<double>(s.num_entities - result.true_entities) /
        result.true_entities;
    metrics.WriteRow({std::to_string(result.sample_index[k]),
                      FormatDouble(s.precision), FormatDouble(s.recall),
                      FormatDouble(s.f1), std::to_string(s.num_entities),
                      FormatDouble(error)});
  }
  metrics.Finish();

  CsvWriter summary(Join(dir, "summary.csv"));
  summary.WriteRow({"metric", "median", "lower", "upper", "formatted"});
  WriteSummaryRow(summary, "precision", result.precision);
  WriteSummaryRow(summary, "recall", result.recall);
  WriteSummaryRow(summary, "f1", result.f1);
  WriteSummaryRow(summary, "num_entities", result.num_entities);
  WriteSummaryRow(summary, "entity_error", result.entity_error);
  summary.Finish();

  log << "samples       " << result.samples.size() << '\n'
      << "precision     " << FormatSummary(result.precision) << '\n'
      << "recall        " << FormatSummary(result.recall) << '\n'
      << "f1            " << FormatSummary(result.f1) << '\n'
      << "entity_error  " << FormatSummary(result.entity_error) << '\n';
}

std::vector<GewekeRow> GewekeTable(
    const std::vector<std::string>& names,
    const std::vector<std::vector<double>>& traces) {
  std::vector<GewekeRow> rows;
  for (size_t k = 0; k < names.size(); ++k) {
    GewekeRow row;
    row.scalar = names[k];
    row.samples = static_cast<std::int64_t>(traces[k].size());
    const auto z = GewekeZ(traces[k]);
    if (z && std::isfinite(*z)) {
      row.z = *z;
      row.status =
          std::abs(*z) > 2.0 ? GewekeStatus::kFlagged : GewekeStatus::kOk;
    }
    rows.push_back(row);
  }
  return rows;
}

void CmdDiagnose(const std::string& scalars_path, const std::string& output_dir,
                 std::ostream& log) {
  CsvReader reader(scalars_path);
  const int sample_col =
      RequireColumn(reader.header(), "sample_index", scalars_path);
  const int iteration_col =
      RequireColumn(reader.header(), "iteration", scalars_path);
  std::vector<int> columns;
  std::vector<std::string> names;
  for (size_t c = 0; c < reader.header().size(); ++c) {
    if (static_cast<int>(c) == sample_col ||
        static_cast<int>(c) == iteration_col) {
      continue;
    }
    columns.push_back(static_cast<int>(c));
    names.push_back(reader.header()[c]);
  }
  std::vector<std::vector<double>> traces(names.size());
  std::vector<std::string> samples, iterations;
  std::vector<std::string> row;
  while (reader.Next(row)) {
    samples.push_back(row[sample_col]);
    iterations.push_back(row[iteration_col]);
    for (size_t k = 0; k < columns.size(); ++k) {
      traces[k].push_back(
          ParseDouble(row[columns[k]], "'" + names[k] + "' in " + scalars_path));
    }
  }

  const fs::path dir = output_dir.empty()
                           ? fs::path(scalars_path).parent_path()
                           : fs::path(output_dir);
  if (!dir.empty()) fs::create_directories(dir);
  const auto table = GewekeTable(names, traces);
  CsvWriter geweke(Join(dir, "geweke.csv"));
  geweke.WriteRow({"scalar", "samples", "z", "status"});
  int flagged = 0;
  for (const GewekeRow& r : table) {
    const char* status = r.status == GewekeStatus::kOk        ? "ok"
                         : r.status == GewekeStatus::kFlagged ? "flagged"
                                                              : "not-applicable";
    if (r.status == GewekeStatus::kFlagged) ++flagged;
    geweke.WriteRow({r.scalar, std::to_string(r.samples),
                     r.status == GewekeStatus::kNotApplicable
                         ? std::string()
                         : FormatDouble(r.z),
                     status});
  }
  geweke.Finish();

  CsvWriter trace(Join(dir, "trace_long.csv"));
  trace.WriteRow({"sample_index", "iteration", "scalar", "value"});
  for (size_t t = 0; t < samples.size(); ++t) {
    for (size_t k = 0; k < names.size(); ++k) {
      trace.WriteRow(
          {samples[t], iterations[t], names[k], FormatDouble(traces[k][t])});
    }
  }
  trace.Finish();
  log << names.size() << " scalars, " << samples.size() << " samples, "
      << flagged << " flagged with |Z| > 2\n";
}

void CmdPreprocess(const std::string& input, const std::string& output,
                   const std::vector<std::string>& rules,
                   const std::vector<std::string>& columns) {
  const PreprocessRules parsed = ParsePreprocessRules(rules);
  CsvTable table = ReadCsv(input);
  std::vector<bool> apply(table.header.size(), columns.empty());
  for (const std::string& name : columns) {
    const int c = table.Column(name);
    if (c < 0) throw InvalidInput("no column '" + name + "' in '" + input + "'");
    apply[c] = true;
  }
  CsvWriter out(output);
  out.WriteRow(table.header);
  for (auto& row : table.rows) {
    for (size_t c = 0; c < row.size(); ++c) {
      if (apply[c]) row[c] = Preprocess(row[c], parsed);
    }
    out.WriteRow(row);
  }
  out.Finish();
}

}  // namespace resolver
