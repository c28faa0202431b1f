// Copyright 2026 The qgssl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "qgssl/benchmarking.hpp"
#include "qgssl/error.hpp"
#include "qgssl/qelp.hpp"

namespace qgssl {

inline constexpr int kResultSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// $QGSSL_DATA_DIR if set, else the data/ directory of the source tree.
std::filesystem::path data_dir();

/// A bare name ("iris") maps to <data_dir>/<name>.csv; anything with a path
/// separator or a .csv suffix is a file path, tried as given and then
/// relative to `base_dir`.
std::filesystem::path resolve_dataset(const std::string& spec, const std::filesystem::path& base_dir);

struct ExperimentConfig {
  std::string name;
  std::string dataset;
  PipelineConfig pipeline;  // pipeline.seed is overridden per entry of `seeds`
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::filesystem::path output_dir = "results";
  std::optional<double> rb_noise;  // fills rb_score when set
  std::filesystem::path base_dir;  // directory of the config file

  void validate() const;
  nlohmann::json to_json() const;
};

/// Throws ConfigError; JSON syntax errors carry line and column.
ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

nlohmann::json pipeline_to_json(const PipelineConfig& config);

struct LoadedDataset {
  Dataset dataset;  // standardized, all rows labeled
  std::filesystem::path path;
  std::vector<std::string> dropped_columns;
};

LoadedDataset load_experiment_dataset(const ExperimentConfig& config);

struct ExperimentResult {
  nlohmann::json document;  // result.json contents
  std::vector<RunResult> runs;
  bool all_converged = true;
};

/// Runs every seed (concurrently) and aggregates. Throws DivergenceError
/// when the spectral-radius pre-check rejects the parameters.
ExperimentResult run_experiment(const ExperimentConfig& config);
ExperimentResult run_experiment(const ExperimentConfig& config, const LoadedDataset& data);

/// Writes result.json, metrics.csv and roc.csv under
/// <root>/<name>/<UTC timestamp>[-N]/ and returns that directory.
std::filesystem::path write_experiment(const ExperimentConfig& config,
                                       const ExperimentResult& result,
                                       const std::filesystem::path& root);

struct RunOverrides {
  std::optional<std::vector<std::uint64_t>> seeds;
  std::optional<std::filesystem::path> out;
};

/// Exit codes: 0 success, 2 non-convergence or divergence, 1 any other error.
int cli_run(const std::filesystem::path& config_path, const RunOverrides& overrides,
            std::ostream& out, std::ostream& err);
int cli_sweep(const std::filesystem::path& config_path, const std::string& knob,
              const std::vector<int>& values, const RunOverrides& overrides, double noise_p,
              std::ostream& out, std::ostream& err);
int cli_tune(const std::filesystem::path& config_path, const std::filesystem::path& grid_path,
             const RunOverrides& overrides, std::ostream& out, std::ostream& err);
int cli_rb(const RbConfig& config, const std::filesystem::path& out_dir, std::ostream& out,
           std::ostream& err);
int cli_report(const std::filesystem::path& results_dir, const std::filesystem::path& out_dir,
               std::ostream& out, std::ostream& err);

SearchGrid load_search_grid(const std::filesystem::path& path);

struct ReportSummary {
  std::filesystem::path table;
  std::vector<std::filesystem::path> roc_files;
  std::size_t rows = 0;
};

/// Collects every result.json below `results_dir` into report.csv plus one
/// roc_<dataset>_<method>.csv per row group. Rows are sorted, so the output
/// does not depend on directory iteration order. Throws on an empty tree or
/// mixed schema versions.
ReportSummary make_report(const std::filesystem::path& results_dir,
                          const std::filesystem::path& out_dir);

/// Reads a comma-separated integer list such as "4,6,8".
std::vector<int> parse_int_list(const std::string& text);
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

}  // namespace qgssl
