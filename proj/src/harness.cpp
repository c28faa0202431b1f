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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <exception>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <tuple>
#include <set>
#include <sstream>

#include "qgssl/harness.hpp"

#ifndef QGSSL_DEFAULT_DATA_DIR
#define QGSSL_DEFAULT_DATA_DIR "data"
#endif

namespace qgssl {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys = {
    "name",   "dataset", "method",     "seeds",      "label_rate", "k_neighbors", "kernel",
    "qubits", "layers",  "quantum",    "propagation", "output_dir", "rb_noise"};
const std::set<std::string> kPropagationKeys = {"alpha1", "alpha2", "alpha3", "epsilon",
                                                "max_iter"};

template <typename T>
T take(const json& j, const std::string& key, const T& fallback, const std::string& origin) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(origin + ": key '" + key + "' has the wrong type (" + e.what() + ")");
  }
}

void reject_unknown(const json& j, const std::set<std::string>& known, const std::string& where) {
  for (const auto& item : j.items()) {
    if (!known.count(item.key())) {
      throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }
  }
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": " + e.what());
  }
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

struct MeanStd {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double std = std::numeric_limits<double>::quiet_NaN();
};

// NaN entries (undefined per-class metrics) are skipped.
MeanStd mean_std(const std::vector<double>& values) {
  std::vector<double> v;
  for (double x : values) {
    if (std::isfinite(x)) v.push_back(x);
  }
  MeanStd r;
  if (v.empty()) return r;
  double s = 0.0;
  for (double x : v) s += x;
  r.mean = s / static_cast<double>(v.size());
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.std = v.size() > 1 ? std::sqrt(ss / static_cast<double>(v.size() - 1)) : 0.0;
  return r;
}

json number_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json to_json(const MeanStd& m) {
  return json{{"mean", number_or_null(m.mean)}, {"std", number_or_null(m.std)}};
}

json vector_json(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number_or_null(x));
  return a;
}

json diagnostics_json(const QuantumDiagnostics& d) {
  return json{{"per_iteration_entropy", vector_json(d.per_iteration_entropy)},
              {"per_iteration_fidelity", vector_json(d.per_iteration_fidelity)},
              {"final_entropy", number_or_null(d.final_entropy)},
              {"circuit_entropy", number_or_null(d.circuit_entropy)},
              {"rb_score", number_or_null(d.rb_score)},
              {"qubit_count", d.qubit_count},
              {"embedded_block", d.embedded_block},
              {"embedding_rank", d.embedding_rank},
              {"truncated", d.truncated}};
}

json run_json(const RunResult& r) {
  const MetricsReport& m = r.metrics;
  return json{{"seed", r.config.seed},
              {"iterations", r.iterations},
              {"converged", r.converged},
              {"spectral_radius", number_or_null(r.spectral_radius)},
              {"evaluated", r.evaluated},
              {"truth", r.truth},
              {"predicted", r.predicted},
              {"metrics",
               {{"accuracy", m.accuracy},
                {"precision_macro", m.precision_macro},
                {"recall_macro", m.recall_macro},
                {"f1_macro", m.f1_macro},
                {"auc_per_class", vector_json(m.auc_per_class)},
                {"auc_overall", number_or_null(m.auc_overall)},
                {"ks_per_class", vector_json(m.ks_per_class)},
                {"score_normalization", to_string(m.normalization)}}},
              {"diagnostics", diagnostics_json(r.diagnostics)}};
}

json roc_json(const std::vector<std::vector<RocPoint>>& curves) {
  json out = json::array();
  for (const auto& curve : curves) {
    json c = json::array();
    for (const auto& p : curve) c.push_back(json::array({p.fpr, p.tpr}));
    out.push_back(std::move(c));
  }
  return out;
}

json aggregate_json(const std::vector<RunResult>& runs, int class_count) {
  auto collect = [&](auto getter) {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(getter(r));
    return mean_std(v);
  };
  json agg;
  agg["seed_count"] = runs.size();
  agg["accuracy"] = to_json(collect([](const RunResult& r) { return r.metrics.accuracy; }));
  agg["precision_macro"] =
      to_json(collect([](const RunResult& r) { return r.metrics.precision_macro; }));
  agg["recall_macro"] = to_json(collect([](const RunResult& r) { return r.metrics.recall_macro; }));
  agg["f1_macro"] = to_json(collect([](const RunResult& r) { return r.metrics.f1_macro; }));
  agg["auc_overall"] = to_json(collect([](const RunResult& r) { return r.metrics.auc_overall; }));
  json auc = json::array();
  json ks = json::array();
  for (int c = 0; c < class_count; ++c) {
    const auto idx = static_cast<std::size_t>(c);
    auc.push_back(to_json(collect([&](const RunResult& r) { return r.metrics.auc_per_class[idx]; })));
    ks.push_back(to_json(collect([&](const RunResult& r) { return r.metrics.ks_per_class[idx]; })));
  }
  agg["auc_per_class"] = auc;
  agg["ks_per_class"] = ks;
  return agg;
}

json diagnostics_summary_json(const std::vector<RunResult>& runs) {
  auto collect = [&](auto getter) {
    std::vector<double> v;
    for (const auto& r : runs) v.push_back(getter(r));
    return to_json(mean_std(v));
  };
  return json{
      {"final_entropy", collect([](const RunResult& r) { return r.diagnostics.final_entropy; })},
      {"circuit_entropy", collect([](const RunResult& r) { return r.diagnostics.circuit_entropy; })},
      {"rb_score", collect([](const RunResult& r) { return r.diagnostics.rb_score; })},
      {"iterations", collect([](const RunResult& r) { return static_cast<double>(r.iterations); })}};
}

double mean_survival(const RbResult& r) {
  double s = 0.0;
  for (double x : r.survival) s += x;
  return s / static_cast<double>(r.survival.size());
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

fs::path fresh_directory(const fs::path& parent) {
  const std::string stamp = utc_timestamp();
  fs::path dir = parent / stamp;
  for (int n = 1; fs::exists(dir); ++n) dir = parent / (stamp + "-" + std::to_string(n));
  fs::create_directories(dir);
  return dir;
}

}  // namespace

fs::path data_dir() {
  if (const char* env = std::getenv("QGSSL_DATA_DIR"); env && *env) return fs::path(env);
  return fs::path(QGSSL_DEFAULT_DATA_DIR);
}

fs::path resolve_dataset(const std::string& spec, const fs::path& base_dir) {
  if (spec.empty()) throw ConfigError("dataset is empty");
  const fs::path p(spec);
  const bool is_path = spec.find('/') != std::string::npos || p.extension() == ".csv";
  if (!is_path) {
    const fs::path bundled = data_dir() / (spec + ".csv");
    if (!fs::exists(bundled)) {
      throw DataError("dataset '" + spec + "' not found in " + data_dir().string());
    }
    return bundled;
  }
  if (fs::exists(p)) return p;
  if (!base_dir.empty() && p.is_relative() && fs::exists(base_dir / p)) return base_dir / p;
  throw DataError("dataset file not found: " + spec);
}

json pipeline_to_json(const PipelineConfig& c) {
  return json{{"method", to_string(c.method)},
              {"label_rate", c.label_rate},
              {"k_neighbors", c.k_neighbors},
              {"kernel", to_string(c.scaling)},
              {"qubits", c.qubit_count},
              {"layers", c.layer_count},
              {"quantum", c.quantum},
              {"propagation",
               {{"alpha1", c.propagation.alpha1},
                {"alpha2", c.propagation.alpha2},
                {"alpha3", c.propagation.alpha3},
                {"epsilon", c.propagation.epsilon},
                {"max_iter", c.propagation.max_iter}}}};
}

void ExperimentConfig::validate() const {
  if (name.empty()) throw ConfigError("config: name is empty");
  if (dataset.empty()) throw ConfigError("config: dataset is required");
  if (seeds.empty()) throw ConfigError("config: seeds must be nonempty");
  try {
    pipeline.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (rb_noise && !(*rb_noise >= 0.0 && *rb_noise < 1.0)) {
    throw ConfigError("config: rb_noise must be in [0, 1)");
  }
}

json ExperimentConfig::to_json() const {
  json j = pipeline_to_json(pipeline);
  j["name"] = name;
  j["dataset"] = dataset;
  j["seeds"] = seeds;
  j["output_dir"] = output_dir.string();
  j["rb_noise"] = rb_noise ? json(*rb_noise) : json(nullptr);
  return j;
}

ExperimentConfig parse_experiment_config(const std::string& text, const std::string& origin) {
  const json j = parse_json_text(text, origin);
  if (!j.is_object()) throw ConfigError(origin + ": top level must be a JSON object");
  reject_unknown(j, kConfigKeys, origin);

  ExperimentConfig c;
  c.name = take<std::string>(j, "name", fs::path(origin).stem().string(), origin);
  c.dataset = take<std::string>(j, "dataset", "", origin);
  c.seeds = take<std::vector<std::uint64_t>>(j, "seeds", c.seeds, origin);
  c.output_dir = take<std::string>(j, "output_dir", c.output_dir.string(), origin);
  if (j.contains("rb_noise") && !j.at("rb_noise").is_null()) {
    c.rb_noise = take<double>(j, "rb_noise", 0.0, origin);
  }
  PipelineConfig& p = c.pipeline;
  try {
    p.method = parse_method(take<std::string>(j, "method", "ipqssl", origin));
    p.scaling = parse_kernel_scaling(take<std::string>(j, "kernel", to_string(p.scaling), origin));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  p.label_rate = take<double>(j, "label_rate", p.label_rate, origin);
  p.k_neighbors = take<int>(j, "k_neighbors", p.k_neighbors, origin);
  p.qubit_count = take<int>(j, "qubits", p.qubit_count, origin);
  p.layer_count = take<int>(j, "layers", p.layer_count, origin);
  p.quantum = take<bool>(j, "quantum", p.quantum, origin);
  if (j.contains("propagation")) {
    const json& pj = j.at("propagation");
    if (!pj.is_object()) throw ConfigError(origin + ": 'propagation' must be an object");
    reject_unknown(pj, kPropagationKeys, origin + ": propagation");
    p.propagation.alpha1 = take<double>(pj, "alpha1", p.propagation.alpha1, origin);
    p.propagation.alpha2 = take<double>(pj, "alpha2", p.propagation.alpha2, origin);
    p.propagation.alpha3 = take<double>(pj, "alpha3", p.propagation.alpha3, origin);
    p.propagation.epsilon = take<double>(pj, "epsilon", p.propagation.epsilon, origin);
    p.propagation.max_iter = take<int>(pj, "max_iter", p.propagation.max_iter, origin);
  }
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
  ExperimentConfig c = parse_experiment_config(read_file(path), path.string());
  c.base_dir = path.parent_path();
  return c;
}

LoadedDataset load_experiment_dataset(const ExperimentConfig& config) {
  LoadedDataset d;
  d.path = resolve_dataset(config.dataset, config.base_dir);
  d.dataset = load_dataset(d.path);
  d.dropped_columns = standardize(d.dataset);
  for (const auto& col : d.dropped_columns) {
    std::cerr << "warning: dropped constant feature column '" << col << "'\n";
  }
  return d;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  return run_experiment(config, load_experiment_dataset(config));
}

ExperimentResult run_experiment(const ExperimentConfig& config, const LoadedDataset& data) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const PipelineConfig& base = config.pipeline;
  const Dataset& ds = data.dataset;
  if (base.k_neighbors >= static_cast<int>(ds.size())) {
    throw ConfigError("config: k_neighbors must be below the dataset size " +
                      std::to_string(ds.size()));
  }
  const SimilarityGraph graph = build_knn_graph(ds, base.k_neighbors, base.scaling);
  std::optional<QuantumEmbedding> embedding;
  if (base.quantum && (base.method == Method::kIpqssl || base.method == Method::kIlqssl)) {
    embedding = embed_graph_matrix(
        base.method == Method::kIlqssl ? graph.laplacian() : graph.weights(), base.qubit_count);
  }

  const std::size_t n_seeds = config.seeds.size();
  ExperimentResult result;
  result.runs.resize(n_seeds);
  std::vector<std::exception_ptr> errors(n_seeds);
#pragma omp parallel for schedule(dynamic)
  for (std::size_t s = 0; s < n_seeds; ++s) {
    try {
      PipelineConfig c = base;
      c.seed = config.seeds[s];
      result.runs[s] = run_pipeline(ds, graph, c, embedding ? &*embedding : nullptr);
      if (config.rb_noise) {
        RbConfig rb;
        rb.noise_p = *config.rb_noise;
        rb.seed = c.seed;
        result.runs[s].diagnostics.rb_score = mean_survival(rb_experiment(rb));
      }
    } catch (...) {
      errors[s] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  json doc;
  doc["schema_version"] = kResultSchemaVersion;
  doc["artifact_version"] = kArtifactVersion;
  doc["config"] = config.to_json();
  doc["dataset"] = {{"name", ds.name},
                    {"path", data.path.string()},
                    {"rows", ds.size()},
                    {"features", ds.features.cols()},
                    {"classes", ds.class_names},
                    {"dropped_columns", data.dropped_columns}};
  doc["evaluation"] = "transductive: metrics on nodes left unlabeled by the mask";
  json runs = json::array();
  for (const auto& r : result.runs) {
    runs.push_back(run_json(r));
    result.all_converged = result.all_converged && r.converged;
  }
  doc["runs"] = runs;
  doc["aggregate"] = aggregate_json(result.runs, ds.class_count);
  doc["diagnostics_summary"] = diagnostics_summary_json(result.runs);
  doc["roc_curves"] = {{"seed", result.runs.front().config.seed},
                       {"curves", roc_json(result.runs.front().metrics.roc_curves)}};
  doc["all_converged"] = result.all_converged;
  doc["timestamp"] = utc_timestamp();
  doc["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.document = std::move(doc);
  return result;
}

fs::path write_experiment(const ExperimentConfig& config, const ExperimentResult& result,
                          const fs::path& root) {
  const fs::path dir = fresh_directory(root / config.name);
  write_text(dir / "result.json", result.document.dump(2) + "\n");

  std::ostringstream metrics;
  metrics << std::setprecision(17);
  const std::size_t k = result.runs.empty() ? 0 : result.runs.front().metrics.ks_per_class.size();
  metrics << "seed,accuracy,precision_macro,recall_macro,f1_macro,auc_overall";
  for (std::size_t c = 0; c < k; ++c) metrics << ",ks_class_" << c;
  metrics << ",iterations,converged\n";
  for (const auto& r : result.runs) {
    const auto& m = r.metrics;
    metrics << r.config.seed << ',' << m.accuracy << ',' << m.precision_macro << ','
            << m.recall_macro << ',' << m.f1_macro << ',' << m.auc_overall;
    for (double ks : m.ks_per_class) metrics << ',' << ks;
    metrics << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << '\n';
  }
  write_text(dir / "metrics.csv", metrics.str());

  std::ostringstream roc;
  roc << std::setprecision(17) << "class,fpr,tpr\n";
  if (!result.runs.empty()) {
    const auto& curves = result.runs.front().metrics.roc_curves;
    for (std::size_t c = 0; c < curves.size(); ++c) {
      for (const auto& p : curves[c]) roc << c << ',' << p.fpr << ',' << p.tpr << '\n';
    }
  }
  write_text(dir / "roc.csv", roc.str());
  return dir;
}

namespace {

void apply_overrides(ExperimentConfig& config, const RunOverrides& o) {
  if (o.seeds) config.seeds = *o.seeds;
  if (o.out) config.output_dir = *o.out;
  config.validate();
}

void print_divergence(const DivergenceError& e, std::ostream& err) {
  err << "divergence: " << e.what() << "\n"
      << "  spectral radius " << e.spectral_radius() << ", alpha1 = " << e.alpha1()
      << ", alpha2 = " << e.alpha2() << "\n"
      << "  choose alpha2 < 1 - lambda_2(P) (the default is -0.2)\n";
}

}  // namespace

int cli_run(const fs::path& config_path, const RunOverrides& overrides, std::ostream& out,
            std::ostream& err) {
  try {
    ExperimentConfig config = load_experiment_config(config_path);
    apply_overrides(config, overrides);
    const ExperimentResult result = run_experiment(config);
    const fs::path dir = write_experiment(config, result, config.output_dir);
    const json& agg = result.document.at("aggregate");
    out << config.name << ": " << to_string(config.pipeline.method) << " on "
        << result.document["dataset"]["name"].get<std::string>() << ", " << config.seeds.size()
        << " seeds\n"
        << std::fixed << std::setprecision(4)
        << "  accuracy " << agg["accuracy"]["mean"].get<double>() << " +- "
        << agg["accuracy"]["std"].get<double>() << "\n"
        << "  macro F1 " << agg["f1_macro"]["mean"].get<double>() << "\n"
        << "  wrote " << (dir / "result.json").string() << "\n";
    if (!result.all_converged) {
      err << "warning: propagation hit max_iter without converging on some seeds\n";
      return 2;
    }
    return 0;
  } catch (const DivergenceError& e) {
    print_divergence(e, err);
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_sweep(const fs::path& config_path, const std::string& knob, const std::vector<int>& values,
              const RunOverrides& overrides, double noise_p, std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig config = load_experiment_config(config_path);
    apply_overrides(config, overrides);
    const SweepKnob k = parse_sweep_knob(knob);
    const LoadedDataset data = load_experiment_dataset(config);
    SweepOptions options;
    options.noise_p = noise_p;
    options.seeds = config.seeds;
    const auto rows = sweep(data.dataset, config.pipeline, k, values, options);
    const fs::path dir = config.output_dir / config.name;
    fs::create_directories(dir);
    const fs::path path = dir / ("sweep_" + to_string(k) + ".csv");
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    write_text(path, csv.str());
    out << csv.str() << "wrote " << path.string() << "\n";
    return 0;
  } catch (const DivergenceError& e) {
    print_divergence(e, err);
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

SearchGrid load_search_grid(const fs::path& path) {
  const json j = parse_json_text(read_file(path), path.string());
  if (!j.is_object()) throw ConfigError(path.string() + ": grid must be a JSON object");
  reject_unknown(j, {"k_neighbors", "layers", "qubits", "alpha1", "alpha2"}, path.string());
  SearchGrid g;
  g.k_neighbors = take<std::vector<int>>(j, "k_neighbors", {}, path.string());
  g.layers = take<std::vector<int>>(j, "layers", {}, path.string());
  g.qubits = take<std::vector<int>>(j, "qubits", {}, path.string());
  g.alpha1 = take<std::vector<double>>(j, "alpha1", {}, path.string());
  g.alpha2 = take<std::vector<double>>(j, "alpha2", {}, path.string());
  return g;
}

int cli_tune(const fs::path& config_path, const fs::path& grid_path, const RunOverrides& overrides,
             std::ostream& out, std::ostream& err) {
  try {
    ExperimentConfig config = load_experiment_config(config_path);
    apply_overrides(config, overrides);
    const SearchGrid grid = load_search_grid(grid_path);
    const LoadedDataset data = load_experiment_dataset(config);
    const SearchResult sr = hyperparameter_search(data.dataset, config.pipeline, grid, config.seeds);

    const fs::path dir = config.output_dir / config.name;
    fs::create_directories(dir);
    std::ostringstream csv;
    csv << std::setprecision(17)
        << "rank,k_neighbors,qubits,layers,alpha1,alpha2,mean_accuracy,std_accuracy,"
           "mean_final_entropy,failed,error\n";
    for (std::size_t i = 0; i < sr.leaderboard.size(); ++i) {
      const auto& r = sr.leaderboard[i];
      std::string error = r.error;
      std::replace(error.begin(), error.end(), ',', ';');
      std::replace(error.begin(), error.end(), '\n', ' ');
      csv << i + 1 << ',' << r.config.k_neighbors << ',' << r.config.qubit_count << ','
          << r.config.layer_count << ',' << r.config.propagation.alpha1 << ','
          << r.config.propagation.alpha2 << ',';
      if (r.failed) {
        csv << ",,,1," << error << '\n';
      } else {
        csv << r.mean_accuracy << ',' << r.std_accuracy << ',' << r.mean_final_entropy << ",0,\n";
      }
    }
    write_text(dir / "leaderboard.csv", csv.str());

    ExperimentConfig best = config;
    best.pipeline = sr.best;
    write_text(dir / "best_config.json", best.to_json().dump(2) + "\n");

    const auto& top = sr.leaderboard.front();
    out << "best: k=" << top.config.k_neighbors << " qubits=" << top.config.qubit_count
        << " layers=" << top.config.layer_count << " alpha1=" << top.config.propagation.alpha1
        << " alpha2=" << top.config.propagation.alpha2 << " accuracy=" << std::fixed
        << std::setprecision(4) << top.mean_accuracy << "\n"
        << "wrote " << (dir / "leaderboard.csv").string() << "\n";
    return top.failed ? 2 : 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cli_rb(const RbConfig& config, const fs::path& out_dir, std::ostream& out, std::ostream& err) {
  try {
    const RbResult r = rb_experiment(config);
    const int dim = 1 << config.qubits;
    json doc{{"schema_version", kResultSchemaVersion},
             {"artifact_version", kArtifactVersion},
             {"qubits", config.qubits},
             {"noise_p", config.noise_p},
             {"repetitions", config.repetitions},
             {"shots", config.shots},
             {"seed", config.seed},
             {"lengths", r.lengths},
             {"survival", r.survival},
             {"fit", {{"A", r.fit.a}, {"p", r.fit.p}, {"B", r.fit.b},
                      {"converged", r.fit.converged}, {"degenerate", r.fit.degenerate}}},
             {"analytic_p", pauli_noise_decay(config.noise_p, config.qubits)},
             {"fidelity", r.fidelity},
             {"error_per_clifford", r.error_per_clifford},
             {"hilbert_dim", dim}};
    fs::create_directories(out_dir);
    write_text(out_dir / "rb.json", doc.dump(2) + "\n");
    std::ostringstream csv;
    csv << std::setprecision(17) << "length,survival\n";
    for (std::size_t i = 0; i < r.lengths.size(); ++i) {
      csv << r.lengths[i] << ',' << r.survival[i] << '\n';
    }
    write_text(out_dir / "rb_survival.csv", csv.str());
    out << std::setprecision(6) << "fitted p = " << r.fit.p << " (analytic "
        << pauli_noise_decay(config.noise_p, config.qubits) << ")\n"
        << "A = " << r.fit.a << ", B = " << r.fit.b << "\n"
        << "average fidelity = " << r.fidelity << "\n"
        << "error per Clifford = " << r.error_per_clifford << "\n"
        << "wrote " << (out_dir / "rb.json").string() << "\n";
    if (r.fit.degenerate && config.noise_p > 0.0) {
      err << "warning: survival data did not decay; fit is best-effort\n";
    }
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

namespace {

struct ReportRow {
  std::string dataset;
  std::string method;
  std::string name;
  std::string source;  // path relative to the results root
  json doc;
};

std::string fmt(const json& v) {
  if (!v.is_number()) return "";
  std::ostringstream s;
  s << std::setprecision(6) << v.get<double>();
  return s.str();
}

}  // namespace

ReportSummary make_report(const fs::path& results_dir, const fs::path& out_dir) {
  if (!fs::is_directory(results_dir)) {
    throw ConfigError("results directory not found: " + results_dir.string());
  }
  std::vector<ReportRow> rows;
  std::set<int> versions;
  for (const auto& entry : fs::recursive_directory_iterator(results_dir)) {
    if (!entry.is_regular_file() || entry.path().filename() != "result.json") continue;
    ReportRow row;
    row.doc = parse_json_text(read_file(entry.path()), entry.path().string());
    if (!row.doc.contains("schema_version")) {
      throw ConfigError(entry.path().string() + ": missing schema_version");
    }
    versions.insert(row.doc.at("schema_version").get<int>());
    row.dataset = row.doc.at("dataset").at("name").get<std::string>();
    row.method = row.doc.at("config").at("method").get<std::string>();
    row.name = row.doc.at("config").at("name").get<std::string>();
    row.source = fs::relative(entry.path(), results_dir).generic_string();
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("no result.json found under " + results_dir.string());
  if (versions.size() > 1) {
    std::string list;
    for (int v : versions) list += (list.empty() ? "" : ", ") + std::to_string(v);
    throw ConfigError("mixed result schema versions: " + list);
  }
  std::sort(rows.begin(), rows.end(), [](const ReportRow& a, const ReportRow& b) {
    return std::tie(a.dataset, a.method, a.name, a.source) <
           std::tie(b.dataset, b.method, b.name, b.source);
  });

  fs::create_directories(out_dir);
  ReportSummary summary;
  summary.table = out_dir / "report.csv";
  std::ostringstream csv;
  csv << "dataset,method,config,seeds,accuracy_mean,accuracy_std,precision_macro_mean,"
         "recall_macro_mean,f1_macro_mean,auc_overall_mean,ks_per_class_mean,"
         "accuracy_delta_vs_label_propagation,source\n";
  std::map<std::string, int> roc_names;
  for (const auto& r : rows) {
    const json& agg = r.doc.at("aggregate");
    std::string ks;
    for (const auto& k : agg.at("ks_per_class")) ks += (ks.empty() ? "" : ";") + fmt(k.at("mean"));
    std::string delta;
    for (const auto& other : rows) {
      if (other.dataset == r.dataset && other.method == "label_propagation") {
        delta = fmt(json(agg.at("accuracy").at("mean").get<double>() -
                         other.doc.at("aggregate").at("accuracy").at("mean").get<double>()));
        break;
      }
    }
    csv << r.dataset << ',' << r.method << ',' << r.name << ',' << agg.at("seed_count") << ','
        << fmt(agg.at("accuracy").at("mean")) << ',' << fmt(agg.at("accuracy").at("std")) << ','
        << fmt(agg.at("precision_macro").at("mean")) << ','
        << fmt(agg.at("recall_macro").at("mean")) << ',' << fmt(agg.at("f1_macro").at("mean"))
        << ',' << fmt(agg.at("auc_overall").at("mean")) << ',' << ks << ',' << delta << ','
        << r.source << '\n';

    std::string stem = "roc_" + r.dataset + "_" + r.method;
    const int dup = roc_names[stem]++;
    if (dup > 0) stem += "_" + std::to_string(dup + 1);
    std::ostringstream roc;
    roc << std::setprecision(17) << "class,fpr,tpr\n";
    const json& curves = r.doc.at("roc_curves").at("curves");
    for (std::size_t c = 0; c < curves.size(); ++c) {
      for (const auto& p : curves[c]) roc << c << ',' << p[0].get<double>() << ',' << p[1].get<double>() << '\n';
    }
    const fs::path roc_path = out_dir / (stem + ".csv");
    write_text(roc_path, roc.str());
    summary.roc_files.push_back(roc_path);
  }
  write_text(summary.table, csv.str());
  summary.rows = rows.size();
  return summary;
}

int cli_report(const fs::path& results_dir, const fs::path& out_dir, std::ostream& out,
               std::ostream& err) {
  try {
    const ReportSummary s = make_report(results_dir, out_dir);
    out << "wrote " << s.table.string() << " (" << s.rows << " rows) and " << s.roc_files.size()
        << " ROC files\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw std::invalid_argument("not an integer: '" + item + "'");
    }
    if (pos != item.size()) throw std::invalid_argument("not an integer: '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw std::invalid_argument("empty integer list");
  return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-');
    try {
      if (dash != std::string::npos && dash > 0) {
        const auto lo = std::stoull(item.substr(0, dash));
        const auto hi = std::stoull(item.substr(dash + 1));
        if (hi < lo) throw std::invalid_argument("descending range");
        for (auto s = lo; s <= hi; ++s) out.push_back(s);
      } else {
        out.push_back(std::stoull(item));
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("bad seed list entry '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument("empty seed list");
  return out;
}

}  // namespace qgssl
