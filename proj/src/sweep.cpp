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

#include <iomanip>
#include <optional>
#include <stdexcept>

#include "qgssl/benchmarking.hpp"

namespace qgssl {

SweepKnob parse_sweep_knob(const std::string& name) {
  if (name == "layers") return SweepKnob::kLayers;
  if (name == "qubits") return SweepKnob::kQubits;
  throw std::invalid_argument("unknown sweep knob '" + name + "' (expected layers or qubits)");
}

std::string to_string(SweepKnob knob) { return knob == SweepKnob::kLayers ? "layers" : "qubits"; }

std::vector<SweepRow> sweep(const Dataset& dataset, const PipelineConfig& base, SweepKnob knob,
                            const std::vector<int>& values, const SweepOptions& options) {
  if (values.empty()) throw std::invalid_argument("sweep: values must be nonempty");
  if (options.seeds.empty()) throw std::invalid_argument("sweep: seeds must be nonempty");
  const SimilarityGraph graph = build_knn_graph(dataset, base.k_neighbors, base.scaling);
  const Eigen::MatrixXd& embedded =
      base.method == Method::kIlqssl ? graph.laplacian() : graph.weights();

  std::vector<SweepRow> rows;
  for (int value : values) {
    PipelineConfig config = base;
    (knob == SweepKnob::kLayers ? config.layer_count : config.qubit_count) = value;
    config.validate();
    std::optional<QuantumEmbedding> embedding;
    if (config.quantum) embedding = embed_graph_matrix(embedded, config.qubit_count);

    SweepRow row;
    row.knob = knob;
    row.value = value;
    double rb_sum = 0.0;
    for (std::uint64_t seed : options.seeds) {
      config.seed = seed;
      const RunResult r = run_pipeline(dataset, graph, config, embedding ? &*embedding : nullptr);
      row.accuracy_per_seed.push_back(r.metrics.accuracy);

      const CircuitSpec pqc = build_pqc(config.qubit_count, config.layer_count, seed);
      row.entanglement_per_seed.push_back(half_cut_entropy(run_circuit(pqc)));

      RbConfig rb = options.rb;
      rb.noise_p = options.noise_p;
      // Distinct, reproducible RB stream per (seed, value) cell.
      rb.seed = seed * 1000003u + static_cast<std::uint64_t>(value);
      const RbResult rr = rb_experiment(rb);
      double mean_survival = 0.0;
      for (double s : rr.survival) mean_survival += s;
      rb_sum += mean_survival / static_cast<double>(rr.survival.size());
    }
    const double count = static_cast<double>(options.seeds.size());
    for (double a : row.accuracy_per_seed) row.accuracy += a;
    row.accuracy /= count;
    for (double e : row.entanglement_per_seed) row.entanglement += e;
    row.entanglement /= count;
    row.rb_score = rb_sum / count;
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "knob,value,entanglement,accuracy,rb_score\n";
  out << std::setprecision(17);
  for (const auto& r : rows) {
    out << to_string(r.knob) << ',' << r.value << ',' << r.entanglement << ',' << r.accuracy << ','
        << r.rb_score << '\n';
  }
}

}  // namespace qgssl
