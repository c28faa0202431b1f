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
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgssl/graph.hpp"
#include "qgssl/metrics.hpp"
#include "qgssl/propagation.hpp"
#include "qgssl/qsim.hpp"

namespace qgssl {

enum class Method {
  kIpqssl,            // improved Poisson propagation + quantum side-channel
  kIlqssl,            // Laplacian propagation + Laplacian embedding
  kLabelPropagation,  // classical baselines, no diagnostics
  kLabelSpreading,
};

Method parse_method(const std::string& name);
std::string to_string(Method method);

struct QuantumConfig {
  int qubit_count = 8;
  int layer_count = 10;
  std::uint64_t circuit_seed = 0;
  bool enabled = true;
};

struct QuantumDiagnostics {
  // Side-channel states: one per propagation iterate plus the final one.
  std::vector<double> per_iteration_entropy;
  // Overlap of each side-channel state with the one before it.
  std::vector<double> per_iteration_fidelity;
  double final_entropy = 0.0;
  // Half-cut entropy after the layered circuit acts on the graph state.
  double circuit_entropy = 0.0;
  double rb_score = std::numeric_limits<double>::quiet_NaN();
  int qubit_count = 0;
  int embedded_block = 0;   // m of the m x m graph block that was factored
  int embedding_rank = 0;   // effective rank of that block
  bool truncated = false;   // n*k exceeded 2^q
};

/// The graph operator restricted to its leading m = min(n, 2^q) block,
/// factored once and reused for every side-channel step.
struct QuantumEmbedding {
  int qubit_count = 0;
  QrFactors factors;
  StateVector graph_state{1};  // leading column of the block, padded to 2^q
};

QuantumEmbedding embed_graph_matrix(const Eigen::MatrixXd& matrix, int qubit_count);

/// Row-major flatten of `labels`, truncated or zero-padded to 2^q entries.
/// An all-zero slice encodes as |0...0>.
StateVector encode_label_matrix(const Eigen::MatrixXd& labels, int qubit_count);

struct QelpResult {
  PropagationResult propagation;
  QuantumDiagnostics diagnostics;
};

/// Improved Poisson propagation with the quantum side-channel observing
/// every iterate. The classical output is identical to
/// improved_poisson_learning on the same inputs.
QelpResult qelp_run(const SimilarityGraph& graph, const Dataset& dataset,
                    const PropagationParams& params, const QuantumConfig& qconfig);
QelpResult qelp_run(const SimilarityGraph& graph, const Dataset& dataset,
                    const PropagationParams& params, const QuantumConfig& qconfig,
                    const QuantumEmbedding& embedding);

struct PipelineConfig {
  Method method = Method::kIpqssl;
  PropagationParams propagation;
  int k_neighbors = 10;
  KernelScaling scaling = KernelScaling::kSelfTuning;
  int qubit_count = 8;
  int layer_count = 10;
  double label_rate = 0.3;
  std::uint64_t seed = 0;
  bool quantum = true;

  void validate() const;
  QuantumConfig quantum_config() const;
};

/// One pipeline execution on one seed. Transductive: metrics cover the
/// nodes that were unlabeled after masking.
struct RunResult {
  PipelineConfig config;
  std::vector<int> evaluated;   // node indices
  std::vector<int> truth;       // aligned with `evaluated`
  std::vector<int> predicted;   // aligned with `evaluated`
  MetricsReport metrics;
  QuantumDiagnostics diagnostics;
  int iterations = 0;
  bool converged = true;
  double spectral_radius = std::numeric_limits<double>::quiet_NaN();
};

/// mask -> graph -> propagate -> argmax -> metrics. `dataset` must carry
/// standardized features; its labeled mask is replaced by mask_labels.
RunResult ipqssl_pipeline(const Dataset& dataset, const PipelineConfig& config);
RunResult ilqssl_pipeline(const Dataset& dataset, const PipelineConfig& config);

/// Dispatches on config.method.
RunResult run_pipeline(const Dataset& dataset, const PipelineConfig& config);

/// Same, reusing a graph built from `dataset` with config.k_neighbors and
/// an optional pre-factored embedding of the matching graph matrix.
RunResult run_pipeline(const Dataset& dataset, const SimilarityGraph& graph,
                       const PipelineConfig& config, const QuantumEmbedding* embedding = nullptr);

struct SearchGrid {
  std::vector<int> k_neighbors;
  std::vector<int> layers;
  std::vector<int> qubits;
  std::vector<double> alpha1;
  std::vector<double> alpha2;
};

struct LeaderboardRow {
  PipelineConfig config;
  double mean_accuracy = 0.0;
  double std_accuracy = 0.0;
  double mean_final_entropy = 0.0;
  bool failed = false;  // divergence or other error on some seed
  std::string error;
};

struct SearchResult {
  PipelineConfig best;
  std::vector<LeaderboardRow> leaderboard;  // best first
};

/// Exhaustive search. Ranking: mean accuracy descending, then fewer qubits,
/// fewer layers, smaller k, smaller alpha1, smaller alpha2. Failed cells rank
/// last. Duplicate grid values are collapsed, so the result does not depend
/// on enumeration order.
SearchResult hyperparameter_search(const Dataset& dataset, const PipelineConfig& base,
                                   const SearchGrid& grid,
                                   const std::vector<std::uint64_t>& seeds);

}  // namespace qgssl
