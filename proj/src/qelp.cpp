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
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <tuple>

#include "qgssl/error.hpp"
#include "qgssl/qelp.hpp"

namespace qgssl {

Method parse_method(const std::string& name) {
  if (name == "ipqssl") return Method::kIpqssl;
  if (name == "ilqssl") return Method::kIlqssl;
  if (name == "label_propagation") return Method::kLabelPropagation;
  if (name == "label_spreading") return Method::kLabelSpreading;
  throw std::invalid_argument("unknown method '" + name +
                              "' (expected ipqssl, ilqssl, label_propagation, label_spreading)");
}

std::string to_string(Method method) {
  switch (method) {
    case Method::kIpqssl: return "ipqssl";
    case Method::kIlqssl: return "ilqssl";
    case Method::kLabelPropagation: return "label_propagation";
    case Method::kLabelSpreading: return "label_spreading";
  }
  return "unknown";
}

QuantumEmbedding embed_graph_matrix(const Eigen::MatrixXd& matrix, int qubit_count) {
  if (qubit_count < 1 || qubit_count > kMaxQubits) {
    throw std::invalid_argument("embed_graph_matrix: qubit count out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << qubit_count;
  const Eigen::Index m = std::min(matrix.rows(), dim);
  const Eigen::MatrixXd block = matrix.topLeftCorner(m, m);
  QuantumEmbedding e;
  e.qubit_count = qubit_count;
  e.factors = qr_embed(block);
  Eigen::VectorXd lead = Eigen::VectorXd::Zero(dim);
  lead.head(m) = block.col(0);
  e.graph_state = lead.squaredNorm() > 0.0 ? amplitude_encode(lead) : StateVector(qubit_count);
  return e;
}

StateVector encode_label_matrix(const Eigen::MatrixXd& labels, int qubit_count) {
  const std::size_t dim = std::size_t{1} << qubit_count;
  Eigen::VectorXd flat = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  const Eigen::Index k = labels.cols();
  const std::size_t total = static_cast<std::size_t>(labels.size());
  for (std::size_t t = 0; t < std::min(dim, total); ++t) {
    const auto i = static_cast<Eigen::Index>(t) / k;
    const auto j = static_cast<Eigen::Index>(t) % k;
    flat[static_cast<Eigen::Index>(t)] = labels(i, j);
  }
  if (!(flat.squaredNorm() > 0.0)) return StateVector(qubit_count);
  return amplitude_encode(flat);
}

namespace {

class SideChannel {
 public:
  SideChannel(const QuantumEmbedding& embedding, QuantumDiagnostics& diag)
      : embedding_(embedding), diag_(diag) {}

  void record(const Eigen::MatrixXd& labels) {
    StateVector s = apply_embedded_unitary(encode_label_matrix(labels, embedding_.qubit_count),
                                           embedding_.factors.q);
    diag_.per_iteration_entropy.push_back(half_cut_entropy(s));
    if (previous_) diag_.per_iteration_fidelity.push_back(state_fidelity(*previous_, s));
    previous_ = std::move(s);
  }

 private:
  const QuantumEmbedding& embedding_;
  QuantumDiagnostics& diag_;
  std::optional<StateVector> previous_;
};

void fill_static_diagnostics(const QuantumEmbedding& embedding, const QuantumConfig& qconfig,
                             std::size_t label_entries, QuantumDiagnostics& diag) {
  diag.qubit_count = embedding.qubit_count;
  diag.embedded_block = static_cast<int>(embedding.factors.q.rows());
  diag.embedding_rank = embedding.factors.effective_rank;
  diag.truncated = label_entries > (std::size_t{1} << embedding.qubit_count);
  const CircuitSpec pqc = build_pqc(qconfig.qubit_count, qconfig.layer_count, qconfig.circuit_seed);
  diag.circuit_entropy = half_cut_entropy(run_circuit(pqc, embedding.graph_state));
}

}  // namespace

QelpResult qelp_run(const SimilarityGraph& graph, const Dataset& dataset,
                    const PropagationParams& params, const QuantumConfig& qconfig,
                    const QuantumEmbedding& embedding) {
  if (embedding.qubit_count != qconfig.qubit_count) {
    throw std::invalid_argument("qelp_run: embedding qubit count differs from the config");
  }
  QelpResult out;
  if (!qconfig.enabled) {
    out.propagation = improved_poisson_learning(graph, dataset, params);
    return out;
  }
  SideChannel channel(embedding, out.diagnostics);
  out.propagation = improved_poisson_learning(
      graph, dataset, params, [&](int, const Eigen::MatrixXd& u) { channel.record(u); });
  channel.record(out.propagation.scores);
  out.diagnostics.final_entropy = out.diagnostics.per_iteration_entropy.back();
  fill_static_diagnostics(embedding, qconfig, static_cast<std::size_t>(out.propagation.scores.size()),
                          out.diagnostics);
  return out;
}

QelpResult qelp_run(const SimilarityGraph& graph, const Dataset& dataset,
                    const PropagationParams& params, const QuantumConfig& qconfig) {
  if (!qconfig.enabled) {
    QelpResult out;
    out.propagation = improved_poisson_learning(graph, dataset, params);
    return out;
  }
  return qelp_run(graph, dataset, params, qconfig,
                  embed_graph_matrix(graph.weights(), qconfig.qubit_count));
}

void PipelineConfig::validate() const {
  propagation.validate();
  if (!(label_rate > 0.0 && label_rate <= 1.0)) {
    throw std::invalid_argument("pipeline: label_rate must be in (0, 1]");
  }
  if (k_neighbors < 1) throw std::invalid_argument("pipeline: k_neighbors must be >= 1");
  if (qubit_count < 1 || qubit_count > kMaxQubits) {
    throw std::invalid_argument("pipeline: qubit_count must be in [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
  if (layer_count < 1) throw std::invalid_argument("pipeline: layer_count must be >= 1");
}

QuantumConfig PipelineConfig::quantum_config() const {
  QuantumConfig q;
  q.qubit_count = qubit_count;
  q.layer_count = layer_count;
  q.circuit_seed = seed;
  q.enabled = quantum;
  return q;
}

RunResult run_pipeline(const Dataset& dataset, const SimilarityGraph& graph,
                       const PipelineConfig& config, const QuantumEmbedding* embedding) {
  config.validate();
  RunResult result;
  result.config = config;
  const Dataset masked = mask_labels(dataset, config.label_rate, config.seed);
  result.evaluated = masked.unlabeled_indices();
  if (result.evaluated.empty()) {
    throw std::invalid_argument("nothing to evaluate: label_rate " +
                                std::to_string(config.label_rate) + " leaves no unlabeled node");
  }
  const QuantumConfig qconfig = config.quantum_config();
  auto embedding_for = [&](const Eigen::MatrixXd& matrix) {
    return embedding ? *embedding : embed_graph_matrix(matrix, config.qubit_count);
  };

  Eigen::MatrixXd scores;
  switch (config.method) {
    case Method::kIpqssl: {
      QelpResult r = config.quantum
                         ? qelp_run(graph, masked, config.propagation, qconfig,
                                    embedding_for(graph.weights()))
                         : qelp_run(graph, masked, config.propagation, qconfig);
      scores = std::move(r.propagation.scores);
      result.diagnostics = std::move(r.diagnostics);
      result.iterations = r.propagation.iterations;
      result.converged = r.propagation.converged;
      result.spectral_radius = r.propagation.spectral_radius;
      break;
    }
    case Method::kIlqssl: {
      scores = laplacian_learning(graph, masked);
      if (config.quantum) {
        const QuantumEmbedding e = embedding_for(graph.laplacian());
        SideChannel channel(e, result.diagnostics);
        channel.record(scores);
        result.diagnostics.final_entropy = result.diagnostics.per_iteration_entropy.back();
        fill_static_diagnostics(e, qconfig, static_cast<std::size_t>(scores.size()),
                                result.diagnostics);
      }
      break;
    }
    case Method::kLabelPropagation: {
      PropagationResult r = label_propagation_baseline(graph, masked);
      scores = std::move(r.scores);
      result.iterations = r.iterations;
      result.converged = r.converged;
      break;
    }
    case Method::kLabelSpreading: {
      PropagationResult r = label_spreading_baseline(graph, masked);
      scores = std::move(r.scores);
      result.iterations = r.iterations;
      result.converged = r.converged;
      break;
    }
  }

  const std::vector<int> all_predicted = assign_labels(scores);
  Eigen::MatrixXd eval_scores(static_cast<Eigen::Index>(result.evaluated.size()), scores.cols());
  for (std::size_t a = 0; a < result.evaluated.size(); ++a) {
    const int i = result.evaluated[a];
    eval_scores.row(static_cast<Eigen::Index>(a)) = scores.row(i);
    result.truth.push_back(dataset.labels[static_cast<std::size_t>(i)]);
    result.predicted.push_back(all_predicted[static_cast<std::size_t>(i)]);
  }
  result.metrics = evaluate(eval_scores, result.truth, result.predicted, dataset.class_count);
  return result;
}

RunResult run_pipeline(const Dataset& dataset, const PipelineConfig& config) {
  config.validate();
  const SimilarityGraph graph = build_knn_graph(dataset, config.k_neighbors, config.scaling);
  return run_pipeline(dataset, graph, config);
}

RunResult ipqssl_pipeline(const Dataset& dataset, const PipelineConfig& config) {
  PipelineConfig c = config;
  c.method = Method::kIpqssl;
  return run_pipeline(dataset, c);
}

RunResult ilqssl_pipeline(const Dataset& dataset, const PipelineConfig& config) {
  PipelineConfig c = config;
  c.method = Method::kIlqssl;
  return run_pipeline(dataset, c);
}

namespace {

template <typename T>
std::vector<T> canonical(std::vector<T> values, T fallback) {
  if (values.empty()) return {fallback};
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

bool ranks_before(const LeaderboardRow& a, const LeaderboardRow& b) {
  if (a.failed != b.failed) return !a.failed;
  if (!a.failed && a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
  return std::make_tuple(a.config.qubit_count, a.config.layer_count, a.config.k_neighbors,
                         a.config.propagation.alpha1, a.config.propagation.alpha2) <
         std::make_tuple(b.config.qubit_count, b.config.layer_count, b.config.k_neighbors,
                         b.config.propagation.alpha1, b.config.propagation.alpha2);
}

}  // namespace

SearchResult hyperparameter_search(const Dataset& dataset, const PipelineConfig& base,
                                   const SearchGrid& grid,
                                   const std::vector<std::uint64_t>& seeds) {
  if (seeds.empty()) throw std::invalid_argument("hyperparameter_search: empty seed list");
  const auto ks = canonical(grid.k_neighbors, base.k_neighbors);
  const auto layers = canonical(grid.layers, base.layer_count);
  const auto qubits = canonical(grid.qubits, base.qubit_count);
  const auto a1s = canonical(grid.alpha1, base.propagation.alpha1);
  const auto a2s = canonical(grid.alpha2, base.propagation.alpha2);

  std::map<int, SimilarityGraph> graphs;
  std::map<std::pair<int, int>, QuantumEmbedding> embeddings;
  for (int k : ks) {
    const auto& g = graphs.emplace(k, build_knn_graph(dataset, k, base.scaling)).first->second;
    if (!base.quantum) continue;
    for (int q : qubits) {
      const Eigen::MatrixXd& m = base.method == Method::kIlqssl ? g.laplacian() : g.weights();
      embeddings.emplace(std::make_pair(k, q), embed_graph_matrix(m, q));
    }
  }

  std::vector<PipelineConfig> cells;
  for (int k : ks)
    for (int q : qubits)
      for (int l : layers)
        for (double a1 : a1s)
          for (double a2 : a2s) {
            PipelineConfig c = base;
            c.k_neighbors = k;
            c.qubit_count = q;
            c.layer_count = l;
            c.propagation.alpha1 = a1;
            c.propagation.alpha2 = a2;
            cells.push_back(c);
          }

  std::vector<LeaderboardRow> rows(cells.size());
#pragma omp parallel for schedule(dynamic)
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    LeaderboardRow& row = rows[idx];
    row.config = cells[idx];
    const auto& g = graphs.at(row.config.k_neighbors);
    const QuantumEmbedding* e = nullptr;
    if (base.quantum) e = &embeddings.at({row.config.k_neighbors, row.config.qubit_count});
    std::vector<double> acc;
    double entropy_sum = 0.0;
    try {
      for (std::uint64_t s : seeds) {
        PipelineConfig c = row.config;
        c.seed = s;
        const RunResult r = run_pipeline(dataset, g, c, e);
        acc.push_back(r.metrics.accuracy);
        entropy_sum += r.diagnostics.final_entropy;
      }
      double mean = 0.0;
      for (double a : acc) mean += a;
      mean /= static_cast<double>(acc.size());
      double var = 0.0;
      for (double a : acc) var += (a - mean) * (a - mean);
      row.mean_accuracy = mean;
      row.std_accuracy = acc.size() > 1 ? std::sqrt(var / static_cast<double>(acc.size() - 1)) : 0.0;
      row.mean_final_entropy = entropy_sum / static_cast<double>(acc.size());
    } catch (const std::exception& ex) {
      row.failed = true;
      row.error = ex.what();
      row.mean_accuracy = std::numeric_limits<double>::quiet_NaN();
    }
  }
  std::sort(rows.begin(), rows.end(), ranks_before);
  SearchResult result;
  result.best = rows.front().config;
  result.best.seed = seeds.front();
  result.leaderboard = std::move(rows);
  return result;
}

}  // namespace qgssl
