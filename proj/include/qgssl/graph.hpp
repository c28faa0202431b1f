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
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qgssl/kernels.hpp"

namespace qgssl {

/// Tabular dataset with class ids and a labeled/unlabeled split.
struct Dataset {
  std::string name;
  Eigen::MatrixXd features;  // n x d
  std::vector<int> labels;   // class ids in [0, class_count)
  std::vector<bool> labeled_mask;
  int class_count = 0;
  std::vector<std::string> class_names;
  std::vector<std::string> feature_names;

  std::size_t size() const { return labels.size(); }
  std::size_t labeled_count() const;
  std::vector<int> labeled_indices() const;
  std::vector<int> unlabeled_indices() const;

  /// Throws std::invalid_argument when a Dataset invariant is broken.
  void validate() const;
};

/// Column description read from the JSON sidecar next to a CSV file.
struct DatasetSchema {
  std::string name;
  std::string label_column;
  std::vector<std::string> categorical_columns;
  std::vector<std::string> drop_columns;
  /// Optional explicit class order; empty means sorted label strings.
  std::vector<std::string> class_order;

  static DatasetSchema from_json_file(const std::filesystem::path& path);
};

/// Reads a CSV with a header row. Categorical columns are one-hot encoded
/// (categories in sorted order), the label column is mapped to 0..k-1 and
/// row order is preserved. Features are NOT standardized and every row
/// starts labeled. Throws DataError on malformed input.
Dataset load_dataset(const std::filesystem::path& csv_path, const DatasetSchema& schema);

/// Sidecar convention: `<dir>/<stem>.schema.json` next to `<dir>/<stem>.csv`.
Dataset load_dataset(const std::filesystem::path& csv_path);

struct StandardizedFeatures {
  Eigen::MatrixXd values;
  std::vector<int> kept_columns;
  std::vector<int> dropped_columns;  // zero variance
};

/// Column-wise z-scores using the sample standard deviation. Constant
/// columns are dropped; throws std::invalid_argument if none survive or n < 2.
StandardizedFeatures standardize_features(const Eigen::MatrixXd& raw);

/// Standardizes `dataset.features` in place, dropping constant columns.
/// Returns the names of dropped columns.
std::vector<std::string> standardize(Dataset& dataset);

/// Stratified split: round(label_rate * class size) labeled nodes per class.
Dataset mask_labels(const Dataset& dataset, double label_rate, std::uint64_t seed);

enum class KernelScaling {
  kSelfTuning,  // sigma_i = distance to the ceil(k/2)-th neighbour
  kGlobal,      // one sigma^2 = mean squared k-NN distance
};

KernelScaling parse_kernel_scaling(const std::string& name);
std::string to_string(KernelScaling scaling);

/// Similarity graph W and the matrices derived from it.
class SimilarityGraph {
 public:
  /// Validates W (symmetric, nonnegative, zero diagonal, no isolated node)
  /// and derives degrees, P, pi and L.
  static SimilarityGraph from_weights(Eigen::MatrixXd weights);

  std::size_t size() const { return static_cast<std::size_t>(weights_.rows()); }
  const Eigen::MatrixXd& weights() const { return weights_; }
  const Eigen::VectorXd& degrees() const { return degrees_; }
  const Eigen::MatrixXd& transition() const { return transition_; }
  const kernels::CsrMatrix& transition_sparse() const { return transition_sparse_; }
  const kernels::CsrMatrix& weights_sparse() const { return weights_sparse_; }
  const Eigen::VectorXd& stationary() const { return stationary_; }
  const Eigen::MatrixXd& laplacian() const { return laplacian_; }
  double total_degree() const { return total_degree_; }

  /// The rank-one matrix whose every row is pi. Built on demand (n x n).
  Eigen::MatrixXd rank_one() const;

 private:
  Eigen::MatrixXd weights_;
  Eigen::VectorXd degrees_;
  Eigen::MatrixXd transition_;
  kernels::CsrMatrix transition_sparse_;
  kernels::CsrMatrix weights_sparse_;
  Eigen::VectorXd stationary_;
  Eigen::MatrixXd laplacian_;
  double total_degree_ = 0.0;
};

/// Gaussian k-NN graph, W_ij = exp(-|x_i - x_j|^2 / (sigma_i sigma_j)),
/// symmetrized by elementwise max. Neighbour ties go to the lower index.
SimilarityGraph build_knn_graph(const Dataset& dataset, int k_neighbors,
                                KernelScaling scaling = KernelScaling::kSelfTuning);

struct SpectralEstimate {
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// y = M x, with dimension n.
using LinearOperator = std::function<void(const Eigen::VectorXd&, Eigen::VectorXd&)>;

/// Largest singular value of M by power iteration on M^T M. This bounds the
/// spectral radius from above and equals it when M is symmetric.
SpectralEstimate spectral_radius(const Eigen::MatrixXd& m, double tol = 1e-12,
                                 int max_iter = 100000);

/// Same, for an operator given as M x and M^T x products.
SpectralEstimate spectral_radius(Eigen::Index n, const LinearOperator& apply,
                                 const LinearOperator& apply_transpose, double tol = 1e-12,
                                 int max_iter = 100000);

}  // namespace qgssl
