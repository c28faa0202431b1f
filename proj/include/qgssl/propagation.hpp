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

#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "qgssl/graph.hpp"

namespace qgssl {

/// Coefficients of the improved Poisson update
///   U <- (P - alpha1 Q + alpha2 I) U + alpha3 D^-1 B^T.
struct PropagationParams {
  double alpha1 = 1.0;
  // Negative: the iteration matrix has eigenvalues lambda(P) + alpha2 off the
  // stationary direction, and k-NN graphs have lambda_2(P) close to 1.
  double alpha2 = -0.2;
  double alpha3 = 1.0;
  double epsilon = 1e-6;
  int max_iter = 2000;  // 0 returns the initial iterate

  void validate() const;
};

/// Class-prior-centred point sources at labeled nodes.
struct SourceMatrix {
  Eigen::MatrixXd matrix;  // k x n; B(j, i) = 1{y_i = j} - b_j on labeled columns
  Eigen::VectorXd prior;   // b_j = fraction of labeled nodes in class j
};

SourceMatrix build_source_matrix(const Dataset& dataset);

/// n x k one-hot rows for labeled nodes, zero rows elsewhere.
Eigen::MatrixXd one_hot_labels(const Dataset& dataset);

struct PropagationResult {
  Eigen::MatrixXd scores;  // n x k
  int iterations = 0;
  bool converged = false;
  std::vector<double> residuals;  // Frobenius change per iteration
  double spectral_radius = std::numeric_limits<double>::quiet_NaN();
};

/// Called with (m, U^(m)) just before the m-th update.
using IterationObserver = std::function<void(int, const Eigen::MatrixXd&)>;

/// Spectral radius of P - alpha1 Q + alpha2 I. That matrix is similar to the
/// symmetric D^-1/2 W D^-1/2 - alpha1 u u^T + alpha2 I (u = sqrt(d / sum d)),
/// so the power-iteration singular value is the exact spectral radius.
SpectralEstimate iteration_spectral_radius(const SimilarityGraph& graph, double alpha1,
                                           double alpha2);

/// Improved Poisson learning. Throws DivergenceError when the spectral
/// radius pre-check is >= 1 + 1e-9 or a residual turns non-finite;
/// hitting max_iter returns a result with converged = false.
PropagationResult improved_poisson_learning(const SimilarityGraph& graph, const Dataset& dataset,
                                            const PropagationParams& params,
                                            const IterationObserver& observer = {});

/// Harmonic extension: labeled rows one-hot, unlabeled rows solve
/// L_uu F_u = W_ul F_l by Jacobi-preconditioned conjugate gradients.
Eigen::MatrixXd laplacian_learning(const SimilarityGraph& graph, const Dataset& dataset,
                                   double rel_tol = 1e-12, int max_iter = 20000);

/// Plain Poisson diffusion U <- P U + D^-1 B^T from U = 0.
Eigen::MatrixXd poisson_learning(const SimilarityGraph& graph, const Dataset& dataset,
                                 int iterations);
Eigen::MatrixXd poisson_learning(const SimilarityGraph& graph, const SourceMatrix& source,
                                 int iterations);

/// U <- P U with labeled rows re-clamped to one-hot after every step.
PropagationResult label_propagation_baseline(const SimilarityGraph& graph, const Dataset& dataset,
                                             double tol = 1e-6, int max_iter = 10000);

/// U <- clamp S U + (1 - clamp) Y with S = D^-1/2 W D^-1/2.
PropagationResult label_spreading_baseline(const SimilarityGraph& graph, const Dataset& dataset,
                                           double clamp = 0.99, double tol = 1e-6,
                                           int max_iter = 10000);

/// Row-wise argmax; ties go to the lowest class index.
std::vector<int> assign_labels(const Eigen::MatrixXd& scores);

}  // namespace qgssl
