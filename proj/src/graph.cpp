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
#include <numeric>
#include <stdexcept>

#include "qgssl/error.hpp"
#include "qgssl/graph.hpp"

namespace qgssl {

KernelScaling parse_kernel_scaling(const std::string& name) {
  if (name == "self_tuning") return KernelScaling::kSelfTuning;
  if (name == "global") return KernelScaling::kGlobal;
  throw std::invalid_argument("unknown kernel scaling '" + name + "'");
}

std::string to_string(KernelScaling scaling) {
  switch (scaling) {
    case KernelScaling::kSelfTuning:
      return "self_tuning";
    case KernelScaling::kGlobal:
      return "global";
  }
  return "unknown";
}

SimilarityGraph SimilarityGraph::from_weights(Eigen::MatrixXd weights) {
  const Eigen::Index n = weights.rows();
  if (n < 1 || weights.cols() != n) {
    throw std::invalid_argument("similarity graph: weight matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (weights(i, i) != 0.0) {
      throw std::invalid_argument("similarity graph: nonzero diagonal at " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      const double w = weights(i, j);
      if (!std::isfinite(w) || w < 0.0) {
        throw std::invalid_argument("similarity graph: weights must be finite and nonnegative");
      }
      if (std::abs(w - weights(j, i)) > 1e-12 * std::max(1.0, std::abs(w))) {
        throw std::invalid_argument("similarity graph: weights are not symmetric");
      }
    }
  }

  SimilarityGraph g;
  g.degrees_ = weights.rowwise().sum();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(g.degrees_[i] > 0.0)) {
      throw std::invalid_argument("similarity graph: node " + std::to_string(i) + " is isolated");
    }
  }
  g.total_degree_ = g.degrees_.sum();
  g.stationary_ = g.degrees_ / g.total_degree_;
  g.transition_ = g.degrees_.cwiseInverse().asDiagonal() * weights;
  g.laplacian_ = -weights;
  g.laplacian_.diagonal() = g.degrees_;
  g.transition_sparse_ = kernels::CsrMatrix::from_dense(g.transition_);
  g.weights_sparse_ = kernels::CsrMatrix::from_dense(weights);
  g.weights_ = std::move(weights);
  return g;
}

Eigen::MatrixXd SimilarityGraph::rank_one() const {
  const Eigen::Index n = weights_.rows();
  return Eigen::VectorXd::Ones(n) * stationary_.transpose();
}

SimilarityGraph build_knn_graph(const Dataset& dataset, int k_neighbors, KernelScaling scaling) {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  if (k_neighbors < 1 || k_neighbors >= n) {
    throw std::invalid_argument("build_knn_graph: need 1 <= k_neighbors < n (k=" +
                                std::to_string(k_neighbors) + ", n=" + std::to_string(n) + ")");
  }
  Eigen::MatrixXd dist2;
  kernels::pairwise_sq_distances(dataset.features, dist2);

  // neighbours[i] sorted by (distance, index)
  std::vector<std::vector<Eigen::Index>> neighbours(static_cast<std::size_t>(n));
  std::vector<Eigen::Index> order;
  for (Eigen::Index i = 0; i < n; ++i) {
    order.resize(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    order.erase(order.begin() + i);
    std::partial_sort(order.begin(), order.begin() + k_neighbors, order.end(),
                      [&](Eigen::Index a, Eigen::Index b) {
                        const double da = dist2(i, a);
                        const double db = dist2(i, b);
                        return da < db || (da == db && a < b);
                      });
    neighbours[static_cast<std::size_t>(i)].assign(order.begin(), order.begin() + k_neighbors);
  }

  Eigen::VectorXd sigma(n);
  double global_sigma2 = 0.0;
  if (scaling == KernelScaling::kSelfTuning) {
    const int rank = (k_neighbors + 1) / 2;  // ceil(k/2), 1-based
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto& nb = neighbours[static_cast<std::size_t>(i)];
      double s = std::sqrt(dist2(i, nb[static_cast<std::size_t>(rank - 1)]));
      if (s == 0.0) {
        // Duplicate points: fall back to the nearest positive distance.
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j : nb) {
          if (dist2(i, j) > 0.0) best = std::min(best, dist2(i, j));
        }
        if (!std::isfinite(best)) {
          for (Eigen::Index j = 0; j < n; ++j) {
            if (dist2(i, j) > 0.0) best = std::min(best, dist2(i, j));
          }
        }
        if (!std::isfinite(best)) {
          throw std::invalid_argument("build_knn_graph: all points coincide");
        }
        s = std::sqrt(best);
      }
      sigma[i] = s;
    }
  } else {
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j : neighbours[static_cast<std::size_t>(i)]) sum += dist2(i, j);
    }
    global_sigma2 = sum / static_cast<double>(n * k_neighbors);
    if (!(global_sigma2 > 0.0)) {
      throw std::invalid_argument("build_knn_graph: all neighbour distances are zero");
    }
  }

  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j : neighbours[static_cast<std::size_t>(i)]) {
      const double width = scaling == KernelScaling::kSelfTuning ? sigma[i] * sigma[j]
                                                                 : global_sigma2;
      w(i, j) = std::exp(-dist2(i, j) / width);
    }
  }
  Eigen::MatrixXd sym = w.cwiseMax(w.transpose());
  return SimilarityGraph::from_weights(std::move(sym));
}

SpectralEstimate spectral_radius(Eigen::Index n, const LinearOperator& apply,
                                 const LinearOperator& apply_transpose, double tol,
                                 int max_iter) {
  if (n < 1) throw std::invalid_argument("spectral_radius: empty operator");
  // Slightly non-uniform start so it is unlikely to be orthogonal to the
  // dominant singular vector.
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = 1.0 + 0.1 * static_cast<double>(i % 7) / 7.0;
  x.normalize();
  Eigen::VectorXd y(n);
  Eigen::VectorXd z(n);
  SpectralEstimate est;
  double previous = -1.0;
  for (int it = 1; it <= max_iter; ++it) {
    apply(x, y);
    const double value = y.norm();
    est.value = value;
    est.iterations = it;
    if (value == 0.0 || std::abs(value - previous) <= tol * std::max(1.0, value)) {
      est.converged = true;
      return est;
    }
    previous = value;
    apply_transpose(y, z);
    const double zn = z.norm();
    if (zn == 0.0) {
      est.converged = true;
      return est;
    }
    x = z / zn;
  }
  return est;
}

SpectralEstimate spectral_radius(const Eigen::MatrixXd& m, double tol, int max_iter) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
  return spectral_radius(
      m.rows(), [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out.noalias() = m * in; },
      [&](const Eigen::VectorXd& in, Eigen::VectorXd& out) { out.noalias() = m.transpose() * in; },
      tol, max_iter);
}

}  // namespace qgssl
