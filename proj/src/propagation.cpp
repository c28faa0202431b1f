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

#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include "qgssl/error.hpp"
#include "qgssl/kernels.hpp"
#include "qgssl/propagation.hpp"

namespace qgssl {

namespace {

void check_shapes(const SimilarityGraph& graph, const Dataset& dataset) {
  if (graph.size() != dataset.size()) {
    throw std::invalid_argument("graph has " + std::to_string(graph.size()) +
                                " nodes but dataset has " + std::to_string(dataset.size()) +
                                " rows");
  }
}

// Symmetric normalisation D^-1/2 W D^-1/2 in CSR form.
kernels::CsrMatrix normalized_adjacency(const SimilarityGraph& graph) {
  kernels::CsrMatrix s = graph.weights_sparse();
  const Eigen::VectorXd inv_sqrt = graph.degrees().cwiseSqrt().cwiseInverse();
  for (int i = 0; i < s.rows; ++i) {
    for (int e = s.row_ptr[i]; e < s.row_ptr[i + 1]; ++e) {
      s.values[e] *= inv_sqrt[i] * inv_sqrt[s.col_idx[e]];
    }
  }
  return s;
}

}  // namespace

void PropagationParams::validate() const {
  if (!std::isfinite(alpha1) || !std::isfinite(alpha2) || !std::isfinite(alpha3)) {
    throw std::invalid_argument("propagation: alphas must be finite");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("propagation: epsilon must be > 0");
  if (max_iter < 0) throw std::invalid_argument("propagation: max_iter must be >= 0");
}

SourceMatrix build_source_matrix(const Dataset& dataset) {
  const auto n = static_cast<Eigen::Index>(dataset.size());
  const int k = dataset.class_count;
  SourceMatrix src;
  src.prior = Eigen::VectorXd::Zero(k);
  std::size_t labeled = 0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (!dataset.labeled_mask[i]) continue;
    src.prior[dataset.labels[i]] += 1.0;
    ++labeled;
  }
  for (int j = 0; j < k; ++j) {
    if (src.prior[j] == 0.0) {
      throw std::invalid_argument("build_source_matrix: class " + std::to_string(j) +
                                  " has no labeled node");
    }
  }
  src.prior /= static_cast<double>(labeled);
  src.matrix = Eigen::MatrixXd::Zero(k, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!dataset.labeled_mask[static_cast<std::size_t>(i)]) continue;
    src.matrix.col(i) = -src.prior;
    src.matrix(dataset.labels[static_cast<std::size_t>(i)], i) += 1.0;
  }
  return src;
}

Eigen::MatrixXd one_hot_labels(const Dataset& dataset) {
  Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dataset.size()),
                                            dataset.class_count);
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset.labeled_mask[i]) y(static_cast<Eigen::Index>(i), dataset.labels[i]) = 1.0;
  }
  return y;
}

SpectralEstimate iteration_spectral_radius(const SimilarityGraph& graph, double alpha1,
                                           double alpha2) {
  const auto n = static_cast<Eigen::Index>(graph.size());
  const kernels::CsrMatrix s = normalized_adjacency(graph);
  const Eigen::VectorXd u = (graph.degrees() / graph.total_degree()).cwiseSqrt();
  auto apply = [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) {
    Eigen::MatrixXd xm = x;
    Eigen::MatrixXd ym;
    kernels::csr_times_dense(s, xm, ym);
    y = ym.col(0) - alpha1 * u * u.dot(x) + alpha2 * x;
  };
  return spectral_radius(n, apply, apply, 1e-10, 20000);
}

PropagationResult improved_poisson_learning(const SimilarityGraph& graph, const Dataset& dataset,
                                            const PropagationParams& params,
                                            const IterationObserver& observer) {
  params.validate();
  check_shapes(graph, dataset);
  if (dataset.labeled_count() == 0) {
    throw std::invalid_argument("improved_poisson_learning: no labeled nodes");
  }
  const SourceMatrix src = build_source_matrix(dataset);
  const Eigen::VectorXd inv_deg = graph.degrees().cwiseInverse();

  PropagationResult result;
  const SpectralEstimate rho = iteration_spectral_radius(graph, params.alpha1, params.alpha2);
  result.spectral_radius = rho.value;
  if (rho.value >= 1.0 + 1e-9) {
    std::ostringstream msg;
    msg << "iteration matrix P - alpha1 Q + alpha2 I has spectral radius " << rho.value
        << " >= 1 (alpha1=" << params.alpha1 << ", alpha2=" << params.alpha2 << ")";
    throw DivergenceError(msg.str(), rho.value, params.alpha1, params.alpha2);
  }

  Eigen::MatrixXd u = inv_deg.asDiagonal() * one_hot_labels(dataset);
  const Eigen::MatrixXd source =
      params.alpha3 * (inv_deg.asDiagonal() * src.matrix.transpose());
  Eigen::MatrixXd next;
  for (int m = 0; m < params.max_iter; ++m) {
    if (observer) observer(m, u);
    kernels::ipl_step(graph.transition_sparse(), graph.stationary(), params.alpha1, params.alpha2,
                      u, source, next);
    const double residual = (next - u).norm();
    result.residuals.push_back(residual);
    u.swap(next);
    result.iterations = m + 1;
    if (!std::isfinite(residual)) {
      std::ostringstream msg;
      msg << "improved Poisson iteration diverged at step " << m + 1
          << " (spectral radius estimate " << rho.value << ", alpha1=" << params.alpha1
          << ", alpha2=" << params.alpha2 << ")";
      throw DivergenceError(msg.str(), rho.value, params.alpha1, params.alpha2);
    }
    if (residual < params.epsilon) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(u);
  return result;
}

Eigen::MatrixXd laplacian_learning(const SimilarityGraph& graph, const Dataset& dataset,
                                   double rel_tol, int max_iter) {
  check_shapes(graph, dataset);
  const Eigen::MatrixXd y = one_hot_labels(dataset);
  const std::vector<int> unlabeled = dataset.unlabeled_indices();
  if (unlabeled.empty()) return y;
  const auto& w = graph.weights_sparse();
  const auto n = dataset.size();

  // Every unlabeled node must reach a labeled one.
  std::vector<bool> reached(n, false);
  std::queue<int> frontier;
  for (std::size_t i = 0; i < n; ++i) {
    if (dataset.labeled_mask[i]) {
      reached[i] = true;
      frontier.push(static_cast<int>(i));
    }
  }
  while (!frontier.empty()) {
    const int i = frontier.front();
    frontier.pop();
    for (int e = w.row_ptr[i]; e < w.row_ptr[i + 1]; ++e) {
      const int j = w.col_idx[e];
      if (!reached[static_cast<std::size_t>(j)]) {
        reached[static_cast<std::size_t>(j)] = true;
        frontier.push(j);
      }
    }
  }
  std::vector<int> stranded;
  for (int i : unlabeled) {
    if (!reached[static_cast<std::size_t>(i)]) stranded.push_back(i);
  }
  if (!stranded.empty()) {
    std::ostringstream msg;
    msg << "laplacian_learning: L_uu is singular; nodes {";
    for (std::size_t i = 0; i < stranded.size(); ++i) msg << (i ? "," : "") << stranded[i];
    msg << "} form a component with no labeled node";
    throw std::invalid_argument(msg.str());
  }

  // Local numbering of the unknowns.
  std::vector<int> local(n, -1);
  for (std::size_t a = 0; a < unlabeled.size(); ++a) {
    local[static_cast<std::size_t>(unlabeled[a])] = static_cast<int>(a);
  }
  const auto nu = static_cast<Eigen::Index>(unlabeled.size());
  const Eigen::VectorXd& deg = graph.degrees();
  auto apply_luu = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    out.resize(nu);
    for (Eigen::Index a = 0; a < nu; ++a) {
      const int i = unlabeled[static_cast<std::size_t>(a)];
      double s = deg[i] * x[a];
      for (int e = w.row_ptr[i]; e < w.row_ptr[i + 1]; ++e) {
        const int l = local[static_cast<std::size_t>(w.col_idx[e])];
        if (l >= 0) s -= w.values[e] * x[l];
      }
      out[a] = s;
    }
  };

  Eigen::MatrixXd result = y;
  for (int c = 0; c < dataset.class_count; ++c) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nu);
    for (Eigen::Index a = 0; a < nu; ++a) {
      const int i = unlabeled[static_cast<std::size_t>(a)];
      for (int e = w.row_ptr[i]; e < w.row_ptr[i + 1]; ++e) {
        const int j = w.col_idx[e];
        if (dataset.labeled_mask[static_cast<std::size_t>(j)]) b[a] += w.values[e] * y(j, c);
      }
    }
    Eigen::VectorXd x = Eigen::VectorXd::Zero(nu);
    const double bnorm = b.norm();
    if (bnorm > 0.0) {
      Eigen::VectorXd r = b;
      Eigen::VectorXd z(nu);
      for (Eigen::Index a = 0; a < nu; ++a) z[a] = r[a] / deg[unlabeled[static_cast<std::size_t>(a)]];
      Eigen::VectorXd p = z;
      Eigen::VectorXd ap(nu);
      double rz = r.dot(z);
      for (int it = 0; it < max_iter && r.norm() > rel_tol * bnorm; ++it) {
        apply_luu(p, ap);
        const double step = rz / p.dot(ap);
        x += step * p;
        r -= step * ap;
        for (Eigen::Index a = 0; a < nu; ++a) {
          z[a] = r[a] / deg[unlabeled[static_cast<std::size_t>(a)]];
        }
        const double rz_next = r.dot(z);
        p = z + (rz_next / rz) * p;
        rz = rz_next;
      }
    }
    for (Eigen::Index a = 0; a < nu; ++a) result(unlabeled[static_cast<std::size_t>(a)], c) = x[a];
  }
  return result;
}

Eigen::MatrixXd poisson_learning(const SimilarityGraph& graph, const SourceMatrix& source,
                                 int iterations) {
  if (iterations < 1) throw std::invalid_argument("poisson_learning: iterations must be >= 1");
  const auto n = static_cast<Eigen::Index>(graph.size());
  if (source.matrix.cols() != n) {
    throw std::invalid_argument("poisson_learning: source matrix has wrong width");
  }
  const Eigen::MatrixXd drive = graph.degrees().cwiseInverse().asDiagonal() *
                                source.matrix.transpose();
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, source.matrix.rows());
  Eigen::MatrixXd pu;
  for (int t = 0; t < iterations; ++t) {
    kernels::csr_times_dense(graph.transition_sparse(), u, pu);
    u = pu + drive;
  }
  return u;
}

Eigen::MatrixXd poisson_learning(const SimilarityGraph& graph, const Dataset& dataset,
                                 int iterations) {
  check_shapes(graph, dataset);
  return poisson_learning(graph, build_source_matrix(dataset), iterations);
}

PropagationResult label_propagation_baseline(const SimilarityGraph& graph, const Dataset& dataset,
                                             double tol, int max_iter) {
  check_shapes(graph, dataset);
  const Eigen::MatrixXd y = one_hot_labels(dataset);
  const std::vector<int> labeled = dataset.labeled_indices();
  PropagationResult result;
  Eigen::MatrixXd u = y;
  Eigen::MatrixXd next;
  for (int m = 0; m < max_iter; ++m) {
    kernels::csr_times_dense(graph.transition_sparse(), u, next);
    for (int i : labeled) next.row(i) = y.row(i);
    const double residual = (next - u).norm();
    result.residuals.push_back(residual);
    u.swap(next);
    result.iterations = m + 1;
    if (residual < tol) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(u);
  return result;
}

PropagationResult label_spreading_baseline(const SimilarityGraph& graph, const Dataset& dataset,
                                           double clamp, double tol, int max_iter) {
  check_shapes(graph, dataset);
  if (!(clamp > 0.0 && clamp < 1.0)) {
    throw std::invalid_argument("label_spreading_baseline: clamp must be in (0, 1)");
  }
  const kernels::CsrMatrix s = normalized_adjacency(graph);
  const Eigen::MatrixXd y = one_hot_labels(dataset);
  PropagationResult result;
  Eigen::MatrixXd u = y;
  Eigen::MatrixXd su;
  for (int m = 0; m < max_iter; ++m) {
    kernels::csr_times_dense(s, u, su);
    Eigen::MatrixXd next = clamp * su + (1.0 - clamp) * y;
    const double residual = (next - u).norm();
    result.residuals.push_back(residual);
    u.swap(next);
    result.iterations = m + 1;
    if (residual < tol) {
      result.converged = true;
      break;
    }
  }
  result.scores = std::move(u);
  return result;
}

std::vector<int> assign_labels(const Eigen::MatrixXd& scores) {
  std::vector<int> out(static_cast<std::size_t>(scores.rows()), 0);
  for (Eigen::Index i = 0; i < scores.rows(); ++i) {
    int best = 0;
    for (Eigen::Index j = 1; j < scores.cols(); ++j) {
      if (scores(i, j) > scores(i, best)) best = static_cast<int>(j);
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

}  // namespace qgssl
