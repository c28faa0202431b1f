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

// Independent reference implementations used only by tests. Each one takes
// the slow, obvious route so it shares no code path with the library.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "qgssl/graph.hpp"
#include "qgssl/qsim.hpp"

namespace qgssl::oracle {

using Complex = std::complex<double>;

/// Solves A x = b by Gaussian elimination with partial pivoting.
inline Eigen::MatrixXd dense_solve(Eigen::MatrixXd a, Eigen::MatrixXd b) {
  const Eigen::Index n = a.rows();
  for (Eigen::Index col = 0; col < n; ++col) {
    Eigen::Index pivot = col;
    for (Eigen::Index r = col + 1; r < n; ++r) {
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    }
    a.row(col).swap(a.row(pivot));
    b.row(col).swap(b.row(pivot));
    for (Eigen::Index r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      a.row(r) -= f * a.row(col);
      b.row(r) -= f * b.row(col);
    }
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, b.cols());
  for (Eigen::Index r = n - 1; r >= 0; --r) {
    Eigen::RowVectorXd s = b.row(r);
    for (Eigen::Index c = r + 1; c < n; ++c) s -= a(r, c) * x.row(c);
    x.row(r) = s / a(r, r);
  }
  return x;
}

/// Classical Gram-Schmidt QR with a nonnegative R diagonal (full rank input).
inline void gram_schmidt(const Eigen::MatrixXd& a, Eigen::MatrixXd& q, Eigen::MatrixXd& r) {
  const Eigen::Index m = a.rows();
  q = Eigen::MatrixXd::Zero(m, m);
  r = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index j = 0; j < m; ++j) {
    Eigen::VectorXd v = a.col(j);
    for (Eigen::Index i = 0; i < j; ++i) {
      r(i, j) = q.col(i).dot(a.col(j));
      v -= r(i, j) * q.col(i);
    }
    r(j, j) = v.norm();
    q.col(j) = v / r(j, j);
  }
}

/// rho_keep[a, a'] = sum_b psi[(a, b)] conj(psi[(a', b)]) by explicit index loops.
inline Eigen::MatrixXcd partial_trace(const std::vector<Complex>& psi, int qubits,
                                      const std::vector<int>& keep) {
  const std::size_t dk = std::size_t{1} << keep.size();
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                static_cast<Eigen::Index>(dk));
  auto keep_bits = [&](std::size_t idx) {
    std::size_t a = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) a |= ((idx >> keep[j]) & 1u) << j;
    return a;
  };
  auto rest_bits = [&](std::size_t idx) {
    std::size_t mask = 0;
    for (int k : keep) mask |= std::size_t{1} << k;
    return idx & ~mask;
  };
  const std::size_t dim = std::size_t{1} << qubits;
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < dim; ++j) {
      if (rest_bits(i) != rest_bits(j)) continue;
      rho(static_cast<Eigen::Index>(keep_bits(i)), static_cast<Eigen::Index>(keep_bits(j))) +=
          psi[i] * std::conj(psi[j]);
    }
  }
  return rho;
}

/// Counts pairs: AUC = (#pos > neg + #ties / 2) / (P N).
inline double pairwise_auc(const std::vector<double>& s, const std::vector<bool>& pos) {
  double wins = 0.0;
  double pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!pos[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (pos[j]) continue;
      pairs += 1.0;
      if (s[i] > s[j]) wins += 2.0;
      else if (s[i] == s[j]) wins += 1.0;
    }
  }
  return wins / (2.0 * pairs);
}

/// max over every observed score t of |F_pos(t) - F_neg(t)|.
inline double threshold_ks(const std::vector<double>& s, const std::vector<bool>& pos) {
  double np = 0.0, nn = 0.0;
  for (bool p : pos) (p ? np : nn) += 1.0;
  double best = 0.0;
  for (double t : s) {
    std::size_t cp = 0, cn = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] <= t) (pos[i] ? cp : cn)++;
    }
    best = std::max(best, std::abs(static_cast<double>(cp) / np - static_cast<double>(cn) / nn));
  }
  return best;
}

/// Full 2^q x 2^q unitary of one single-qubit gate on `target`.
inline Eigen::MatrixXcd embed_1q(const Gate2& g, int target, int qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    const int bit = static_cast<int>((col >> target) & 1);
    const Eigen::Index base = col & ~(Eigen::Index{1} << target);
    u(base, col) += g[static_cast<std::size_t>(0 * 2 + bit)];
    u(base | (Eigen::Index{1} << target), col) += g[static_cast<std::size_t>(1 * 2 + bit)];
  }
  return u;
}

inline Eigen::MatrixXcd embed_cnot(int control, int target, int qubits) {
  const Eigen::Index dim = Eigen::Index{1} << qubits;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index col = 0; col < dim; ++col) {
    Eigen::Index row = col;
    if ((col >> control) & 1) row ^= Eigen::Index{1} << target;
    u(row, col) = 1.0;
  }
  return u;
}

/// Product of the dense per-gate unitaries of a layered circuit.
inline Eigen::MatrixXcd circuit_unitary(const CircuitSpec& spec) {
  const int q = spec.qubit_count;
  const Eigen::Index dim = Eigen::Index{1} << q;
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
  for (int l = 0; l < spec.layer_count; ++l) {
    for (int k = 0; k < q; ++k) {
      u = embed_1q(gates::rz(spec.theta(l, k, 2)), k, q) * u;
      u = embed_1q(gates::ry(spec.theta(l, k, 1)), k, q) * u;
      u = embed_1q(gates::rz(spec.theta(l, k, 0)), k, q) * u;
    }
    if (q > 1) {
      for (int k = 0; k < q; ++k) u = embed_cnot(k, (k + 1) % q, q) * u;
    }
  }
  return u;
}

/// Random symmetric nonnegative weights with zero diagonal on a connected graph.
inline Eigen::MatrixXd random_connected_weights(int n, std::mt19937_64& rng, double density = 0.5) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  std::bernoulli_distribution edge(density);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) {  // path backbone keeps it connected
    w(i, i + 1) = w(i + 1, i) = u(rng);
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 2; j < n; ++j) {
      if (edge(rng)) w(i, j) = w(j, i) = u(rng);
    }
  }
  return w;
}

/// Dataset with the given labels and mask; features are unused placeholders.
inline Dataset toy_dataset(const std::vector<int>& labels, const std::vector<bool>& mask, int k) {
  Dataset d;
  d.name = "toy";
  d.labels = labels;
  d.labeled_mask = mask;
  d.class_count = k;
  d.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()), 1);
  for (int c = 0; c < k; ++c) d.class_names.push_back("c" + std::to_string(c));
  return d;
}

}  // namespace qgssl::oracle
