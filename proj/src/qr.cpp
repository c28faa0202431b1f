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
#include <limits>
#include <stdexcept>

#include "qgssl/qsim.hpp"

namespace qgssl {

QrFactors qr_embed(const Eigen::MatrixXd& a) {
  const Eigen::Index m = a.rows();
  if (m < 1 || a.cols() != m) throw std::invalid_argument("qr_embed: matrix must be square, m >= 1");
  if (!a.allFinite()) throw std::invalid_argument("qr_embed: non-finite entry");

  QrFactors f;
  f.r = a;
  f.q = Eigen::MatrixXd::Identity(m, m);
  for (Eigen::Index j = 0; j + 1 < m; ++j) {
    const Eigen::Index len = m - j;
    Eigen::VectorXd v = f.r.col(j).tail(len);
    if (v.tail(len - 1).squaredNorm() == 0.0) continue;  // already reduced
    const double alpha = v[0] >= 0.0 ? -v.norm() : v.norm();
    v[0] -= alpha;
    const double vv = v.squaredNorm();
    // R <- H R and Q <- Q H with H = I - 2 v v^T / v^T v.
    const Eigen::RowVectorXd vr = (2.0 / vv) * (v.transpose() * f.r.bottomRows(len));
    f.r.bottomRows(len) -= v * vr;
    const Eigen::VectorXd qv = (2.0 / vv) * (f.q.rightCols(len) * v);
    f.q.rightCols(len) -= qv * v.transpose();
    f.r.col(j).tail(len - 1).setZero();
    f.r(j, j) = alpha;
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    if (f.r(i, i) < 0.0) {
      f.r.row(i) *= -1.0;
      f.q.col(i) *= -1.0;
    }
  }
  const double max_diag = f.r.diagonal().cwiseAbs().maxCoeff();
  const double tol = static_cast<double>(m) * std::numeric_limits<double>::epsilon() * max_diag;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (max_diag > 0.0 && std::abs(f.r(i, i)) > tol) ++f.effective_rank;
  }
  return f;
}

StateVector prepare_node_state(const Eigen::MatrixXd& q) {
  if (q.rows() < 1) throw std::invalid_argument("prepare_node_state: empty matrix");
  return amplitude_encode(Eigen::VectorXd(q.col(0)));
}

StateVector apply_embedded_unitary(const StateVector& state, const Eigen::MatrixXd& q) {
  if (q.rows() != q.cols()) throw std::invalid_argument("apply_embedded_unitary: q not square");
  if (static_cast<std::size_t>(q.rows()) > state.dimension()) {
    throw std::invalid_argument("apply_embedded_unitary: " + std::to_string(q.rows()) +
                                "-dimensional block exceeds state dimension " +
                                std::to_string(state.dimension()));
  }
  StateVector out = state;
  kernels::apply_leading_block(out.mutable_amplitudes(), q);
  return out;
}

}  // namespace qgssl
