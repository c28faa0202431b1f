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
#include <utility>

#include "qgssl/kernels.hpp"

namespace qgssl::kernels {

CsrMatrix CsrMatrix::from_dense(const Eigen::MatrixXd& dense) {
  CsrMatrix m;
  m.rows = static_cast<int>(dense.rows());
  m.cols = static_cast<int>(dense.cols());
  m.row_ptr.reserve(m.rows + 1);
  m.row_ptr.push_back(0);
  for (int i = 0; i < m.rows; ++i) {
    for (int j = 0; j < m.cols; ++j) {
      const double v = dense(i, j);
      if (v != 0.0) {
        m.col_idx.push_back(j);
        m.values.push_back(v);
      }
    }
    m.row_ptr.push_back(static_cast<int>(m.values.size()));
  }
  return m;
}

namespace serial {

void pairwise_sq_distances(const Eigen::MatrixXd& points, Eigen::MatrixXd& out) {
  const Eigen::Index n = points.rows();
  const Eigen::Index d = points.cols();
  out.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double s = 0.0;
      for (Eigen::Index c = 0; c < d; ++c) {
        const double diff = points(i, c) - points(j, c);
        s += diff * diff;
      }
      out(i, j) = s;
    }
  }
}

void csr_times_dense(const CsrMatrix& a, const Eigen::MatrixXd& dense, Eigen::MatrixXd& out) {
  const Eigen::Index k = dense.cols();
  out.resize(a.rows, k);
  for (int i = 0; i < a.rows; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      double s = 0.0;
      for (int e = a.row_ptr[i]; e < a.row_ptr[i + 1]; ++e) {
        s += a.values[e] * dense(a.col_idx[e], j);
      }
      out(i, j) = s;
    }
  }
}

void ipl_step(const CsrMatrix& transition, const Eigen::VectorXd& stationary, double alpha1,
              double alpha2, const Eigen::MatrixXd& labels, const Eigen::MatrixXd& source,
              Eigen::MatrixXd& out) {
  const int n = transition.rows;
  const Eigen::Index k = labels.cols();
  Eigen::VectorXd projected(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += stationary[i] * labels(i, j);
    projected[j] = s;
  }
  out.resize(n, k);
  for (int i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      double pu = 0.0;
      for (int e = transition.row_ptr[i]; e < transition.row_ptr[i + 1]; ++e) {
        pu += transition.values[e] * labels(transition.col_idx[e], j);
      }
      out(i, j) = ((pu - alpha1 * projected[j]) + alpha2 * labels(i, j)) + source(i, j);
    }
  }
}

void apply_1q(std::span<Complex> amps, int target, const Gate2& gate) {
  const std::size_t stride = std::size_t{1} << target;
  const std::size_t half = amps.size() / 2;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = ((k >> target) << (target + 1)) | (k & (stride - 1));
    const std::size_t i1 = i0 | stride;
    const Complex a0 = amps[i0];
    const Complex a1 = amps[i1];
    amps[i0] = gate[0] * a0 + gate[1] * a1;
    amps[i1] = gate[2] * a0 + gate[3] * a1;
  }
}

void apply_cnot(std::span<Complex> amps, int control, int target) {
  const std::size_t cbit = std::size_t{1} << control;
  const std::size_t tbit = std::size_t{1} << target;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & cbit) && !(i & tbit)) std::swap(amps[i], amps[i | tbit]);
  }
}

void apply_leading_block(std::span<Complex> amps, const Eigen::MatrixXd& block) {
  const Eigen::Index m = block.rows();
  std::vector<Complex> result(static_cast<std::size_t>(m));
  for (Eigen::Index r = 0; r < m; ++r) {
    Complex s = 0.0;
    for (Eigen::Index c = 0; c < m; ++c) s += block(r, c) * amps[c];
    result[r] = s;
  }
  std::copy(result.begin(), result.end(), amps.begin());
}

}  // namespace serial
}  // namespace qgssl::kernels
