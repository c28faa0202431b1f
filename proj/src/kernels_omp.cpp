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

#include <cstdint>

#include "qgssl/kernels.hpp"

namespace qgssl::kernels::omp {

namespace {
// Below these sizes thread start-up costs more than the loop.
constexpr std::int64_t kMinRows = 256;
constexpr std::int64_t kMinAmplitudes = 4096;
}  // namespace

void pairwise_sq_distances(const Eigen::MatrixXd& points, Eigen::MatrixXd& out) {
  const std::int64_t n = points.rows();
  const Eigen::Index d = points.cols();
  out.resize(n, n);
#pragma omp parallel for schedule(static) if (n >= kMinRows)
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < n; ++j) {
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
  const std::int64_t rows = a.rows;
  out.resize(rows, k);
#pragma omp parallel for schedule(static) if (rows >= kMinRows)
  for (std::int64_t i = 0; i < rows; ++i) {
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
  const std::int64_t n = transition.rows;
  const Eigen::Index k = labels.cols();
  // O(nk) and order-sensitive: kept serial so the sum matches the reference.
  Eigen::VectorXd projected(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    double s = 0.0;
    for (std::int64_t i = 0; i < n; ++i) s += stationary[i] * labels(i, j);
    projected[j] = s;
  }
  out.resize(n, k);
#pragma omp parallel for schedule(static) if (n >= kMinRows)
  for (std::int64_t i = 0; i < n; ++i) {
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
  const std::uint64_t stride = std::uint64_t{1} << target;
  const std::int64_t half = static_cast<std::int64_t>(amps.size() / 2);
  Complex* data = amps.data();
#pragma omp parallel for schedule(static) if (half * 2 >= kMinAmplitudes)
  for (std::int64_t k = 0; k < half; ++k) {
    const std::uint64_t uk = static_cast<std::uint64_t>(k);
    const std::uint64_t i0 = ((uk >> target) << (target + 1)) | (uk & (stride - 1));
    const std::uint64_t i1 = i0 | stride;
    const Complex a0 = data[i0];
    const Complex a1 = data[i1];
    data[i0] = gate[0] * a0 + gate[1] * a1;
    data[i1] = gate[2] * a0 + gate[3] * a1;
  }
}

void apply_cnot(std::span<Complex> amps, int control, int target) {
  const std::uint64_t cbit = std::uint64_t{1} << control;
  const std::uint64_t tbit = std::uint64_t{1} << target;
  const std::int64_t dim = static_cast<std::int64_t>(amps.size());
  Complex* data = amps.data();
#pragma omp parallel for schedule(static) if (dim >= kMinAmplitudes)
  for (std::int64_t i = 0; i < dim; ++i) {
    const std::uint64_t ui = static_cast<std::uint64_t>(i);
    if ((ui & cbit) && !(ui & tbit)) std::swap(data[ui], data[ui | tbit]);
  }
}

void apply_leading_block(std::span<Complex> amps, const Eigen::MatrixXd& block) {
  const std::int64_t m = block.rows();
  std::vector<Complex> result(static_cast<std::size_t>(m));
#pragma omp parallel for schedule(static) if (m >= kMinRows)
  for (std::int64_t r = 0; r < m; ++r) {
    Complex s = 0.0;
    for (std::int64_t c = 0; c < m; ++c) s += block(r, c) * amps[c];
    result[r] = s;
  }
  std::copy(result.begin(), result.end(), amps.begin());
}

}  // namespace qgssl::kernels::omp
