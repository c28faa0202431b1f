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

// Data-parallel inner loops. Every kernel has a serial reference in
// qgssl::kernels::serial and an OpenMP version in qgssl::kernels::omp with
// an identical signature. Each output element is produced by exactly one
// thread using the same floating-point operation order as the serial code,
// so both variants are bit-identical; tests assert that.

#include <array>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace qgssl::kernels {

using Complex = std::complex<double>;

/// Row-major 2x2 gate matrix {g00, g01, g10, g11}.
using Gate2 = std::array<Complex, 4>;

/// Compressed sparse row matrix; column indices are sorted within each row.
struct CsrMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<double> values;

  static CsrMatrix from_dense(const Eigen::MatrixXd& dense);
  std::size_t nonzeros() const { return values.size(); }
};

namespace serial {

/// out(i, j) = ||x_i - x_j||^2 for the rows of `points`.
void pairwise_sq_distances(const Eigen::MatrixXd& points, Eigen::MatrixXd& out);

/// out = a * dense
void csr_times_dense(const CsrMatrix& a, const Eigen::MatrixXd& dense, Eigen::MatrixXd& out);

/// One improved-Poisson update:
///   out = P U - alpha1 * 1 (pi^T U) + alpha2 U + source
void ipl_step(const CsrMatrix& transition, const Eigen::VectorXd& stationary, double alpha1,
              double alpha2, const Eigen::MatrixXd& labels, const Eigen::MatrixXd& source,
              Eigen::MatrixXd& out);

void apply_1q(std::span<Complex> amps, int target, const Gate2& gate);
void apply_cnot(std::span<Complex> amps, int control, int target);

/// amps[0:m] <- block * amps[0:m] for an m x m real block; tail untouched.
void apply_leading_block(std::span<Complex> amps, const Eigen::MatrixXd& block);

}  // namespace serial

namespace omp {

void pairwise_sq_distances(const Eigen::MatrixXd& points, Eigen::MatrixXd& out);
void csr_times_dense(const CsrMatrix& a, const Eigen::MatrixXd& dense, Eigen::MatrixXd& out);
void ipl_step(const CsrMatrix& transition, const Eigen::VectorXd& stationary, double alpha1,
              double alpha2, const Eigen::MatrixXd& labels, const Eigen::MatrixXd& source,
              Eigen::MatrixXd& out);
void apply_1q(std::span<Complex> amps, int target, const Gate2& gate);
void apply_cnot(std::span<Complex> amps, int control, int target);
void apply_leading_block(std::span<Complex> amps, const Eigen::MatrixXd& block);

}  // namespace omp

// The library itself runs the OpenMP variants.
using omp::apply_1q;
using omp::apply_cnot;
using omp::apply_leading_block;
using omp::csr_times_dense;
using omp::ipl_step;
using omp::pairwise_sq_distances;

}  // namespace qgssl::kernels
