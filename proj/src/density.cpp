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
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "qgssl/qsim.hpp"

namespace qgssl {

namespace {

std::vector<int> complement_of(const std::vector<int>& keep, int qubits) {
  std::vector<bool> in(static_cast<std::size_t>(qubits), false);
  for (int k : keep) {
    if (k < 0 || k >= qubits) throw std::invalid_argument("subsystem qubit index out of range");
    if (in[static_cast<std::size_t>(k)]) throw std::invalid_argument("duplicate subsystem qubit");
    in[static_cast<std::size_t>(k)] = true;
  }
  std::vector<int> rest;
  for (int i = 0; i < qubits; ++i) {
    if (!in[static_cast<std::size_t>(i)]) rest.push_back(i);
  }
  return rest;
}

// Reshape amplitudes into a 2^|keep| x 2^|rest| matrix Psi, so rho_keep = Psi Psi^H.
Eigen::MatrixXcd bipartite_matrix(const StateVector& state, const std::vector<int>& keep,
                                  const std::vector<int>& rest) {
  const std::size_t rows = std::size_t{1} << keep.size();
  const std::size_t cols = std::size_t{1} << rest.size();
  Eigen::MatrixXcd psi(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < state.dimension(); ++i) {
    std::size_t r = 0;
    std::size_t c = 0;
    for (std::size_t j = 0; j < keep.size(); ++j) r |= ((i >> keep[j]) & 1u) << j;
    for (std::size_t j = 0; j < rest.size(); ++j) c |= ((i >> rest[j]) & 1u) << j;
    psi(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = state[i];
  }
  return psi;
}

}  // namespace

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

DensityMatrix reduced_density_matrix(const StateVector& state, const std::vector<int>& keep) {
  const int q = state.qubit_count();
  if (keep.empty() || static_cast<int>(keep.size()) >= q) {
    throw std::invalid_argument("reduced_density_matrix: keep must be a nonempty proper subset");
  }
  const auto rest = complement_of(keep, q);
  const Eigen::MatrixXcd psi = bipartite_matrix(state, keep, rest);
  DensityMatrix rho;
  rho.qubit_count = static_cast<int>(keep.size());
  rho.entries = psi * psi.adjoint();
  return rho;
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const Eigen::VectorXd lambda = rho.eigenvalues();
  double s = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double l = std::clamp(lambda[i], 0.0, 1.0);
    if (l > 0.0) s -= l * std::log2(l);
  }
  return std::max(s, 0.0);
}

double entanglement_entropy(const StateVector& state, const std::vector<int>& subsystem) {
  const int q = state.qubit_count();
  if (subsystem.empty() || static_cast<int>(subsystem.size()) >= q) {
    throw std::invalid_argument("entanglement_entropy: subsystem must be a nonempty proper subset");
  }
  auto rest = complement_of(subsystem, q);
  // Both sides share the nonzero spectrum; diagonalize the smaller one.
  if (rest.size() < subsystem.size()) return von_neumann_entropy(reduced_density_matrix(state, rest));
  return von_neumann_entropy(reduced_density_matrix(state, subsystem));
}

double half_cut_entropy(const StateVector& state) {
  const int q = state.qubit_count();
  if (q < 2) return 0.0;
  std::vector<int> a;
  for (int i = 0; i < q / 2; ++i) a.push_back(i);
  return entanglement_entropy(state, a);
}

}  // namespace qgssl
