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
#include <string>

#include "qgssl/qsim.hpp"

namespace qgssl {

namespace gates {

Gate2 identity() { return {1.0, 0.0, 0.0, 1.0}; }

Gate2 hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return {h, h, h, -h};
}

Gate2 phase_s() { return {1.0, 0.0, 0.0, Complex(0.0, 1.0)}; }
Gate2 pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }
Gate2 pauli_y() { return {0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0}; }
Gate2 pauli_z() { return {1.0, 0.0, 0.0, -1.0}; }

Gate2 rz(double theta) {
  return {std::polar(1.0, -theta / 2.0), 0.0, 0.0, std::polar(1.0, theta / 2.0)};
}

Gate2 ry(double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return {c, -s, s, c};
}

Gate2 multiply(const Gate2& a, const Gate2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

Gate2 adjoint(const Gate2& g) {
  return {std::conj(g[0]), std::conj(g[2]), std::conj(g[1]), std::conj(g[3])};
}

}  // namespace gates

namespace {

void check_qubits(int qubits) {
  if (qubits < 1 || qubits > kMaxQubits) {
    throw std::invalid_argument("qubit count " + std::to_string(qubits) + " outside [1, " +
                                std::to_string(kMaxQubits) + "]");
  }
}

int qubits_for_length(std::size_t length) {
  int q = 1;
  while ((std::size_t{1} << q) < length) {
    ++q;
    if (q > kMaxQubits) {
      throw std::invalid_argument("amplitude_encode: length " + std::to_string(length) +
                                  " exceeds the " + std::to_string(kMaxQubits) + "-qubit cap");
    }
  }
  return q;
}

}  // namespace

StateVector::StateVector(int qubits) : qubits_(qubits) {
  check_qubits(qubits);
  amps_.assign(std::size_t{1} << qubits, Complex(0.0));
  amps_[0] = 1.0;
}

StateVector StateVector::from_amplitudes(std::vector<Complex> amplitudes) {
  const std::size_t dim = amplitudes.size();
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw std::invalid_argument("StateVector: dimension " + std::to_string(dim) +
                                " is not a power of two >= 2");
  }
  StateVector s(qubits_for_length(dim));
  s.amps_ = std::move(amplitudes);
  if (std::abs(s.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("StateVector: amplitudes are not unit norm");
  }
  return s;
}

double StateVector::norm() const {
  double s = 0.0;
  for (const auto& a : amps_) s += std::norm(a);
  return std::sqrt(s);
}

void StateVector::apply(int target, const Gate2& gate) {
  if (target < 0 || target >= qubits_) throw std::out_of_range("gate target out of range");
  kernels::apply_1q(amps_, target, gate);
}

void StateVector::apply_cnot(int control, int target) {
  if (control < 0 || control >= qubits_ || target < 0 || target >= qubits_ || control == target) {
    throw std::out_of_range("CNOT qubits invalid");
  }
  kernels::apply_cnot(amps_, control, target);
}

StateVector amplitude_encode(const Eigen::VectorXcd& values) {
  if (values.size() < 1) throw std::invalid_argument("amplitude_encode: empty vector");
  const double norm = values.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw std::invalid_argument("amplitude_encode: vector has zero or non-finite norm");
  }
  const int q = qubits_for_length(static_cast<std::size_t>(values.size()));
  std::vector<Complex> amps(std::size_t{1} << q, Complex(0.0));
  for (Eigen::Index i = 0; i < values.size(); ++i) amps[static_cast<std::size_t>(i)] = values[i] / norm;
  return StateVector::from_amplitudes(std::move(amps));
}

StateVector amplitude_encode(const Eigen::VectorXd& values) {
  return amplitude_encode(Eigen::VectorXcd(values.cast<Complex>()));
}

double state_fidelity(const StateVector& a, const StateVector& b) {
  if (a.qubit_count() != b.qubit_count()) {
    throw std::invalid_argument("state_fidelity: qubit counts differ (" +
                                std::to_string(a.qubit_count()) + " vs " +
                                std::to_string(b.qubit_count()) + ")");
  }
  Complex overlap = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) overlap += std::conj(a[i]) * b[i];
  return std::clamp(std::norm(overlap), 0.0, 1.0);
}

}  // namespace qgssl
