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

// Dense statevector simulation. Qubit j is bit j of the amplitude index
// (little-endian), so |q_{n-1} ... q_1 q_0> has index sum_j q_j 2^j.

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qgssl/kernels.hpp"

namespace qgssl {

using Complex = std::complex<double>;
using kernels::Gate2;

inline constexpr int kMaxQubits = 14;

namespace gates {

Gate2 identity();
Gate2 hadamard();
Gate2 phase_s();
Gate2 pauli_x();
Gate2 pauli_y();
Gate2 pauli_z();
Gate2 rz(double theta);  // diag(e^{-i theta/2}, e^{i theta/2})
Gate2 ry(double theta);

/// Matrix product a * b (b acts first).
Gate2 multiply(const Gate2& a, const Gate2& b);
Gate2 adjoint(const Gate2& g);

}  // namespace gates

class StateVector {
 public:
  /// |0...0> on `qubits` qubits.
  explicit StateVector(int qubits);

  /// Takes ownership of a power-of-two amplitude vector with unit norm.
  static StateVector from_amplitudes(std::vector<Complex> amplitudes);

  int qubit_count() const { return qubits_; }
  std::size_t dimension() const { return amps_.size(); }
  const std::vector<Complex>& amplitudes() const { return amps_; }
  std::span<Complex> mutable_amplitudes() { return amps_; }
  Complex operator[](std::size_t i) const { return amps_[i]; }
  double norm() const;

  void apply(int target, const Gate2& gate);
  void apply_cnot(int control, int target);

 private:
  int qubits_;
  std::vector<Complex> amps_;
};

/// Zero-pads to the next power of two (at least 2) and normalizes.
/// Throws std::invalid_argument on a zero or over-cap vector.
StateVector amplitude_encode(const Eigen::VectorXd& values);
StateVector amplitude_encode(const Eigen::VectorXcd& values);

struct QrFactors {
  Eigen::MatrixXd q;  // orthogonal
  Eigen::MatrixXd r;  // upper triangular, nonnegative diagonal
  int effective_rank = 0;
};

/// Householder QR of a square matrix. Rank-deficient input still yields
/// an orthogonal Q; `effective_rank` counts diagonal entries of R above
/// m * eps * max|R_ii|.
QrFactors qr_embed(const Eigen::MatrixXd& a);

/// Amplitude encoding of the first column of an orthogonal matrix.
StateVector prepare_node_state(const Eigen::MatrixXd& q);

/// Applies q (+) I to the amplitudes: q acts on the leading m entries and
/// the tail is left alone. Throws when m > 2^qubits.
StateVector apply_embedded_unitary(const StateVector& state, const Eigen::MatrixXd& q);

/// Layered circuit: per layer Rz(a) Ry(b) Rz(c) on every qubit, then a
/// CNOT ring (i -> i+1 mod q) when q > 1.
struct CircuitSpec {
  int qubit_count = 0;
  int layer_count = 0;
  std::vector<double> thetas;  // layer-major, then qubit, then (a, b, c)
  std::uint64_t seed = 0;

  double theta(int layer, int qubit, int slot) const {
    return thetas[static_cast<std::size_t>((layer * qubit_count + qubit) * 3 + slot)];
  }
  bool has_entangler() const { return qubit_count > 1; }
  void validate() const;
};

/// Angles uniform in [0, 2 pi) from a generator seeded by `seed`.
CircuitSpec build_pqc(int qubit_count, int layer_count, std::uint64_t seed);

/// Single-qubit block of one (layer, qubit) slot as a 2x2 matrix.
Gate2 rotation_block(double a, double b, double c);

StateVector run_circuit(const CircuitSpec& spec);
StateVector run_circuit(const CircuitSpec& spec, StateVector initial);

struct DensityMatrix {
  Eigen::MatrixXcd entries;
  int qubit_count = 0;

  double trace() const { return entries.trace().real(); }
  /// Ascending real eigenvalues.
  Eigen::VectorXd eigenvalues() const;
};

/// Partial trace keeping `keep` (distinct qubit indices, a nonempty proper
/// subset). Kept qubit keep[j] becomes bit j of the reduced index.
DensityMatrix reduced_density_matrix(const StateVector& state, const std::vector<int>& keep);

/// -sum lambda log2 lambda over eigenvalues clamped to [0, 1].
double von_neumann_entropy(const DensityMatrix& rho);

/// Entropy in bits of subsystem A = `subsystem` (S_A = S_B for pure states).
double entanglement_entropy(const StateVector& state, const std::vector<int>& subsystem);

/// Cut between qubits [0, q/2) and [q/2, q); 0 for a single qubit.
double half_cut_entropy(const StateVector& state);

/// |<a|b>|^2, clamped to [0, 1].
double state_fidelity(const StateVector& a, const StateVector& b);

}  // namespace qgssl
