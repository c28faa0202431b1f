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
#include <numbers>
#include <stdexcept>
#include <string>

#include "qgssl/qsim.hpp"
#include "qgssl/random.hpp"

namespace qgssl {

void CircuitSpec::validate() const {
  if (qubit_count < 1 || qubit_count > kMaxQubits) {
    throw std::invalid_argument("circuit: qubit count " + std::to_string(qubit_count) +
                                " outside [1, " + std::to_string(kMaxQubits) + "]");
  }
  if (layer_count < 1) throw std::invalid_argument("circuit: layer count must be >= 1");
  if (thetas.size() != static_cast<std::size_t>(layer_count * qubit_count * 3)) {
    throw std::invalid_argument("circuit: expected " +
                                std::to_string(layer_count * qubit_count * 3) + " angles, got " +
                                std::to_string(thetas.size()));
  }
  for (double t : thetas) {
    if (!std::isfinite(t)) throw std::invalid_argument("circuit: non-finite angle");
  }
}

CircuitSpec build_pqc(int qubit_count, int layer_count, std::uint64_t seed) {
  CircuitSpec spec;
  spec.qubit_count = qubit_count;
  spec.layer_count = layer_count;
  spec.seed = seed;
  if (qubit_count >= 1 && layer_count >= 1) {
    Rng rng = make_rng(seed);
    spec.thetas.resize(static_cast<std::size_t>(layer_count * qubit_count * 3));
    for (auto& t : spec.thetas) t = 2.0 * std::numbers::pi * uniform_unit(rng);
  }
  spec.validate();
  return spec;
}

Gate2 rotation_block(double a, double b, double c) {
  return gates::multiply(gates::rz(a), gates::multiply(gates::ry(b), gates::rz(c)));
}

StateVector run_circuit(const CircuitSpec& spec, StateVector state) {
  spec.validate();
  if (state.qubit_count() != spec.qubit_count) {
    throw std::invalid_argument("run_circuit: circuit has " + std::to_string(spec.qubit_count) +
                                " qubits but the state has " +
                                std::to_string(state.qubit_count()));
  }
  const int q = spec.qubit_count;
  for (int layer = 0; layer < spec.layer_count; ++layer) {
    for (int qubit = 0; qubit < q; ++qubit) {
      state.apply(qubit, rotation_block(spec.theta(layer, qubit, 0), spec.theta(layer, qubit, 1),
                                        spec.theta(layer, qubit, 2)));
    }
    if (spec.has_entangler()) {
      for (int qubit = 0; qubit < q; ++qubit) state.apply_cnot(qubit, (qubit + 1) % q);
    }
  }
  return state;
}

StateVector run_circuit(const CircuitSpec& spec) {
  return run_circuit(spec, StateVector(spec.qubit_count));
}

}  // namespace qgssl
