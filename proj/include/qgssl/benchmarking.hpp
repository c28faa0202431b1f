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

#include <array>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "qgssl/graph.hpp"
#include "qgssl/qelp.hpp"
#include "qgssl/qsim.hpp"

namespace qgssl {

/// The 24 single-qubit Clifford unitaries, generated from {H, S} and
/// deduplicated up to global phase. Element 0 is the identity.
class CliffordGroup {
 public:
  static const CliffordGroup& single_qubit();

  std::size_t size() const { return elements_.size(); }
  const Gate2& element(std::size_t i) const { return elements_[i]; }
  const std::vector<Gate2>& elements() const { return elements_; }
  /// Index of element(a) * element(b) (b acts first).
  std::size_t compose(std::size_t a, std::size_t b) const { return product_[a][b]; }
  std::size_t inverse(std::size_t a) const { return inverse_[a]; }
  /// Index of `g` up to global phase; throws if g is not a Clifford.
  std::size_t find(const Gate2& g) const;

 private:
  CliffordGroup();
  std::vector<Gate2> elements_;
  std::vector<std::vector<std::size_t>> product_;
  std::vector<std::size_t> inverse_;
};

/// Convenience copy of the group elements.
std::vector<Gate2> clifford_group_1q();

/// Equality up to a global phase within `tol`.
bool equal_up_to_phase(const Gate2& a, const Gate2& b, double tol = 1e-9);

struct RbConfig {
  std::vector<int> lengths{1, 5, 10, 25, 50, 100, 200};
  int repetitions = 100;
  int shots = 500;
  double noise_p = 0.0;  // Pauli error probability after each gate
  int qubits = 1;        // 1 or 2
  std::uint64_t seed = 0;

  void validate() const;
};

struct DecayFit {
  double a = 0.0;
  double p = 1.0;
  double b = 0.0;
  int iterations = 0;
  bool converged = false;
  bool degenerate = false;  // survival never decreases; best-effort values
};

struct RbResult {
  RbConfig config;
  std::vector<int> lengths;
  std::vector<double> survival;  // mean over repetitions
  DecayFit fit;
  double fidelity = 0.0;
  double error_per_clifford = 0.0;
};

/// Random Clifford sequences of each length followed by their exact
/// inverse. Noise is unraveled per shot: after every gate, including the
/// inverse, a uniformly chosen non-identity Pauli fires with probability
/// noise_p. Each repetition draws from its own generator (seed, rep).
RbResult rb_experiment(const RbConfig& config);

/// Decay parameter of the noise model above: 1 - noise_p * d^2 / (d^2 - 1).
double pauli_noise_decay(double noise_p, int qubits);

/// Least squares fit of A p^m + B by damped Gauss-Newton. Throws on fewer
/// than three distinct lengths.
DecayFit fit_decay(const std::vector<int>& lengths, const std::vector<double>& survival,
                   int hilbert_dim = 2);

/// ((d - 1) p + 1) / d
double average_fidelity(double p, int hilbert_dim);

/// (d - 1)(1 - p) / d, which is (1 - p) / 2 for one qubit.
double error_per_clifford(double p, int hilbert_dim = 2);

enum class SweepKnob { kLayers, kQubits };

SweepKnob parse_sweep_knob(const std::string& name);
std::string to_string(SweepKnob knob);

struct SweepRow {
  SweepKnob knob = SweepKnob::kLayers;
  int value = 0;
  double entanglement = 0.0;  // mean half-cut entropy of the layered circuit, bits
  double accuracy = 0.0;      // mean pipeline accuracy
  double rb_score = 0.0;      // mean survival over the RB length grid
  std::vector<double> accuracy_per_seed;
  std::vector<double> entanglement_per_seed;
};

struct SweepOptions {
  double noise_p = 0.02;
  RbConfig rb;  // lengths/repetitions/shots for rb_score; noise and seed are set per cell
  std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
};

/// For each value: pipeline accuracy, PQC half-cut entropy from |0...0>
/// and rb_score, each averaged over the seeds. Rows follow `values`.
std::vector<SweepRow> sweep(const Dataset& dataset, const PipelineConfig& base, SweepKnob knob,
                            const std::vector<int>& values, const SweepOptions& options);

/// Header knob,value,entanglement,accuracy,rb_score.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

}  // namespace qgssl
