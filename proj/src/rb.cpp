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
#include <set>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "qgssl/benchmarking.hpp"
#include "qgssl/random.hpp"

namespace qgssl {

namespace {

using Matrix4c = Eigen::Matrix4cd;
using Vector4c = Eigen::Vector4cd;

// Uniform in (0, 1], so an outcome with probability exactly 0 never fires.
double uniform_open_closed(Rng& rng) {
  return static_cast<double>((rng() >> 11) + 1) * 0x1.0p-53;
}

const Gate2& pauli(std::size_t i) {
  static const Gate2 table[4] = {gates::identity(), gates::pauli_x(), gates::pauli_y(),
                                 gates::pauli_z()};
  return table[i];
}

Eigen::Matrix2cd to_matrix(const Gate2& g) {
  Eigen::Matrix2cd m;
  m << g[0], g[1], g[2], g[3];
  return m;
}

// Qubit 0 is the low bit, so the Kronecker factor order is (qubit 1, qubit 0).
Matrix4c two_qubit(const Gate2& q0, const Gate2& q1) {
  return Eigen::kroneckerProduct(to_matrix(q1), to_matrix(q0));
}

Matrix4c cnot_01() {
  // control qubit 0 (low bit), target qubit 1: swaps |01> and |11>
  Matrix4c m = Matrix4c::Zero();
  m(0, 0) = 1.0;
  m(3, 1) = 1.0;
  m(2, 2) = 1.0;
  m(1, 3) = 1.0;
  return m;
}

const Matrix4c& two_qubit_pauli(std::size_t i) {
  static const std::vector<Matrix4c> table = [] {
    std::vector<Matrix4c> t;
    for (std::size_t k = 0; k < 16; ++k) t.push_back(two_qubit(pauli(k & 3u), pauli(k >> 2)));
    return t;
  }();
  return table[i];
}

// Survival counts for one repetition, one entry per length.
std::vector<int> run_repetition_1q(const RbConfig& c, Rng& rng) {
  const auto& group = CliffordGroup::single_qubit();
  std::vector<int> successes;
  std::vector<std::size_t> seq;
  for (int m : c.lengths) {
    seq.clear();
    std::size_t net = 0;
    for (int t = 0; t < m; ++t) {
      const std::size_t g = uniform_index(rng, group.size());
      seq.push_back(g);
      net = group.compose(g, net);
    }
    seq.push_back(group.inverse(net));
    int ok = 0;
    for (int shot = 0; shot < c.shots; ++shot) {
      Complex a0 = 1.0;
      Complex a1 = 0.0;
      auto apply = [&](const Gate2& g) {
        const Complex b0 = g[0] * a0 + g[1] * a1;
        const Complex b1 = g[2] * a0 + g[3] * a1;
        a0 = b0;
        a1 = b1;
      };
      for (std::size_t g : seq) {
        apply(group.element(g));
        if (c.noise_p > 0.0 && uniform_unit(rng) < c.noise_p) apply(pauli(1 + uniform_index(rng, 3)));
      }
      if (!(uniform_open_closed(rng) <= std::norm(a1))) ++ok;
    }
    successes.push_back(ok);
  }
  return successes;
}

std::vector<int> run_repetition_2q(const RbConfig& c, Rng& rng) {
  const auto& group = CliffordGroup::single_qubit();
  std::vector<int> successes;
  std::vector<Matrix4c> seq;
  for (int m : c.lengths) {
    seq.clear();
    Matrix4c net = Matrix4c::Identity();
    for (int t = 0; t < m; ++t) {
      Matrix4c g = two_qubit(group.element(uniform_index(rng, group.size())),
                             group.element(uniform_index(rng, group.size())));
      if (uniform_index(rng, 2) == 1) g = cnot_01() * g;
      seq.push_back(g);
      net = g * net;
    }
    seq.push_back(net.adjoint());
    int ok = 0;
    for (int shot = 0; shot < c.shots; ++shot) {
      Vector4c state = Vector4c::Zero();
      state[0] = 1.0;
      for (const auto& g : seq) {
        state = g * state;
        if (c.noise_p > 0.0 && uniform_unit(rng) < c.noise_p) {
          state = two_qubit_pauli(1 + uniform_index(rng, 15)) * state;
        }
      }
      const double fail = 1.0 - std::norm(state[0]);
      if (!(uniform_open_closed(rng) <= fail)) ++ok;
    }
    successes.push_back(ok);
  }
  return successes;
}

}  // namespace

void RbConfig::validate() const {
  if (lengths.empty()) throw std::invalid_argument("rb: lengths must be nonempty");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 0) throw std::invalid_argument("rb: negative sequence length");
    if (i > 0 && lengths[i] <= lengths[i - 1]) {
      throw std::invalid_argument("rb: lengths must be strictly increasing");
    }
  }
  if (repetitions < 1) throw std::invalid_argument("rb: repetitions must be >= 1");
  if (shots < 1) throw std::invalid_argument("rb: shots must be >= 1");
  if (!(noise_p >= 0.0 && noise_p < 1.0)) throw std::invalid_argument("rb: noise_p must be in [0, 1)");
  if (qubits != 1 && qubits != 2) throw std::invalid_argument("rb: only 1 or 2 qubits supported");
}

double pauli_noise_decay(double noise_p, int qubits) {
  const double d2 = std::pow(4.0, qubits);
  return 1.0 - noise_p * d2 / (d2 - 1.0);
}

RbResult rb_experiment(const RbConfig& config) {
  config.validate();
  const std::size_t nl = config.lengths.size();
  std::vector<std::vector<int>> counts(static_cast<std::size_t>(config.repetitions));
#pragma omp parallel for schedule(dynamic)
  for (int r = 0; r < config.repetitions; ++r) {
    Rng rng = make_rng(config.seed, static_cast<std::uint64_t>(r));
    counts[static_cast<std::size_t>(r)] =
        config.qubits == 1 ? run_repetition_1q(config, rng) : run_repetition_2q(config, rng);
  }
  RbResult result;
  result.config = config;
  result.lengths = config.lengths;
  result.survival.assign(nl, 0.0);
  for (const auto& rep : counts) {
    for (std::size_t l = 0; l < nl; ++l) {
      result.survival[l] += static_cast<double>(rep[l]) / static_cast<double>(config.shots);
    }
  }
  for (auto& s : result.survival) s /= static_cast<double>(config.repetitions);

  const int dim = 1 << config.qubits;
  std::set<int> distinct(config.lengths.begin(), config.lengths.end());
  if (distinct.size() >= 3) {
    result.fit = fit_decay(result.lengths, result.survival, dim);
  } else {
    result.fit.degenerate = true;
  }
  result.fidelity = average_fidelity(result.fit.p, dim);
  result.error_per_clifford = error_per_clifford(result.fit.p, dim);
  return result;
}

DecayFit fit_decay(const std::vector<int>& lengths, const std::vector<double>& survival,
                   int hilbert_dim) {
  if (lengths.size() != survival.size()) {
    throw std::invalid_argument("fit_decay: lengths and survival differ in size");
  }
  if (std::set<int>(lengths.begin(), lengths.end()).size() < 3) {
    throw std::invalid_argument("fit_decay: need at least three distinct lengths");
  }
  const std::size_t n = lengths.size();
  DecayFit fit;
  fit.degenerate = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (survival[i] < survival[i - 1]) fit.degenerate = false;
  }

  // Initial guess.
  const double floor = 1.0 / static_cast<double>(hilbert_dim);
  const double min_s = *std::min_element(survival.begin(), survival.end());
  double b = std::min(min_s, floor);
  double a = survival.front() - b;
  double p = 1.0;
  {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double y = survival[i] - b;
      if (y <= 1e-12) continue;
      const double x = lengths[i];
      const double ly = std::log(y);
      sx += x;
      sy += ly;
      sxx += x * x;
      sxy += x * ly;
      ++used;
    }
    const double den = used * sxx - sx * sx;
    if (used >= 2 && den > 0.0) p = std::exp((used * sxy - sx * sy) / den);
  }
  p = std::clamp(p, 1e-12, 1.0);
  if (lengths.front() != 0) a = (survival.front() - b) / std::pow(p, lengths.front());

  auto cost_of = [&](double ca, double cp, double cb) {
    double c = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double r = ca * std::pow(cp, lengths[i]) + cb - survival[i];
      c += r * r;
    }
    return c;
  };

  double cost = cost_of(a, p, b);
  double lambda = 1e-3;
  for (int it = 0; it < 1000; ++it) {
    fit.iterations = it + 1;
    Eigen::Matrix3d jtj = Eigen::Matrix3d::Zero();
    Eigen::Vector3d jtr = Eigen::Vector3d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double m = lengths[i];
      const double pm = std::pow(p, m);
      const double dpm = m == 0.0 ? 0.0 : m * std::pow(p, m - 1.0);
      const Eigen::Vector3d j(pm, a * dpm, 1.0);
      const double r = a * pm + b - survival[i];
      jtj += j * j.transpose();
      jtr += j * r;
    }
    bool accepted = false;
    Eigen::Vector3d step = Eigen::Vector3d::Zero();
    for (int tries = 0; tries < 60 && !accepted; ++tries) {
      Eigen::Matrix3d damped = jtj;
      for (int d = 0; d < 3; ++d) damped(d, d) += lambda * std::max(jtj(d, d), 1e-12);
      step = damped.ldlt().solve(-jtr);
      const double na = a + step[0];
      const double np = std::clamp(p + step[1], 1e-12, 1.0);
      const double nb = b + step[2];
      const double nc = cost_of(na, np, nb);
      if (nc <= cost) {
        step = Eigen::Vector3d(na - a, np - p, nb - b);
        a = na;
        p = np;
        b = nb;
        cost = nc;
        lambda = std::max(lambda / 10.0, 1e-15);
        accepted = true;
      } else {
        lambda *= 10.0;
      }
    }
    const double scale = std::max(Eigen::Vector3d(a, p, b).norm(), 1e-300);
    if (!accepted || step.norm() / scale < 1e-9 || cost < 1e-30) {
      fit.converged = accepted || cost < 1e-30 || step.norm() / scale < 1e-9;
      break;
    }
  }
  fit.a = a;
  fit.p = p;
  fit.b = b;
  return fit;
}

double average_fidelity(double p, int hilbert_dim) {
  const double d = hilbert_dim;
  return ((d - 1.0) * p + 1.0) / d;
}

double error_per_clifford(double p, int hilbert_dim) {
  const double d = hilbert_dim;
  return (d - 1.0) * (1.0 - p) / d;
}

}  // namespace qgssl
