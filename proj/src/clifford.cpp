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
#include <deque>
#include <stdexcept>

#include "qgssl/benchmarking.hpp"

namespace qgssl {

namespace {

// Global phase chosen so the first entry with |g| > 1e-9 is real positive.
Gate2 canonical_phase(const Gate2& g) {
  for (const auto& e : g) {
    if (std::abs(e) > 1e-9) {
      const Complex phase = std::conj(e) / std::abs(e);
      Gate2 out;
      for (std::size_t i = 0; i < 4; ++i) out[i] = g[i] * phase;
      return out;
    }
  }
  return g;
}

}  // namespace

bool equal_up_to_phase(const Gate2& a, const Gate2& b, double tol) {
  const Gate2 ca = canonical_phase(a);
  const Gate2 cb = canonical_phase(b);
  for (std::size_t i = 0; i < 4; ++i) {
    if (std::abs(ca[i] - cb[i]) > tol) return false;
  }
  return true;
}

CliffordGroup::CliffordGroup() {
  const Gate2 generators[] = {gates::hadamard(), gates::phase_s()};
  elements_.push_back(gates::identity());
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const std::size_t i = frontier.front();
    frontier.pop_front();
    for (const auto& g : generators) {
      const Gate2 next = canonical_phase(gates::multiply(g, elements_[i]));
      bool seen = false;
      for (const auto& e : elements_) {
        if (equal_up_to_phase(e, next)) {
          seen = true;
          break;
        }
      }
      if (!seen) {
        elements_.push_back(next);
        frontier.push_back(elements_.size() - 1);
      }
    }
  }
  const std::size_t n = elements_.size();
  product_.assign(n, std::vector<std::size_t>(n, 0));
  inverse_.assign(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      product_[a][b] = find(gates::multiply(elements_[a], elements_[b]));
      if (product_[a][b] == 0) inverse_[a] = b;
    }
  }
}

const CliffordGroup& CliffordGroup::single_qubit() {
  static const CliffordGroup group;
  return group;
}

std::size_t CliffordGroup::find(const Gate2& g) const {
  for (std::size_t i = 0; i < elements_.size(); ++i) {
    if (equal_up_to_phase(elements_[i], g)) return i;
  }
  throw std::invalid_argument("gate is not a single-qubit Clifford");
}

std::vector<Gate2> clifford_group_1q() { return CliffordGroup::single_qubit().elements(); }

}  // namespace qgssl
