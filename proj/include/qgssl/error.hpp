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

#include <stdexcept>
#include <string>

namespace qgssl {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input files, schemas or configs.
class DataError : public Error {
 public:
  using Error::Error;
};

/// Raised when the label iteration cannot converge, either because the
/// pre-check found a spectral radius >= 1 or a residual became non-finite.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double spectral_radius, double alpha1, double alpha2)
      : Error(what), spectral_radius_(spectral_radius), alpha1_(alpha1), alpha2_(alpha2) {}

  double spectral_radius() const noexcept { return spectral_radius_; }
  double alpha1() const noexcept { return alpha1_; }
  double alpha2() const noexcept { return alpha2_; }

 private:
  double spectral_radius_;
  double alpha1_;
  double alpha2_;
};

}  // namespace qgssl
