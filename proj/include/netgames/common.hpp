// Copyright 2026 The netgames Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace netgames {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Thrown when a game fails the strong-monotonicity requirement
/// (mu <= 0), i.e. no convergence guarantee exists for it.
class AssumptionViolated : public std::runtime_error {
 public:
  AssumptionViolated(const std::string& what, double mu)
      : std::runtime_error(what), mu_(mu) {}

  double mu() const { return mu_; }

 private:
  double mu_;
};

/// Thrown by iterative routines that hit their iteration cap. Carries the
/// residual (or error estimate) achieved at the point of giving up.
class NotConverged : public std::runtime_error {
 public:
  NotConverged(const std::string& what, double achieved)
      : std::runtime_error(what), achieved_(achieved) {}

  double achieved_residual() const { return achieved_; }

 private:
  double achieved_;
};

/// Thrown by the normalized suboptimality gap when some per-player optimal
/// cost is too close to zero to divide by.
class DegenerateDenominator : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent experiment configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace netgames
