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

#include <cmath>
#include <stdexcept>

#include "netgames/common.hpp"

namespace netgames {

struct PowerIterationOptions {
  double rel_tol = 1e-12;
  long max_iter = 200000;
};

namespace detail {

// Deterministic, never orthogonal to anything interesting in practice: a
// normalized ones vector with a small ramp to break symmetric ties.
template <typename Scalar>
Vector<Scalar> power_start(Eigen::Index n) {
  Vector<Scalar> v(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    v[j] = Scalar(1) + Scalar(j) * Scalar(1e-3);
  }
  v.normalize();
  return v;
}

}  // namespace detail

/// Largest eigenvalue of a symmetric positive (semi)definite matrix by power
/// iteration with a Rayleigh-quotient stopping test. Throws NotConverged if
/// the estimate has not stabilized to `rel_tol` within the iteration cap.
template <typename Derived>
typename Derived::Scalar largest_eigenvalue_sym(const Eigen::MatrixBase<Derived>& m_expr,
                                                const PowerIterationOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> m = m_expr;
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("largest_eigenvalue_sym: matrix must be square");
  }
  Vector<Scalar> v = detail::power_start<Scalar>(m.rows());
  Scalar lambda = v.dot(m * v);
  int stable = 0;
  for (long it = 0; it < opts.max_iter; ++it) {
    Vector<Scalar> w = m * v;
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    v = w / norm;
    const Scalar next = v.dot(m * v);
    const Scalar scale = std::max(std::abs(next), Scalar(1e-300));
    stable = (std::abs(next - lambda) <= Scalar(opts.rel_tol) * scale) ? stable + 1 : 0;
    lambda = next;
    if (stable >= 2) return lambda;
  }
  throw NotConverged("largest_eigenvalue_sym: power iteration hit the cap",
                     static_cast<double>(lambda));
}

/// Smallest eigenvalue of a symmetric positive definite matrix by inverse
/// iteration (Cholesky factorization + repeated solves). Throws
/// std::invalid_argument if the matrix is not positive definite.
template <typename Derived>
typename Derived::Scalar smallest_eigenvalue_spd(const Eigen::MatrixBase<Derived>& m_expr,
                                                 const PowerIterationOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> m = m_expr;
  if (m.rows() != m.cols()) {
    throw std::invalid_argument("smallest_eigenvalue_spd: matrix must be square");
  }
  Eigen::LLT<Matrix<Scalar>> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(
        "smallest_eigenvalue_spd: matrix is not positive definite");
  }
  Vector<Scalar> v = detail::power_start<Scalar>(m.rows());
  Scalar lambda = v.dot(m * v);
  int stable = 0;
  for (long it = 0; it < opts.max_iter; ++it) {
    Vector<Scalar> w = llt.solve(v);
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    v = w / norm;
    const Scalar next = v.dot(m * v);
    const Scalar scale = std::max(std::abs(next), Scalar(1e-300));
    stable = (std::abs(next - lambda) <= Scalar(opts.rel_tol) * scale) ? stable + 1 : 0;
    lambda = next;
    if (stable >= 2) return lambda;
  }
  throw NotConverged("smallest_eigenvalue_spd: inverse iteration hit the cap",
                     static_cast<double>(lambda));
}

/// Spectral norm ||M||_2 of a rectangular matrix via power iteration on M^T M,
/// deterministic start, iteration cap. Throws NotConverged past the cap.
template <typename Derived>
typename Derived::Scalar spectral_norm(const Eigen::MatrixBase<Derived>& m_expr,
                                       const PowerIterationOptions& opts = {}) {
  using Scalar = typename Derived::Scalar;
  const Matrix<Scalar> m = m_expr;
  if (m.size() == 0) return Scalar(0);
  Vector<Scalar> v = detail::power_start<Scalar>(m.cols());
  Scalar sigma = (m * v).norm();
  int stable = 0;
  for (long it = 0; it < opts.max_iter; ++it) {
    Vector<Scalar> w = m.transpose() * (m * v);
    const Scalar norm = w.norm();
    if (norm == Scalar(0)) return Scalar(0);
    v = w / norm;
    const Scalar next = (m * v).norm();
    const Scalar scale = std::max(std::abs(next), Scalar(1e-300));
    stable = (std::abs(next - sigma) <= Scalar(opts.rel_tol) * scale) ? stable + 1 : 0;
    sigma = next;
    if (stable >= 2) return sigma;
  }
  throw NotConverged("spectral_norm: power iteration hit the cap",
                     static_cast<double>(sigma));
}

}  // namespace netgames
