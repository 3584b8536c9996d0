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
#include <optional>
#include <stdexcept>

#include "netgames/common.hpp"
#include "netgames/game.hpp"

namespace netgames {

template <typename Scalar>
struct SolveOptions {
  std::optional<Scalar> tau;  // step size; default mu / L^2
  Scalar tol = Scalar(1e-10);
  long max_iter = 1000000;
  std::optional<Vector<Scalar>> start;  // default: projection of the origin
};

/// Natural-map residual ||s - Pi_S[s - F(s)]||_2. Zero exactly at the
/// variational-inequality solution, i.e. at the Nash equilibrium.
template <typename Scalar>
Scalar vi_residual(const GameSpec<Scalar>& spec, const Network<Scalar>& net,
                   const StrategyProfile<Scalar>& s) {
  const Vector<Scalar> step = s - game_jacobian(spec, s, net);
  return (s - project(step, spec)).norm();
}

namespace detail {

template <typename Scalar>
GameConstants<Scalar> require_strong_monotonicity(const GameSpec<Scalar>& spec,
                                                  const Network<Scalar>& net,
                                                  const char* where) {
  GameConstants<Scalar> c = game_constants(spec, net);
  if (!c.strongly_monotone()) {
    throw AssumptionViolated(std::string(where) +
                                 ": game is not strongly monotone over this network "
                                 "(mu <= 0); no unique equilibrium is guaranteed",
                             static_cast<double>(c.monotonicity));
  }
  return c;
}

}  // namespace detail

/// Nash equilibrium over a fixed network by projected gradient play
///   s <- Pi_S[s - tau F(s)],  0 < tau < 2 mu / L^2.
///
/// Stops once the fixed-point residual ||s - Pi_S[s - tau F(s)]|| drops to
/// tol * min(1, tau), which also pins the step-independent vi_residual at
/// the result below tol. Deterministic given (spec, net, start).
template <typename Scalar>
StrategyProfile<Scalar> solve_static(const GameSpec<Scalar>& spec, const Network<Scalar>& net,
                                     const SolveOptions<Scalar>& opts = {}) {
  const GameConstants<Scalar> c =
      detail::require_strong_monotonicity(spec, net, "solve_static");
  const Scalar tau =
      opts.tau ? *opts.tau : c.monotonicity / (c.lipschitz * c.lipschitz);
  if (!(tau > Scalar(0)) || !(tau < c.step_bound)) {
    throw std::invalid_argument("solve_static: step size outside (0, 2 mu / L^2)");
  }
  const Vector<Scalar> lo = stacked_lower(spec);
  const Vector<Scalar> hi = stacked_upper(spec);
  Vector<Scalar> s = opts.start
                         ? opts.start->cwiseMax(lo).cwiseMin(hi).eval()
                         : Vector<Scalar>::Zero(spec.total_dim()).cwiseMax(lo).cwiseMin(hi).eval();
  const Scalar stop = opts.tol * std::min(Scalar(1), tau);
  Scalar residual = Scalar(0);
  for (long it = 0; it < opts.max_iter; ++it) {
    Vector<Scalar> next =
        (s - tau * game_jacobian(spec, s, net)).cwiseMax(lo).cwiseMin(hi);
    residual = (s - next).norm();
    s.swap(next);
    if (residual <= stop) return s;
  }
  throw NotConverged("solve_static: no convergence within max_iter",
                     static_cast<double>(residual));
}

template <typename Scalar>
struct UnconstrainedSolution {
  StrategyProfile<Scalar> s;
  bool interior = false;  // strictly inside every box
};

/// Root of the game Jacobian: solves (Q - (alpha/N)(A (x) I_n)) s = theta by
/// a dense LU factorization with partial pivoting, and flags whether the
/// solution is interior to all boxes (in which case it is the equilibrium).
template <typename Scalar>
UnconstrainedSolution<Scalar> solve_unconstrained(const GameSpec<Scalar>& spec,
                                                  const Network<Scalar>& net) {
  detail::require_strong_monotonicity(spec, net, "solve_unconstrained");
  const int n = spec.dim;
  const int total = spec.total_dim();
  Matrix<Scalar> system = Matrix<Scalar>::Zero(total, total);
  const Scalar w = spec.alpha / Scalar(spec.n_players);
  for (int i = 0; i < spec.n_players; ++i) {
    system.block(i * n, i * n, n, n) = spec.q[static_cast<std::size_t>(i)];
    for (int j = 0; j < spec.n_players; ++j) {
      system.block(i * n, j * n, n, n) -=
          w * net(i, j) * Matrix<Scalar>::Identity(n, n);
    }
  }
  Vector<Scalar> theta(total);
  for (int i = 0; i < spec.n_players; ++i) {
    theta.segment(i * n, n) = spec.theta[static_cast<std::size_t>(i)];
  }
  UnconstrainedSolution<Scalar> out;
  out.s = Eigen::PartialPivLU<Matrix<Scalar>>(system).solve(theta);
  out.interior = (out.s.array() > stacked_lower(spec).array()).all() &&
                 (out.s.array() < stacked_upper(spec).array()).all();
  return out;
}

}  // namespace netgames
