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
#include <vector>

#include "netgames/netgames.hpp"

namespace netgames::testing {

/// Random symmetric positive definite matrix with eigenvalues >= floor.
inline Matrix<double> random_spd(int n, Rng& rng, double floor = 0.5) {
  Matrix<double> r(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) r(i, j) = rng.uniform(-1.0, 1.0);
  }
  Matrix<double> q = r.transpose() * r + floor * Matrix<double>::Identity(n, n);
  return 0.5 * (q + q.transpose());
}

/// Random adjacency matrix: entries uniform in [0, 1], zero diagonal.
inline Networkd random_network(int n, Rng& rng) {
  Networkd a(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = (i == j) ? 0.0 : rng.uniform01();
  }
  return a;
}

/// Random point inside the game's boxes.
inline Vector<double> random_feasible(const GameSpecd& spec, Rng& rng) {
  const Vector<double> lo = stacked_lower(spec);
  const Vector<double> hi = stacked_upper(spec);
  Vector<double> s(lo.size());
  for (Eigen::Index j = 0; j < s.size(); ++j) s[j] = rng.uniform(lo[j], hi[j]);
  return s;
}

struct RandomSpecOptions {
  int max_players = 10;
  int max_dim = 3;
  double box_margin = 2.0;  // room around the unconstrained solution
  bool interior_equilibrium = true;
};

/// Random strongly monotone game. When interior_equilibrium is set, the
/// boxes are placed around the unconstrained Jacobian root so the
/// equilibrium is strictly inside them; the returned network pairs with it.
struct RandomGame {
  GameSpecd spec;
  Networkd net;
};

inline RandomGame random_game(Rng& rng, const RandomSpecOptions& opts = {}) {
  RandomGame game;
  const int n_players = 2 + static_cast<int>(rng.uniform01() * (opts.max_players - 1));
  const int dim = 1 + static_cast<int>(rng.uniform01() * opts.max_dim);
  GameSpecd& spec = game.spec;
  spec.n_players = std::min(n_players, opts.max_players);
  spec.dim = std::min(dim, opts.max_dim);
  for (int i = 0; i < spec.n_players; ++i) {
    spec.q.push_back(random_spd(spec.dim, rng));
    Vector<double> th(spec.dim);
    for (int c = 0; c < spec.dim; ++c) th[c] = rng.uniform(-2.0, 2.0);
    spec.theta.push_back(th);
  }
  game.net = random_network(spec.n_players, rng);

  // Scale alpha until the game is safely strongly monotone.
  double lam_min = largest_eigenvalue_sym(spec.q[0]);
  for (const auto& q : spec.q) lam_min = std::min(lam_min, smallest_eigenvalue_spd(q));
  const double norm_a = spectral_norm(game.net);
  double alpha = rng.uniform(-2.0, 2.0);
  const double limit = 0.6 * lam_min * spec.n_players / std::max(norm_a, 1e-12);
  if (std::abs(alpha) > limit) alpha *= limit / std::abs(alpha);
  spec.alpha = alpha;

  // Wide placeholder boxes; tightened around the root below when asked.
  for (int i = 0; i < spec.n_players; ++i) {
    spec.boxes.push_back(StrategyBoxd{Vector<double>::Constant(spec.dim, -50.0),
                                      Vector<double>::Constant(spec.dim, 50.0)});
  }
  if (opts.interior_equilibrium) {
    const Vector<double> root = solve_unconstrained(spec, game.net).s;
    for (int i = 0; i < spec.n_players; ++i) {
      const auto block = root.segment(i * spec.dim, spec.dim);
      spec.boxes[static_cast<std::size_t>(i)] = StrategyBoxd{
          (block.array() - opts.box_margin - rng.uniform01()).matrix(),
          (block.array() + opts.box_margin + rng.uniform01()).matrix()};
    }
  }
  return game;
}

/// Central finite differences of player i's cost in their own block.
inline Vector<double> cost_gradient_fd(const GameSpecd& spec, int i, const Vector<double>& s,
                                       const Networkd& net, double h = 1e-6) {
  Vector<double> grad(spec.dim);
  for (int c = 0; c < spec.dim; ++c) {
    Vector<double> up = s, down = s;
    up[i * spec.dim + c] += h;
    down[i * spec.dim + c] -= h;
    grad[c] = (cost(spec, i, up, net) - cost(spec, i, down, net)) / (2.0 * h);
  }
  return grad;
}

inline double sample_mean(const std::vector<double>& xs) {
  double sum = 0.0;
  for (double x : xs) sum += x;
  return sum / static_cast<double>(xs.size());
}

inline double sample_std(const std::vector<double>& xs) {
  const double mean = sample_mean(xs);
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  return std::sqrt(var / static_cast<double>(xs.size() - 1));
}

}  // namespace netgames::testing
