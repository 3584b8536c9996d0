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
#include <string>
#include <vector>

#include "netgames/common.hpp"
#include "netgames/linalg.hpp"

namespace netgames {

/// Axis-aligned box strategy set [lo, hi] in R^n. Nonempty, convex, compact,
/// with a closed-form Euclidean projection (per-coordinate clamp).
template <typename Scalar>
struct StrategyBox {
  Vector<Scalar> lo;
  Vector<Scalar> hi;

  /// Largest Euclidean norm over the box (attained at a corner).
  Scalar corner_norm() const {
    return lo.cwiseAbs().cwiseMax(hi.cwiseAbs()).norm();
  }
};

template <typename Scalar>
void validate(const StrategyBox<Scalar>& box) {
  if (box.lo.size() != box.hi.size()) {
    throw std::invalid_argument("StrategyBox: lo/hi dimension mismatch");
  }
  if ((box.lo.array() > box.hi.array()).any()) {
    throw std::invalid_argument("StrategyBox: requires lo <= hi componentwise");
  }
  if (!box.lo.allFinite() || !box.hi.allFinite()) {
    throw std::invalid_argument("StrategyBox: bounds must be finite");
  }
}

/// Adjacency matrix of the interaction network: N x N, entries in [0,1],
/// zero diagonal. Plain dense storage; see validate_network.
template <typename Scalar>
using Network = Matrix<Scalar>;

template <typename Scalar>
void validate_network(const Network<Scalar>& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("Network: adjacency matrix must be square");
  }
  if ((a.array() < Scalar(0)).any() || (a.array() > Scalar(1)).any()) {
    throw std::invalid_argument("Network: entries must lie in [0, 1]");
  }
  if (a.diagonal().cwiseAbs().maxCoeff() != Scalar(0)) {
    throw std::invalid_argument("Network: self-loops are not allowed");
  }
}

/// A game instance: per-player quadratic cost
///   J_i(s) = 1/2 s_i' Q_i s_i - s_i' (theta_i + (alpha/N) sum_j A_ij s_j)
/// over box strategy sets. Q_i must be symmetric positive definite.
template <typename Scalar>
struct GameSpec {
  int n_players = 0;
  int dim = 0;  // strategy dimension n of every player
  std::vector<Matrix<Scalar>> q;
  std::vector<Vector<Scalar>> theta;
  Scalar alpha = Scalar(0);
  std::vector<StrategyBox<Scalar>> boxes;
  std::optional<Scalar> theta_max;  // bound on max_i ||theta_i||, if recorded

  int total_dim() const { return n_players * dim; }
};

/// Stacked strategy profile s = [s_1; ...; s_N] in R^(N*n).
template <typename Scalar>
using StrategyProfile = Vector<Scalar>;

/// Effective bound on ||theta_i||: the recorded one, or the tight one.
template <typename Scalar>
Scalar theta_bound(const GameSpec<Scalar>& spec) {
  if (spec.theta_max) return *spec.theta_max;
  Scalar b = Scalar(0);
  for (const auto& t : spec.theta) b = std::max(b, Scalar(t.norm()));
  return b;
}

template <typename Scalar>
void validate(const GameSpec<Scalar>& spec) {
  if (spec.n_players <= 0 || spec.dim <= 0) {
    throw std::invalid_argument("GameSpec: n_players and dim must be positive");
  }
  const auto n = static_cast<std::size_t>(spec.n_players);
  if (spec.q.size() != n || spec.theta.size() != n || spec.boxes.size() != n) {
    throw std::invalid_argument("GameSpec: q/theta/boxes must have one entry per player");
  }
  for (int i = 0; i < spec.n_players; ++i) {
    const auto& qi = spec.q[static_cast<std::size_t>(i)];
    if (qi.rows() != spec.dim || qi.cols() != spec.dim) {
      throw std::invalid_argument("GameSpec: Q_" + std::to_string(i) + " has wrong shape");
    }
    const Scalar scale = std::max(Scalar(qi.cwiseAbs().maxCoeff()), Scalar(1));
    if ((qi - qi.transpose()).cwiseAbs().maxCoeff() > Scalar(1e-10) * scale) {
      throw std::invalid_argument("GameSpec: Q_" + std::to_string(i) + " is not symmetric");
    }
    // Positive definiteness; throws std::invalid_argument when it fails.
    smallest_eigenvalue_spd(qi);
    if (spec.theta[static_cast<std::size_t>(i)].size() != spec.dim) {
      throw std::invalid_argument("GameSpec: theta_" + std::to_string(i) + " has wrong size");
    }
    validate(spec.boxes[static_cast<std::size_t>(i)]);
    if (spec.boxes[static_cast<std::size_t>(i)].lo.size() != spec.dim) {
      throw std::invalid_argument("GameSpec: box_" + std::to_string(i) + " has wrong size");
    }
  }
  if (spec.theta_max) {
    for (int i = 0; i < spec.n_players; ++i) {
      if (spec.theta[static_cast<std::size_t>(i)].norm() > *spec.theta_max * (1 + 1e-12)) {
        throw std::invalid_argument("GameSpec: ||theta_i|| exceeds recorded theta_max");
      }
    }
  }
}

/// Largest strategy norm over all players' boxes (the radius bound used by
/// the perturbation and concentration results).
template <typename Scalar>
Scalar strategy_radius(const GameSpec<Scalar>& spec) {
  Scalar r = Scalar(0);
  for (const auto& box : spec.boxes) r = std::max(r, box.corner_norm());
  return r;
}

template <typename Scalar>
Vector<Scalar> stacked_lower(const GameSpec<Scalar>& spec) {
  Vector<Scalar> lo(spec.total_dim());
  for (int i = 0; i < spec.n_players; ++i) {
    lo.segment(i * spec.dim, spec.dim) = spec.boxes[static_cast<std::size_t>(i)].lo;
  }
  return lo;
}

template <typename Scalar>
Vector<Scalar> stacked_upper(const GameSpec<Scalar>& spec) {
  Vector<Scalar> hi(spec.total_dim());
  for (int i = 0; i < spec.n_players; ++i) {
    hi.segment(i * spec.dim, spec.dim) = spec.boxes[static_cast<std::size_t>(i)].hi;
  }
  return hi;
}

template <typename Scalar>
bool is_feasible(const GameSpec<Scalar>& spec, const StrategyProfile<Scalar>& s) {
  if (s.size() != spec.total_dim()) return false;
  return (s.array() >= stacked_lower(spec).array()).all() &&
         (s.array() <= stacked_upper(spec).array()).all();
}

/// Euclidean projection onto the product of boxes: per-coordinate clamp.
template <typename Scalar>
StrategyProfile<Scalar> project(const Vector<Scalar>& point, const GameSpec<Scalar>& spec) {
  if (point.size() != spec.total_dim()) {
    throw std::invalid_argument("project: point has wrong dimension");
  }
  return point.cwiseMax(stacked_lower(spec)).cwiseMin(stacked_upper(spec));
}

/// Local aggregates sum_j A_ij s_j for all players, stacked. Equals
/// (A (x) I_n) s without forming the Kronecker product.
template <typename Scalar>
Vector<Scalar> network_aggregate(const Network<Scalar>& a, const Vector<Scalar>& s, int dim) {
  const Eigen::Index n_players = a.rows();
  if (a.cols() != n_players || s.size() != n_players * dim) {
    throw std::invalid_argument("network_aggregate: dimension mismatch");
  }
  Eigen::Map<const Matrix<Scalar>> cols(s.data(), dim, n_players);
  Matrix<Scalar> agg = cols * a.transpose();  // column i = sum_j A_ij s_j
  return Eigen::Map<Vector<Scalar>>(agg.data(), agg.size());
}

namespace detail {

template <typename Scalar>
void check_profile_and_net(const GameSpec<Scalar>& spec, const StrategyProfile<Scalar>& s,
                           const Network<Scalar>& net, const char* where) {
  if (s.size() != spec.total_dim()) {
    throw std::invalid_argument(std::string(where) + ": profile has wrong dimension");
  }
  if (net.rows() != spec.n_players || net.cols() != spec.n_players) {
    throw std::invalid_argument(std::string(where) + ": network has wrong shape");
  }
}

}  // namespace detail

/// Cost of player i at the given profile over the given network.
template <typename Scalar>
Scalar cost(const GameSpec<Scalar>& spec, int i, const StrategyProfile<Scalar>& s,
            const Network<Scalar>& net) {
  detail::check_profile_and_net(spec, s, net, "cost");
  if (i < 0 || i >= spec.n_players) throw std::out_of_range("cost: player index out of range");
  const auto si = s.segment(i * spec.dim, spec.dim);
  Vector<Scalar> agg = Vector<Scalar>::Zero(spec.dim);
  Eigen::Map<const Matrix<Scalar>> cols(s.data(), spec.dim, spec.n_players);
  for (int j = 0; j < spec.n_players; ++j) agg += net(i, j) * cols.col(j);
  const Scalar quad = Scalar(0.5) * si.dot(spec.q[static_cast<std::size_t>(i)] * si);
  return quad - si.dot(spec.theta[static_cast<std::size_t>(i)] +
                       (spec.alpha / Scalar(spec.n_players)) * agg);
}

/// Stacked own-strategy cost gradients
///   F(s, A) = [Q_i s_i - theta_i - (alpha/N) sum_j A_ij s_j]_i
///           = Q s - theta - (alpha/N) (A (x) I_n) s.
template <typename Scalar>
Vector<Scalar> game_jacobian(const GameSpec<Scalar>& spec, const StrategyProfile<Scalar>& s,
                             const Network<Scalar>& net) {
  detail::check_profile_and_net(spec, s, net, "game_jacobian");
  Vector<Scalar> f = -(spec.alpha / Scalar(spec.n_players)) *
                     network_aggregate(net, s, spec.dim);
  for (int i = 0; i < spec.n_players; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    f.segment(i * spec.dim, spec.dim) +=
        spec.q[idx] * s.segment(i * spec.dim, spec.dim) - spec.theta[idx];
  }
  return f;
}

/// Regularity constants of the game Jacobian over a fixed network:
/// Lipschitz L, strong monotonicity mu, and the step bound 2 mu / L^2.
template <typename Scalar>
struct GameConstants {
  Scalar lipschitz = Scalar(0);   // L
  Scalar monotonicity = Scalar(0);  // mu; the game is well posed iff mu > 0
  Scalar step_bound = Scalar(0);  // tau* = 2 mu / L^2 (sign follows mu)

  bool strongly_monotone() const { return monotonicity > Scalar(0); }
};

/// L = lambda_max(Q) + (|alpha|/N) ||A||_2 and
/// mu = lambda_min(Q) - (|alpha|/N) ||A||_2, with the block-diagonal Q
/// extremes taken per player. mu <= 0 is reported through the returned
/// value (strongly_monotone() == false), not as an error.
template <typename Scalar>
GameConstants<Scalar> game_constants(const GameSpec<Scalar>& spec, const Network<Scalar>& net) {
  if (net.rows() != spec.n_players || net.cols() != spec.n_players) {
    throw std::invalid_argument("game_constants: network has wrong shape");
  }
  Scalar lam_max = Scalar(0);
  Scalar lam_min = Scalar(0);
  for (int i = 0; i < spec.n_players; ++i) {
    const auto& qi = spec.q[static_cast<std::size_t>(i)];
    const Scalar hi = largest_eigenvalue_sym(qi);
    const Scalar lo = smallest_eigenvalue_spd(qi);
    lam_max = (i == 0) ? hi : std::max(lam_max, hi);
    lam_min = (i == 0) ? lo : std::min(lam_min, lo);
  }
  const Scalar coupling = std::abs(spec.alpha) / Scalar(spec.n_players) *
                          spectral_norm(net);
  GameConstants<Scalar> c;
  c.lipschitz = lam_max + coupling;
  c.monotonicity = lam_min - coupling;
  c.step_bound = Scalar(2) * c.monotonicity / (c.lipschitz * c.lipschitz);
  return c;
}

using StrategyBoxd = StrategyBox<double>;
using GameSpecd = GameSpec<double>;
using Networkd = Network<double>;
using GameConstantsd = GameConstants<double>;

}  // namespace netgames
