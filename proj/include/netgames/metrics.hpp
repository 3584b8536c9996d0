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

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "netgames/common.hpp"
#include "netgames/equilibrium.hpp"
#include "netgames/game.hpp"
#include "netgames/network_models.hpp"
#include "netgames/rng.hpp"

namespace netgames {

namespace detail {

// Linear coefficient of player i's cost given everyone else's strategies:
// J_i(x) = 1/2 x' Q_i x - x' b_i with b_i = theta_i + (alpha/N) sum_j A_ij s_j.
template <typename Scalar>
Vector<Scalar> own_cost_linear_term(const GameSpec<Scalar>& spec, int i,
                                    const StrategyProfile<Scalar>& s,
                                    const Network<Scalar>& net) {
  Eigen::Map<const Matrix<Scalar>> cols(s.data(), spec.dim, spec.n_players);
  Vector<Scalar> agg = Vector<Scalar>::Zero(spec.dim);
  for (int j = 0; j < spec.n_players; ++j) agg += net(i, j) * cols.col(j);
  return spec.theta[static_cast<std::size_t>(i)] +
         (spec.alpha / Scalar(spec.n_players)) * agg;
}

// Box-constrained strictly convex quadratic min 1/2 x'Qx - x'b by projected
// gradient with the optimal fixed step 2 / (lambda_min + lambda_max).
template <typename Scalar>
Vector<Scalar> box_qp_argmin(const Matrix<Scalar>& q, const Vector<Scalar>& b,
                             const StrategyBox<Scalar>& box, const Vector<Scalar>& x0,
                             Scalar tol, long max_iter) {
  const Scalar lam_max = q.rows() == 1 ? q(0, 0) : largest_eigenvalue_sym(q);
  const Scalar lam_min = q.rows() == 1 ? q(0, 0) : smallest_eigenvalue_spd(q);
  const Scalar step = Scalar(2) / (lam_min + lam_max);
  Vector<Scalar> x = x0.cwiseMax(box.lo).cwiseMin(box.hi);
  Scalar residual = Scalar(0);
  for (long it = 0; it < max_iter; ++it) {
    Vector<Scalar> next = (x - step * (q * x - b)).cwiseMax(box.lo).cwiseMin(box.hi);
    residual = (x - next).norm();
    x.swap(next);
    if (residual <= tol) return x;
  }
  throw NotConverged("box_qp_argmin: projected gradient hit the cap",
                     static_cast<double>(residual));
}

}  // namespace detail

/// Lowest cost player i can reach by unilaterally deviating inside their box
/// while everyone else keeps playing `s`: inf_x J_i(x, s_{-i}, A).
template <typename Scalar>
Scalar best_response_cost(const GameSpec<Scalar>& spec, int i, const StrategyProfile<Scalar>& s,
                          const Network<Scalar>& net, Scalar tol = Scalar(1e-10)) {
  detail::check_profile_and_net(spec, s, net, "best_response_cost");
  if (i < 0 || i >= spec.n_players) {
    throw std::out_of_range("best_response_cost: player index out of range");
  }
  const auto idx = static_cast<std::size_t>(i);
  const Vector<Scalar> b = detail::own_cost_linear_term(spec, i, s, net);
  const Vector<Scalar> x =
      detail::box_qp_argmin(spec.q[idx], b, spec.boxes[idx],
                            Vector<Scalar>(s.segment(i * spec.dim, spec.dim)), tol, 100000);
  return Scalar(0.5) * x.dot(spec.q[idx] * x) - x.dot(b);
}

/// Per-player regret against stage best response, J_i(s) - J_i^*. Floating
/// point can push the difference a hair negative when s_i is already optimal;
/// the true quantity is nonnegative, so it is floored at zero.
template <typename Scalar>
Vector<Scalar> player_gaps(const GameSpec<Scalar>& spec, const StrategyProfile<Scalar>& s,
                           const Network<Scalar>& net) {
  detail::check_profile_and_net(spec, s, net, "player_gaps");
  Vector<Scalar> gaps(spec.n_players);
  for (int i = 0; i < spec.n_players; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const Vector<Scalar> b = detail::own_cost_linear_term(spec, i, s, net);
    const auto si = s.segment(i * spec.dim, spec.dim);
    const Scalar j_here = Scalar(0.5) * si.dot(spec.q[idx] * si) - si.dot(b);
    const Vector<Scalar> x = detail::box_qp_argmin(
        spec.q[idx], b, spec.boxes[idx], Vector<Scalar>(si), Scalar(1e-10), 100000);
    const Scalar j_star = Scalar(0.5) * x.dot(spec.q[idx] * x) - x.dot(b);
    gaps[i] = std::max(j_here - j_star, Scalar(0));
  }
  return gaps;
}

inline constexpr double kGapDenominatorFloor = 1e-9;

/// Largest suboptimality gap across players. Normalized divides each
/// player's gap by |J_i^*| (throwing DegenerateDenominator when that
/// optimum is smaller than kGapDenominatorFloor in magnitude); unnormalized
/// returns max_i (J_i - J_i^*) >= 0.
template <typename Scalar>
Scalar suboptimality_gap(const GameSpec<Scalar>& spec, const StrategyProfile<Scalar>& s,
                         const Network<Scalar>& net, bool normalized = false) {
  detail::check_profile_and_net(spec, s, net, "suboptimality_gap");
  Scalar worst = Scalar(0);
  for (int i = 0; i < spec.n_players; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    const Vector<Scalar> b = detail::own_cost_linear_term(spec, i, s, net);
    const auto si = s.segment(i * spec.dim, spec.dim);
    const Scalar j_here = Scalar(0.5) * si.dot(spec.q[idx] * si) - si.dot(b);
    const Vector<Scalar> x = detail::box_qp_argmin(
        spec.q[idx], b, spec.boxes[idx], Vector<Scalar>(si), Scalar(1e-10), 100000);
    const Scalar j_star = Scalar(0.5) * x.dot(spec.q[idx] * x) - x.dot(b);
    Scalar gap = std::max(j_here - j_star, Scalar(0));
    if (normalized) {
      if (std::abs(j_star) < Scalar(kGapDenominatorFloor)) {
        throw DegenerateDenominator(
            "suboptimality_gap: |J_i^*| below the denominator floor; "
            "use the unnormalized gap");
      }
      gap /= std::abs(j_star);
    }
    worst = std::max(worst, gap);
  }
  return worst;
}

/// High-probability suboptimality level of the mean-network equilibrium in a
/// random stage game:
///   eps = 2 |alpha| s_max^2 sqrt( n ln(2 n N / delta) / (2 N) ).
inline double epsilon_bound(double alpha, double s_max, int n, int n_players, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::domain_error("epsilon_bound: delta must lie in (0, 1)");
  }
  if (n < 1 || n_players < 1) {
    throw std::domain_error("epsilon_bound: n and N must be >= 1");
  }
  if (!(s_max >= 0.0)) {
    throw std::domain_error("epsilon_bound: s_max must be nonnegative");
  }
  const double nn = static_cast<double>(n);
  const double big_n = static_cast<double>(n_players);
  return 2.0 * std::abs(alpha) * s_max * s_max *
         std::sqrt(nn * std::log(2.0 * nn * big_n / delta) / (2.0 * big_n));
}

struct GapQuantiles {
  double min = 0.0;
  double p25 = 0.0;
  double p50 = 0.0;
  double p75 = 0.0;
  double max = 0.0;
};

struct ConcentrationReport {
  double delta = 0.0;
  double bound = 0.0;
  int trials = 0;
  int violations = 0;
  double violation_rate = 0.0;
  double max_observed_gap = 0.0;
  GapQuantiles gap_quantiles;
};

/// Samples `trials` stage networks (A, or A P when a participation model is
/// given), evaluates the unnormalized max-player gap of `sbar` in each stage
/// game, and reports how often the gap exceeds epsilon_bound. The rate is
/// reported, not asserted: the bound holds with probability 1 - delta and is
/// usually loose.
template <typename Scalar>
ConcentrationReport validate_concentration(const GameSpec<Scalar>& spec,
                                           const NetworkModel<Scalar>& model,
                                           const std::optional<ParticipationModel<Scalar>>& pm,
                                           const StrategyProfile<Scalar>& sbar, double delta,
                                           int trials, Rng rng) {
  if (trials < 1) throw std::invalid_argument("validate_concentration: trials must be >= 1");
  ConcentrationReport report;
  report.delta = delta;
  report.trials = trials;
  report.bound = epsilon_bound(static_cast<double>(spec.alpha),
                               static_cast<double>(strategy_radius(spec)), spec.dim,
                               spec.n_players, delta);
  std::vector<double> gaps(static_cast<std::size_t>(trials));
  for (int t = 0; t < trials; ++t) {
    Rng stage_rng = rng.substream(static_cast<std::uint64_t>(t));
    Network<Scalar> a = sample_network(model, stage_rng);
    if (pm) a = effective_network(a, Vector<Scalar>(sample_participation(*pm, stage_rng)));
    const double gap = static_cast<double>(
        suboptimality_gap(spec, sbar, a, /*normalized=*/false));
    gaps[static_cast<std::size_t>(t)] = gap;
    if (gap > report.bound) ++report.violations;
  }
  report.violation_rate = static_cast<double>(report.violations) / trials;
  std::sort(gaps.begin(), gaps.end());
  auto at_fraction = [&gaps](double f) {
    const auto pos = static_cast<std::size_t>(f * (gaps.size() - 1));
    return gaps[pos];
  };
  report.gap_quantiles = {gaps.front(), at_fraction(0.25), at_fraction(0.5),
                          at_fraction(0.75), gaps.back()};
  report.max_observed_gap = gaps.back();
  return report;
}

}  // namespace netgames
