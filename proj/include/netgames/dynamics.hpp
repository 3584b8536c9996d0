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

#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

#include "netgames/common.hpp"
#include "netgames/equilibrium.hpp"
#include "netgames/game.hpp"
#include "netgames/metrics.hpp"
#include "netgames/network_models.hpp"
#include "netgames/rng.hpp"

namespace netgames {

/// tau_k = c / (k + k0): positive, strictly decreasing, divergent sum,
/// convergent square sum.
template <typename Scalar>
struct Harmonic {
  Scalar c = Scalar(1);
  int k0 = 1;
};

/// tau_k = 1 / (L (k + 1)) with L the Lipschitz constant of the game.
template <typename Scalar>
struct FixedL {};

template <typename Scalar>
using StepSchedule = std::variant<Harmonic<Scalar>, FixedL<Scalar>>;

template <typename Scalar>
Scalar step_value(const StepSchedule<Scalar>& sched, long k, const GameConstants<Scalar>& c) {
  if (k < 0) throw std::invalid_argument("step_value: k must be >= 0");
  if (const auto* h = std::get_if<Harmonic<Scalar>>(&sched)) {
    if (!(h->c > Scalar(0)) || h->k0 < 1) {
      throw std::invalid_argument("step_value: Harmonic requires c > 0 and k0 >= 1");
    }
    return h->c / Scalar(k + h->k0);
  }
  return Scalar(1) / (c.lipschitz * Scalar(k + 1));
}

/// Stochastic perturbation injected by playing a sampled network instead of
/// the mean one: w = F(s, A_sample) - F(s, A_mean).
template <typename Scalar>
Vector<Scalar> perturbation(const GameSpec<Scalar>& spec, const StrategyProfile<Scalar>& s,
                            const Network<Scalar>& a_sample, const Network<Scalar>& a_mean) {
  detail::check_profile_and_net(spec, s, a_sample, "perturbation");
  detail::check_profile_and_net(spec, s, a_mean, "perturbation");
  return -(spec.alpha / Scalar(spec.n_players)) *
         network_aggregate<Scalar>(a_sample - a_mean, s, spec.dim);
}

struct RunProbes {
  bool record_gap = false;        // stage suboptimality gap at each iterate
  bool normalized_gap = true;     // divide each player's gap by |J_i^*|
  bool record_perturbation = false;  // ||w_k||^2 per iteration
  bool record_snapshots = false;  // full profile per iteration
  double noise_half_width = 0.0;  // additive uniform noise on the aggregate
};

/// Per-iteration record of one learning run, including the k = 0 state
/// (so every column has iterations + 1 entries).
template <typename Scalar>
struct Trajectory {
  int iterations = 0;
  std::vector<Scalar> tau;           // step value at k
  std::vector<Scalar> dist;          // ||s_k - reference||_2
  std::vector<Scalar> gap;           // empty unless probed
  std::vector<Scalar> perturbation_norm2;  // empty unless probed
  std::vector<int> participants;     // empty for a fixed population
  std::vector<Vector<Scalar>> snapshots;  // empty unless probed
  Vector<Scalar> reference;          // equilibrium the run is measured against
  Vector<Scalar> final_profile;
};

namespace detail {

// Optional run-level overrides used by the experiment harness (e.g. a
// precomputed reference equilibrium shared across trials).
template <typename Scalar>
struct RunContext {
  std::optional<Vector<Scalar>> reference;
};

template <typename Scalar>
Vector<Scalar> aggregate_noise(const GameSpec<Scalar>& spec, double half_width, Rng& rng) {
  Vector<Scalar> xi(spec.total_dim());
  for (Eigen::Index j = 0; j < xi.size(); ++j) {
    xi[j] = Scalar(rng.uniform(-half_width, half_width));
  }
  return xi;
}

}  // namespace detail

/// Projected gradient play over a freshly sampled network each iteration:
///   s_{k+1} = Pi_S[s_k - tau_k F(s_k, A_k)].
/// The trajectory's reference equilibrium is the one of the game over the
/// mean network. Deterministic given the rng (iteration k draws from
/// substream k, so probe settings never change the strategy path).
template <typename Scalar>
Trajectory<Scalar> run_time_varying(const GameSpec<Scalar>& spec,
                                    const NetworkModel<Scalar>& model,
                                    const StepSchedule<Scalar>& sched, int iters,
                                    const StrategyProfile<Scalar>& s0, Rng rng,
                                    const RunProbes& probes = {},
                                    const detail::RunContext<Scalar>& ctx = {}) {
  if (iters < 0) throw std::invalid_argument("run_time_varying: iters must be >= 0");
  if (!is_feasible(spec, s0)) {
    throw std::invalid_argument("run_time_varying: s0 is not feasible");
  }
  const Network<Scalar> abar = expected_network(model);
  const GameConstants<Scalar> consts =
      detail::require_strong_monotonicity(spec, abar, "run_time_varying");

  Trajectory<Scalar> traj;
  traj.iterations = iters;
  traj.reference = ctx.reference ? *ctx.reference : solve_static(spec, abar);
  traj.tau.reserve(static_cast<std::size_t>(iters) + 1);
  traj.dist.reserve(static_cast<std::size_t>(iters) + 1);

  const Vector<Scalar> lo = stacked_lower(spec);
  const Vector<Scalar> hi = stacked_upper(spec);
  Vector<Scalar> s = s0;
  for (int k = 0; k <= iters; ++k) {
    Rng iter_rng = rng.substream(static_cast<std::uint64_t>(k));
    const Network<Scalar> a = sample_network(model, iter_rng);
    const Scalar tau = step_value(sched, k, consts);
    traj.tau.push_back(tau);
    traj.dist.push_back((s - traj.reference).norm());
    if (probes.record_gap) {
      traj.gap.push_back(suboptimality_gap(spec, s, a, probes.normalized_gap));
    }
    if (probes.record_perturbation) {
      traj.perturbation_norm2.push_back(perturbation(spec, s, a, abar).squaredNorm());
    }
    if (probes.record_snapshots) traj.snapshots.push_back(s);
    if (k == iters) break;

    Vector<Scalar> grad = game_jacobian(spec, s, a);
    if (probes.noise_half_width > 0.0) {
      grad -= detail::aggregate_noise(spec, probes.noise_half_width, iter_rng);
    }
    s = (s - tau * grad).cwiseMax(lo).cwiseMin(hi);
    assert(is_feasible(spec, s));
  }
  traj.final_profile = s;
  return traj;
}

/// Learning with random participation: at iteration k only players with
/// P_ii = 1 update, using the network A_k P_k and the compensated step
/// tau_k / pbar_i. The reference equilibrium is the one over Abar Pbar.
template <typename Scalar>
Trajectory<Scalar> run_dynamic_population(const GameSpec<Scalar>& spec,
                                          const NetworkModel<Scalar>& model,
                                          const ParticipationModel<Scalar>& pm,
                                          const StepSchedule<Scalar>& sched, int iters,
                                          const StrategyProfile<Scalar>& s0, Rng rng,
                                          const RunProbes& probes = {},
                                          const detail::RunContext<Scalar>& ctx = {}) {
  if (iters < 0) throw std::invalid_argument("run_dynamic_population: iters must be >= 0");
  if (!is_feasible(spec, s0)) {
    throw std::invalid_argument("run_dynamic_population: s0 is not feasible");
  }
  validate(pm);
  if (pm.pbar.size() != spec.n_players) {
    throw std::invalid_argument("run_dynamic_population: pbar has wrong size");
  }
  const Network<Scalar> target_net = compensated_effective_mean(model, pm);
  const GameConstants<Scalar> consts =
      detail::require_strong_monotonicity(spec, target_net, "run_dynamic_population");

  Trajectory<Scalar> traj;
  traj.iterations = iters;
  traj.reference = ctx.reference ? *ctx.reference : solve_static(spec, target_net);
  traj.tau.reserve(static_cast<std::size_t>(iters) + 1);
  traj.dist.reserve(static_cast<std::size_t>(iters) + 1);
  traj.participants.reserve(static_cast<std::size_t>(iters) + 1);

  const Vector<Scalar> lo = stacked_lower(spec);
  const Vector<Scalar> hi = stacked_upper(spec);
  const int n = spec.dim;
  Vector<Scalar> s = s0;
  for (int k = 0; k <= iters; ++k) {
    Rng iter_rng = rng.substream(static_cast<std::uint64_t>(k));
    const Network<Scalar> a = sample_network(model, iter_rng);
    const Vector<Scalar> p = sample_participation(pm, iter_rng);
    const Network<Scalar> a_eff = effective_network(a, p);
    const Scalar tau = step_value(sched, k, consts);
    traj.tau.push_back(tau);
    traj.dist.push_back((s - traj.reference).norm());
    traj.participants.push_back(static_cast<int>(p.sum()));
    if (probes.record_gap) {
      traj.gap.push_back(suboptimality_gap(spec, s, a_eff, probes.normalized_gap));
    }
    if (probes.record_snapshots) traj.snapshots.push_back(s);
    if (k == iters) break;

    Vector<Scalar> grad = game_jacobian(spec, s, a_eff);
    if (probes.noise_half_width > 0.0) {
      grad -= detail::aggregate_noise(spec, probes.noise_half_width, iter_rng);
    }
    for (int i = 0; i < spec.n_players; ++i) {
      if (p[i] == Scalar(0)) continue;
      const Scalar scaled = tau / pm.pbar[i];
      s.segment(i * n, n) = (s.segment(i * n, n) - scaled * grad.segment(i * n, n))
                                .cwiseMax(lo.segment(i * n, n))
                                .cwiseMin(hi.segment(i * n, n));
    }
    assert(is_feasible(spec, s));
  }
  traj.final_profile = s;
  return traj;
}

using Harmonicd = Harmonic<double>;
using FixedLd = FixedL<double>;
using StepScheduled = StepSchedule<double>;
using Trajectoryd = Trajectory<double>;

}  // namespace netgames
