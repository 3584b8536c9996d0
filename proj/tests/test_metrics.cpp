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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "helpers.hpp"
#include "netgames/netgames.hpp"

using namespace netgames;
using namespace netgames::testing;

namespace {

GameSpecd two_player_line_game() {
  GameSpecd spec;
  spec.n_players = 2;
  spec.dim = 1;
  for (int i = 0; i < 2; ++i) {
    spec.q.push_back(Matrix<double>::Identity(1, 1));
    spec.theta.push_back(Vector<double>::Ones(1));
    spec.boxes.push_back(
        StrategyBoxd{Vector<double>::Zero(1), Vector<double>::Constant(1, 10.0)});
  }
  spec.alpha = 0.5;
  return spec;
}

Networkd two_cycle() {
  Networkd a(2, 2);
  a << 0, 1, 1, 0;
  return a;
}

// Scalar-strategy oracle: the best response is the clamped stationary point.
double closed_form_br_cost(const GameSpecd& spec, int i, const Vector<double>& s,
                           const Networkd& net) {
  double agg = 0.0;
  for (int j = 0; j < spec.n_players; ++j) agg += net(i, j) * s[j];
  const auto idx = static_cast<std::size_t>(i);
  const double b = spec.theta[idx][0] + spec.alpha / spec.n_players * agg;
  const double q = spec.q[idx](0, 0);
  const double x = std::clamp(b / q, spec.boxes[idx].lo[0], spec.boxes[idx].hi[0]);
  return 0.5 * q * x * x - x * b;
}

// Two-category scalar market game used by the concentration checks.
GameSpecd market_game(int n) {
  GameSpecd spec;
  spec.n_players = n;
  spec.dim = 1;
  const std::vector<int> cats = even_category_split(n);
  for (int i = 0; i < n; ++i) {
    spec.q.push_back(Matrix<double>::Constant(1, 1, 2.0));
    spec.theta.push_back(
        Vector<double>::Constant(1, cats[static_cast<std::size_t>(i)] == 0 ? 2.0 : 10.0));
    spec.boxes.push_back(
        StrategyBoxd{Vector<double>::Zero(1), Vector<double>::Constant(1, 20.0)});
  }
  spec.alpha = -0.8;
  return spec;
}

NetworkModeld market_blocks(int n) {
  return BlockBernoulli<double>{even_category_split(n),
                                (Matrix<double>(2, 2) << 0.8, 0.3, 0.3, 0.8).finished()};
}

}  // namespace

TEST_CASE("best_response_cost: matches the scalar closed form on random games") {
  Rng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    RandomSpecOptions opts;
    opts.max_dim = 1;
    const RandomGame game = random_game(rng, opts);
    const Vector<double> s = random_feasible(game.spec, rng);
    for (int i = 0; i < game.spec.n_players; ++i) {
      const double solver = best_response_cost(game.spec, i, s, game.net);
      const double oracle = closed_form_br_cost(game.spec, i, s, game.net);
      CHECK(std::abs(solver - oracle) <= 1e-8 * std::max(1.0, std::abs(oracle)));
    }
  }
}

TEST_CASE("best_response_cost: agrees with dense grid search") {
  Rng rng(5);
  for (int rep = 0; rep < 5; ++rep) {
    RandomSpecOptions opts;
    opts.max_dim = 1;
    opts.max_players = 4;
    const RandomGame game = random_game(rng, opts);
    const Vector<double> s = random_feasible(game.spec, rng);
    for (int i = 0; i < game.spec.n_players; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      const double lo = game.spec.boxes[idx].lo[0];
      const double hi = game.spec.boxes[idx].hi[0];
      double best = 1e300;
      const int grid = 10000;
      for (int g = 0; g <= grid; ++g) {
        Vector<double> probe = s;
        probe[i] = lo + (hi - lo) * g / grid;
        best = std::min(best, cost(game.spec, i, probe, game.net));
      }
      const double solver = best_response_cost(game.spec, i, s, game.net);
      CHECK(solver <= best + 1e-12);
      CHECK(best - solver <= 1e-4);
    }
  }
}

TEST_CASE("best response never beats itself: infimum property") {
  Rng rng(7);
  const RandomGame game = random_game(rng);
  for (int rep = 0; rep < 20; ++rep) {
    const Vector<double> s = random_feasible(game.spec, rng);
    for (int i = 0; i < game.spec.n_players; ++i) {
      CHECK(best_response_cost(game.spec, i, s, game.net) <=
            cost(game.spec, i, s, game.net) + 1e-12);
    }
  }
}

TEST_CASE("best_response_cost equals the player's cost at the equilibrium") {
  Rng rng(11);
  const RandomGame game = random_game(rng);
  const Vector<double> sbar = solve_static(game.spec, game.net);
  for (int i = 0; i < game.spec.n_players; ++i) {
    CHECK(std::abs(best_response_cost(game.spec, i, sbar, game.net) -
                   cost(game.spec, i, sbar, game.net)) <= 1e-8);
  }
}

TEST_CASE("suboptimality_gap: zero at equilibrium, hand value off it") {
  const GameSpecd spec = two_player_line_game();
  const Networkd net = two_cycle();
  const Vector<double> sbar = solve_static(spec, net);
  CHECK(suboptimality_gap(spec, sbar, net, false) <= 1e-7);
  CHECK(suboptimality_gap(spec, sbar, net, true) <= 1e-7);

  // At s = (0, 0): J_i = 0 and the best response x = 1 gives J* = -1/2.
  const Vector<double> zero = Vector<double>::Zero(2);
  CHECK(suboptimality_gap(spec, zero, net, false) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("unnormalized gap is nonnegative everywhere") {
  Rng rng(13);
  const RandomGame game = random_game(rng);
  for (int rep = 0; rep < 30; ++rep) {
    const Vector<double> s = random_feasible(game.spec, rng);
    CHECK(suboptimality_gap(game.spec, s, game.net, false) >= 0.0);
  }
}

TEST_CASE("normalized gap guards against vanishing optima") {
  // theta = 0 and s = 0 make the best-response cost exactly zero.
  GameSpecd spec = two_player_line_game();
  spec.theta[0].setZero();
  spec.theta[1].setZero();
  const Vector<double> zero = Vector<double>::Zero(2);
  CHECK_THROWS_AS(suboptimality_gap(spec, zero, two_cycle(), true), DegenerateDenominator);
  CHECK_NOTHROW(suboptimality_gap(spec, zero, two_cycle(), false));
}

TEST_CASE("suboptimality_gap is invariant under player relabeling") {
  Rng rng(17);
  RandomSpecOptions opts;
  opts.max_dim = 2;
  const RandomGame game = random_game(rng, opts);
  const GameSpecd& spec = game.spec;
  const Vector<double> s = random_feasible(spec, rng);

  std::vector<int> perm(static_cast<std::size_t>(spec.n_players));
  std::iota(perm.begin(), perm.end(), 0);
  std::reverse(perm.begin(), perm.end());

  GameSpecd relabeled = spec;
  Networkd net_p(spec.n_players, spec.n_players);
  Vector<double> s_p(s.size());
  for (int i = 0; i < spec.n_players; ++i) {
    const auto pi = static_cast<std::size_t>(perm[static_cast<std::size_t>(i)]);
    relabeled.q[static_cast<std::size_t>(i)] = spec.q[pi];
    relabeled.theta[static_cast<std::size_t>(i)] = spec.theta[pi];
    relabeled.boxes[static_cast<std::size_t>(i)] = spec.boxes[pi];
    s_p.segment(i * spec.dim, spec.dim) =
        s.segment(static_cast<int>(pi) * spec.dim, spec.dim);
    for (int j = 0; j < spec.n_players; ++j) {
      net_p(i, j) = game.net(perm[static_cast<std::size_t>(i)],
                             perm[static_cast<std::size_t>(j)]);
    }
  }
  const double original = suboptimality_gap(spec, s, game.net, false);
  const double permuted = suboptimality_gap(relabeled, s_p, net_p, false);
  CHECK(original == doctest::Approx(permuted).epsilon(1e-10));
}

TEST_CASE("epsilon_bound: zeros, reference value, monotonicity, scaling") {
  CHECK(epsilon_bound(0.0, 1.0, 1, 100, 0.1) == 0.0);
  CHECK(epsilon_bound(0.0, 3.0, 4, 7, 0.5) == 0.0);

  // 1.6 * sqrt(ln(2000) / 200), evaluated independently in long double.
  const long double expected =
      2.0L * 0.8L * std::sqrt(1.0L * std::log(2.0L * 1.0L * 100.0L / 0.1L) / 200.0L);
  CHECK(epsilon_bound(0.8, 1.0, 1, 100, 0.1) ==
        doctest::Approx(static_cast<double>(expected)).epsilon(1e-12));
  CHECK(std::abs(epsilon_bound(0.8, 1.0, 1, 100, 0.1) - 0.3119) <= 1e-4);

  double last = 1e300;
  for (int n_players : {50, 100, 200, 400}) {
    const double eps = epsilon_bound(0.8, 1.0, 1, n_players, 0.1);
    CHECK(eps < last);
    last = eps;
  }

  CHECK(epsilon_bound(1.6, 2.0, 3, 50, 0.2) ==
        doctest::Approx(2.0 * epsilon_bound(0.8, 2.0, 3, 50, 0.2)).epsilon(1e-14));
  // Quadratic in s_max.
  CHECK(epsilon_bound(0.8, 2.0, 1, 100, 0.1) ==
        doctest::Approx(4.0 * epsilon_bound(0.8, 1.0, 1, 100, 0.1)).epsilon(1e-14));

  CHECK_THROWS_AS(epsilon_bound(0.8, 1.0, 1, 100, 0.0), std::domain_error);
  CHECK_THROWS_AS(epsilon_bound(0.8, 1.0, 1, 100, 1.0), std::domain_error);
  CHECK_THROWS_AS(epsilon_bound(0.8, 1.0, 0, 100, 0.1), std::domain_error);
  CHECK_THROWS_AS(epsilon_bound(0.8, 1.0, 1, 0, 0.1), std::domain_error);
}

TEST_CASE("validate_concentration: degenerate model never violates") {
  Rng rng(19);
  const RandomGame game = random_game(rng);
  const NetworkModeld model = ConstantNetwork<double>{game.net};
  const Vector<double> sbar = solve_static(game.spec, game.net);
  const ConcentrationReport report =
      validate_concentration(game.spec, model, {}, sbar, 0.1, 200, Rng(7));
  CHECK(report.violations == 0);
  CHECK(report.violation_rate == 0.0);
  CHECK(report.max_observed_gap <= 1e-7);
  CHECK(report.trials == 200);
}

TEST_CASE("validate_concentration: violation rate within delta for random edges") {
  const int n = 30;
  const GameSpecd spec = market_game(n);
  const NetworkModeld model = market_blocks(n);
  const Vector<double> sbar = solve_static(spec, expected_network(model));
  const ConcentrationReport report =
      validate_concentration(spec, model, {}, sbar, 0.1, 500, Rng(23));
  CHECK(report.violation_rate <= 0.1);
  CHECK(report.gap_quantiles.min <= report.gap_quantiles.p50);
  CHECK(report.gap_quantiles.p50 <= report.gap_quantiles.max);
  CHECK(report.max_observed_gap == report.gap_quantiles.max);
  CHECK(report.bound > 0.0);
}

TEST_CASE("validate_concentration honors the participation model") {
  const int n = 20;
  const GameSpecd spec = market_game(n);
  const NetworkModeld model = market_blocks(n);
  const ParticipationModeld pm{Vector<double>::Constant(n, 0.9)};
  const Vector<double> sbar =
      solve_static(spec, compensated_effective_mean(model, pm));
  const ConcentrationReport report = validate_concentration(
      spec, model, std::optional<ParticipationModeld>(pm), sbar, 0.1, 300, Rng(31));
  CHECK(report.violation_rate <= 0.1);
}

TEST_CASE("stage gaps shrink as the population grows") {
  auto median_gap = [](int n) {
    const GameSpecd spec = market_game(n);
    const NetworkModeld model = market_blocks(n);
    const Vector<double> sbar = solve_static(spec, expected_network(model));
    const ConcentrationReport report =
        validate_concentration(spec, model, {}, sbar, 0.1, 200, Rng(29));
    return report.gap_quantiles.p50;
  };
  CHECK(median_gap(400) < median_gap(50));
}

TEST_CASE("player_gaps match the cost / best-response difference") {
  Rng rng(31);
  const RandomGame game = random_game(rng);
  const Vector<double> s = random_feasible(game.spec, rng);
  const Vector<double> gaps = player_gaps(game.spec, s, game.net);
  double worst = 0.0;
  for (int i = 0; i < game.spec.n_players; ++i) {
    const double direct =
        cost(game.spec, i, s, game.net) - best_response_cost(game.spec, i, s, game.net);
    CHECK(gaps[i] == doctest::Approx(std::max(direct, 0.0)).epsilon(1e-9));
    worst = std::max(worst, gaps[i]);
  }
  CHECK(suboptimality_gap(game.spec, s, game.net, false) == doctest::Approx(worst).epsilon(1e-12));
}
