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

#include "helpers.hpp"
#include "netgames/experiment.hpp"
#include "netgames/netgames.hpp"
#include "netgames/serialization.hpp"

using namespace netgames;
using namespace netgames::testing;
using nlohmann::json;

TEST_CASE("game spec round-trips through JSON bit-exactly") {
  Rng rng(3);
  for (int rep = 0; rep < 10; ++rep) {
    const RandomGame game = random_game(rng);
    const GameSpecd& spec = game.spec;
    const GameSpecd back = game_spec_from_json(game_spec_to_json(spec));
    CHECK(back.n_players == spec.n_players);
    CHECK(back.dim == spec.dim);
    CHECK(back.alpha == spec.alpha);
    for (int i = 0; i < spec.n_players; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      CHECK((back.q[idx] - spec.q[idx]).norm() == 0.0);
      CHECK((back.theta[idx] - spec.theta[idx]).norm() == 0.0);
      CHECK((back.boxes[idx].lo - spec.boxes[idx].lo).norm() == 0.0);
      CHECK((back.boxes[idx].hi - spec.boxes[idx].hi).norm() == 0.0);
    }
  }
}

TEST_CASE("game spec JSON uses the documented field names") {
  Rng rng(5);
  const RandomGame game = random_game(rng);
  const json j = game_spec_to_json(game.spec);
  CHECK(j.contains("n_players"));
  CHECK(j.contains("dim"));
  CHECK(j.contains("q"));
  CHECK(j.contains("theta"));
  CHECK(j.contains("alpha"));
  CHECK(j.contains("boxes"));
  CHECK(j["q"].size() == static_cast<std::size_t>(game.spec.n_players));
  CHECK(j["q"][0].size() == static_cast<std::size_t>(game.spec.dim * game.spec.dim));
  CHECK(j["boxes"][0].contains("lo"));
  CHECK(j["boxes"][0].contains("hi"));
}

TEST_CASE("game spec JSON rejects malformed documents") {
  Rng rng(7);
  json good = game_spec_to_json(random_game(rng).spec);
  json missing = good;
  missing.erase("theta");
  CHECK_THROWS_AS(game_spec_from_json(missing), ConfigError);

  json short_q = good;
  short_q["q"][0].erase(short_q["q"][0].size() - 1);
  CHECK_THROWS_AS(game_spec_from_json(short_q), ConfigError);

  json bad_box = good;
  bad_box["boxes"][0]["lo"][0] = 1e9;  // lo > hi
  CHECK_THROWS_AS(game_spec_from_json(bad_box), ConfigError);

  json indefinite = good;
  for (auto& v : indefinite["q"][0]) v = 0.0;
  CHECK_THROWS_AS(game_spec_from_json(indefinite), ConfigError);
}

TEST_CASE("network models round-trip through JSON") {
  Rng rng(11);
  const Networkd mean = random_network(4, rng);
  std::vector<NetworkModeld> models;
  models.push_back(ConstantNetwork<double>{mean});
  models.push_back(BernoulliEdges<double>{mean});
  models.push_back(BinomialAverage<double>(mean, 25));
  models.push_back(BlockBernoulli<double>{{0, 1, 1, 0},
                                          (Matrix<double>(2, 2) << 0.7, 0.2, 0.2, 0.9).finished()});
  for (const auto& model : models) {
    const NetworkModeld back = network_model_from_json(network_model_to_json(model));
    CHECK(back.index() == model.index());
    CHECK((expected_network(back) - expected_network(model)).norm() == 0.0);
    // Samplers replay identically after the round trip.
    Rng r1(3), r2(3);
    CHECK((sample_network(model, r1) - sample_network(back, r2)).norm() == 0.0);
  }
  CHECK_THROWS_AS(network_model_from_json(json{{"type", "scale_free"}}), ConfigError);
}

TEST_CASE("participation JSON accepts scalars and vectors") {
  const ParticipationModeld scalar = participation_from_json(json{{"pbar", 0.9}}, 4);
  CHECK(scalar.pbar.size() == 4);
  CHECK((scalar.pbar.array() == 0.9).all());
  const ParticipationModeld vec =
      participation_from_json(json{{"pbar", {0.5, 0.6, 0.7}}}, 3);
  CHECK(vec.pbar[2] == 0.7);
  CHECK_THROWS_AS(participation_from_json(json{{"pbar", {0.5, 0.6}}}, 3), ConfigError);
  CHECK_THROWS_AS(participation_from_json(json{{"pbar", 0.0}}, 3), ConfigError);
}

TEST_CASE("pricing params JSON expands per-category demand ceilings") {
  json j{{"n_sellers", 6},
         {"m_customers", 100},
         {"eta", 1.0},
         {"alpha", 0.8},
         {"dbar_by_category", {2.0, 10.0}},
         {"block_probs", {{0.8, 0.3}, {0.3, 0.8}}},
         {"price_cap", 20.0}};
  const PricingParamsd p = pricing_params_from_json(j);
  CHECK(p.categories == even_category_split(6));
  CHECK(p.dbar[0] == 2.0);
  CHECK(p.dbar[5] == 10.0);
  const PricingParamsd back = pricing_params_from_json(pricing_params_to_json(p));
  CHECK((back.dbar - p.dbar).norm() == 0.0);
  CHECK(back.price_cap == p.price_cap);

  json missing = j;
  missing.erase("dbar_by_category");
  CHECK_THROWS_AS(pricing_params_from_json(missing), ConfigError);
}

TEST_CASE("experiment config round-trips and validates") {
  const ExperimentConfig config = fig2_config(10);
  const json j = experiment_config_to_json(config);
  const ExperimentConfig back = experiment_config_from_json(j);
  CHECK(back.name == config.name);
  CHECK(back.seed == config.seed);
  CHECK(back.trials == config.trials);
  CHECK(back.iterations == config.iterations);
  CHECK(back.dynamics == DynamicsKind::kDynamicPopulation);
  CHECK(back.pricing.has_value());
  CHECK(config_hash(experiment_config_to_json(back)) == config_hash(j));

  json no_game = j;
  no_game.erase("game");
  CHECK_THROWS_AS(experiment_config_from_json(no_game), ConfigError);

  json bad_dynamics = j;
  bad_dynamics["dynamics"] = "bestresponse";
  CHECK_THROWS_AS(experiment_config_from_json(bad_dynamics), ConfigError);

  json bad_schedule = j;
  bad_schedule["schedule"] = json{{"type", "geometric"}};
  CHECK_THROWS_AS(experiment_config_from_json(bad_schedule), ConfigError);
}

TEST_CASE("build_experiment applies defaults and catches inconsistencies") {
  ExperimentConfig config = fig1_config(8);
  const BuiltExperiment built = build_experiment(config);
  CHECK(built.spec.n_players == 8);
  CHECK((built.s0 - stacked_lower(built.spec)).norm() == 0.0);  // zero prices
  CHECK(std::holds_alternative<BinomialAverage<double>>(built.model));

  // Raw specs need an explicit network model.
  Rng rng(13);
  const RandomGame game = random_game(rng);
  ExperimentConfig raw;
  raw.pricing.reset();
  raw.spec = game.spec;
  CHECK_THROWS_AS(build_experiment(raw), ConfigError);
  raw.network = ConstantNetwork<double>{game.net};
  CHECK_NOTHROW(build_experiment(raw));

  // Dynamic population without participation is rejected.
  ExperimentConfig dynamic = fig1_config(8);
  dynamic.dynamics = DynamicsKind::kDynamicPopulation;
  CHECK_THROWS_AS(build_experiment(dynamic), ConfigError);

  // Infeasible explicit start.
  ExperimentConfig bad_start = fig1_config(8);
  bad_start.s0 = Vector<double>::Constant(8, -1.0);
  CHECK_THROWS_AS(build_experiment(bad_start), ConfigError);
}

TEST_CASE("concentration report serializes every documented field") {
  ConcentrationReport report;
  report.delta = 0.1;
  report.bound = 2.5;
  report.trials = 10;
  report.violations = 1;
  report.violation_rate = 0.1;
  report.max_observed_gap = 3.0;
  report.gap_quantiles = {0.1, 0.2, 0.3, 0.4, 3.0};
  const json j = concentration_report_to_json(report);
  CHECK(j["delta"] == 0.1);
  CHECK(j["bound"] == 2.5);
  CHECK(j["trials"] == 10);
  CHECK(j["violations"] == 1);
  CHECK(j["violation_rate"] == 0.1);
  CHECK(j["gap_quantiles"]["p50"] == 0.3);
  CHECK(j["gap_quantiles"]["max"] == 3.0);
}

TEST_CASE("load_json_file reports missing and malformed files") {
  CHECK_THROWS_AS(load_json_file("/nonexistent/path.json"), ConfigError);
}
