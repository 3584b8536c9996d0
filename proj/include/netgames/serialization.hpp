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

#include <json.hpp>

#include "netgames/game.hpp"
#include "netgames/metrics.hpp"
#include "netgames/network_models.hpp"
#include "netgames/pricing.hpp"

namespace netgames {

// JSON schemas (documented in README.md):
//   GameSpec        {n_players, dim, q: [row-major n*n, ...], theta: [[...]],
//                    alpha, boxes: [{lo: [...], hi: [...]}], theta_max?}
//   NetworkModel    {type: constant|bernoulli_edges|binomial_average|
//                    block_bernoulli, ...}
//   Participation   {pbar: scalar | [per player]}
// Malformed input raises ConfigError.

nlohmann::json game_spec_to_json(const GameSpecd& spec);
GameSpecd game_spec_from_json(const nlohmann::json& j);

nlohmann::json network_model_to_json(const NetworkModeld& model);
NetworkModeld network_model_from_json(const nlohmann::json& j);

nlohmann::json participation_to_json(const ParticipationModeld& pm);
ParticipationModeld participation_from_json(const nlohmann::json& j, int n_players);

nlohmann::json pricing_params_to_json(const PricingParamsd& p);
PricingParamsd pricing_params_from_json(const nlohmann::json& j);

nlohmann::json concentration_report_to_json(const ConcentrationReport& report);

nlohmann::json load_json_file(const std::string& path);

}  // namespace netgames
