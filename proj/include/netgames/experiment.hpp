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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "netgames/dynamics.hpp"
#include "netgames/game.hpp"
#include "netgames/network_models.hpp"
#include "netgames/pricing.hpp"

namespace netgames {

enum class DynamicsKind { kTimeVarying, kDynamicPopulation };

/// A complete seeded multi-trial experiment: game, stage-network model,
/// optional participation, schedule, horizon, probes.
struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 1;
  int trials = 100;
  int iterations = 2000;
  DynamicsKind dynamics = DynamicsKind::kTimeVarying;
  std::optional<PricingParamsd> pricing;  // exactly one of pricing / spec
  std::optional<GameSpecd> spec;
  std::optional<NetworkModeld> network;  // defaults to the pricing model
  std::optional<ParticipationModeld> participation;
  std::optional<double> participation_uniform;  // scalar pbar, expanded at build
  StepScheduled schedule = FixedLd{};
  std::optional<Vector<double>> s0;  // default: stacked box lower corner
  bool record_gap = true;
  bool normalized_gap = true;
  double noise_half_width = 0.0;
  bool snapshots = false;
};

ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json experiment_config_to_json(const ExperimentConfig& config);

/// Concrete objects an experiment runs on, after validation and defaulting.
struct BuiltExperiment {
  GameSpecd spec;
  NetworkModeld model;
  std::optional<ParticipationModeld> participation;
  Vector<double> s0;
};

BuiltExperiment build_experiment(const ExperimentConfig& config);

/// Cross-trial summary plus the per-trial trajectories it was reduced from.
struct RunReport {
  std::string name;
  std::uint64_t seed = 0;
  std::vector<double> tau;
  std::vector<double> mean_dist;
  std::vector<double> std_dist;
  std::vector<double> mean_gap;  // empty when the gap probe is off
  std::vector<double> std_gap;
  Vector<double> reference;
  std::vector<Trajectoryd> trajectories;
  nlohmann::json config_echo;
  std::string config_hash;
};

/// Runs `trials` seeded trajectories (concurrently; trial t uses substream t
/// of the root seed) and reduces them by trial index. Deterministic for a
/// fixed config and seed.
RunReport run_experiment(const ExperimentConfig& config);

/// Writes <name>.csv (k,tau,mean_dist,std_dist,mean_gap,std_gap),
/// <name>_trials.csv (trial,k,tau,dist_to_eq,gap,participants),
/// <name>.meta.json, optional <name>_snapshots.csv and SVG charts.
/// Returns the paths written.
std::vector<std::filesystem::path> write_report(const RunReport& report,
                                                const std::filesystem::path& dir,
                                                bool svg = false);

/// Bundled demo configs: the two-category market on a resampled co-purchase
/// network, static and randomly participating population respectively.
ExperimentConfig fig1_config(int n_sellers = 50);
ExperimentConfig fig2_config(int n_sellers = 50);

/// FNV-1a over the canonical JSON dump; stable across platforms.
std::string config_hash(const nlohmann::json& j);

}  // namespace netgames
