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

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netgames/experiment.hpp"
#include "netgames/netgames.hpp"
#include "netgames/serialization.hpp"

namespace {

using nlohmann::json;

// NETGAMES_OUT_DIR, when set, overrides any --out argument. It is the only
// environment variable the tool reads.
std::string resolve_out_dir(const std::string& cli_out) {
  if (const char* env = std::getenv("NETGAMES_OUT_DIR")) return env;
  return cli_out;
}

int run_solve(const std::string& spec_path, const std::string& network_path, double tol,
              long max_iter) {
  const netgames::GameSpecd spec =
      netgames::game_spec_from_json(netgames::load_json_file(spec_path));
  netgames::Networkd net;
  if (!network_path.empty()) {
    const netgames::NetworkModeld model =
        netgames::network_model_from_json(netgames::load_json_file(network_path));
    net = netgames::expected_network(model);
    if (net.rows() != spec.n_players) {
      throw netgames::ConfigError("solve: network size does not match the game");
    }
  } else {
    net = netgames::Networkd::Zero(spec.n_players, spec.n_players);
  }
  netgames::SolveOptions<double> opts;
  opts.tol = tol;
  opts.max_iter = max_iter;
  const netgames::Vector<double> s = netgames::solve_static(spec, net, opts);
  const netgames::GameConstantsd c = netgames::game_constants(spec, net);
  json out;
  out["s"] = json::array();
  for (Eigen::Index i = 0; i < s.size(); ++i) out["s"].push_back(s[i]);
  out["vi_residual"] = netgames::vi_residual(spec, net, s);
  out["lipschitz"] = c.lipschitz;
  out["monotonicity"] = c.monotonicity;
  std::cout << out.dump(2) << '\n';
  return 0;
}

int run_simulate(netgames::ExperimentConfig config, const std::string& out_dir,
                 std::optional<std::uint64_t> seed, bool snapshots, bool svg) {
  if (seed) config.seed = *seed;
  if (snapshots) config.snapshots = true;
  const netgames::RunReport report = netgames::run_experiment(config);
  for (const auto& path : netgames::write_report(report, resolve_out_dir(out_dir), svg)) {
    std::cout << path.string() << '\n';
  }
  return 0;
}

int run_validate_bound(const netgames::ExperimentConfig& config, double delta, int trials,
                       std::uint64_t seed) {
  const netgames::BuiltExperiment built = netgames::build_experiment(config);
  const bool dynamic = config.dynamics == netgames::DynamicsKind::kDynamicPopulation;
  const netgames::Networkd target =
      dynamic ? netgames::compensated_effective_mean(built.model, *built.participation)
              : netgames::expected_network(built.model);
  const netgames::Vector<double> sbar = netgames::solve_static(built.spec, target);
  const netgames::ConcentrationReport report = netgames::validate_concentration(
      built.spec, built.model,
      dynamic ? built.participation : std::optional<netgames::ParticipationModeld>{}, sbar,
      delta, trials, netgames::Rng(seed));
  std::cout << netgames::concentration_report_to_json(report).dump(2) << '\n';
  return 0;
}

int run_demo(bool dynamic_population, const std::string& out_dir,
             std::optional<std::uint64_t> seed, bool svg) {
  for (int n : {20, 50, 100}) {
    netgames::ExperimentConfig config =
        dynamic_population ? netgames::fig2_config(n) : netgames::fig1_config(n);
    if (seed) config.seed = *seed;
    const netgames::RunReport report = netgames::run_experiment(config);
    for (const auto& path : netgames::write_report(report, resolve_out_dir(out_dir), svg)) {
      std::cout << path.string() << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learning dynamics for linear-quadratic games on random networks"};
  app.require_subcommand(1);

  std::string spec_path, network_path, config_path, out_dir = ".";
  std::optional<std::uint64_t> seed;
  bool snapshots = false, svg = false;
  double delta = 0.1;
  int trials = 1000;
  std::uint64_t vb_seed = 1;
  double solve_tol = 1e-10;
  long solve_max_iter = 1000000;

  auto* solve = app.add_subcommand("solve", "Equilibrium of a game over a fixed network");
  solve->add_option("--spec", spec_path, "GameSpec JSON file")->required();
  solve->add_option("--network", network_path, "network model JSON file (default: no edges)");
  solve->add_option("--tol", solve_tol, "fixed-point residual tolerance");
  solve->add_option("--max-iter", solve_max_iter, "iteration cap");

  auto* simulate = app.add_subcommand("simulate", "Run a configured multi-trial experiment");
  simulate->add_option("--config", config_path, "experiment config JSON")->required();
  simulate->add_option("--out", out_dir, "output directory");
  simulate->add_option("--seed", seed, "override the config seed");
  simulate->add_flag("--snapshots", snapshots, "record full profiles per iteration");
  simulate->add_flag("--svg", svg, "also write SVG line charts");

  auto* validate_bound =
      app.add_subcommand("validate-bound", "Empirical check of the stage-game gap bound");
  validate_bound->add_option("--config", config_path, "experiment config JSON")->required();
  validate_bound->add_option("--delta", delta, "confidence parameter in (0, 1)");
  validate_bound->add_option("--trials", trials, "number of sampled stage networks");
  validate_bound->add_option("--seed", vb_seed, "sampling seed");

  auto* demo1 = app.add_subcommand("demo-fig1", "Bundled market demo, static population");
  demo1->add_option("--out", out_dir, "output directory");
  demo1->add_option("--seed", seed, "override the default seed");
  demo1->add_flag("--svg", svg, "also write SVG line charts");

  auto* demo2 = app.add_subcommand("demo-fig2", "Bundled market demo, random participation");
  demo2->add_option("--out", out_dir, "output directory");
  demo2->add_option("--seed", seed, "override the default seed");
  demo2->add_flag("--svg", svg, "also write SVG line charts");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return run_solve(spec_path, network_path, solve_tol, solve_max_iter);
    if (simulate->parsed()) {
      return run_simulate(
          netgames::experiment_config_from_json(netgames::load_json_file(config_path)), out_dir,
          seed, snapshots, svg);
    }
    if (validate_bound->parsed()) {
      return run_validate_bound(
          netgames::experiment_config_from_json(netgames::load_json_file(config_path)), delta,
          trials, vb_seed);
    }
    if (demo1->parsed()) return run_demo(false, out_dir, seed, svg);
    if (demo2->parsed()) return run_demo(true, out_dir, seed, svg);
  } catch (const netgames::AssumptionViolated& e) {
    std::cerr << "assumption violated: " << e.what() << " (mu = " << e.mu() << ")\n";
    return 2;
  } catch (const netgames::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
