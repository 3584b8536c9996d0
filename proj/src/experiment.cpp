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

#include "netgames/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "netgames/serialization.hpp"

namespace netgames {

namespace {

using nlohmann::json;

// Shortest representation that round-trips a double; used for every CSV
// number so replayed runs are byte-identical.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

StepScheduled schedule_from_json(const json& j) {
  const std::string type = j.value("type", std::string("fixed_l"));
  if (type == "fixed_l") return FixedLd{};
  if (type == "harmonic") {
    Harmonicd h;
    h.c = j.value("c", 1.0);
    h.k0 = j.value("k0", 1);
    if (!(h.c > 0.0) || h.k0 < 1) {
      throw ConfigError("schedule: harmonic requires c > 0 and k0 >= 1");
    }
    return h;
  }
  throw ConfigError("schedule: unknown type '" + type + "'");
}

json schedule_to_json(const StepScheduled& sched) {
  if (const auto* h = std::get_if<Harmonicd>(&sched)) {
    return json{{"type", "harmonic"}, {"c", h->c}, {"k0", h->k0}};
  }
  return json{{"type", "fixed_l"}};
}

}  // namespace

ExperimentConfig experiment_config_from_json(const json& j) {
  ExperimentConfig config;
  config.name = j.value("name", std::string("experiment"));
  config.seed = j.value("seed", std::uint64_t{1});
  config.trials = j.value("trials", 100);
  config.iterations = j.value("iterations", 2000);
  if (config.trials < 1) throw ConfigError("config: trials must be >= 1");
  if (config.iterations < 0) throw ConfigError("config: iterations must be >= 0");

  const std::string dynamics = j.value("dynamics", std::string("time_varying"));
  if (dynamics == "time_varying") {
    config.dynamics = DynamicsKind::kTimeVarying;
  } else if (dynamics == "dynamic_population") {
    config.dynamics = DynamicsKind::kDynamicPopulation;
  } else {
    throw ConfigError("config: unknown dynamics '" + dynamics + "'");
  }

  if (!j.contains("game")) throw ConfigError("config: missing 'game'");
  const json& game = j.at("game");
  if (game.contains("pricing") == game.contains("spec")) {
    throw ConfigError("config: game must contain exactly one of 'pricing' or 'spec'");
  }
  if (game.contains("pricing")) {
    config.pricing = pricing_params_from_json(game.at("pricing"));
  } else {
    config.spec = game_spec_from_json(game.at("spec"));
  }

  if (j.contains("network")) {
    config.network = network_model_from_json(j.at("network"));
  }
  if (j.contains("participation")) {
    const json& pj = j.at("participation");
    const json pbar = pj.contains("pbar") ? pj.at("pbar") : pj;
    if (pbar.is_number()) {
      config.participation_uniform = pbar.get<double>();
    } else {
      // Sized pbar vectors are resolved against the game at build time.
      ParticipationModeld pm;
      pm.pbar.resize(static_cast<Eigen::Index>(pbar.size()));
      for (std::size_t i = 0; i < pbar.size(); ++i) {
        pm.pbar[static_cast<Eigen::Index>(i)] = pbar[i].get<double>();
      }
      config.participation = pm;
    }
  }
  if (j.contains("schedule")) config.schedule = schedule_from_json(j.at("schedule"));
  if (j.contains("s0")) {
    const json& s0 = j.at("s0");
    Vector<double> v(s0.size());
    for (std::size_t i = 0; i < s0.size(); ++i) v[static_cast<Eigen::Index>(i)] = s0[i].get<double>();
    config.s0 = v;
  }
  config.record_gap = j.value("record_gap", true);
  config.normalized_gap = j.value("normalized_gap", true);
  config.noise_half_width = j.value("noise_half_width", 0.0);
  config.snapshots = j.value("snapshots", false);
  return config;
}

json experiment_config_to_json(const ExperimentConfig& config) {
  json j;
  j["name"] = config.name;
  j["seed"] = config.seed;
  j["trials"] = config.trials;
  j["iterations"] = config.iterations;
  j["dynamics"] = config.dynamics == DynamicsKind::kTimeVarying ? "time_varying"
                                                                : "dynamic_population";
  json game;
  if (config.pricing) game["pricing"] = pricing_params_to_json(*config.pricing);
  if (config.spec) game["spec"] = game_spec_to_json(*config.spec);
  j["game"] = game;
  if (config.network) j["network"] = network_model_to_json(*config.network);
  if (config.participation) {
    j["participation"] = participation_to_json(*config.participation);
  } else if (config.participation_uniform) {
    j["participation"] = json{{"pbar", *config.participation_uniform}};
  }
  j["schedule"] = schedule_to_json(config.schedule);
  if (config.s0) {
    json s0 = json::array();
    for (Eigen::Index i = 0; i < config.s0->size(); ++i) s0.push_back((*config.s0)[i]);
    j["s0"] = s0;
  }
  j["record_gap"] = config.record_gap;
  j["normalized_gap"] = config.normalized_gap;
  j["noise_half_width"] = config.noise_half_width;
  j["snapshots"] = config.snapshots;
  return j;
}

BuiltExperiment build_experiment(const ExperimentConfig& config) {
  BuiltExperiment built;
  if (config.pricing) {
    built.spec = pricing_to_lq(*config.pricing);
    built.model = config.network ? *config.network : pricing_network_model(*config.pricing);
  } else if (config.spec) {
    built.spec = *config.spec;
    validate(built.spec);
    if (!config.network) throw ConfigError("config: raw game specs require a 'network' model");
    built.model = *config.network;
  } else {
    throw ConfigError("config: no game given");
  }
  validate(built.model);
  if (player_count(built.model) != built.spec.n_players) {
    throw ConfigError("config: network model size does not match the game");
  }

  if (config.participation) {
    built.participation = *config.participation;
  } else if (config.participation_uniform) {
    built.participation = ParticipationModeld{
        Vector<double>::Constant(built.spec.n_players, *config.participation_uniform)};
  } else if (config.pricing && config.pricing->pbar &&
             config.dynamics == DynamicsKind::kDynamicPopulation) {
    built.participation = ParticipationModeld{*config.pricing->pbar};
  }
  if (config.dynamics == DynamicsKind::kDynamicPopulation) {
    if (!built.participation) {
      throw ConfigError("config: dynamic_population requires a participation model");
    }
    if (built.participation->pbar.size() != built.spec.n_players) {
      throw ConfigError("config: participation pbar must have one entry per player");
    }
    try {
      validate(*built.participation);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  built.s0 = config.s0 ? *config.s0 : stacked_lower(built.spec);
  if (!is_feasible(built.spec, built.s0)) {
    throw ConfigError("config: s0 is not feasible for the game's boxes");
  }
  return built;
}

RunReport run_experiment(const ExperimentConfig& config) {
  const BuiltExperiment built = build_experiment(config);

  const Networkd target_net =
      config.dynamics == DynamicsKind::kDynamicPopulation
          ? compensated_effective_mean(built.model, *built.participation)
          : expected_network(built.model);
  const Vector<double> reference = solve_static(built.spec, target_net);

  if (config.pricing) {
    // The cap is meant to be slack; a binding cap means the configured box
    // is distorting the equilibrium the run is measured against.
    const double cap = config.pricing->price_cap;
    if ((reference.array() >= cap - 1e-9).any()) {
      std::cerr << "warning: price_cap " << cap
                << " binds at the reference equilibrium; raise it in the config\n";
    }
  }

  RunProbes probes;
  probes.record_gap = config.record_gap;
  probes.normalized_gap = config.normalized_gap;
  probes.record_snapshots = config.snapshots;
  probes.noise_half_width = config.noise_half_width;
  detail::RunContext<double> ctx;
  ctx.reference = reference;

  const Rng root(config.seed);
  std::vector<Trajectoryd> trajectories(static_cast<std::size_t>(config.trials));
  const int workers = std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()),
                                                config.trials));
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    try {
      for (int t = w; t < config.trials; t += workers) {
        Rng trial_rng = root.substream(static_cast<std::uint64_t>(t));
        if (config.dynamics == DynamicsKind::kDynamicPopulation) {
          trajectories[static_cast<std::size_t>(t)] =
              run_dynamic_population(built.spec, built.model, *built.participation,
                                     config.schedule, config.iterations, built.s0,
                                     trial_rng, probes, ctx);
        } else {
          trajectories[static_cast<std::size_t>(t)] =
              run_time_varying(built.spec, built.model, config.schedule, config.iterations,
                               built.s0, trial_rng, probes, ctx);
        }
      }
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  RunReport report;
  report.name = config.name;
  report.seed = config.seed;
  report.reference = reference;
  report.config_echo = experiment_config_to_json(config);
  report.config_hash = config_hash(report.config_echo);

  const auto records = static_cast<std::size_t>(config.iterations) + 1;
  report.tau = std::vector<double>(trajectories[0].tau.begin(), trajectories[0].tau.end());
  report.mean_dist.resize(records);
  report.std_dist.resize(records);
  const bool with_gap = config.record_gap;
  if (with_gap) {
    report.mean_gap.resize(records);
    report.std_gap.resize(records);
  }
  const double n_trials = static_cast<double>(config.trials);
  for (std::size_t k = 0; k < records; ++k) {
    double sum = 0.0;
    double gap_sum = 0.0;
    for (const auto& traj : trajectories) {
      sum += traj.dist[k];
      if (with_gap) gap_sum += traj.gap[k];
    }
    const double mean = sum / n_trials;
    const double gap_mean = with_gap ? gap_sum / n_trials : 0.0;
    double var = 0.0;
    double gap_var = 0.0;
    for (const auto& traj : trajectories) {
      var += (traj.dist[k] - mean) * (traj.dist[k] - mean);
      if (with_gap) gap_var += (traj.gap[k] - gap_mean) * (traj.gap[k] - gap_mean);
    }
    const double denom = config.trials > 1 ? n_trials - 1.0 : 1.0;
    report.mean_dist[k] = mean;
    report.std_dist[k] = std::sqrt(var / denom);
    if (with_gap) {
      report.mean_gap[k] = gap_mean;
      report.std_gap[k] = std::sqrt(gap_var / denom);
    }
  }
  report.trajectories = std::move(trajectories);
  return report;
}

namespace {

// Minimal standalone line chart; y is drawn on a log scale when all values
// are positive and log_y is requested.
void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::string& y_label, const std::vector<double>& values,
                     bool log_y) {
  const double width = 800.0, height = 500.0, margin = 60.0;
  double lo = *std::min_element(values.begin(), values.end());
  double hi = *std::max_element(values.begin(), values.end());
  const bool use_log = log_y && lo > 0.0;
  auto transform = [&](double v) { return use_log ? std::log10(v) : v; };
  double tlo = transform(lo), thi = transform(hi);
  if (thi - tlo < 1e-12) thi = tlo + 1.0;

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
      << title << "</text>\n";
  svg << "<text x=\"14\" y=\"" << height / 2
      << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 14 " << height / 2
      << ")\">" << y_label << (use_log ? " (log scale)" : "") << "</text>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 8
      << "\" text-anchor=\"middle\" font-size=\"12\">iteration k</text>\n";
  svg << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
      << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
  svg << "<text x=\"" << margin << "\" y=\"" << margin - 6 << "\" font-size=\"10\">"
      << fmt(hi) << "</text>\n";
  svg << "<text x=\"" << margin << "\" y=\"" << height - margin + 14 << "\" font-size=\"10\">"
      << fmt(lo) << "</text>\n";
  svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"";
  const double span_x = width - 2 * margin;
  const double span_y = height - 2 * margin;
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double x = margin + span_x * static_cast<double>(k) /
                                  static_cast<double>(std::max<std::size_t>(values.size() - 1, 1));
    const double frac = (transform(values[k]) - tlo) / (thi - tlo);
    const double y = height - margin - span_y * frac;
    svg << x << "," << y << " ";
  }
  svg << "\"/>\n</svg>\n";

  std::ofstream out(path);
  out << svg.str();
}

}  // namespace

std::vector<std::filesystem::path> write_report(const RunReport& report,
                                                const std::filesystem::path& dir, bool svg) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;

  // Cross-trial summary.
  {
    const auto path = dir / (report.name + ".csv");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "k,tau,mean_dist,std_dist,mean_gap,std_gap\n";
    const bool with_gap = !report.mean_gap.empty();
    for (std::size_t k = 0; k < report.mean_dist.size(); ++k) {
      out << k << ',' << fmt(report.tau[k]) << ',' << fmt(report.mean_dist[k]) << ','
          << fmt(report.std_dist[k]) << ',';
      if (with_gap) out << fmt(report.mean_gap[k]) << ',' << fmt(report.std_gap[k]);
      else out << ',';
      out << '\n';
    }
    written.push_back(path);
  }

  // Per-trial trajectories.
  {
    const auto path = dir / (report.name + "_trials.csv");
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << "trial,k,tau,dist_to_eq,gap,participants\n";
    for (std::size_t t = 0; t < report.trajectories.size(); ++t) {
      const auto& traj = report.trajectories[t];
      for (std::size_t k = 0; k < traj.dist.size(); ++k) {
        out << t << ',' << k << ',' << fmt(traj.tau[k]) << ',' << fmt(traj.dist[k]) << ',';
        if (!traj.gap.empty()) out << fmt(traj.gap[k]);
        out << ',';
        if (!traj.participants.empty()) out << traj.participants[k];
        out << '\n';
      }
    }
    written.push_back(path);
  }

  // Full profiles, when recorded.
  if (!report.trajectories.empty() && !report.trajectories[0].snapshots.empty()) {
    const auto path = dir / (report.name + "_snapshots.csv");
    std::ofstream out(path);
    out << "trial,k";
    for (Eigen::Index c = 0; c < report.reference.size(); ++c) out << ",s" << c;
    out << '\n';
    for (std::size_t t = 0; t < report.trajectories.size(); ++t) {
      const auto& snaps = report.trajectories[t].snapshots;
      for (std::size_t k = 0; k < snaps.size(); ++k) {
        out << t << ',' << k;
        for (Eigen::Index c = 0; c < snaps[k].size(); ++c) out << ',' << fmt(snaps[k][c]);
        out << '\n';
      }
    }
    written.push_back(path);
  }

  // Metadata sidecar.
  {
    const auto path = dir / (report.name + ".meta.json");
    nlohmann::json meta;
    meta["name"] = report.name;
    meta["seed"] = report.seed;
    meta["config_hash"] = report.config_hash;
    nlohmann::json ref = nlohmann::json::array();
    for (Eigen::Index i = 0; i < report.reference.size(); ++i) ref.push_back(report.reference[i]);
    meta["reference_equilibrium"] = ref;
    meta["config"] = report.config_echo;
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << meta.dump(2) << '\n';
    written.push_back(path);
  }

  if (svg) {
    const auto dist_path = dir / (report.name + "_dist.svg");
    write_svg_chart(dist_path, report.name + ": mean distance to equilibrium",
                    "mean ||s_k - s*||", report.mean_dist, /*log_y=*/true);
    written.push_back(dist_path);
    if (!report.mean_gap.empty()) {
      const auto gap_path = dir / (report.name + "_gap.svg");
      write_svg_chart(gap_path, report.name + ": mean suboptimality gap", "mean gap",
                      report.mean_gap, /*log_y=*/true);
      written.push_back(gap_path);
    }
  }
  return written;
}

ExperimentConfig fig1_config(int n_sellers) {
  ExperimentConfig config;
  config.name = "fig1_N" + std::to_string(n_sellers);
  config.seed = 1;
  config.trials = 100;
  config.iterations = 2000;
  config.dynamics = DynamicsKind::kTimeVarying;
  PricingParamsd p;
  p.n_sellers = n_sellers;
  p.m_customers = 100;
  p.eta = 1.0;
  p.alpha = 0.8;
  p.categories = even_category_split(n_sellers);
  p.block_probs = (Matrix<double>(2, 2) << 0.8, 0.3, 0.3, 0.8).finished();
  p.dbar.resize(n_sellers);
  for (int i = 0; i < n_sellers; ++i) {
    p.dbar[i] = p.categories[static_cast<std::size_t>(i)] == 0 ? 2.0 : 10.0;
  }
  p.price_cap = 20.0;
  config.pricing = p;
  config.schedule = FixedLd{};
  config.record_gap = true;
  config.normalized_gap = true;
  return config;
}

ExperimentConfig fig2_config(int n_sellers) {
  ExperimentConfig config = fig1_config(n_sellers);
  config.name = "fig2_N" + std::to_string(n_sellers);
  config.dynamics = DynamicsKind::kDynamicPopulation;
  config.participation_uniform = 0.9;
  return config;
}

std::string config_hash(const json& j) {
  const std::string dump = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[19];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace netgames
