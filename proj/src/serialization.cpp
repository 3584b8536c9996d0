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

#include "netgames/serialization.hpp"

#include <fstream>
#include <string>
#include <vector>

namespace netgames {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw ConfigError(message); }

json require(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) {
    fail(std::string(where) + ": missing required field '" + key + "'");
  }
  return j.at(key);
}

Vector<double> vector_from_json(const json& j, const char* where) {
  if (!j.is_array()) fail(std::string(where) + ": expected an array of numbers");
  Vector<double> v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(std::string(where) + ": expected an array of numbers");
    v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  }
  return v;
}

json vector_to_json(const Vector<double>& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Matrix<double> matrix_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.empty()) fail(std::string(where) + ": expected an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix<double> m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      fail(std::string(where) + ": ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Matrix<double>& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
    out.push_back(row);
  }
  return out;
}

// Row-major flat n*n list -> square matrix.
Matrix<double> square_from_flat(const json& j, int n, const char* where) {
  if (!j.is_array() || static_cast<int>(j.size()) != n * n) {
    fail(std::string(where) + ": expected a flat row-major list of n*n numbers");
  }
  Matrix<double> m(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      m(r, c) = j[static_cast<std::size_t>(r * n + c)].get<double>();
    }
  }
  return m;
}

}  // namespace

json game_spec_to_json(const GameSpecd& spec) {
  json j;
  j["n_players"] = spec.n_players;
  j["dim"] = spec.dim;
  json q = json::array();
  for (const auto& qi : spec.q) {
    json flat = json::array();
    for (Eigen::Index r = 0; r < qi.rows(); ++r) {
      for (Eigen::Index c = 0; c < qi.cols(); ++c) flat.push_back(qi(r, c));
    }
    q.push_back(flat);
  }
  j["q"] = q;
  json theta = json::array();
  for (const auto& t : spec.theta) theta.push_back(vector_to_json(t));
  j["theta"] = theta;
  j["alpha"] = spec.alpha;
  json boxes = json::array();
  for (const auto& box : spec.boxes) {
    boxes.push_back(json{{"lo", vector_to_json(box.lo)}, {"hi", vector_to_json(box.hi)}});
  }
  j["boxes"] = boxes;
  if (spec.theta_max) j["theta_max"] = *spec.theta_max;
  return j;
}

GameSpecd game_spec_from_json(const json& j) {
  GameSpecd spec;
  spec.n_players = require(j, "n_players", "GameSpec").get<int>();
  spec.dim = require(j, "dim", "GameSpec").get<int>();
  if (spec.n_players <= 0 || spec.dim <= 0) {
    fail("GameSpec: n_players and dim must be positive");
  }
  const json q = require(j, "q", "GameSpec");
  const json theta = require(j, "theta", "GameSpec");
  const json boxes = require(j, "boxes", "GameSpec");
  if (static_cast<int>(q.size()) != spec.n_players ||
      static_cast<int>(theta.size()) != spec.n_players ||
      static_cast<int>(boxes.size()) != spec.n_players) {
    fail("GameSpec: q, theta and boxes must have one entry per player");
  }
  for (int i = 0; i < spec.n_players; ++i) {
    spec.q.push_back(square_from_flat(q[static_cast<std::size_t>(i)], spec.dim, "GameSpec.q"));
    spec.theta.push_back(vector_from_json(theta[static_cast<std::size_t>(i)], "GameSpec.theta"));
    const auto& b = boxes[static_cast<std::size_t>(i)];
    spec.boxes.push_back(StrategyBoxd{vector_from_json(require(b, "lo", "GameSpec.boxes"), "lo"),
                                      vector_from_json(require(b, "hi", "GameSpec.boxes"), "hi")});
  }
  spec.alpha = require(j, "alpha", "GameSpec").get<double>();
  if (j.contains("theta_max")) spec.theta_max = j.at("theta_max").get<double>();
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return spec;
}

json network_model_to_json(const NetworkModeld& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantNetwork<double>>) {
          return json{{"type", "constant"}, {"matrix", matrix_to_json(m.matrix)}};
        } else if constexpr (std::is_same_v<T, BernoulliEdges<double>>) {
          return json{{"type", "bernoulli_edges"}, {"mean", matrix_to_json(m.mean)}};
        } else if constexpr (std::is_same_v<T, BinomialAverage<double>>) {
          return json{{"type", "binomial_average"},
                      {"mean", matrix_to_json(m.mean)},
                      {"count", m.count}};
        } else {
          return json{{"type", "block_bernoulli"},
                      {"categories", m.categories},
                      {"block_probs", matrix_to_json(m.block_probs)}};
        }
      },
      model);
}

NetworkModeld network_model_from_json(const json& j) {
  const std::string type = require(j, "type", "NetworkModel").get<std::string>();
  NetworkModeld model;
  if (type == "constant") {
    model = ConstantNetwork<double>{matrix_from_json(require(j, "matrix", "NetworkModel"),
                                                     "NetworkModel.matrix")};
  } else if (type == "bernoulli_edges") {
    model = BernoulliEdges<double>{matrix_from_json(require(j, "mean", "NetworkModel"),
                                                    "NetworkModel.mean")};
  } else if (type == "binomial_average") {
    model = BinomialAverage<double>(
        matrix_from_json(require(j, "mean", "NetworkModel"), "NetworkModel.mean"),
        require(j, "count", "NetworkModel").get<int>());
  } else if (type == "block_bernoulli") {
    model = BlockBernoulli<double>{
        require(j, "categories", "NetworkModel").get<std::vector<int>>(),
        matrix_from_json(require(j, "block_probs", "NetworkModel"), "NetworkModel.block_probs")};
  } else {
    fail("NetworkModel: unknown type '" + type + "'");
  }
  try {
    validate(model);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return model;
}

json participation_to_json(const ParticipationModeld& pm) {
  return json{{"pbar", vector_to_json(pm.pbar)}};
}

ParticipationModeld participation_from_json(const json& j, int n_players) {
  const json p = require(j, "pbar", "Participation");
  ParticipationModeld pm;
  if (p.is_number()) {
    pm.pbar = Vector<double>::Constant(n_players, p.get<double>());
  } else {
    pm.pbar = vector_from_json(p, "Participation.pbar");
  }
  if (pm.pbar.size() != n_players) {
    fail("Participation: pbar must have one entry per player");
  }
  try {
    validate(pm);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return pm;
}

json pricing_params_to_json(const PricingParamsd& p) {
  json j;
  j["n_sellers"] = p.n_sellers;
  j["m_customers"] = p.m_customers;
  j["eta"] = p.eta;
  j["alpha"] = p.alpha;
  j["dbar"] = vector_to_json(p.dbar);
  j["categories"] = p.categories;
  j["block_probs"] = matrix_to_json(p.block_probs);
  if (p.pbar) j["pbar"] = vector_to_json(*p.pbar);
  j["price_cap"] = p.price_cap;
  return j;
}

PricingParamsd pricing_params_from_json(const json& j) {
  PricingParamsd p;
  p.n_sellers = require(j, "n_sellers", "PricingParams").get<int>();
  if (p.n_sellers <= 0) fail("PricingParams: n_sellers must be > 0");
  p.m_customers = require(j, "m_customers", "PricingParams").get<int>();
  p.eta = require(j, "eta", "PricingParams").get<double>();
  p.alpha = require(j, "alpha", "PricingParams").get<double>();
  p.block_probs = matrix_from_json(require(j, "block_probs", "PricingParams"),
                                   "PricingParams.block_probs");
  if (j.contains("categories")) {
    p.categories = j.at("categories").get<std::vector<int>>();
  } else {
    p.categories = even_category_split(p.n_sellers);
  }
  if (j.contains("dbar")) {
    p.dbar = vector_from_json(j.at("dbar"), "PricingParams.dbar");
  } else if (j.contains("dbar_by_category")) {
    const Vector<double> by_cat =
        vector_from_json(j.at("dbar_by_category"), "PricingParams.dbar_by_category");
    p.dbar.resize(p.n_sellers);
    for (int i = 0; i < p.n_sellers; ++i) {
      const int c = p.categories[static_cast<std::size_t>(i)];
      if (c < 0 || c >= by_cat.size()) {
        fail("PricingParams: category label out of range of dbar_by_category");
      }
      p.dbar[i] = by_cat[c];
    }
  } else {
    fail("PricingParams: provide 'dbar' or 'dbar_by_category'");
  }
  if (j.contains("pbar")) {
    const json pb = j.at("pbar");
    p.pbar = pb.is_number() ? Vector<double>::Constant(p.n_sellers, pb.get<double>()).eval()
                            : vector_from_json(pb, "PricingParams.pbar");
  }
  if (j.contains("price_cap")) p.price_cap = j.at("price_cap").get<double>();
  try {
    validate(p);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  return p;
}

json concentration_report_to_json(const ConcentrationReport& report) {
  return json{{"delta", report.delta},
              {"bound", report.bound},
              {"trials", report.trials},
              {"violations", report.violations},
              {"violation_rate", report.violation_rate},
              {"max_observed_gap", report.max_observed_gap},
              {"gap_quantiles",
               json{{"min", report.gap_quantiles.min},
                    {"p25", report.gap_quantiles.p25},
                    {"p50", report.gap_quantiles.p50},
                    {"p75", report.gap_quantiles.p75},
                    {"max", report.gap_quantiles.max}}}};
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

}  // namespace netgames
