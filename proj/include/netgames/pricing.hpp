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

#include <optional>
#include <stdexcept>
#include <vector>

#include "netgames/common.hpp"
#include "netgames/game.hpp"
#include "netgames/network_models.hpp"

namespace netgames {

/// Online-market pricing game: N sellers post prices, M customers per day
/// buy according to an affine demand curve coupled through a random
/// co-purchase matrix. Categories control both the demand ceiling and the
/// block structure of the co-purchase probabilities.
template <typename Scalar>
struct PricingParams {
  int n_sellers = 0;
  int m_customers = 1;
  Scalar eta = Scalar(1);    // price sensitivity, > 0
  Scalar alpha = Scalar(0);  // co-purchase influence, >= 0
  Vector<Scalar> dbar;       // max per-customer demand per seller
  std::vector<int> categories;  // 0-based category per seller
  Matrix<Scalar> block_probs;   // co-purchase probability per category pair
  std::optional<Vector<Scalar>> pbar;  // daily participation probabilities
  Scalar price_cap = Scalar(20);
};

template <typename Scalar>
void validate(const PricingParams<Scalar>& p) {
  if (p.n_sellers <= 0) throw std::invalid_argument("PricingParams: n_sellers must be > 0");
  if (p.m_customers < 1) throw std::invalid_argument("PricingParams: m_customers must be >= 1");
  if (!(p.eta > Scalar(0))) throw std::invalid_argument("PricingParams: eta must be > 0");
  if (p.alpha < Scalar(0)) throw std::invalid_argument("PricingParams: alpha must be >= 0");
  if (p.dbar.size() != p.n_sellers) {
    throw std::invalid_argument("PricingParams: dbar must have one entry per seller");
  }
  if ((p.dbar.array() <= Scalar(0)).any()) {
    throw std::invalid_argument("PricingParams: dbar entries must be > 0");
  }
  if (static_cast<int>(p.categories.size()) != p.n_sellers) {
    throw std::invalid_argument("PricingParams: categories must have one entry per seller");
  }
  if (p.block_probs.rows() != p.block_probs.cols()) {
    throw std::invalid_argument("PricingParams: block_probs must be square");
  }
  if ((p.block_probs.array() < Scalar(0)).any() || (p.block_probs.array() > Scalar(1)).any()) {
    throw std::invalid_argument("PricingParams: block_probs must lie in [0, 1]");
  }
  for (int c : p.categories) {
    if (c < 0 || c >= p.block_probs.rows()) {
      throw std::invalid_argument("PricingParams: category label out of range");
    }
  }
  if (p.pbar && p.pbar->size() != p.n_sellers) {
    throw std::invalid_argument("PricingParams: pbar must have one entry per seller");
  }
  if (!(p.price_cap > Scalar(0))) {
    throw std::invalid_argument("PricingParams: price_cap must be > 0");
  }
}

/// Mean co-purchase matrix implied by the category blocks (zero diagonal).
template <typename Scalar>
Network<Scalar> pricing_mean_network(const PricingParams<Scalar>& p) {
  BlockBernoulli<Scalar> blocks{p.categories, p.block_probs};
  return expected_network<Scalar>(NetworkModel<Scalar>(blocks));
}

/// The daily co-purchase matrix model: entry ij averages m_customers
/// independent Bernoulli co-purchase indicators.
template <typename Scalar>
NetworkModel<Scalar> pricing_network_model(const PricingParams<Scalar>& p) {
  return BinomialAverage<Scalar>(pricing_mean_network(p), p.m_customers);
}

/// Map pricing parameters to the quadratic game: scalar strategies with
/// Q_i = 2 eta M, theta_i = M dbar_i, and game-level coupling -eta M alpha
/// (prices of co-purchased products depress demand, so the aggregate enters
/// the cost with the opposite sign). Prices live in [0, price_cap].
template <typename Scalar>
GameSpec<Scalar> pricing_to_lq(const PricingParams<Scalar>& p) {
  validate(p);
  GameSpec<Scalar> spec;
  spec.n_players = p.n_sellers;
  spec.dim = 1;
  spec.alpha = -p.eta * Scalar(p.m_customers) * p.alpha;
  spec.q.reserve(static_cast<std::size_t>(p.n_sellers));
  spec.theta.reserve(static_cast<std::size_t>(p.n_sellers));
  spec.boxes.reserve(static_cast<std::size_t>(p.n_sellers));
  for (int i = 0; i < p.n_sellers; ++i) {
    Matrix<Scalar> qi(1, 1);
    qi(0, 0) = Scalar(2) * p.eta * Scalar(p.m_customers);
    spec.q.push_back(qi);
    Vector<Scalar> th(1);
    th[0] = Scalar(p.m_customers) * p.dbar[i];
    spec.theta.push_back(th);
    Vector<Scalar> lo = Vector<Scalar>::Zero(1);
    Vector<Scalar> hi = Vector<Scalar>::Constant(1, p.price_cap);
    spec.boxes.push_back(StrategyBox<Scalar>{lo, hi});
  }
  return spec;
}

/// Total demand per product for one day:
///   d_i = M (dbar_i - eta (s_i + (alpha/N) sum_j A_ij s_j)).
template <typename Scalar>
Vector<Scalar> demand(const PricingParams<Scalar>& p, const Vector<Scalar>& prices,
                      const Network<Scalar>& a) {
  if (prices.size() != p.n_sellers || a.rows() != p.n_sellers || a.cols() != p.n_sellers) {
    throw std::invalid_argument("demand: dimension mismatch");
  }
  const Vector<Scalar> aggregate = a * prices;
  return Scalar(p.m_customers) *
         (p.dbar - p.eta * (prices + (p.alpha / Scalar(p.n_sellers)) * aggregate));
}

/// Even category split: the first ceil(N/2) sellers in category 0, the rest
/// in category 1.
inline std::vector<int> even_category_split(int n_sellers) {
  std::vector<int> cats(static_cast<std::size_t>(n_sellers), 1);
  const int first = (n_sellers + 1) / 2;
  for (int i = 0; i < first; ++i) cats[static_cast<std::size_t>(i)] = 0;
  return cats;
}

using PricingParamsd = PricingParams<double>;

}  // namespace netgames
