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
#include <cstdint>
#include <map>
#include <stdexcept>
#include <variant>
#include <vector>

#include "netgames/common.hpp"
#include "netgames/game.hpp"
#include "netgames/rng.hpp"

namespace netgames {

/// Degenerate model: every draw returns the same matrix.
template <typename Scalar>
struct ConstantNetwork {
  Network<Scalar> matrix;
};

/// Independent Bernoulli(mean_ij) edges, one draw per ordered pair.
template <typename Scalar>
struct BernoulliEdges {
  Network<Scalar> mean;
};

namespace detail {

/// Walker alias table: draws from a fixed discrete distribution on
/// {0, ..., n-1} with one uniform and two array reads.
struct AliasTable {
  std::vector<double> threshold;
  std::vector<int> alias;

  explicit AliasTable(const std::vector<double>& pmf) {
    const std::size_t n = pmf.size();
    threshold.assign(n, 1.0);
    alias.assign(n, 0);
    std::vector<double> scaled(n);
    double total = 0.0;
    for (double v : pmf) total += v;
    for (std::size_t k = 0; k < n; ++k) scaled[k] = pmf[k] / total * static_cast<double>(n);
    std::vector<int> small, large;
    for (std::size_t k = 0; k < n; ++k) {
      (scaled[k] < 1.0 ? small : large).push_back(static_cast<int>(k));
    }
    while (!small.empty() && !large.empty()) {
      const int s = small.back();
      const int l = large.back();
      small.pop_back();
      threshold[static_cast<std::size_t>(s)] = scaled[static_cast<std::size_t>(s)];
      alias[static_cast<std::size_t>(s)] = l;
      scaled[static_cast<std::size_t>(l)] -= 1.0 - scaled[static_cast<std::size_t>(s)];
      if (scaled[static_cast<std::size_t>(l)] < 1.0) {
        large.pop_back();
        small.push_back(l);
      }
    }
    // Leftover buckets are full by construction (up to rounding).
  }

  int draw(double u) const {
    const double x = u * static_cast<double>(threshold.size());
    auto idx = static_cast<std::size_t>(x);
    if (idx >= threshold.size()) idx = threshold.size() - 1;
    const double frac = x - static_cast<double>(idx);
    return frac < threshold[idx] ? static_cast<int>(idx) : alias[idx];
  }
};

// pmf of Binomial(m, p) from the ratio recurrence, anchored at the mode so
// the recurrence stays finite for p near 0 or 1.
inline std::vector<double> binomial_pmf(int m, double p) {
  std::vector<double> pmf(static_cast<std::size_t>(m) + 1, 0.0);
  const int mode = std::min(m, static_cast<int>(std::floor((m + 1) * p)));
  pmf[static_cast<std::size_t>(mode)] = 1.0;
  for (int k = mode; k < m; ++k) {
    pmf[static_cast<std::size_t>(k + 1)] =
        pmf[static_cast<std::size_t>(k)] * ((m - k) * p) / ((k + 1) * (1.0 - p));
  }
  for (int k = mode; k > 0; --k) {
    pmf[static_cast<std::size_t>(k - 1)] =
        pmf[static_cast<std::size_t>(k)] * (k * (1.0 - p)) / ((m - k + 1) * p);
  }
  return pmf;
}

}  // namespace detail

/// Entries are scaled binomial counts: A_ij = Binomial(m, mean_ij) / m,
/// the empirical average of m independent Bernoulli contributions. Alias
/// tables are precomputed per distinct probability so sampling costs one
/// uniform draw per entry.
template <typename Scalar>
struct BinomialAverage {
  Network<Scalar> mean;
  int count = 1;  // m

  BinomialAverage() = default;
  BinomialAverage(Network<Scalar> mean_matrix, int m) : mean(std::move(mean_matrix)), count(m) {
    build_tables();
  }

  const detail::AliasTable& table_for(Eigen::Index i, Eigen::Index j) const {
    return tables_[static_cast<std::size_t>(table_index_(i, j))];
  }

 private:
  void build_tables() {
    std::map<double, int> seen;
    table_index_.resize(mean.rows(), mean.cols());
    table_index_.setConstant(-1);
    for (Eigen::Index j = 0; j < mean.cols(); ++j) {
      for (Eigen::Index i = 0; i < mean.rows(); ++i) {
        if (i == j) continue;
        const double p = static_cast<double>(mean(i, j));
        auto [it, inserted] = seen.emplace(p, static_cast<int>(tables_.size()));
        if (inserted) {
          tables_.push_back(detail::AliasTable(detail::binomial_pmf(std::max(count, 1), p)));
        }
        table_index_(i, j) = it->second;
      }
    }
  }

  std::vector<detail::AliasTable> tables_;
  Eigen::Matrix<int, Eigen::Dynamic, Eigen::Dynamic> table_index_;
};

/// Two-level block model: players carry a category label and edge ij is
/// Bernoulli(block_probs(cat_i, cat_j)).
template <typename Scalar>
struct BlockBernoulli {
  std::vector<int> categories;  // one label per player, 0-based
  Matrix<Scalar> block_probs;
};

template <typename Scalar>
using NetworkModel = std::variant<ConstantNetwork<Scalar>, BernoulliEdges<Scalar>,
                                  BinomialAverage<Scalar>, BlockBernoulli<Scalar>>;

/// Random participation: P_ii ~ Bernoulli(pbar_i) independently, with
/// pbar_i in (0, 1]. Represented by its diagonal.
template <typename Scalar>
struct ParticipationModel {
  Vector<Scalar> pbar;
};

template <typename Scalar>
void validate(const ParticipationModel<Scalar>& pm) {
  if (pm.pbar.size() == 0) {
    throw std::invalid_argument("ParticipationModel: empty pbar");
  }
  if ((pm.pbar.array() <= Scalar(0)).any() || (pm.pbar.array() > Scalar(1)).any()) {
    throw std::invalid_argument("ParticipationModel: requires 0 < pbar_i <= 1");
  }
}

template <typename Scalar>
void validate(const NetworkModel<Scalar>& model) {
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantNetwork<Scalar>>) {
          validate_network(m.matrix);
        } else if constexpr (std::is_same_v<T, BernoulliEdges<Scalar>>) {
          validate_network(m.mean);
        } else if constexpr (std::is_same_v<T, BinomialAverage<Scalar>>) {
          validate_network(m.mean);
          if (m.count < 1) throw std::invalid_argument("BinomialAverage: count must be >= 1");
        } else {
          if (m.block_probs.rows() != m.block_probs.cols()) {
            throw std::invalid_argument("BlockBernoulli: block_probs must be square");
          }
          if ((m.block_probs.array() < Scalar(0)).any() ||
              (m.block_probs.array() > Scalar(1)).any()) {
            throw std::invalid_argument("BlockBernoulli: block_probs must lie in [0, 1]");
          }
          for (int c : m.categories) {
            if (c < 0 || c >= m.block_probs.rows()) {
              throw std::invalid_argument("BlockBernoulli: category label out of range");
            }
          }
        }
      },
      model);
}

template <typename Scalar>
int player_count(const NetworkModel<Scalar>& model) {
  return std::visit(
      [](const auto& m) -> int {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantNetwork<Scalar>>) {
          return static_cast<int>(m.matrix.rows());
        } else if constexpr (std::is_same_v<T, BlockBernoulli<Scalar>>) {
          return static_cast<int>(m.categories.size());
        } else {
          return static_cast<int>(m.mean.rows());
        }
      },
      model);
}

/// The exact mean network (analytic, never sampled). Diagonal is zero.
template <typename Scalar>
Network<Scalar> expected_network(const NetworkModel<Scalar>& model) {
  return std::visit(
      [](const auto& m) -> Network<Scalar> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantNetwork<Scalar>>) {
          return m.matrix;
        } else if constexpr (std::is_same_v<T, BlockBernoulli<Scalar>>) {
          const auto n = static_cast<Eigen::Index>(m.categories.size());
          Network<Scalar> mean = Network<Scalar>::Zero(n, n);
          for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = 0; j < n; ++j) {
              if (i == j) continue;
              mean(i, j) = m.block_probs(m.categories[static_cast<std::size_t>(i)],
                                         m.categories[static_cast<std::size_t>(j)]);
            }
          }
          return mean;
        } else {
          return m.mean;
        }
      },
      model);
}

/// One independent draw of the interaction network. Entries land in [0, 1]
/// with a zero diagonal; only the passed rng advances. Entries are drawn in
/// column-major (storage) order, which is part of the replay contract.
template <typename Scalar>
Network<Scalar> sample_network(const NetworkModel<Scalar>& model, Rng& rng) {
  return std::visit(
      [&rng](const auto& m) -> Network<Scalar> {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantNetwork<Scalar>>) {
          return m.matrix;
        } else if constexpr (std::is_same_v<T, BernoulliEdges<Scalar>>) {
          const Eigen::Index n = m.mean.rows();
          Network<Scalar> a = Network<Scalar>::Zero(n, n);
          for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
              if (i == j) continue;
              a(i, j) = rng.bernoulli(static_cast<double>(m.mean(i, j))) ? Scalar(1) : Scalar(0);
            }
          }
          return a;
        } else if constexpr (std::is_same_v<T, BinomialAverage<Scalar>>) {
          const Eigen::Index n = m.mean.rows();
          Network<Scalar> a = Network<Scalar>::Zero(n, n);
          const Scalar inv_count = Scalar(1) / Scalar(m.count);
          for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
              if (i == j) continue;
              const int k = m.table_for(i, j).draw(rng.uniform01());
              a(i, j) = Scalar(k) * inv_count;
            }
          }
          return a;
        } else {
          const auto n = static_cast<Eigen::Index>(m.categories.size());
          Network<Scalar> a = Network<Scalar>::Zero(n, n);
          for (Eigen::Index j = 0; j < n; ++j) {
            for (Eigen::Index i = 0; i < n; ++i) {
              if (i == j) continue;
              const double p = static_cast<double>(
                  m.block_probs(m.categories[static_cast<std::size_t>(i)],
                                m.categories[static_cast<std::size_t>(j)]));
              a(i, j) = rng.bernoulli(p) ? Scalar(1) : Scalar(0);
            }
          }
          return a;
        }
      },
      model);
}

/// One draw of the participation diagonal: entry i is 1 with probability
/// pbar_i, else 0.
template <typename Scalar>
Vector<Scalar> sample_participation(const ParticipationModel<Scalar>& pm, Rng& rng) {
  Vector<Scalar> p(pm.pbar.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p[i] = rng.bernoulli(static_cast<double>(pm.pbar[i])) ? Scalar(1) : Scalar(0);
  }
  return p;
}

/// Network the stage game is actually played over: A P, with column j zeroed
/// when player j sits out.
template <typename Scalar>
Network<Scalar> effective_network(const Network<Scalar>& a, const Vector<Scalar>& p_diag) {
  if (a.cols() != p_diag.size()) {
    throw std::invalid_argument("effective_network: dimension mismatch");
  }
  return a * p_diag.asDiagonal();
}

/// Mean of the compensated effective network Pbar^{-1} P A P, which equals
/// Abar Pbar exactly. This is the network whose equilibrium the
/// dynamic-population learning process targets.
template <typename Scalar>
Network<Scalar> compensated_effective_mean(const NetworkModel<Scalar>& model,
                                           const ParticipationModel<Scalar>& pm) {
  Network<Scalar> abar = expected_network(model);
  if (abar.cols() != pm.pbar.size()) {
    throw std::invalid_argument("compensated_effective_mean: dimension mismatch");
  }
  return abar * pm.pbar.asDiagonal();
}

using NetworkModeld = NetworkModel<double>;
using ParticipationModeld = ParticipationModel<double>;

}  // namespace netgames
