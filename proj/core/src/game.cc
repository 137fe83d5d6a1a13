// Copyright 2026 The qrelearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrelearn/game.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qrelearn/errors.h"

namespace qrelearn {
namespace {

void check_player(const Game& game, int player) {
  if (player < 0 || player >= game.num_players()) {
    throw ArgumentError("player index " + std::to_string(player) +
                        " out of range");
  }
}

void check_action(const Game& game, int player, int action) {
  check_player(game, player);
  if (action < 0 || action >= game.num_actions(player)) {
    throw ArgumentError("action index " + std::to_string(action) +
                        " out of range for player " + std::to_string(player));
  }
}

// Expected payoffs of every action of `player`, accumulated in type T.
template <typename T>
std::vector<T> expected_payoffs_as(const Game& game,
                                   const MixedProfile& profile, int player) {
  const ProfileIndexer& indexer = game.indexer();
  std::vector<T> result(game.num_actions(player), T{0});
  std::vector<int> joint(game.num_players(), 0);
  for (std::size_t p = 0; p < indexer.num_profiles(); ++p) {
    T weight{1};
    for (int j = 0; j < game.num_players(); ++j) {
      if (j != player) weight *= static_cast<T>(profile.probability(j, joint[j]));
    }
    result[joint[player]] += weight * static_cast<T>(game.payoff(player, p));
    // Advance the odometer; the last player varies fastest.
    for (int j = game.num_players() - 1; j >= 0; --j) {
      if (++joint[j] < game.num_actions(j)) break;
      joint[j] = 0;
    }
  }
  return result;
}

}  // namespace

ProfileIndexer::ProfileIndexer(std::vector<int> actions)
    : actions_(std::move(actions)), strides_(actions_.size(), 1) {
  if (actions_.empty()) throw ArgumentError("a game needs at least one player");
  for (int k : actions_) {
    if (k <= 0) throw ArgumentError("every player needs at least one action");
  }
  num_profiles_ = 1;
  for (int i = static_cast<int>(actions_.size()) - 1; i >= 0; --i) {
    strides_[i] = num_profiles_;
    num_profiles_ *= static_cast<std::size_t>(actions_[i]);
  }
}

std::size_t ProfileIndexer::index(std::span<const int> joint_action) const {
  if (joint_action.size() != actions_.size()) {
    throw ArgumentError("joint action has wrong number of players");
  }
  std::size_t result = 0;
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    if (joint_action[i] < 0 || joint_action[i] >= actions_[i]) {
      throw ArgumentError("joint action index out of range");
    }
    result += strides_[i] * static_cast<std::size_t>(joint_action[i]);
  }
  return result;
}

std::vector<int> ProfileIndexer::joint_action(std::size_t profile) const {
  if (profile >= num_profiles_) throw ArgumentError("profile out of range");
  std::vector<int> joint(actions_.size());
  for (std::size_t i = 0; i < actions_.size(); ++i) {
    joint[i] = static_cast<int>((profile / strides_[i]) % actions_[i]);
  }
  return joint;
}

int ProfileIndexer::action_of(std::size_t profile, int player) const {
  return static_cast<int>((profile / strides_[player]) % actions_[player]);
}

Game::Game(std::vector<int> actions, std::vector<std::vector<double>> payoffs)
    : indexer_(std::move(actions)), payoffs_(std::move(payoffs)) {
  if (payoffs_.size() != static_cast<std::size_t>(indexer_.num_players())) {
    throw ArgumentError("need one payoff tensor per player");
  }
  for (const auto& tensor : payoffs_) {
    if (tensor.size() != indexer_.num_profiles()) {
      throw ArgumentError("payoff tensor has " + std::to_string(tensor.size()) +
                          " entries, expected " +
                          std::to_string(indexer_.num_profiles()));
    }
    for (double u : tensor) {
      if (!std::isfinite(u)) throw ArgumentError("payoffs must be finite");
    }
  }
}

double Game::payoff(int player, std::span<const int> joint_action) const {
  return payoffs_.at(player)[indexer_.index(joint_action)];
}

MixedProfile::MixedProfile(std::vector<std::vector<double>> strategies)
    : strategies_(std::move(strategies)) {
  if (strategies_.empty()) throw ArgumentError("profile has no players");
  for (const auto& sigma : strategies_) {
    if (sigma.empty()) throw ArgumentError("strategy over zero actions");
    double total = 0.0;
    for (double p : sigma) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw ArgumentError("probability outside [0, 1]");
      }
      total += p;
    }
    if (std::abs(total - 1.0) > kSimplexTolerance) {
      throw ArgumentError("strategy does not sum to 1");
    }
  }
}

MixedProfile MixedProfile::uniform(const std::vector<int>& actions) {
  std::vector<std::vector<double>> strategies;
  strategies.reserve(actions.size());
  for (int k : actions) {
    if (k <= 0) throw ArgumentError("every player needs at least one action");
    strategies.emplace_back(k, 1.0 / k);
  }
  return MixedProfile(std::move(strategies));
}

void MixedProfile::check_compatible(const Game& game) const {
  if (num_players() != game.num_players()) {
    throw ArgumentError("profile and game disagree on player count");
  }
  for (int i = 0; i < game.num_players(); ++i) {
    if (static_cast<int>(strategies_[i].size()) != game.num_actions(i)) {
      throw ArgumentError("profile and game disagree on action count");
    }
  }
}

double expected_payoff(const Game& game, const MixedProfile& profile,
                       int player, int action) {
  check_action(game, player, action);
  profile.check_compatible(game);
  return expected_payoffs_as<double>(game, profile, player)[action];
}

std::vector<double> expected_payoffs(const Game& game,
                                     const MixedProfile& profile, int player) {
  check_player(game, player);
  profile.check_compatible(game);
  return expected_payoffs_as<double>(game, profile, player);
}

std::vector<double> logit_response(const Game& game,
                                   const MixedProfile& profile, int player,
                                   double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("lambda must be finite and nonnegative");
  }
  std::vector<double> values = expected_payoffs(game, profile, player);
  const double top = *std::max_element(values.begin(), values.end());
  double total = 0.0;
  for (double& v : values) {
    v = std::exp(lambda * (v - top));
    total += v;
  }
  for (double& v : values) v /= total;
  return values;
}

double lqre_residual(const Game& game, const MixedProfile& profile,
                     double lambda) {
  if (!(lambda >= 0.0)) throw ArgumentError("lambda must be nonnegative");
  profile.check_compatible(game);
  using Wide = long double;
  Wide worst = 0;
  for (int i = 0; i < game.num_players(); ++i) {
    const std::vector<Wide> values = expected_payoffs_as<Wide>(game, profile, i);
    std::vector<Wide> terms(values.size());
    Wide total = 0;
    for (std::size_t k = 0; k < values.size(); ++k) {
      terms[k] = std::exp(static_cast<Wide>(lambda) * values[k]);
      total += terms[k];
    }
    for (std::size_t k = 0; k < values.size(); ++k) {
      const Wide gap =
          std::abs(terms[k] - static_cast<Wide>(profile.probability(i, k)) * total);
      worst = std::max(worst, gap);
    }
  }
  return static_cast<double>(worst);
}

}  // namespace qrelearn
