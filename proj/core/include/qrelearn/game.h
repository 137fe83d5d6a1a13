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

#ifndef QRELEARN_GAME_H_
#define QRELEARN_GAME_H_

#include <cstddef>
#include <span>
#include <vector>

namespace qrelearn {

// Row-major flattening of joint pure profiles: player 0 varies slowest.
class ProfileIndexer {
 public:
  ProfileIndexer() = default;
  explicit ProfileIndexer(std::vector<int> actions);

  int num_players() const { return static_cast<int>(actions_.size()); }
  int num_actions(int player) const { return actions_[player]; }
  const std::vector<int>& actions() const { return actions_; }
  std::size_t num_profiles() const { return num_profiles_; }

  std::size_t index(std::span<const int> joint_action) const;
  std::vector<int> joint_action(std::size_t profile) const;
  // Action player `player` takes in the given flattened profile.
  int action_of(std::size_t profile, int player) const;

  bool operator==(const ProfileIndexer&) const = default;

 private:
  std::vector<int> actions_;
  std::vector<std::size_t> strides_;
  std::size_t num_profiles_ = 0;
};

// A normal-form game with real payoffs u_i(a) stored per player in row-major
// joint-profile order. Immutable after construction.
class Game {
 public:
  // The empty game (no players).
  Game() = default;
  Game(std::vector<int> actions, std::vector<std::vector<double>> payoffs);

  int num_players() const { return indexer_.num_players(); }
  int num_actions(int player) const { return indexer_.num_actions(player); }
  const std::vector<int>& actions() const { return indexer_.actions(); }
  std::size_t num_profiles() const { return indexer_.num_profiles(); }
  const ProfileIndexer& indexer() const { return indexer_; }

  double payoff(int player, std::size_t profile) const {
    return payoffs_[player][profile];
  }
  double payoff(int player, std::span<const int> joint_action) const;
  const std::vector<double>& payoffs(int player) const {
    return payoffs_[player];
  }
  const std::vector<std::vector<double>>& all_payoffs() const {
    return payoffs_;
  }

  bool operator==(const Game&) const = default;

 private:
  ProfileIndexer indexer_;
  std::vector<std::vector<double>> payoffs_;
};

// One probability vector per player. Construction validates entries in [0, 1]
// and per-player sums equal to 1 within kSimplexTolerance.
class MixedProfile {
 public:
  static constexpr double kSimplexTolerance = 1e-9;

  MixedProfile() = default;
  explicit MixedProfile(std::vector<std::vector<double>> strategies);

  static MixedProfile uniform(const std::vector<int>& actions);

  int num_players() const { return static_cast<int>(strategies_.size()); }
  const std::vector<double>& strategy(int player) const {
    return strategies_[player];
  }
  double probability(int player, int action) const {
    return strategies_[player][action];
  }
  const std::vector<std::vector<double>>& strategies() const {
    return strategies_;
  }

  // Throws ArgumentError unless the action counts match the game's.
  void check_compatible(const Game& game) const;

  bool operator==(const MixedProfile&) const = default;

 private:
  std::vector<std::vector<double>> strategies_;
};

// Σ_{a_-i} Π_{j≠i} σ_j(a_j) · u_i(action, a_-i).
double expected_payoff(const Game& game, const MixedProfile& profile,
                       int player, int action);

// Expected payoff of every action of `player` against the profile.
std::vector<double> expected_payoffs(const Game& game,
                                     const MixedProfile& profile, int player);

// Softmax of λ·EP over the player's actions, computed with max-subtraction.
std::vector<double> logit_response(const Game& game,
                                   const MixedProfile& profile, int player,
                                   double lambda);

// max_{i,k} |exp(λ·EP_i(k)) − σ_i(k) · Σ_j exp(λ·EP_i(j))|, evaluated in
// extended precision. Zero exactly at a λ-logit equilibrium.
double lqre_residual(const Game& game, const MixedProfile& profile,
                     double lambda);

}  // namespace qrelearn

#endif  // QRELEARN_GAME_H_
