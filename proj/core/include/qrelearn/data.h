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

#ifndef QRELEARN_DATA_H_
#define QRELEARN_DATA_H_

#include <cstdint>
#include <vector>

#include "qrelearn/game.h"

namespace qrelearn {

// One observed play: the joint pure action and each player's noisy payoff.
struct PlaySample {
  std::vector<int> joint_action;
  std::vector<double> observed_payoffs;

  bool operator==(const PlaySample&) const = default;
};

class Dataset {
 public:
  Dataset(std::vector<int> actions, std::vector<PlaySample> samples,
          double noise_stddev, std::uint64_t generator_seed);

  int num_players() const { return indexer_.num_players(); }
  const std::vector<int>& actions() const { return indexer_.actions(); }
  const ProfileIndexer& indexer() const { return indexer_; }
  const std::vector<PlaySample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  double noise_stddev() const { return noise_stddev_; }
  std::uint64_t generator_seed() const { return generator_seed_; }

  bool operator==(const Dataset& other) const {
    return actions() == other.actions() && samples_ == other.samples_ &&
           noise_stddev_ == other.noise_stddev_ &&
           generator_seed_ == other.generator_seed_;
  }

 private:
  ProfileIndexer indexer_;
  std::vector<PlaySample> samples_;
  double noise_stddev_;
  std::uint64_t generator_seed_;
};

struct GroundTruth {
  Game game;
  MixedProfile profile;
  double lambda = 0.0;
};

// Sufficient statistics of a dataset for the likelihood terms.
class EmpiricalCounts {
 public:
  explicit EmpiricalCounts(const ProfileIndexer& indexer);

  void add(const PlaySample& sample);

  // action_counts()[i][a]: samples in which player i played a.
  const std::vector<std::vector<int>>& action_counts() const {
    return action_counts_;
  }
  // Payoffs player i observed at the given flattened profile, in sample order.
  const std::vector<double>& observations(std::size_t profile,
                                          int player) const {
    return observations_[profile][player];
  }
  int profile_count(std::size_t profile) const {
    return profile_counts_[profile];
  }
  bool observed(std::size_t profile) const {
    return profile_counts_[profile] > 0;
  }
  std::size_t total() const { return total_; }

  bool operator==(const EmpiricalCounts&) const = default;

 private:
  ProfileIndexer indexer_;
  std::vector<std::vector<int>> action_counts_;
  std::vector<std::vector<std::vector<double>>> observations_;
  std::vector<int> profile_counts_;
  std::size_t total_ = 0;
};

// Every payoff entry i.i.d. uniform on [lo, hi).
Game random_game(int num_players, int actions, double lo, double hi,
                 std::uint64_t seed);

// Draws m plays: each player's action independently from its strategy, then
// every player's payoff ~ Normal(u_i(joint_action), noise_stddev²).
Dataset sample_plays(const GroundTruth& truth, int m, double noise_stddev,
                     std::uint64_t seed);

EmpiricalCounts empirical_counts(const Dataset& dataset);

}  // namespace qrelearn

#endif  // QRELEARN_DATA_H_
