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

#include "qrelearn/data.h"

#include <cmath>
#include <string>

#include "qrelearn/errors.h"
#include "qrelearn/rng.h"

namespace qrelearn {

Dataset::Dataset(std::vector<int> actions, std::vector<PlaySample> samples,
                 double noise_stddev, std::uint64_t generator_seed)
    : indexer_(std::move(actions)),
      samples_(std::move(samples)),
      noise_stddev_(noise_stddev),
      generator_seed_(generator_seed) {
  if (samples_.empty()) throw ArgumentError("a dataset needs at least one sample");
  if (!(noise_stddev_ > 0.0) || !std::isfinite(noise_stddev_)) {
    throw ArgumentError("noise_stddev must be positive");
  }
  const auto n = static_cast<std::size_t>(indexer_.num_players());
  for (std::size_t s = 0; s < samples_.size(); ++s) {
    const PlaySample& sample = samples_[s];
    if (sample.joint_action.size() != n || sample.observed_payoffs.size() != n) {
      throw ArgumentError("sample " + std::to_string(s) +
                          " has the wrong number of players");
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (sample.joint_action[i] < 0 ||
          sample.joint_action[i] >= indexer_.num_actions(static_cast<int>(i))) {
        throw ArgumentError("sample " + std::to_string(s) +
                            " has an action out of range");
      }
      if (!std::isfinite(sample.observed_payoffs[i])) {
        throw ArgumentError("sample " + std::to_string(s) +
                            " has a non-finite payoff");
      }
    }
  }
}

EmpiricalCounts::EmpiricalCounts(const ProfileIndexer& indexer)
    : indexer_(indexer),
      action_counts_(indexer.num_players()),
      observations_(indexer.num_profiles(),
                    std::vector<std::vector<double>>(indexer.num_players())),
      profile_counts_(indexer.num_profiles(), 0) {
  for (int i = 0; i < indexer.num_players(); ++i) {
    action_counts_[i].assign(indexer.num_actions(i), 0);
  }
}

void EmpiricalCounts::add(const PlaySample& sample) {
  const std::size_t profile = indexer_.index(sample.joint_action);
  for (int i = 0; i < indexer_.num_players(); ++i) {
    ++action_counts_[i][sample.joint_action[i]];
    observations_[profile][i].push_back(sample.observed_payoffs[i]);
  }
  ++profile_counts_[profile];
  ++total_;
}

Game random_game(int num_players, int actions, double lo, double hi,
                 std::uint64_t seed) {
  if (num_players <= 0 || actions <= 0) {
    throw ArgumentError("random_game needs positive player and action counts");
  }
  if (!(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw ArgumentError("random_game needs finite lo < hi");
  }
  std::vector<int> shape(num_players, actions);
  ProfileIndexer indexer(shape);
  Rng rng(seed);
  std::vector<std::vector<double>> payoffs(num_players);
  for (auto& tensor : payoffs) {
    tensor.reserve(indexer.num_profiles());
    for (std::size_t p = 0; p < indexer.num_profiles(); ++p) {
      tensor.push_back(rng.uniform(lo, hi));
    }
  }
  return Game(std::move(shape), std::move(payoffs));
}

Dataset sample_plays(const GroundTruth& truth, int m, double noise_stddev,
                     std::uint64_t seed) {
  if (m < 1) throw ArgumentError("sample_plays needs m >= 1");
  if (!(noise_stddev > 0.0)) throw ArgumentError("noise_stddev must be positive");
  truth.profile.check_compatible(truth.game);
  const int n = truth.game.num_players();
  Rng rng(seed);
  std::vector<PlaySample> samples;
  samples.reserve(m);
  for (int s = 0; s < m; ++s) {
    PlaySample sample;
    sample.joint_action.resize(n);
    for (int i = 0; i < n; ++i) {
      sample.joint_action[i] = rng.categorical(truth.profile.strategy(i));
    }
    const std::size_t profile = truth.game.indexer().index(sample.joint_action);
    sample.observed_payoffs.resize(n);
    for (int i = 0; i < n; ++i) {
      sample.observed_payoffs[i] =
          rng.normal(truth.game.payoff(i, profile), noise_stddev);
    }
    samples.push_back(std::move(sample));
  }
  return Dataset(truth.game.actions(), std::move(samples), noise_stddev, seed);
}

EmpiricalCounts empirical_counts(const Dataset& dataset) {
  EmpiricalCounts counts(dataset.indexer());
  for (const PlaySample& sample : dataset.samples()) counts.add(sample);
  return counts;
}

}  // namespace qrelearn
