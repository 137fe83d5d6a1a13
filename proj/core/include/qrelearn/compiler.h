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

#ifndef QRELEARN_COMPILER_H_
#define QRELEARN_COMPILER_H_

#include <optional>
#include <span>
#include <vector>

#include "qrelearn/data.h"
#include "qrelearn/estimate.h"
#include "qrelearn/game.h"
#include "qrelearn/wcsp.h"

namespace qrelearn {

struct LearnerConfig {
  double lambda = 3.0;
  // Weight of the rationality terms against the likelihood terms.
  double alpha = 100.0;
  double strategy_step = 0.05;
  double payoff_step = 0.1;
  double noise_stddev = 0.7;
  // Stands in for -log(0) in the strategy likelihood.
  double log_zero_cap = 1e6;
  bool decomposed = true;
  // Off: likelihood terms only.
  bool include_rationality = true;
  // On: rationality terms only for actions that appear in the data.
  bool rationality_for_played_actions_only = false;

  void validate() const;
  // 1 / strategy_step.
  int strategy_divisions() const;
};

// Where the model's quantities live in the compiled instance.
struct VariableLayout {
  ProfileIndexer indexer;
  std::vector<std::vector<VarIndex>> strategy;               // [player][action]
  std::vector<std::vector<std::optional<VarIndex>>> payoff;  // [player][profile]
  std::vector<VarIndex> auxiliary;
  std::vector<double> strategy_grid;
  std::vector<double> payoff_grid;
  double payoff_min = 0.0;
  double payoff_max = 0.0;
};

struct CompiledProblem {
  Wcsp wcsp;
  VariableLayout layout;
};

// −count · ln(value); 0 when count is 0; `cap` when value is 0 and count > 0.
double strategy_ml_cost(int count, double value, double cap);

// Gaussian negative log-likelihood Σ_j (v_j − value)²/(2R²) + ln(R√(2π)).
double payoff_ml_cost(std::span<const double> observations, double value,
                      double noise_stddev);

// The rationality term for one (player, action): α·|exp(λ·EP_k) −
// σ_k·Σ_j exp(λ·EP_j)|, where EP_j sums only over the `included` profiles
// (those whose payoffs are modelled). Evaluation order is fixed so that the
// decomposed compilation reproduces it bit for bit:
//   x  = (Π_{opponents in player order} σ) · u      per included profile
//   EP = running sum of x in row-major profile order (0 when none)
//   Z  = running sum of exp(λ·EP_j) over j
class RationalityTerm {
 public:
  RationalityTerm(ProfileIndexer indexer, int player, int action,
                  std::vector<char> included, double lambda, double alpha);

  // `strategies`: every player's strategy (the player's own is ignored);
  // `payoffs`: the player's payoff per profile, read only where included.
  double cost(double sigma, const std::vector<std::vector<double>>& strategies,
              std::span<const double> payoffs) const;

  // Admissible bound over boxes of the same arguments.
  double lower_bound(Interval sigma,
                     const std::vector<std::vector<Interval>>& strategies,
                     std::span<const Interval> payoffs) const;

  const ProfileIndexer& indexer() const { return indexer_; }
  int player() const { return player_; }
  int action() const { return action_; }
  const std::vector<char>& included() const { return included_; }
  double lambda() const { return lambda_; }
  double alpha() const { return alpha_; }

 private:
  ProfileIndexer indexer_;
  int player_;
  int action_;
  std::vector<char> included_;
  double lambda_;
  double alpha_;
};

double rationality_cost(double sigma,
                        const std::vector<std::vector<double>>& strategies,
                        std::span<const double> payoffs,
                        const RationalityTerm& term);

// Monolithic rationality constraint: the sum of one or more terms of the
// same player (sharing mask, λ and α), in the given order. Scope: σ_i(k) of
// each term, then every opponent strategy variable (player-major,
// action-major), then the included payoff variables of player i in profile
// order. A single term is the per-action constraint; all of a player's terms
// together serve as the bounding surrogate of that player's group.
class RationalityCost final : public CostFunction {
 public:
  explicit RationalityCost(RationalityTerm term);
  explicit RationalityCost(std::vector<RationalityTerm> terms);

  std::string name() const override {
    return terms_.size() == 1 ? "rationality" : "rationality_sum";
  }
  double cost(std::span<const double> values) const override;
  double lower_bound(std::span<const Interval> box) const override;
  // With every strategy fixed and two actions for the player, the exact
  // minimum of the terms plus the listed unary costs (less a rounding
  // margin); otherwise the default.
  double lower_bound(std::span<const Interval> box,
                     std::span<const UnaryView> unaries) const override;
  nlohmann::json parameters() const override;

  const std::vector<RationalityTerm>& terms() const { return terms_; }

 private:
  // Fills every strategy from the scope values (the player's own entries are
  // left at 0) and returns the index of the first payoff slot.
  template <typename T>
  std::size_t unpack_strategies(std::span<const T> values, const T& zero,
                                std::vector<std::vector<T>>& strategies) const;
  std::optional<double> two_action_minimum(
      std::span<const Interval> box, std::span<const UnaryView> unaries) const;

  std::vector<RationalityTerm> terms_;
  std::vector<int> profile_slots_;  // included profiles, in order
};

// Last link of the decomposed rationality chain: α·|E − σ·Z| over the scope
// (σ, E, Z).
class QuantalGapCost final : public CostFunction {
 public:
  explicit QuantalGapCost(double alpha) : alpha_(alpha) {}

  using CostFunction::lower_bound;
  std::string name() const override { return "quantal_gap"; }
  double cost(std::span<const double> values) const override;
  double lower_bound(std::span<const Interval> box) const override;
  nlohmann::json parameters() const override { return {{"alpha", alpha_}}; }

 private:
  double alpha_;
};

// Probability grid {0, ε, …, 1}.
std::vector<double> strategy_grid(const LearnerConfig& config);
// {lo, lo + δ, …} below hi, then hi itself.
std::vector<double> payoff_grid(double lo, double hi, double step);

CompiledProblem build_wcsp(const Dataset& dataset, const LearnerConfig& config);

// Reads the strategy and payoff variables back. Profiles without payoff
// variables get the payoff-range midpoint and are flagged unconstrained.
Estimate extract_estimate(const VariableLayout& layout, const Solution& solution,
                          const Dataset& dataset);

}  // namespace qrelearn

#endif  // QRELEARN_COMPILER_H_
