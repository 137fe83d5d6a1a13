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

#include "qrelearn/learners.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qrelearn/equilibrium.h"
#include "qrelearn/errors.h"

namespace qrelearn {
namespace {

Estimate solve_and_extract(const Dataset& dataset, const LearnerConfig& config,
                           const SolverConfig& solver, Method method) {
  const CompiledProblem problem = build_wcsp(dataset, config);
  const std::optional<Solution> solution = solve(problem.wcsp, solver);
  if (!solution) throw InternalError("compiled WCSP is unsatisfiable");
  if (!solution->optimal) {
    throw SizeError("node limit reached before the optimum was proven");
  }
  Estimate estimate = extract_estimate(problem.layout, *solution, dataset);
  estimate.method = method;
  return estimate;
}

}  // namespace

std::string_view method_name(Method method) {
  switch (method) {
    case Method::kLqre: return "lqre";
    case Method::kNaive: return "naive";
    case Method::kNaiveLqre: return "naive-lqre";
    case Method::kNaiveNash: return "naive-nash";
  }
  throw InternalError("unknown method");
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::kLqre, Method::kNaive, Method::kNaiveLqre,
                   Method::kNaiveNash}) {
    if (method_name(m) == name) return m;
  }
  return std::nullopt;
}

Estimate learn_lqre(const Dataset& dataset, const LearnerConfig& config,
                    const SolverConfig& solver) {
  return solve_and_extract(dataset, config, solver, Method::kLqre);
}

Estimate learn_naive(const Dataset& dataset, const LearnerConfig& config,
                     const SolverConfig& solver) {
  LearnerConfig naive = config;
  naive.include_rationality = false;
  return solve_and_extract(dataset, naive, solver, Method::kNaive);
}

Estimate learn_naive_lqre(const Dataset& dataset, const LearnerConfig& config,
                          const SolverConfig& solver) {
  Estimate estimate = learn_naive(dataset, config, solver);
  LqreConfig lqre;
  lqre.lambda_target = config.lambda;
  estimate.profile = round_to_grid(solve_lqre(estimate.game, lqre),
                                   config.strategy_divisions());
  estimate.method = Method::kNaiveLqre;
  return estimate;
}

Estimate learn_naive_nash(const Dataset& dataset, const LearnerConfig& config,
                          const GroundTruth& truth,
                          const SolverConfig& solver) {
  Estimate estimate = learn_naive(dataset, config, solver);
  estimate.method = Method::kNaiveNash;
  const int divisions = config.strategy_divisions();
  std::optional<double> best_error;
  MixedProfile best;
  for (const MixedProfile& candidate : solve_nash_2x2(estimate.game)) {
    estimate.profile = round_to_grid(candidate, divisions);
    const double e = error(truth, estimate);
    if (!best_error || e < *best_error) {
      best_error = e;
      best = estimate.profile;
    }
  }
  if (!best_error) throw InternalError("2x2 game without a Nash equilibrium");
  estimate.profile = std::move(best);
  return estimate;
}

MixedProfile round_to_grid(const MixedProfile& profile, int divisions) {
  if (divisions < 1) throw ArgumentError("grid divisions must be positive");
  std::vector<std::vector<double>> rounded;
  for (const auto& strategy : profile.strategies()) {
    const std::size_t k = strategy.size();
    std::vector<long> units(k);
    std::vector<double> remainder(k);
    long total = 0;
    for (std::size_t a = 0; a < k; ++a) {
      const double scaled = strategy[a] * divisions;
      units[a] = static_cast<long>(std::floor(scaled));
      remainder[a] = scaled - static_cast<double>(units[a]);
      total += units[a];
    }
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return remainder[a] > remainder[b];
    });
    // The floors sum to at most `divisions`; hand out what is left.
    for (long r = divisions - total, j = 0; r > 0; --r, ++j) ++units[order[j % k]];
    std::vector<double> values(k);
    for (std::size_t a = 0; a < k; ++a) {
      values[a] = static_cast<double>(units[a]) / divisions;
    }
    rounded.push_back(std::move(values));
  }
  return MixedProfile(std::move(rounded));
}

double error(const GroundTruth& truth, const Estimate& estimate,
             bool observed_only) {
  const Game& game = truth.game;
  if (game.actions() != estimate.game.actions() ||
      truth.profile.num_players() != game.num_players() ||
      estimate.profile.num_players() != game.num_players()) {
    throw ArgumentError("truth and estimate shapes differ");
  }
  double sum = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    for (int a = 0; a < game.num_actions(i); ++a) {
      const double d =
          truth.profile.probability(i, a) - estimate.profile.probability(i, a);
      sum += d * d;
    }
  }
  for (int i = 0; i < game.num_players(); ++i) {
    for (std::size_t p = 0; p < game.num_profiles(); ++p) {
      if (observed_only && !estimate.unconstrained.empty() &&
          estimate.unconstrained[i][p]) {
        continue;
      }
      const double d = game.payoff(i, p) - estimate.game.payoff(i, p);
      sum += d * d;
    }
  }
  return std::sqrt(sum);
}

}  // namespace qrelearn
