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

#ifndef QRELEARN_LEARNERS_H_
#define QRELEARN_LEARNERS_H_

#include <vector>

#include "qrelearn/compiler.h"
#include "qrelearn/data.h"
#include "qrelearn/estimate.h"
#include "qrelearn/wcsp.h"

namespace qrelearn {

// Compiles the dataset, solves the WCSP exactly and extracts the estimate.
// All learners throw SizeError if the solver's node limit stops the search
// before optimality is proven.
Estimate learn_lqre(const Dataset& dataset, const LearnerConfig& config,
                    const SolverConfig& solver = {});

// The same WCSP without rationality terms: grid maximum likelihood for
// strategies and payoffs separately.
Estimate learn_naive(const Dataset& dataset, const LearnerConfig& config,
                     const SolverConfig& solver = {});

// Naive payoffs; the profile is their λ-LQRE rounded to the strategy grid.
Estimate learn_naive_lqre(const Dataset& dataset, const LearnerConfig& config,
                          const SolverConfig& solver = {});

// Naive payoffs; among the Nash equilibria of that 2×2 game, the one (after
// grid rounding) closest to the truth, hence the truth argument.
Estimate learn_naive_nash(const Dataset& dataset, const LearnerConfig& config,
                          const GroundTruth& truth,
                          const SolverConfig& solver = {});

// Rounds each strategy to multiples of 1/divisions: floors, then hands the
// remaining units to the largest fractional parts (lower action on ties).
MixedProfile round_to_grid(const MixedProfile& profile, int divisions);

// Euclidean distance between the concatenated (strategies, payoffs) vectors.
// With `observed_only`, unconstrained payoff entries are left out.
double error(const GroundTruth& truth, const Estimate& estimate,
             bool observed_only = false);

}  // namespace qrelearn

#endif  // QRELEARN_LEARNERS_H_
