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

#ifndef QRELEARN_EQUILIBRIUM_H_
#define QRELEARN_EQUILIBRIUM_H_

#include <vector>

#include "qrelearn/game.h"

namespace qrelearn {

struct LqreConfig {
  double lambda_target = 0.0;
  int path_steps = 50;
  // Weight on the logit response in σ ← (1−d)·σ + d·L(σ).
  double damping = 0.5;
  int max_iters_per_step = 10000;
  double tolerance = 1e-10;

  void validate() const;
};

// Principal-branch logit equilibrium at config.lambda_target, tracked from the
// uniform profile at λ = 0 in path_steps equal increments. Each step runs the
// damped fixed-point iteration to `tolerance`; if a step fails to settle the
// damping is halved (down to 1/64) before a ConvergenceError is raised. The
// final step is polished to extended precision.
MixedProfile solve_lqre(const Game& game, const LqreConfig& config);

// All isolated Nash equilibria of a 2×2 game: pure profiles passing the
// best-response check plus the fully mixed profile from the indifference
// conditions when it is interior.
std::vector<MixedProfile> solve_nash_2x2(const Game& game);

// Largest gain any player can get by switching to a pure action.
double max_deviation_gain(const Game& game, const MixedProfile& profile);

}  // namespace qrelearn

#endif  // QRELEARN_EQUILIBRIUM_H_
