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

#ifndef QRELEARN_ESTIMATE_H_
#define QRELEARN_ESTIMATE_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qrelearn/game.h"

namespace qrelearn {

enum class Method { kLqre, kNaive, kNaiveLqre, kNaiveNash };

std::string_view method_name(Method method);
std::optional<Method> parse_method(std::string_view name);

// A learner's output: payoffs on the payoff grid and a profile on the
// strategy grid. Payoff entries the learner had no data for hold the midpoint
// of the payoff range and are flagged unconstrained.
struct Estimate {
  Method method = Method::kLqre;
  Game game;
  std::vector<std::vector<bool>> unconstrained;  // [player][profile]
  MixedProfile profile;
  double payoff_min = 0.0;
  double payoff_max = 0.0;

  bool operator==(const Estimate&) const = default;
};

}  // namespace qrelearn

#endif  // QRELEARN_ESTIMATE_H_
