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

#ifndef QRELEARN_EXPERIMENT_H_
#define QRELEARN_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "qrelearn/compiler.h"
#include "qrelearn/estimate.h"
#include "qrelearn/wcsp.h"

namespace qrelearn {

enum class Axis {
  kTrainingSize,  // columns vary M; true λ = learned λ = `lambda`
  kLambda,        // columns vary λ (true = learned); M = `m`
  kWrongLambda,   // columns vary the true λ; learned λ = `learn_lambda`
};

std::string_view axis_name(Axis axis);

struct ExperimentSpec {
  Axis axis = Axis::kTrainingSize;
  int game_count = 10;
  std::vector<double> axis_values;
  int m = 10;
  double lambda = 3.0;
  double learn_lambda = 1.0;
  std::uint64_t seed = 1;
  // Its lambda is overridden per column.
  LearnerConfig learner;
  double data_noise_stddev = 0.7;
  int num_players = 2;
  int num_actions = 2;
  double payoff_lo = 1.0;
  double payoff_hi = 2.0;
  // NaiveNash is skipped unless the games are 2×2.
  std::vector<Method> methods = {Method::kLqre, Method::kNaive,
                                 Method::kNaiveLqre, Method::kNaiveNash};
  bool error_observed_only = false;
  SolverConfig solver;
  int threads = 1;
  // Called after each finished (game, column) cell.
  std::function<void(std::size_t done, std::size_t total)> progress;

  void validate() const;
};

// One learner run. `error` is empty when the run failed.
struct CellResult {
  int game = 0;
  std::size_t column = 0;
  Method method = Method::kLqre;
  std::optional<double> error;
  std::string failure;
};

struct ResultRow {
  Method method = Method::kLqre;
  double axis_value = 0.0;
  double mean_error = 0.0;  // NaN when every run failed
  double standard_error = 0.0;
  int count = 0;
  int failures = 0;
};

struct ResultTable {
  Axis axis = Axis::kTrainingSize;
  std::vector<double> axis_values;
  // Method-major, then column.
  std::vector<ResultRow> rows;
  // Per column, 100·(Naive − LQRE)/Naive; filled on the wrong-λ axis.
  std::vector<double> improvement_pct;
  // Every run, ordered by (game, column, method).
  std::vector<CellResult> cells;

  const ResultRow* find(Method method, std::size_t column) const;
};

ResultTable run_experiment(const ExperimentSpec& spec);

// Presets for the three standard experiment tables: training size, λ and
// mis-specified λ.
ExperimentSpec table_spec(int table, int game_count, std::uint64_t seed);

// Columns method,axis_value,mean_error,stderr; on the wrong-λ axis followed
// by "improvement_pct" rows with an empty stderr.
std::string to_csv(const ResultTable& table);
nlohmann::json to_json(const ResultTable& table);

}  // namespace qrelearn

#endif  // QRELEARN_EXPERIMENT_H_
