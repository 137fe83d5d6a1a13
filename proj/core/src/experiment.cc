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

#include "qrelearn/experiment.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "qrelearn/data.h"
#include "qrelearn/equilibrium.h"
#include "qrelearn/errors.h"
#include "qrelearn/learners.h"
#include "qrelearn/rng.h"

namespace qrelearn {
namespace {

struct CellSettings {
  double true_lambda;
  double learn_lambda;
  int m;
};

CellSettings settings(const ExperimentSpec& spec, std::size_t column) {
  const double value = spec.axis_values[column];
  switch (spec.axis) {
    case Axis::kTrainingSize:
      return {spec.lambda, spec.lambda, static_cast<int>(value)};
    case Axis::kLambda:
      return {value, value, spec.m};
    case Axis::kWrongLambda:
      return {value, spec.learn_lambda, spec.m};
  }
  throw InternalError("unknown axis");
}

bool is_2x2(const ExperimentSpec& spec) {
  return spec.num_players == 2 && spec.num_actions == 2;
}

// Runs every method on one (game, column) cell.
std::vector<CellResult> run_cell(const ExperimentSpec& spec,
                                 const std::vector<Method>& methods, int g,
                                 std::size_t column) {
  std::vector<CellResult> results;
  for (Method method : methods) {
    results.push_back({g, column, method, std::nullopt, {}});
  }
  auto fail_all = [&](const std::string& what) {
    for (auto& r : results) r.failure = what;
    return results;
  };

  const CellSettings cell = settings(spec, column);
  std::optional<GroundTruth> truth;
  std::optional<Dataset> dataset;
  try {
    Game game = random_game(spec.num_players, spec.num_actions, spec.payoff_lo,
                            spec.payoff_hi, derive_seed(spec.seed, g, 0));
    LqreConfig lqre;
    lqre.lambda_target = cell.true_lambda;
    MixedProfile profile = solve_lqre(game, lqre);
    truth = GroundTruth{std::move(game), std::move(profile), cell.true_lambda};
    dataset = sample_plays(*truth, cell.m, spec.data_noise_stddev,
                           derive_seed(spec.seed, g, column + 1));
  } catch (const std::exception& e) {
    return fail_all(std::string("ground truth: ") + e.what());
  }

  LearnerConfig config = spec.learner;
  config.lambda = cell.learn_lambda;
  for (auto& r : results) {
    try {
      Estimate estimate;
      switch (r.method) {
        case Method::kLqre:
          estimate = learn_lqre(*dataset, config, spec.solver);
          break;
        case Method::kNaive:
          estimate = learn_naive(*dataset, config, spec.solver);
          break;
        case Method::kNaiveLqre:
          estimate = learn_naive_lqre(*dataset, config, spec.solver);
          break;
        case Method::kNaiveNash:
          estimate = learn_naive_nash(*dataset, config, *truth, spec.solver);
          break;
      }
      r.error = error(*truth, estimate, spec.error_observed_only);
    } catch (const std::exception& e) {
      r.failure = e.what();
    }
  }
  return results;
}

std::string number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

}  // namespace

std::string_view axis_name(Axis axis) {
  switch (axis) {
    case Axis::kTrainingSize: return "training_size";
    case Axis::kLambda: return "lambda";
    case Axis::kWrongLambda: return "wrong_lambda";
  }
  throw InternalError("unknown axis");
}

void ExperimentSpec::validate() const {
  if (game_count < 1) throw ArgumentError("game count must be positive");
  if (axis_values.empty()) throw ArgumentError("no axis values");
  for (double v : axis_values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw ArgumentError("axis values must be finite and non-negative");
    }
    if (axis == Axis::kTrainingSize && (v < 1.0 || v != std::floor(v))) {
      throw ArgumentError("training sizes must be positive integers");
    }
  }
  if (m < 1) throw ArgumentError("training size must be positive");
  if (!(lambda >= 0.0) || !(learn_lambda >= 0.0)) {
    throw ArgumentError("lambda must be non-negative");
  }
  if (!(data_noise_stddev > 0.0)) {
    throw ArgumentError("noise standard deviation must be positive");
  }
  if (num_players < 1 || num_actions < 1) {
    throw ArgumentError("games need players and actions");
  }
  if (!(payoff_lo < payoff_hi)) throw ArgumentError("empty payoff range");
  if (methods.empty()) throw ArgumentError("no methods");
  if (threads < 1) throw ArgumentError("thread count must be positive");
  learner.validate();
}

const ResultRow* ResultTable::find(Method method, std::size_t column) const {
  for (const auto& row : rows) {
    if (row.method == method && column < axis_values.size() &&
        row.axis_value == axis_values[column]) {
      return &row;
    }
  }
  return nullptr;
}

ResultTable run_experiment(const ExperimentSpec& spec) {
  spec.validate();
  std::vector<Method> methods;
  for (Method m : spec.methods) {
    if (m == Method::kNaiveNash && !is_2x2(spec)) continue;
    methods.push_back(m);
  }

  const std::size_t columns = spec.axis_values.size();
  const std::size_t total = static_cast<std::size_t>(spec.game_count) * columns;
  std::vector<std::vector<CellResult>> cells(total);
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t c; (c = next.fetch_add(1)) < total;) {
      cells[c] = run_cell(spec, methods, static_cast<int>(c / columns),
                          c % columns);
      if (spec.progress) {
        std::lock_guard lock(progress_mutex);
        spec.progress(++done, total);
      }
    }
  };
  if (spec.threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < spec.threads; ++t) pool.emplace_back(worker);
  }

  ResultTable table;
  table.axis = spec.axis;
  table.axis_values = spec.axis_values;
  for (auto& cell : cells) {
    for (auto& r : cell) table.cells.push_back(std::move(r));
  }
  for (std::size_t mi = 0; mi < methods.size(); ++mi) {
    for (std::size_t col = 0; col < columns; ++col) {
      ResultRow row;
      row.method = methods[mi];
      row.axis_value = spec.axis_values[col];
      std::vector<double> errors;
      for (std::size_t g = 0; g < static_cast<std::size_t>(spec.game_count); ++g) {
        const CellResult& r = cells[g * columns + col][mi];
        if (r.error) {
          errors.push_back(*r.error);
        } else {
          ++row.failures;
        }
      }
      row.count = static_cast<int>(errors.size());
      if (errors.empty()) {
        row.mean_error = std::numeric_limits<double>::quiet_NaN();
        row.standard_error = std::numeric_limits<double>::quiet_NaN();
      } else {
        double sum = 0.0;
        for (double e : errors) sum += e;
        row.mean_error = sum / errors.size();
        double ss = 0.0;
        for (double e : errors) ss += (e - row.mean_error) * (e - row.mean_error);
        row.standard_error =
            errors.size() > 1
                ? std::sqrt(ss / (errors.size() - 1)) / std::sqrt(errors.size())
                : 0.0;
      }
      table.rows.push_back(row);
    }
  }
  if (spec.axis == Axis::kWrongLambda) {
    for (std::size_t col = 0; col < columns; ++col) {
      const ResultRow* lqre = table.find(Method::kLqre, col);
      const ResultRow* naive = table.find(Method::kNaive, col);
      table.improvement_pct.push_back(
          lqre && naive ? 100.0 * (naive->mean_error - lqre->mean_error) /
                              naive->mean_error
                        : std::numeric_limits<double>::quiet_NaN());
    }
  }
  return table;
}

ExperimentSpec table_spec(int table, int game_count, std::uint64_t seed) {
  ExperimentSpec spec;
  spec.game_count = game_count;
  spec.seed = seed;
  switch (table) {
    case 1:
      spec.axis = Axis::kTrainingSize;
      spec.axis_values = {10, 50, 100};
      spec.lambda = 3.0;
      break;
    case 2:
      spec.axis = Axis::kLambda;
      spec.axis_values = {1, 3, 10};
      spec.m = 10;
      break;
    case 3:
      spec.axis = Axis::kWrongLambda;
      spec.axis_values = {0.5, 1, 1.5, 2};
      spec.learn_lambda = 1.0;
      spec.m = 10;
      spec.methods = {Method::kLqre, Method::kNaive};
      break;
    default:
      throw ArgumentError("table must be 1, 2 or 3");
  }
  return spec;
}

std::string to_csv(const ResultTable& table) {
  std::ostringstream out;
  out << "method,axis_value,mean_error,stderr\n";
  for (const auto& row : table.rows) {
    out << method_name(row.method) << ',' << number(row.axis_value) << ','
        << number(row.mean_error) << ',' << number(row.standard_error) << '\n';
  }
  for (std::size_t col = 0; col < table.improvement_pct.size(); ++col) {
    out << "improvement_pct," << number(table.axis_values[col]) << ','
        << number(table.improvement_pct[col]) << ",\n";
  }
  return out.str();
}

nlohmann::json to_json(const ResultTable& table) {
  auto maybe = [](double v) -> nlohmann::json {
    return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v);
  };
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    rows.push_back({{"method", method_name(row.method)},
                    {"axis_value", row.axis_value},
                    {"mean_error", maybe(row.mean_error)},
                    {"stderr", maybe(row.standard_error)},
                    {"count", row.count},
                    {"failures", row.failures}});
  }
  nlohmann::json failures = nlohmann::json::array();
  for (const auto& cell : table.cells) {
    if (cell.error) continue;
    failures.push_back({{"game", cell.game},
                        {"axis_value", table.axis_values[cell.column]},
                        {"method", method_name(cell.method)},
                        {"reason", cell.failure}});
  }
  nlohmann::json out = {{"axis", axis_name(table.axis)},
                        {"axis_values", table.axis_values},
                        {"rows", rows},
                        {"failures", failures}};
  if (!table.improvement_pct.empty()) {
    nlohmann::json improvement = nlohmann::json::array();
    for (double v : table.improvement_pct) improvement.push_back(maybe(v));
    out["improvement_pct"] = improvement;
  }
  return out;
}

}  // namespace qrelearn
