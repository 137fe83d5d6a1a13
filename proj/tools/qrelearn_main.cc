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


#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qrelearn/compiler.h"
#include "qrelearn/data.h"
#include "qrelearn/equilibrium.h"
#include "qrelearn/errors.h"
#include "qrelearn/experiment.h"
#include "qrelearn/json_io.h"
#include "qrelearn/learners.h"
#include "qrelearn/wcsp.h"

namespace {

using qrelearn::LearnerConfig;

// Flags shared by `learn` and `experiment`.
void add_learner_flags(CLI::App& cmd, LearnerConfig& config) {
  cmd.add_option("--epsilon", config.strategy_step, "Strategy grid step")
      ->capture_default_str();
  cmd.add_option("--delta", config.payoff_step, "Payoff grid step")
      ->capture_default_str();
  cmd.add_option("--alpha", config.alpha, "Rationality weight")
      ->capture_default_str();
  cmd.add_option("--noise", config.noise_stddev,
                 "Payoff noise standard deviation R assumed by the learner")
      ->capture_default_str();
  cmd.add_option("--log-zero-cap", config.log_zero_cap,
                 "Cost standing in for -log(0)")
      ->capture_default_str();
  cmd.add_flag("!--monolithic", config.decomposed,
               "Compile rationality constraints without decomposition");
  cmd.add_flag("--played-actions-only",
               config.rationality_for_played_actions_only,
               "Rationality terms only for actions seen in the data");
}

void add_solver_flags(CLI::App& cmd, qrelearn::SolverConfig& solver) {
  cmd.add_option("--enumeration-cap", solver.enumeration_cap,
                 "Joint-value count below which bounds are exact")
      ->capture_default_str();
  cmd.add_option("--node-limit", solver.node_limit,
                 "Search node limit (0 = unlimited)")
      ->capture_default_str();
}

struct GenGameArgs {
  int players = 2;
  int actions = 2;
  double lo = 1.0;
  double hi = 2.0;
  std::uint64_t seed = 1;
  std::string out = "-";
};

void gen_game(const GenGameArgs& args) {
  const qrelearn::Game game =
      qrelearn::random_game(args.players, args.actions, args.lo, args.hi,
                            args.seed);
  qrelearn::write_text(args.out, qrelearn::game_to_json(game).dump(2) + "\n");
}

struct GenDataArgs {
  std::string game;
  std::string profile;
  double lambda = 3.0;
  int m = 10;
  double noise = 0.7;
  std::uint64_t seed = 1;
  std::string out = "-";
  std::string profile_out;
};

void gen_data(const GenDataArgs& args) {
  qrelearn::Game game =
      qrelearn::game_from_json(qrelearn::read_json_file(args.game));
  qrelearn::MixedProfile profile;
  if (!args.profile.empty()) {
    profile = qrelearn::profile_from_json(qrelearn::read_json_file(args.profile));
    profile.check_compatible(game);
  } else {
    qrelearn::LqreConfig lqre;
    lqre.lambda_target = args.lambda;
    profile = qrelearn::solve_lqre(game, lqre);
  }
  if (!args.profile_out.empty()) {
    qrelearn::write_text(args.profile_out,
                         qrelearn::profile_to_json(profile).dump(2) + "\n");
  }
  const qrelearn::GroundTruth truth{std::move(game), std::move(profile),
                                    args.lambda};
  const qrelearn::Dataset dataset =
      qrelearn::sample_plays(truth, args.m, args.noise, args.seed);
  std::ostringstream out;
  qrelearn::write_dataset(out, dataset);
  qrelearn::write_text(args.out, out.str());
}

struct LearnArgs {
  std::string data;
  std::string method = "lqre";
  LearnerConfig config;
  qrelearn::SolverConfig solver;
  std::string truth_game;
  std::string truth_profile;
  bool error_observed_only = false;
  std::string dump_wcsp;
  std::string out = "-";
};

void learn(const LearnArgs& args) {
  const auto method = qrelearn::parse_method(args.method);
  if (!method) throw qrelearn::ArgumentError("unknown method " + args.method);
  const qrelearn::Dataset dataset = qrelearn::read_dataset_file(args.data);

  std::optional<qrelearn::GroundTruth> truth;
  if (!args.truth_game.empty()) {
    if (args.truth_profile.empty()) {
      throw qrelearn::ArgumentError("--truth-game needs --truth-profile");
    }
    truth = qrelearn::GroundTruth{
        qrelearn::game_from_json(qrelearn::read_json_file(args.truth_game)),
        qrelearn::profile_from_json(
            qrelearn::read_json_file(args.truth_profile)),
        args.config.lambda};
  }

  if (!args.dump_wcsp.empty()) {
    LearnerConfig dump_config = args.config;
    dump_config.include_rationality = *method == qrelearn::Method::kLqre;
    const qrelearn::CompiledProblem problem =
        qrelearn::build_wcsp(dataset, dump_config);
    qrelearn::write_text(args.dump_wcsp,
                         qrelearn::wcsp_to_json(problem.wcsp).dump(2) + "\n");
  }

  qrelearn::Estimate estimate;
  switch (*method) {
    case qrelearn::Method::kLqre:
      estimate = qrelearn::learn_lqre(dataset, args.config, args.solver);
      break;
    case qrelearn::Method::kNaive:
      estimate = qrelearn::learn_naive(dataset, args.config, args.solver);
      break;
    case qrelearn::Method::kNaiveLqre:
      estimate = qrelearn::learn_naive_lqre(dataset, args.config, args.solver);
      break;
    case qrelearn::Method::kNaiveNash:
      if (!truth) {
        throw qrelearn::ArgumentError(
            "naive-nash selects among equilibria by error and needs "
            "--truth-game and --truth-profile");
      }
      estimate =
          qrelearn::learn_naive_nash(dataset, args.config, *truth, args.solver);
      break;
  }

  nlohmann::json j = qrelearn::estimate_to_json(estimate);
  if (truth) {
    j["error"] = qrelearn::error(*truth, estimate, args.error_observed_only);
  }
  qrelearn::write_text(args.out, j.dump(2) + "\n");
}

struct ExperimentArgs {
  int table = 1;
  int games = 10;
  std::uint64_t seed = 1;
  int threads = 1;
  std::optional<int> m;
  std::optional<double> lambda;
  std::optional<double> learn_lambda;
  std::optional<double> data_noise;
  std::vector<double> values;
  std::vector<std::string> methods;
  LearnerConfig config;
  qrelearn::SolverConfig solver;
  bool error_observed_only = false;
  std::string format = "csv";
  std::string out = "-";
  std::string json_out;
  bool quiet = false;
};

void experiment(const ExperimentArgs& args) {
  qrelearn::ExperimentSpec spec =
      qrelearn::table_spec(args.table, args.games, args.seed);
  spec.learner = args.config;
  spec.solver = args.solver;
  spec.threads = args.threads;
  spec.error_observed_only = args.error_observed_only;
  if (args.m) spec.m = *args.m;
  if (args.lambda) spec.lambda = *args.lambda;
  if (args.learn_lambda) spec.learn_lambda = *args.learn_lambda;
  spec.data_noise_stddev = args.data_noise.value_or(args.config.noise_stddev);
  if (!args.values.empty()) spec.axis_values = args.values;
  if (!args.methods.empty()) {
    spec.methods.clear();
    for (const auto& name : args.methods) {
      const auto method = qrelearn::parse_method(name);
      if (!method) throw qrelearn::ArgumentError("unknown method " + name);
      spec.methods.push_back(*method);
    }
  }
  if (!args.quiet) {
    spec.progress = [](std::size_t done, std::size_t total) {
      std::cerr << "\r" << done << "/" << total << " cells" << std::flush;
      if (done == total) std::cerr << "\n";
    };
  }

  const qrelearn::ResultTable table = qrelearn::run_experiment(spec);
  for (const auto& cell : table.cells) {
    if (!cell.error) {
      std::cerr << "warning: game " << cell.game << " column " << cell.column
                << " " << qrelearn::method_name(cell.method)
                << " failed: " << cell.failure << "\n";
    }
  }
  const std::string json_text = qrelearn::to_json(table).dump(2) + "\n";
  qrelearn::write_text(args.out,
                       args.format == "json" ? json_text
                                             : qrelearn::to_csv(table));
  if (!args.json_out.empty()) qrelearn::write_text(args.json_out, json_text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Learn game payoffs and mixed strategies from noisy play"};
  app.require_subcommand(1);

  GenGameArgs game_args;
  auto* game_cmd = app.add_subcommand("gen-game", "Draw a random game");
  game_cmd->add_option("--players", game_args.players)->capture_default_str();
  game_cmd->add_option("--actions", game_args.actions)->capture_default_str();
  game_cmd->add_option("--lo", game_args.lo, "Lowest payoff")
      ->capture_default_str();
  game_cmd->add_option("--hi", game_args.hi, "Highest payoff")
      ->capture_default_str();
  game_cmd->add_option("--seed", game_args.seed)->capture_default_str();
  game_cmd->add_option("-o,--out", game_args.out)->capture_default_str();

  GenDataArgs data_args;
  auto* data_cmd =
      app.add_subcommand("gen-data", "Sample noisy plays of a game");
  data_cmd->add_option("--game", data_args.game, "Game JSON")->required();
  data_cmd->add_option("--profile", data_args.profile,
                       "Mixed profile JSON (default: the logit equilibrium)");
  data_cmd->add_option("--lambda", data_args.lambda,
                       "Rationality of the generating logit equilibrium")
      ->capture_default_str();
  data_cmd->add_option("-M,--samples", data_args.m, "Number of plays")
      ->capture_default_str();
  data_cmd->add_option("-R,--noise", data_args.noise,
                       "Payoff noise standard deviation")
      ->capture_default_str();
  data_cmd->add_option("--seed", data_args.seed)->capture_default_str();
  data_cmd->add_option("-o,--out", data_args.out)->capture_default_str();
  data_cmd->add_option("--profile-out", data_args.profile_out,
                       "Also write the generating profile here");

  LearnArgs learn_args;
  auto* learn_cmd = app.add_subcommand("learn", "Estimate a game from data");
  learn_cmd->add_option("--data", learn_args.data, "Dataset JSONL")
      ->required();
  learn_cmd->add_option("--method", learn_args.method)
      ->check(CLI::IsMember({"lqre", "naive", "naive-lqre", "naive-nash"}))
      ->capture_default_str();
  learn_cmd->add_option("--lambda", learn_args.config.lambda)
      ->capture_default_str();
  add_learner_flags(*learn_cmd, learn_args.config);
  add_solver_flags(*learn_cmd, learn_args.solver);
  learn_cmd->add_option("--truth-game", learn_args.truth_game,
                        "True game JSON; adds the error to the output");
  learn_cmd->add_option("--truth-profile", learn_args.truth_profile,
                        "True profile JSON");
  learn_cmd->add_flag("--error-observed-only", learn_args.error_observed_only,
                      "Leave unobserved payoff entries out of the error");
  learn_cmd->add_option("--dump-wcsp", learn_args.dump_wcsp,
                        "Write the compiled instance as JSON");
  learn_cmd->add_option("-o,--out", learn_args.out)->capture_default_str();

  ExperimentArgs exp_args;
  auto* exp_cmd = app.add_subcommand(
      "experiment", "Run one of the error tables over random games");
  exp_cmd->add_option("--table", exp_args.table)
      ->check(CLI::IsMember({1, 2, 3}))
      ->capture_default_str();
  exp_cmd->add_option("--games", exp_args.games)->capture_default_str();
  exp_cmd->add_option("--seed", exp_args.seed)->capture_default_str();
  exp_cmd->add_option("--threads", exp_args.threads)->capture_default_str();
  exp_cmd->add_option("-M,--samples", exp_args.m,
                      "Training size (tables 2 and 3)");
  exp_cmd->add_option("--lambda", exp_args.lambda,
                      "True and learned rationality (table 1)");
  exp_cmd->add_option("--learn-lambda", exp_args.learn_lambda,
                      "Learned rationality (table 3)");
  exp_cmd->add_option("--data-noise", exp_args.data_noise,
                      "Noise of the generated data (default: --noise)");
  exp_cmd->add_option("--values", exp_args.values,
                      "Override the table's column values");
  exp_cmd->add_option("--methods", exp_args.methods, "Subset of methods");
  add_learner_flags(*exp_cmd, exp_args.config);
  add_solver_flags(*exp_cmd, exp_args.solver);
  exp_cmd->add_flag("--error-observed-only", exp_args.error_observed_only,
                    "Leave unobserved payoff entries out of the error");
  exp_cmd->add_option("--format", exp_args.format)
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  exp_cmd->add_option("-o,--out", exp_args.out)->capture_default_str();
  exp_cmd->add_option("--json-out", exp_args.json_out,
                      "Also write the JSON table here");
  exp_cmd->add_flag("-q,--quiet", exp_args.quiet, "No progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and version requests exit 0; usage errors exit 2.
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*game_cmd) gen_game(game_args);
    if (*data_cmd) gen_data(data_args);
    if (*learn_cmd) learn(learn_args);
    if (*exp_cmd) experiment(exp_args);
  } catch (const qrelearn::ArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
