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


#include "qrelearn/json_io.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "qrelearn/equilibrium.h"
#include "qrelearn/errors.h"
#include "qrelearn/learners.h"
#include "qrelearn/rng.h"

namespace qrelearn {
namespace {

using nlohmann::json;

json reparse(const json& j) { return json::parse(j.dump()); }

std::string dataset_text(const Dataset& dataset) {
  std::ostringstream out;
  write_dataset(out, dataset);
  return out.str();
}

Dataset dataset_from(const std::string& text) {
  std::istringstream in(text);
  return read_dataset(in);
}

TEST(JsonIoTest, GameRoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const int players = 2 + static_cast<int>(seed % 2);
    const Game game = random_game(players, 2 + static_cast<int>(seed % 3) / 2,
                                  -3.0, 7.0, seed);
    EXPECT_EQ(game_from_json(reparse(game_to_json(game))), game);
  }
  const json j = game_to_json(Game({2, 3}, {{1, 2, 3, 4, 5, 6}, {6, 5, 4, 3, 2, 1}}));
  EXPECT_EQ(j["players"], 2);
  EXPECT_EQ(j["actions"], json({2, 3}));
}

TEST(JsonIoTest, ProfileAndEstimateRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game game = random_game(2, 2, 1.0, 2.0, seed);
    LqreConfig config;
    config.lambda_target = 3.0;
    const MixedProfile profile = solve_lqre(game, config);
    EXPECT_EQ(profile_from_json(reparse(profile_to_json(profile))), profile);

    Estimate estimate;
    estimate.method = static_cast<Method>(seed % 4);
    estimate.game = game;
    estimate.profile = round_to_grid(profile, 20);
    estimate.unconstrained = {{true, false, false, true}, {false, false, true, false}};
    estimate.payoff_min = 1.0 + 0.01 * static_cast<double>(seed);
    estimate.payoff_max = 2.0;
    EXPECT_EQ(estimate_from_json(reparse(estimate_to_json(estimate))), estimate);
  }
}

TEST(JsonIoTest, DatasetRoundTrip) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Game game = random_game(2, 2, 1.0, 2.0, seed);
    const GroundTruth truth{game, MixedProfile::uniform({2, 2}), 0.0};
    const Dataset data = sample_plays(truth, 1 + static_cast<int>(seed % 7), 0.7, seed);
    const std::string text = dataset_text(data);
    EXPECT_EQ(dataset_from(text), data);
    // One header line plus one line per sample.
    EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
              data.size() + 1);
  }
}

TEST(JsonIoTest, MalformedGameThrows) {
  const json good = game_to_json(Game({2, 2}, {{1, 2, 3, 4}, {4, 3, 2, 1}}));
  json j = good;
  j.erase("payoffs");
  EXPECT_THROW(game_from_json(j), ArgumentError);
  j = good;
  j["actions"] = "two";
  EXPECT_THROW(game_from_json(j), ArgumentError);
  j = good;
  j["payoffs"][0] = json({1, 2, 3});
  EXPECT_THROW(game_from_json(j), ArgumentError);
  j = good;
  j["players"] = 3;
  EXPECT_THROW(game_from_json(j), ArgumentError);
  j = good;
  j["payoffs"][1][2] = "x";
  EXPECT_THROW(game_from_json(j), ArgumentError);
  EXPECT_THROW(game_from_json(json::array()), ArgumentError);
}

TEST(JsonIoTest, MalformedProfileThrows) {
  EXPECT_THROW(profile_from_json(json({{0.5, 0.6}, {0.5, 0.5}})), ArgumentError);
  EXPECT_THROW(profile_from_json(json({{"a", 1}})), ArgumentError);
  EXPECT_THROW(profile_from_json(json(3)), ArgumentError);
}

TEST(JsonIoTest, MalformedDatasetThrows) {
  const std::string header =
      R"({"players":2,"actions":[2,2],"R":0.7,"seed":1,"M":2})"
      "\n";
  const std::string sample = R"({"a":[0,1],"v":[1.5,1.6]})"
                             "\n";
  EXPECT_NO_THROW(dataset_from(header + sample + sample));
  // M disagrees with the number of sample lines.
  EXPECT_THROW(dataset_from(header + sample), ArgumentError);
  EXPECT_THROW(dataset_from(header + sample + sample + sample), ArgumentError);
  EXPECT_THROW(dataset_from(""), ArgumentError);
  EXPECT_THROW(dataset_from(header + sample + "{not json}\n"), ArgumentError);
  EXPECT_THROW(dataset_from(header + sample + R"({"a":[0,2],"v":[1,1]})" "\n"),
               ArgumentError);
  EXPECT_THROW(dataset_from(header + sample + R"({"a":[0,1],"v":[1]})" "\n"),
               ArgumentError);
  EXPECT_THROW(dataset_from(header + sample + R"({"v":[1,1]})" "\n"), ArgumentError);
  const std::string bad_noise =
      R"({"players":2,"actions":[2,2],"R":-1,"seed":1,"M":0})"
      "\n";
  EXPECT_THROW(dataset_from(bad_noise), ArgumentError);
}

TEST(JsonIoTest, FilesRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "qrelearn_json_io_test";
  std::filesystem::create_directories(dir);
  const Game game = random_game(2, 2, 1.0, 2.0, 3);
  const GroundTruth truth{game, MixedProfile::uniform({2, 2}), 0.0};
  const Dataset data = sample_plays(truth, 5, 0.7, 3);
  write_text(dir / "game.json", game_to_json(game).dump(2));
  write_text(dir / "data.jsonl", dataset_text(data));
  EXPECT_EQ(game_from_json(read_json_file(dir / "game.json")), game);
  EXPECT_EQ(read_dataset_file(dir / "data.jsonl"), data);
  {
    std::ofstream out(dir / "broken.json");
    out << "{\"players\": ";
  }
  EXPECT_THROW(read_json_file(dir / "broken.json"), ArgumentError);
  EXPECT_THROW(read_json_file(dir / "missing.json"), ArgumentError);
  EXPECT_THROW(read_dataset_file(dir / "missing.jsonl"), ArgumentError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qrelearn
