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

#include <fstream>
#include <iostream>
#include <sstream>
#include <utility>

#include "qrelearn/errors.h"

namespace qrelearn {
namespace {

using nlohmann::json;

template <typename T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ArgumentError(std::string("missing field \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ArgumentError(std::string("malformed field \"") + key + "\"");
  }
}

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ArgumentError(what + ": " + e.what());
  }
}

}  // namespace

json game_to_json(const Game& game) {
  return {{"players", game.num_players()},
          {"actions", game.actions()},
          {"payoffs", game.all_payoffs()}};
}

Game game_from_json(const json& j) {
  const auto players = field<int>(j, "players");
  auto actions = field<std::vector<int>>(j, "actions");
  if (players != static_cast<int>(actions.size())) {
    throw ArgumentError("\"players\" does not match \"actions\"");
  }
  return Game(std::move(actions),
              field<std::vector<std::vector<double>>>(j, "payoffs"));
}

json profile_to_json(const MixedProfile& profile) {
  return profile.strategies();
}

MixedProfile profile_from_json(const json& j) {
  try {
    return MixedProfile(j.get<std::vector<std::vector<double>>>());
  } catch (const json::exception&) {
    throw ArgumentError("a profile is a list of probability lists");
  }
}

json estimate_to_json(const Estimate& estimate) {
  json j = game_to_json(estimate.game);
  j["method"] = method_name(estimate.method);
  j["profile"] = profile_to_json(estimate.profile);
  j["unconstrained"] = estimate.unconstrained;
  j["payoff_min"] = estimate.payoff_min;
  j["payoff_max"] = estimate.payoff_max;
  return j;
}

Estimate estimate_from_json(const json& j) {
  Estimate estimate;
  const auto method = parse_method(field<std::string>(j, "method"));
  if (!method) throw ArgumentError("unknown method");
  estimate.method = *method;
  estimate.game = game_from_json(j);
  estimate.profile = profile_from_json(j.at("profile"));
  estimate.profile.check_compatible(estimate.game);
  estimate.unconstrained =
      field<std::vector<std::vector<bool>>>(j, "unconstrained");
  if (estimate.unconstrained.size() !=
      static_cast<std::size_t>(estimate.game.num_players())) {
    throw ArgumentError("\"unconstrained\" has the wrong shape");
  }
  for (const auto& row : estimate.unconstrained) {
    if (row.size() != estimate.game.num_profiles()) {
      throw ArgumentError("\"unconstrained\" has the wrong shape");
    }
  }
  estimate.payoff_min = field<double>(j, "payoff_min");
  estimate.payoff_max = field<double>(j, "payoff_max");
  return estimate;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
  out << json{{"players", dataset.num_players()},
              {"actions", dataset.actions()},
              {"R", dataset.noise_stddev()},
              {"seed", dataset.generator_seed()},
              {"M", dataset.size()}}
             .dump()
      << '\n';
  for (const auto& sample : dataset.samples()) {
    out << json{{"a", sample.joint_action}, {"v", sample.observed_payoffs}}
               .dump()
        << '\n';
  }
}

Dataset read_dataset(std::istream& in) {
  std::string line;
  std::size_t line_number = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_number;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ArgumentError("dataset: missing header");
  const json header = parse(line, "dataset header");
  const auto players = field<int>(header, "players");
  auto actions = field<std::vector<int>>(header, "actions");
  if (players != static_cast<int>(actions.size())) {
    throw ArgumentError("dataset: \"players\" does not match \"actions\"");
  }
  const auto noise = field<double>(header, "R");
  const auto seed = field<std::uint64_t>(header, "seed");
  const auto m = field<std::size_t>(header, "M");
  std::vector<PlaySample> samples;
  while (next_line()) {
    const json j = parse(line, "dataset line " + std::to_string(line_number));
    samples.push_back({field<std::vector<int>>(j, "a"),
                       field<std::vector<double>>(j, "v")});
  }
  if (samples.size() != m) {
    throw ArgumentError("dataset: header says M=" + std::to_string(m) +
                        " but has " + std::to_string(samples.size()) +
                        " samples");
  }
  return Dataset(std::move(actions), std::move(samples), noise, seed);
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

Dataset read_dataset_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open " + path.string());
  return read_dataset(in);
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << text;
}

}  // namespace qrelearn
