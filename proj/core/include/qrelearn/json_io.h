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

#ifndef QRELEARN_JSON_IO_H_
#define QRELEARN_JSON_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include <nlohmann/json.hpp>

#include "qrelearn/data.h"
#include "qrelearn/estimate.h"
#include "qrelearn/game.h"

namespace qrelearn {

// Malformed input raises ArgumentError naming the offending field.

// {"players": N, "actions": [K_1..K_N], "payoffs": [[...] per player]}
nlohmann::json game_to_json(const Game& game);
Game game_from_json(const nlohmann::json& j);

// [[σ_1 entries], ...]
nlohmann::json profile_to_json(const MixedProfile& profile);
MixedProfile profile_from_json(const nlohmann::json& j);

// Game fields plus "method", "profile", "unconstrained", "payoff_min",
// "payoff_max".
nlohmann::json estimate_to_json(const Estimate& estimate);
Estimate estimate_from_json(const nlohmann::json& j);

// JSON lines: {"players","actions","R","seed","M"}, then {"a": [...],
// "v": [...]} per sample.
void write_dataset(std::ostream& out, const Dataset& dataset);
Dataset read_dataset(std::istream& in);

nlohmann::json read_json_file(const std::filesystem::path& path);
Dataset read_dataset_file(const std::filesystem::path& path);
// "-" writes to standard output.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace qrelearn

#endif  // QRELEARN_JSON_IO_H_
