/*
 * Copyright 2026 The ksg Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef KSG_GAME_IO_HPP
#define KSG_GAME_IO_HPP

#include <string>
#include <string_view>

#include <json.hpp>

#include "ksg/model.hpp"

namespace ksg {

using Json = nlohmann::ordered_json;

/// Parses and validates a game document. Throws SchemaError for malformed
/// documents and ValidationError for semantically invalid games.
Arena parse_game(std::string_view text);
Arena game_from_json(const Json &doc);

Json game_to_json(const Arena &arena);
std::string serialize_game(const Arena &arena);

/// Strategy documents refer to actions and observation blocks of the arena.
FiniteMemoryStrategy parse_strategy(const Arena &arena, std::string_view text);
FiniteMemoryStrategy strategy_from_json(const Arena &arena, const Json &doc);

Json strategy_to_json(const Arena &arena, const FiniteMemoryStrategy &strat);
std::string serialize_strategy(const Arena &arena, const FiniteMemoryStrategy &strat);

std::string read_file(const std::string &path);
/// Writes through a temporary file and a rename.
void write_file_atomic(const std::string &path, const std::string &content);

}

#endif
