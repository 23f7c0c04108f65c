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

#ifndef KSG_TESTS_SUPPORT_HPP
#define KSG_TESTS_SUPPORT_HPP

#include <string>

#include "ksg/game_io.hpp"
#include "ksg/model.hpp"

namespace ksg::test {

inline std::string data_path(const std::string &name) { return std::string(KSG_DATA_DIR) + "/" + name; }

inline Arena load_game(const std::string &name) { return parse_game(read_file(data_path(name))); }

inline Rational q(long n, long d = 1) { return make_rational(n, d); }

/// Memoryless strategy playing d forever.
inline FiniteMemoryStrategy constant(const Arena &arena, Player owner, Distribution d)
{
    return FiniteMemoryStrategy::memoryless(owner, std::move(d), arena.obs(owner).size());
}

inline Distribution uniform_all(const Arena &arena, Player p)
{
    std::vector<int> ids;
    for (std::size_t i = 0; i < arena.num_actions(p); ++i) ids.push_back(static_cast<int>(i));
    return Distribution::uniform(ids);
}

}

#endif
