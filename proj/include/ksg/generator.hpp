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

#ifndef KSG_GENERATOR_HPP
#define KSG_GENERATOR_HPP

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "ksg/model.hpp"

namespace ksg {

struct GenParams
{
    std::size_t state_count = 4;
    std::size_t eve_action_count = 2;
    std::size_t adam_action_count = 2;
    double transition_density = 1.0;  // in (0, 1]
    std::size_t eve_blocks = 1;
    std::size_t adam_blocks = 1;
    std::size_t final_count = 1;
    std::uint64_t seed = 1;
};

/// Throws ValidationError for out-of-range parameters.
void validate_params(const GenParams &params);

/// Random arena with init "s0". Each (state, eve, adam) triple gets, with
/// probability transition_density, a random distribution over at most three
/// states whose weights have denominators <= 8; other triples self-loop.
/// Identical parameters give identical arenas on every platform.
Arena generate_game(const GenParams &params);

/// Deterministic turn-based arena with discrete observations: each state
/// belongs to one player and only that player's action picks the successor.
Arena generate_turn_based(std::size_t states, std::size_t eve_actions, std::size_t adam_actions,
                          std::size_t final_count, std::uint64_t seed);

/// Small portable random source (mt19937_64 with modulo reduction).
class GenRng
{
public:
    explicit GenRng(std::uint64_t seed) : engine_(seed) { }
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// k distinct values of [0, n) in random order.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k);

private:
    std::mt19937_64 engine_;
};

}

#endif
