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

#include "ksg/generator.hpp"

#include <algorithm>
#include <numeric>

#include "ksg/errors.hpp"

namespace ksg {

std::vector<std::size_t> GenRng::sample(std::size_t n, std::size_t k)
{
    std::vector<std::size_t> v(n);
    std::iota(v.begin(), v.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(v[i], v[i + below(n - i)]);
    v.resize(k);
    return v;
}

void validate_params(const GenParams &p)
{
    if (p.state_count < 1 || p.eve_action_count < 1 || p.adam_action_count < 1)
        throw ValidationError("counts must be at least 1");
    if (!(p.transition_density > 0.0 && p.transition_density <= 1.0))
        throw ValidationError("transition density must lie in (0, 1]");
    if (p.eve_blocks < 1 || p.eve_blocks > p.state_count || p.adam_blocks < 1 ||
        p.adam_blocks > p.state_count)
        throw ValidationError("observation blocks must lie in [1, state count]");
    if (p.final_count > p.state_count) throw ValidationError("more final states than states");
}

namespace {

std::vector<std::string> names(const char *prefix, std::size_t n)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

ObsPartition random_partition(GenRng &rng, std::size_t states, std::size_t blocks)
{
    auto order = rng.sample(states, states);
    std::vector<BlockId> raw(states);
    for (std::size_t i = 0; i < states; ++i)
        raw[order[i]] = static_cast<BlockId>(i < blocks ? i : rng.below(blocks));
    // Renumber blocks by their smallest state.
    std::vector<BlockId> remap(blocks, -1);
    BlockId next = 0;
    for (auto &b : raw) {
        auto &r = remap[static_cast<std::size_t>(b)];
        if (r < 0) r = next++;
        b = r;
    }
    return ObsPartition::from_block_of(std::move(raw), blocks);
}

Distribution random_distribution(GenRng &rng, std::size_t states)
{
    const std::size_t k = 1 + rng.below(std::min<std::size_t>(3, states));
    auto support = rng.sample(states, k);
    const std::uint64_t den = k + rng.below(8 - k + 1);
    // k - 1 distinct cut points in [1, den - 1] split den into positive parts.
    auto cuts = rng.sample(static_cast<std::size_t>(den - 1), k - 1);
    for (auto &c : cuts) ++c;
    std::sort(cuts.begin(), cuts.end());
    cuts.push_back(static_cast<std::size_t>(den));
    std::vector<Distribution::Entry> entries;
    std::size_t prev = 0;
    for (std::size_t i = 0; i < k; ++i) {
        Rational w(static_cast<unsigned long>(cuts[i] - prev), static_cast<unsigned long>(den));
        w.canonicalize();
        entries.emplace_back(static_cast<int>(support[i]), w);
        prev = cuts[i];
    }
    return Distribution(std::move(entries));
}

}

Arena generate_game(const GenParams &params)
{
    validate_params(params);
    GenRng rng(params.seed);
    Arena a;
    const auto n = params.state_count;
    a.states = names("s", n);
    a.eve_actions = names("a", params.eve_action_count);
    a.adam_actions = names("x", params.adam_action_count);
    a.init = 0;
    a.final_states.assign(n, 0);
    for (auto f : rng.sample(n, params.final_count)) a.final_states[f] = 1;
    a.eve_obs = random_partition(rng, n, params.eve_blocks);
    a.adam_obs = random_partition(rng, n, params.adam_blocks);
    a.reset_transitions();
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t e = 0; e < params.eve_action_count; ++e)
            for (std::size_t x = 0; x < params.adam_action_count; ++x) {
                const bool drawn = params.transition_density >= 1.0 || rng.unit() < params.transition_density;
                a.delta(static_cast<StateId>(s), static_cast<ActionId>(e), static_cast<ActionId>(x)) =
                    drawn ? random_distribution(rng, n) : Distribution::point(static_cast<int>(s));
            }
    validate_arena(a);
    return a;
}

Arena generate_turn_based(std::size_t states, std::size_t eve_actions, std::size_t adam_actions,
                          std::size_t final_count, std::uint64_t seed)
{
    GenRng rng(seed);
    Arena a;
    a.states = names("s", states);
    a.eve_actions = names("a", eve_actions);
    a.adam_actions = names("x", adam_actions);
    a.init = 0;
    a.final_states.assign(states, 0);
    for (auto f : rng.sample(states, final_count)) a.final_states[f] = 1;
    a.eve_obs = ObsPartition::discrete(states);
    a.adam_obs = ObsPartition::discrete(states);
    a.reset_transitions();
    for (std::size_t s = 0; s < states; ++s) {
        const bool eve_owns = rng.below(2) == 0;
        const auto owned = eve_owns ? eve_actions : adam_actions;
        std::vector<int> succ(owned);
        for (auto &t : succ) t = static_cast<int>(rng.below(states));
        for (std::size_t e = 0; e < eve_actions; ++e)
            for (std::size_t x = 0; x < adam_actions; ++x)
                a.delta(static_cast<StateId>(s), static_cast<ActionId>(e), static_cast<ActionId>(x)) =
                    Distribution::point(succ[eve_owns ? e : x]);
    }
    validate_arena(a);
    return a;
}

}
