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

#include "ksg/model.hpp"

#include <algorithm>
#include <map>

#include "ksg/errors.hpp"

namespace ksg {

std::string_view to_string(Player p)
{
    return p == Player::Eve ? "eve" : "adam";
}

std::string_view to_string(Objective o)
{
    switch (o) {
    case Objective::Reachability: return "reach";
    case Objective::Safety: return "safety";
    case Objective::Buchi: return "buchi";
    case Objective::CoBuchi: return "cobuchi";
    }
    return "?";
}

Objective parse_objective(std::string_view text)
{
    if (text == "reach" || text == "reachability") return Objective::Reachability;
    if (text == "safety") return Objective::Safety;
    if (text == "buchi") return Objective::Buchi;
    if (text == "cobuchi" || text == "co-buchi") return Objective::CoBuchi;
    throw ValidationError("unknown objective \"" + std::string(text) + "\"");
}

Distribution::Distribution(std::vector<Entry> entries)
{
    std::sort(entries.begin(), entries.end(),
              [](const Entry &a, const Entry &b) { return a.first < b.first; });
    for (auto &e : entries) {
        if (!entries_.empty() && entries_.back().first == e.first)
            entries_.back().second += e.second;
        else
            entries_.push_back(std::move(e));
    }
}

Distribution Distribution::point(int id)
{
    Distribution d;
    d.entries_.emplace_back(id, Rational(1));
    return d;
}

Distribution Distribution::uniform(const std::vector<int> &ids)
{
    std::vector<Entry> e;
    Rational w(1, static_cast<unsigned long>(ids.size()));
    w.canonicalize();
    for (int id : ids) e.emplace_back(id, w);
    return Distribution(std::move(e));
}

std::vector<int> Distribution::support() const
{
    std::vector<int> out;
    out.reserve(entries_.size());
    for (const auto &e : entries_) out.push_back(e.first);
    return out;
}

Rational Distribution::weight(int id) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), id,
                               [](const Entry &e, int v) { return e.first < v; });
    if (it != entries_.end() && it->first == id) return it->second;
    return Rational(0);
}

bool Distribution::is_valid() const
{
    if (entries_.empty()) return false;
    Rational sum(0);
    for (const auto &e : entries_) {
        if (e.second <= 0) return false;
        sum += e.second;
    }
    return sum == 1;
}

ObsPartition ObsPartition::discrete(std::size_t states)
{
    std::vector<BlockId> b(states);
    for (std::size_t i = 0; i < states; ++i) b[i] = static_cast<BlockId>(i);
    return from_block_of(std::move(b), states);
}

ObsPartition ObsPartition::single(std::size_t states)
{
    return from_block_of(std::vector<BlockId>(states, 0), states ? 1 : 0);
}

ObsPartition ObsPartition::from_block_of(std::vector<BlockId> block_of, std::size_t block_count)
{
    ObsPartition p;
    p.blocks.resize(block_count);
    for (std::size_t s = 0; s < block_of.size(); ++s)
        p.blocks[static_cast<std::size_t>(block_of[s])].push_back(static_cast<StateId>(s));
    p.block_of = std::move(block_of);
    return p;
}

StateSet Arena::final_set() const
{
    StateSet f(num_states());
    for (std::size_t s = 0; s < num_states(); ++s)
        if (final_states[s]) f.insert(s);
    return f;
}

int Arena::state_index(std::string_view name) const
{
    auto it = std::find(states.begin(), states.end(), name);
    return it == states.end() ? -1 : static_cast<int>(it - states.begin());
}

int Arena::action_index(Player p, std::string_view name) const
{
    const auto &acts = actions(p);
    auto it = std::find(acts.begin(), acts.end(), name);
    return it == acts.end() ? -1 : static_cast<int>(it - acts.begin());
}

namespace {

void validate_partition(const Arena &arena, Player p, bool strict)
{
    const auto &obs = arena.obs(p);
    const std::string who(to_string(p));
    if (obs.block_of.size() != arena.num_states())
        throw ValidationError(who + "_obs does not cover every state");
    std::vector<int> seen(arena.num_states(), 0);
    for (std::size_t b = 0; b < obs.blocks.size(); ++b) {
        if (strict && obs.blocks[b].empty())
            throw ValidationError(who + "_obs block " + std::to_string(b) + " is empty");
        for (StateId s : obs.blocks[b]) {
            if (s < 0 || static_cast<std::size_t>(s) >= arena.num_states())
                throw ValidationError(who + "_obs names an unknown state");
            if (seen[static_cast<std::size_t>(s)]++)
                throw ValidationError(who + "_obs is not a partition: state \"" +
                                      arena.states[static_cast<std::size_t>(s)] +
                                      "\" appears twice");
            if (obs.block_of[static_cast<std::size_t>(s)] != static_cast<BlockId>(b))
                throw ValidationError(who + "_obs block index mismatch");
        }
    }
    for (std::size_t s = 0; s < arena.num_states(); ++s)
        if (!seen[s])
            throw ValidationError(who + "_obs is not a partition: state \"" + arena.states[s] +
                                  "\" is in no block");
}

}

void validate_arena(const Arena &arena, bool strict)
{
    if (arena.states.empty()) throw ValidationError("no states");
    if (arena.eve_actions.empty()) throw ValidationError("no eve actions");
    if (arena.adam_actions.empty()) throw ValidationError("no adam actions");
    if (arena.init < 0 || static_cast<std::size_t>(arena.init) >= arena.num_states())
        throw ValidationError("init is not a state");
    if (arena.final_states.size() != arena.num_states())
        throw ValidationError("final set does not match states");
    validate_partition(arena, Player::Eve, strict);
    validate_partition(arena, Player::Adam, strict);
    if (arena.transitions.size() !=
        arena.num_states() * arena.eve_actions.size() * arena.adam_actions.size())
        throw ValidationError("transition table has the wrong size");
    for (std::size_t s = 0; s < arena.num_states(); ++s)
        for (std::size_t e = 0; e < arena.eve_actions.size(); ++e)
            for (std::size_t a = 0; a < arena.adam_actions.size(); ++a) {
                const auto &d = arena.delta(static_cast<StateId>(s), static_cast<ActionId>(e),
                                            static_cast<ActionId>(a));
                const std::string key = "(" + arena.states[s] + ", " + arena.eve_actions[e] +
                                        ", " + arena.adam_actions[a] + ")";
                if (d.empty()) throw ValidationError("delta not total: no transition for " + key);
                for (const auto &[t, w] : d.entries())
                    if (t < 0 || static_cast<std::size_t>(t) >= arena.num_states())
                        throw ValidationError("transition " + key + " names an unknown state");
                if (!d.is_valid())
                    throw ValidationError("distribution for " + key +
                                          " must have positive weights summing to 1");
            }
}

FiniteMemoryStrategy FiniteMemoryStrategy::memoryless(Player owner, Distribution d,
                                                      std::size_t blocks)
{
    FiniteMemoryStrategy s;
    s.owner = owner;
    s.memory = {"m0"};
    s.init = 0;
    s.move = {std::move(d)};
    s.update = {std::vector<MemoryId>(blocks, 0)};
    return s;
}

void validate_strategy(const Arena &arena, Player owner, const FiniteMemoryStrategy &strat)
{
    if (strat.owner != owner)
        throw ValidationError("strategy owner is " + std::string(to_string(strat.owner)) +
                              ", expected " + std::string(to_string(owner)));
    const auto m = strat.memory.size();
    if (m == 0) throw ValidationError("strategy has no memory states");
    if (strat.init < 0 || static_cast<std::size_t>(strat.init) >= m)
        throw ValidationError("init memory is not a memory state");
    if (strat.move.size() != m) throw ValidationError("move is not total over memory");
    if (strat.update.size() != m) throw ValidationError("update is not total over memory");
    const auto actions = arena.num_actions(owner);
    const auto blocks = arena.obs(owner).size();
    for (std::size_t i = 0; i < m; ++i) {
        const auto &name = strat.memory[i];
        for (const auto &[act, w] : strat.move[i].entries())
            if (act < 0 || static_cast<std::size_t>(act) >= actions)
                throw ValidationError("move[" + name + "] uses an action outside the " +
                                      std::string(to_string(owner)) + " alphabet");
        if (!strat.move[i].is_valid())
            throw ValidationError("move[" + name + "] is not a distribution");
        if (strat.update[i].size() != blocks)
            throw ValidationError("update[" + name + "] is not keyed by every " +
                                  std::string(to_string(owner)) + " observation block");
        for (std::size_t b = 0; b < blocks; ++b) {
            auto next = strat.update[i][b];
            if (next < 0 || static_cast<std::size_t>(next) >= m)
                throw ValidationError("update[" + name + "][" + std::to_string(b) +
                                      "] is not a memory state");
        }
    }
}

Distribution step_distribution(const Arena &arena, StateId s, const Distribution &de,
                               const Distribution &da)
{
    std::map<int, Rational> acc;
    for (const auto &[e, we] : de.entries())
        for (const auto &[a, wa] : da.entries()) {
            Rational w = we * wa;
            for (const auto &[t, wt] : arena.delta(s, e, a).entries()) acc[t] += w * wt;
        }
    std::vector<Distribution::Entry> out;
    for (auto &[t, w] : acc)
        if (w > 0) out.emplace_back(t, std::move(w));
    return Distribution(std::move(out));
}

StateSet successors(const Arena &arena, StateId s, ActionId e)
{
    StateSet out(arena.num_states());
    for (std::size_t a = 0; a < arena.adam_actions.size(); ++a)
        for (const auto &entry : arena.delta(s, e, static_cast<ActionId>(a)).entries())
            out.insert(static_cast<std::size_t>(entry.first));
    return out;
}

bool is_partial_play(const Arena &arena, const Play &play)
{
    for (std::size_t i = 0; i + 1 < play.size(); ++i) {
        bool ok = false;
        for (std::size_t e = 0; e < arena.eve_actions.size() && !ok; ++e)
            ok = successors(arena, play[i], static_cast<ActionId>(e))
                     .contains(static_cast<std::size_t>(play[i + 1]));
        if (!ok) return false;
    }
    return true;
}

}
