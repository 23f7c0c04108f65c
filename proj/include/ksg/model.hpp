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

#ifndef KSG_MODEL_HPP
#define KSG_MODEL_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ksg/rational.hpp"
#include "ksg/state_set.hpp"

namespace ksg {

using StateId = int;
using ActionId = int;
using BlockId = int;
using MemoryId = int;

enum class Player { Eve, Adam };

inline Player opponent(Player p) { return p == Player::Eve ? Player::Adam : Player::Eve; }
std::string_view to_string(Player p);

enum class Objective { Reachability, Safety, Buchi, CoBuchi };

std::string_view to_string(Objective o);
/// Accepts "reach", "safety", "buchi", "cobuchi" (and the long names).
Objective parse_objective(std::string_view text);

/// Exact probability distribution over dense ids. Entries are sorted by id
/// and every weight is strictly positive, so the key set is the support.
class Distribution
{
public:
    using Entry = std::pair<int, Rational>;

    Distribution() = default;

    /// Sorts, merges duplicate ids and drops nothing; use is_valid() to check.
    explicit Distribution(std::vector<Entry> entries);

    static Distribution point(int id);
    /// Uniform over the given non-empty id list.
    static Distribution uniform(const std::vector<int> &ids);

    const std::vector<Entry> &entries() const { return entries_; }
    std::vector<int> support() const;
    Rational weight(int id) const;
    bool empty() const { return entries_.empty(); }

    /// Weights positive and summing to exactly one.
    bool is_valid() const;

    friend bool operator==(const Distribution &a, const Distribution &b)
    {
        return a.entries_ == b.entries_;
    }

private:
    std::vector<Entry> entries_;
};

/// Observation partition of the states for one player. Blocks keep the
/// file order; block_of gives O(1) lookup.
struct ObsPartition
{
    std::vector<BlockId> block_of;
    std::vector<std::vector<StateId>> blocks;

    static ObsPartition discrete(std::size_t states);
    static ObsPartition single(std::size_t states);
    static ObsPartition from_block_of(std::vector<BlockId> block_of, std::size_t block_count);

    std::size_t size() const { return blocks.size(); }
    friend bool operator==(const ObsPartition &, const ObsPartition &) = default;
};

/// Finite concurrent arena with imperfect information on both sides, plus
/// an initial state and a set of final states.
struct Arena
{
    std::vector<std::string> states;
    std::vector<std::string> eve_actions;
    std::vector<std::string> adam_actions;
    StateId init = 0;
    std::vector<char> final_states;
    ObsPartition eve_obs;
    ObsPartition adam_obs;
    // Row-major over (state, eve action, adam action).
    std::vector<Distribution> transitions;

    std::size_t num_states() const { return states.size(); }
    std::size_t num_actions(Player p) const
    {
        return p == Player::Eve ? eve_actions.size() : adam_actions.size();
    }
    const std::vector<std::string> &actions(Player p) const
    {
        return p == Player::Eve ? eve_actions : adam_actions;
    }
    const ObsPartition &obs(Player p) const { return p == Player::Eve ? eve_obs : adam_obs; }
    bool is_final(StateId s) const { return final_states[static_cast<std::size_t>(s)] != 0; }

    std::size_t index(StateId s, ActionId e, ActionId a) const
    {
        return (static_cast<std::size_t>(s) * eve_actions.size() + static_cast<std::size_t>(e)) *
                   adam_actions.size() +
               static_cast<std::size_t>(a);
    }
    const Distribution &delta(StateId s, ActionId e, ActionId a) const
    {
        return transitions[index(s, e, a)];
    }
    Distribution &delta(StateId s, ActionId e, ActionId a) { return transitions[index(s, e, a)]; }

    /// Allocates the transition table; every entry starts empty (not total).
    void reset_transitions() { transitions.assign(states.size() * eve_actions.size() * adam_actions.size(), {}); }

    StateSet final_set() const;
    int state_index(std::string_view name) const;
    int action_index(Player p, std::string_view name) const;

    friend bool operator==(const Arena &, const Arena &) = default;
};

/// Throws ValidationError when an invariant of the arena is violated:
/// totality of the transition function, exact distributions, partitions.
/// Empty observation blocks are rejected only when strict is set.
void validate_arena(const Arena &arena, bool strict = true);

/// Observation-based strategy implemented by a transducer over the owner's
/// observation blocks. Move(m) is played at the current position; after the
/// next state is revealed the memory becomes Up(m, block of that state).
struct FiniteMemoryStrategy
{
    Player owner = Player::Eve;
    std::vector<std::string> memory;
    MemoryId init = 0;
    std::vector<Distribution> move;
    std::vector<std::vector<MemoryId>> update;

    std::size_t size() const { return memory.size(); }

    /// One memory state playing the same distribution forever.
    static FiniteMemoryStrategy memoryless(Player owner, Distribution d, std::size_t blocks);

    friend bool operator==(const FiniteMemoryStrategy &, const FiniteMemoryStrategy &) = default;
};

/// Throws ValidationError naming the offending key.
void validate_strategy(const Arena &arena, Player owner, const FiniteMemoryStrategy &strat);

/// One-step successor distribution when Eve mixes with de and Adam with da.
Distribution step_distribution(const Arena &arena, StateId s, const Distribution &de,
                               const Distribution &da);

/// Union of the supports of delta(s, e, a) over every Adam action.
StateSet successors(const Arena &arena, StateId s, ActionId e);

using Play = std::vector<StateId>;

/// Each consecutive pair is connected by a positive transition under some action pair.
bool is_partial_play(const Arena &arena, const Play &play);

}

#endif
