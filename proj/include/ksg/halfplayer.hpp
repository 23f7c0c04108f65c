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

#ifndef KSG_HALFPLAYER_HPP
#define KSG_HALFPLAYER_HPP

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "ksg/model.hpp"
#include "ksg/state_set.hpp"

namespace ksg {

/// Game where the antagonist has a single action: a partially observable MDP
/// for the protagonist. The protagonist's observation partition is refined by
/// final membership on construction, so "visits a final state" is observable.
struct OneHalfGame
{
    Arena arena;
    Player protagonist = Player::Eve;

    ActionId num_actions() const { return static_cast<ActionId>(arena.num_actions(protagonist)); }
    const ObsPartition &obs() const { return arena.obs(protagonist); }
    const Distribution &delta(StateId s, ActionId a) const
    {
        return protagonist == Player::Eve ? arena.delta(s, a, 0) : arena.delta(s, 0, a);
    }
};

/// Throws ValidationError if the antagonist has more than one action.
OneHalfGame make_one_half_game(Arena arena, Player protagonist);

struct HalfPlayerOptions
{
    std::size_t max_beliefs = 1'000'000;
};

/// Beliefs of the protagonist reachable from every singleton. Each belief lies
/// inside one (refined) observation block; succ[b][a] lists one successor per
/// observation that can follow b under a.
struct BeliefGraph
{
    std::vector<StateSet> beliefs;
    std::vector<char> final_node;
    std::vector<std::vector<std::vector<std::pair<BlockId, int>>>> succ;

    int find(const StateSet &b) const;
};

BeliefGraph build_belief_graph(const OneHalfGame &g, const HalfPlayerOptions &options = {});

/// Result of a sure-winning fixpoint on the belief graph: membership, the
/// chosen action for members (-1 otherwise) and the number of rounds.
struct SureWinning
{
    std::vector<char> winning;
    std::vector<ActionId> action;
    std::size_t iterations = 0;
};

SureWinning solve_sure_safety(const BeliefGraph &graph);
SureWinning solve_sure_cobuchi(const BeliefGraph &graph);

std::vector<StateSet> sure_safety_beliefs(const OneHalfGame &g, const HalfPlayerOptions &options = {});
std::vector<StateSet> sure_cobuchi_beliefs(const OneHalfGame &g, const HalfPlayerOptions &options = {});

struct PositiveWinReport
{
    StateSet winning_states;
    std::vector<StateSet> sure_beliefs;
    std::optional<FiniteMemoryStrategy> witness;
    /// States s0..sn of the witness path; empty when there is no witness.
    std::vector<StateId> witness_path;
    std::size_t iterations = 0;
    std::size_t beliefs = 0;
};

/// Positive safety (avoid final states with positive probability) from the
/// arena's initial state, with a deterministic finite-memory witness.
PositiveWinReport positive_safety(const OneHalfGame &g, const HalfPlayerOptions &options = {});
/// Positive co-Büchi (finitely many final visits with positive probability).
PositiveWinReport positive_cobuchi(const OneHalfGame &g, const HalfPlayerOptions &options = {});

}

#endif
