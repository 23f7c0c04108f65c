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

#ifndef KSG_KNOWLEDGE_HPP
#define KSG_KNOWLEDGE_HPP

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ksg/model.hpp"
#include "ksg/state_set.hpp"

namespace ksg {

/// Set of Eve actions as a bitmask (bit i = action i). Zero is the
/// sentinel domain of the initial knowledge state.
using ActionSet = std::uint32_t;
using Knowledge = StateSet;

constexpr std::size_t kMaxEveActions = 16;

std::vector<ActionId> action_members(ActionSet set);
std::string knowledge_name(const Arena &arena, const Knowledge &k);
std::string action_set_name(const Arena &arena, ActionSet set);

/// Precomputed Eve successor sets: post[s][e] = union over Adam actions of
/// the support of delta(s, e, .).
class KnowledgeUpdater
{
public:
    explicit KnowledgeUpdater(const Arena &arena);

    /// States of the observation block that some state of k reaches under
    /// some action of dom and some Adam action. May be empty.
    Knowledge raw_update(const Knowledge &k, BlockId obs, ActionSet dom) const;
    /// Same, but throws InconsistentObservation on an empty result.
    Knowledge update(const Knowledge &k, BlockId obs, ActionSet dom) const;

    const Arena &arena() const { return *arena_; }

private:
    const Arena *arena_;
    std::vector<std::vector<StateSet>> post_;
    std::vector<StateSet> block_sets_;
};

/// Free-function form of KnowledgeUpdater::update.
Knowledge knowledge_update(const Arena &arena, const Knowledge &k, BlockId obs, ActionSet dom);

struct KnowledgeState
{
    StateId real = 0;
    int knowledge = 0;  // index into KnowledgeArena::knowledges
    ActionSet dom = 0;
};

struct KnowledgeArenaOptions
{
    std::size_t max_states = 1'000'000;
};

/// Reachable part of the knowledge arena. Eve's actions are the well-formed
/// pairs (action, domain) with the action inside the domain; Adam's actions,
/// and the indices of his observation blocks, are those of the base arena.
struct KnowledgeArena
{
    Arena arena;
    std::vector<KnowledgeState> states;
    std::vector<Knowledge> knowledges;                 // construction order
    std::vector<std::pair<ActionId, ActionSet>> eve_actions;
    std::vector<std::pair<int, ActionSet>> eve_blocks; // (knowledge, dom) per block
    std::size_t edges = 0;                             // distinct (src, dst) support pairs
    std::size_t eve_action_count = 0;                  // |Eve actions| of the base arena

    int knowledge_index(const Knowledge &k) const;
    /// Index of the well-formed action (e, dom), or -1.
    int eve_action_index(ActionId e, ActionSet dom) const;
};

/// Breadth-first closure from (init, {init}, empty). Throws ResourceLimit
/// when more than options.max_states states would be materialized.
KnowledgeArena build_knowledge_arena(const Arena &arena, const KnowledgeArenaOptions &options = {});

/// Turns an Eve transducer over base observations into one over the knowledge
/// arena: same memory, well-formed move distributions, updates keyed by the
/// knowledge arena's (knowledge, domain) blocks.
FiniteMemoryStrategy lift_strategy(const Arena &arena, const KnowledgeArena &ka,
                                   const FiniteMemoryStrategy &eve);

/// Adam observes the same blocks in both arenas; memory and moves carry over.
FiniteMemoryStrategy lift_adam_strategy(const KnowledgeArena &ka, const FiniteMemoryStrategy &adam);

/// Strategy depending only on Eve's current knowledge; each knowledge maps
/// to a non-empty action set played uniformly.
struct KnowledgeOnlyStrategy
{
    std::map<Knowledge, ActionSet> choice;

    ActionSet at(const Knowledge &k) const;
};

/// (knowledge, last domain) pairs reachable from ({init}, empty) when Eve
/// follows strat, in breadth-first order over her observation blocks.
std::vector<std::pair<Knowledge, ActionSet>> reachable_knowledges(const Arena &arena,
                                                                   const KnowledgeOnlyStrategy &strat);

/// Transducer over (knowledge, last domain) pairs reachable from
/// ({init}, empty). The update applies the knowledge update with the domain
/// just played; observations inconsistent with the knowledge leave the
/// memory unchanged.
FiniteMemoryStrategy lower_strategy(const Arena &arena, const KnowledgeOnlyStrategy &strat);

/// Adam's observations in the knowledge arena refined by final membership of
/// the real state. Block ids are assigned over base states in state order,
/// by first occurrence of each (adam block, final) pair.
ObsPartition refine_by_final(const Arena &arena, const ObsPartition &obs);

/// Knowledge arena written as an ordinary game (names "real|{k}|{dom}",
/// empty observation blocks dropped).
Arena knowledge_arena_as_game(const KnowledgeArena &ka);

}

#endif
