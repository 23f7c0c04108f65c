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

#include "ksg/knowledge.hpp"

#include <deque>
#include <set>
#include <tuple>
#include <unordered_map>

#include "ksg/errors.hpp"

namespace ksg {

std::vector<ActionId> action_members(ActionSet set)
{
    std::vector<ActionId> out;
    for (ActionId i = 0; set; ++i, set >>= 1)
        if (set & 1U) out.push_back(i);
    return out;
}

std::string knowledge_name(const Arena &arena, const Knowledge &k)
{
    std::string out = "{";
    bool first = true;
    for (auto s : k.members()) {
        if (!first) out += ",";
        out += arena.states[s];
        first = false;
    }
    return out + "}";
}

std::string action_set_name(const Arena &arena, ActionSet set)
{
    std::string out = "{";
    bool first = true;
    for (auto a : action_members(set)) {
        if (!first) out += ",";
        out += arena.eve_actions[static_cast<std::size_t>(a)];
        first = false;
    }
    return out + "}";
}

KnowledgeUpdater::KnowledgeUpdater(const Arena &arena) : arena_(&arena)
{
    if (arena.eve_actions.size() > kMaxEveActions)
        throw ResourceLimit("knowledge construction supports at most " +
                            std::to_string(kMaxEveActions) + " eve actions");
    post_.resize(arena.num_states());
    for (std::size_t s = 0; s < arena.num_states(); ++s)
        for (std::size_t e = 0; e < arena.eve_actions.size(); ++e)
            post_[s].push_back(successors(arena, static_cast<StateId>(s), static_cast<ActionId>(e)));
    for (const auto &block : arena.eve_obs.blocks) {
        StateSet b(arena.num_states());
        for (StateId s : block) b.insert(static_cast<std::size_t>(s));
        block_sets_.push_back(std::move(b));
    }
}

Knowledge KnowledgeUpdater::raw_update(const Knowledge &k, BlockId obs, ActionSet dom) const
{
    StateSet reach(arena_->num_states());
    for (auto r : k.members())
        for (auto e : action_members(dom)) reach |= post_[r][static_cast<std::size_t>(e)];
    reach &= block_sets_[static_cast<std::size_t>(obs)];
    return reach;
}

Knowledge KnowledgeUpdater::update(const Knowledge &k, BlockId obs, ActionSet dom) const
{
    if (dom == 0) throw ValidationError("knowledge update needs a non-empty domain");
    auto next = raw_update(k, obs, dom);
    if (next.empty())
        throw InconsistentObservation("observation block " + std::to_string(obs) +
                                      " cannot follow knowledge " + knowledge_name(*arena_, k) +
                                      " under " + action_set_name(*arena_, dom));
    return next;
}

Knowledge knowledge_update(const Arena &arena, const Knowledge &k, BlockId obs, ActionSet dom)
{
    return KnowledgeUpdater(arena).update(k, obs, dom);
}

int KnowledgeArena::knowledge_index(const Knowledge &k) const
{
    for (std::size_t i = 0; i < knowledges.size(); ++i)
        if (knowledges[i] == k) return static_cast<int>(i);
    return -1;
}

int KnowledgeArena::eve_action_index(ActionId e, ActionSet dom) const
{
    for (std::size_t i = 0; i < eve_actions.size(); ++i)
        if (eve_actions[i].first == e && eve_actions[i].second == dom) return static_cast<int>(i);
    return -1;
}

KnowledgeArena build_knowledge_arena(const Arena &arena, const KnowledgeArenaOptions &options)
{
    KnowledgeUpdater updater(arena);
    KnowledgeArena ka;
    ka.eve_action_count = arena.eve_actions.size();
    const auto n_eve = arena.eve_actions.size();
    const auto n_adam = arena.adam_actions.size();

    for (ActionSet dom = 1; dom < (ActionSet{1} << n_eve); ++dom)
        for (auto e : action_members(dom)) ka.eve_actions.emplace_back(e, dom);

    std::unordered_map<Knowledge, int, StateSetHash> know_ids;
    std::map<std::tuple<StateId, int, ActionSet>, int> state_ids;
    std::map<std::pair<int, ActionSet>, int> block_ids;
    std::vector<BlockId> eve_block_of;
    std::deque<int> queue;

    auto intern_knowledge = [&](Knowledge k) {
        auto [it, fresh] = know_ids.emplace(k, static_cast<int>(ka.knowledges.size()));
        if (fresh) ka.knowledges.push_back(std::move(k));
        return it->second;
    };
    auto intern_state = [&](StateId real, int know, ActionSet dom) {
        auto [it, fresh] =
            state_ids.emplace(std::make_tuple(real, know, dom), static_cast<int>(ka.states.size()));
        if (fresh) {
            if (ka.states.size() >= options.max_states)
                throw ResourceLimit("knowledge arena exceeds " + std::to_string(options.max_states) +
                                    " states");
            ka.states.push_back({real, know, dom});
            auto [bit, bfresh] = block_ids.emplace(std::make_pair(know, dom),
                                                   static_cast<int>(ka.eve_blocks.size()));
            if (bfresh) ka.eve_blocks.emplace_back(know, dom);
            eve_block_of.push_back(bit->second);
            queue.push_back(it->second);
        }
        return it->second;
    };

    intern_state(arena.init,
                 intern_knowledge(Knowledge::singleton(arena.num_states(),
                                                       static_cast<std::size_t>(arena.init))),
                 0);

    // transitions[ka state][eve action][adam action]
    std::vector<std::vector<Distribution>> rows;
    std::set<std::pair<int, int>> edge_pairs;
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        const auto st = ka.states[static_cast<std::size_t>(id)];
        std::vector<Distribution> row;
        row.reserve(ka.eve_actions.size() * n_adam);
        for (const auto &[e, dom] : ka.eve_actions)
            for (std::size_t a = 0; a < n_adam; ++a) {
                std::vector<Distribution::Entry> entries;
                for (const auto &[t, w] : arena.delta(st.real, e, static_cast<ActionId>(a)).entries()) {
                    const auto knowledge = ka.knowledges[static_cast<std::size_t>(st.knowledge)];
                    auto next = updater.update(knowledge, arena.eve_obs.block_of[static_cast<std::size_t>(t)],
                                               dom);
                    int succ = intern_state(t, intern_knowledge(std::move(next)), dom);
                    edge_pairs.emplace(id, succ);
                    entries.emplace_back(succ, w);
                }
                row.emplace_back(std::move(entries));
            }
        if (rows.size() <= static_cast<std::size_t>(id)) rows.resize(static_cast<std::size_t>(id) + 1);
        rows[static_cast<std::size_t>(id)] = std::move(row);
    }
    ka.edges = edge_pairs.size();

    auto &g = ka.arena;
    for (const auto &st : ka.states)
        g.states.push_back(arena.states[static_cast<std::size_t>(st.real)] + "|" +
                           knowledge_name(arena, ka.knowledges[static_cast<std::size_t>(st.knowledge)]) +
                           "|" + action_set_name(arena, st.dom));
    for (const auto &[e, dom] : ka.eve_actions)
        g.eve_actions.push_back(arena.eve_actions[static_cast<std::size_t>(e)] + "|" +
                                action_set_name(arena, dom));
    g.adam_actions = arena.adam_actions;
    g.init = 0;
    g.final_states.resize(ka.states.size());
    std::vector<BlockId> adam_block_of;
    for (std::size_t i = 0; i < ka.states.size(); ++i) {
        g.final_states[i] = arena.final_states[static_cast<std::size_t>(ka.states[i].real)];
        adam_block_of.push_back(arena.adam_obs.block_of[static_cast<std::size_t>(ka.states[i].real)]);
    }
    g.eve_obs = ObsPartition::from_block_of(std::move(eve_block_of), ka.eve_blocks.size());
    g.adam_obs = ObsPartition::from_block_of(std::move(adam_block_of), arena.adam_obs.size());
    g.reset_transitions();
    for (std::size_t s = 0; s < ka.states.size(); ++s)
        for (std::size_t e = 0; e < ka.eve_actions.size(); ++e)
            for (std::size_t a = 0; a < n_adam; ++a)
                g.delta(static_cast<StateId>(s), static_cast<ActionId>(e), static_cast<ActionId>(a)) =
                    std::move(rows[s][e * n_adam + a]);
    return ka;
}

FiniteMemoryStrategy lift_strategy(const Arena &arena, const KnowledgeArena &ka,
                                   const FiniteMemoryStrategy &eve)
{
    validate_strategy(arena, Player::Eve, eve);
    FiniteMemoryStrategy out;
    out.owner = Player::Eve;
    out.memory = eve.memory;
    out.init = eve.init;
    for (const auto &d : eve.move) {
        ActionSet dom = 0;
        for (const auto &[e, w] : d.entries()) dom |= ActionSet{1} << e;
        std::vector<Distribution::Entry> entries;
        for (const auto &[e, w] : d.entries()) entries.emplace_back(ka.eve_action_index(e, dom), w);
        out.move.emplace_back(std::move(entries));
    }
    for (const auto &row : eve.update) {
        std::vector<MemoryId> lifted;
        for (const auto &[know, dom] : ka.eve_blocks) {
            auto member = ka.knowledges[static_cast<std::size_t>(know)].members().front();
            lifted.push_back(row[static_cast<std::size_t>(arena.eve_obs.block_of[member])]);
        }
        out.update.push_back(std::move(lifted));
    }
    return out;
}

FiniteMemoryStrategy lift_adam_strategy(const KnowledgeArena &ka, const FiniteMemoryStrategy &adam)
{
    validate_strategy(ka.arena, Player::Adam, adam);
    return adam;
}

ActionSet KnowledgeOnlyStrategy::at(const Knowledge &k) const
{
    auto it = choice.find(k);
    if (it == choice.end() || it->second == 0)
        throw ValidationError("knowledge-only strategy is undefined at a reachable knowledge");
    return it->second;
}

namespace {

struct KnowledgeWalk
{
    std::vector<std::pair<Knowledge, ActionSet>> order;
    std::vector<std::vector<MemoryId>> update;
    std::vector<ActionSet> play;
};

KnowledgeWalk walk_knowledges(const Arena &arena, const KnowledgeOnlyStrategy &strat)
{
    KnowledgeUpdater updater(arena);
    KnowledgeWalk walk;
    std::map<std::pair<Knowledge, ActionSet>, MemoryId> ids;
    auto intern = [&](Knowledge k, ActionSet dom) {
        auto [it, fresh] = ids.emplace(std::make_pair(k, dom), static_cast<MemoryId>(walk.order.size()));
        if (fresh) walk.order.emplace_back(std::move(k), dom);
        return it->second;
    };
    intern(Knowledge::singleton(arena.num_states(), static_cast<std::size_t>(arena.init)), 0);
    for (std::size_t i = 0; i < walk.order.size(); ++i) {
        const auto k = walk.order[i].first;
        const ActionSet play = strat.at(k);
        std::vector<MemoryId> row;
        for (std::size_t b = 0; b < arena.eve_obs.size(); ++b) {
            auto next = updater.raw_update(k, static_cast<BlockId>(b), play);
            row.push_back(next.empty() ? static_cast<MemoryId>(i) : intern(std::move(next), play));
        }
        walk.play.push_back(play);
        walk.update.push_back(std::move(row));
    }
    return walk;
}

}

std::vector<std::pair<Knowledge, ActionSet>> reachable_knowledges(const Arena &arena,
                                                                   const KnowledgeOnlyStrategy &strat)
{
    return walk_knowledges(arena, strat).order;
}

FiniteMemoryStrategy lower_strategy(const Arena &arena, const KnowledgeOnlyStrategy &strat)
{
    auto walk = walk_knowledges(arena, strat);
    FiniteMemoryStrategy out;
    out.owner = Player::Eve;
    out.init = 0;
    for (const auto &[k, dom] : walk.order)
        out.memory.push_back(knowledge_name(arena, k) + "|" + action_set_name(arena, dom));
    for (auto play : walk.play) out.move.push_back(Distribution::uniform(action_members(play)));
    out.update = std::move(walk.update);
    return out;
}

ObsPartition refine_by_final(const Arena &arena, const ObsPartition &obs)
{
    std::map<std::pair<BlockId, bool>, BlockId> ids;
    std::vector<BlockId> block_of;
    for (std::size_t s = 0; s < arena.num_states(); ++s) {
        auto key = std::make_pair(obs.block_of[s], arena.final_states[s] != 0);
        auto [it, fresh] = ids.emplace(key, static_cast<BlockId>(ids.size()));
        block_of.push_back(it->second);
    }
    return ObsPartition::from_block_of(std::move(block_of), ids.size());
}

Arena knowledge_arena_as_game(const KnowledgeArena &ka)
{
    Arena g = ka.arena;
    std::vector<BlockId> remap(g.adam_obs.size(), -1);
    std::vector<BlockId> block_of;
    BlockId next = 0;
    for (std::size_t s = 0; s < g.num_states(); ++s) {
        auto &r = remap[static_cast<std::size_t>(g.adam_obs.block_of[s])];
        if (r < 0) r = next++;
        block_of.push_back(r);
    }
    g.adam_obs = ObsPartition::from_block_of(std::move(block_of), static_cast<std::size_t>(next));
    return g;
}

}
