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

#include "ksg/halfplayer.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "ksg/errors.hpp"
#include "ksg/knowledge.hpp"

namespace ksg {

OneHalfGame make_one_half_game(Arena arena, Player protagonist)
{
    if (arena.num_actions(opponent(protagonist)) != 1)
        throw ValidationError("a 1½-player game needs a single " +
                              std::string(to_string(opponent(protagonist))) + " action");
    auto &obs = protagonist == Player::Eve ? arena.eve_obs : arena.adam_obs;
    bool separated = true;
    for (const auto &block : obs.blocks)
        for (StateId s : block)
            separated = separated && arena.is_final(s) == arena.is_final(block.front());
    // Keep the numbering when blocks already separate final states.
    if (!separated) obs = refine_by_final(arena, obs);
    return OneHalfGame{std::move(arena), protagonist};
}

int BeliefGraph::find(const StateSet &b) const
{
    for (std::size_t i = 0; i < beliefs.size(); ++i)
        if (beliefs[i] == b) return static_cast<int>(i);
    return -1;
}

BeliefGraph build_belief_graph(const OneHalfGame &g, const HalfPlayerOptions &options)
{
    const auto n = g.arena.num_states();
    const auto &obs = g.obs();
    BeliefGraph graph;
    std::unordered_map<StateSet, int, StateSetHash> ids;
    auto intern = [&](StateSet b) {
        auto [it, fresh] = ids.emplace(b, static_cast<int>(graph.beliefs.size()));
        if (fresh) {
            if (graph.beliefs.size() >= options.max_beliefs)
                throw ResourceLimit("belief graph exceeds " + std::to_string(options.max_beliefs) +
                                    " beliefs");
            graph.final_node.push_back(g.arena.is_final(static_cast<StateId>(b.members().front())));
            graph.beliefs.push_back(std::move(b));
        }
        return it->second;
    };
    for (std::size_t s = 0; s < n; ++s) intern(StateSet::singleton(n, s));
    for (std::size_t i = 0; i < graph.beliefs.size(); ++i) {
        const auto members = graph.beliefs[i].members();
        std::vector<std::vector<std::pair<BlockId, int>>> row;
        for (ActionId a = 0; a < g.num_actions(); ++a) {
            StateSet post(n);
            for (auto s : members)
                for (const auto &[t, w] : g.delta(static_cast<StateId>(s), a).entries())
                    post.insert(static_cast<std::size_t>(t));
            std::vector<std::pair<BlockId, int>> out;
            for (std::size_t b = 0; b < obs.size(); ++b) {
                StateSet part(n);
                bool any = false;
                for (StateId t : obs.blocks[b])
                    if (post.contains(static_cast<std::size_t>(t))) {
                        part.insert(static_cast<std::size_t>(t));
                        any = true;
                    }
                if (any) out.emplace_back(static_cast<BlockId>(b), intern(std::move(part)));
            }
            row.push_back(std::move(out));
        }
        graph.succ.push_back(std::move(row));
    }
    return graph;
}

namespace {

bool all_in(const std::vector<std::pair<BlockId, int>> &succ, const std::vector<char> &set)
{
    for (const auto &[o, v] : succ)
        if (!set[static_cast<std::size_t>(v)]) return false;
    return true;
}

}

SureWinning solve_sure_safety(const BeliefGraph &graph)
{
    const auto n = graph.beliefs.size();
    SureWinning r;
    r.winning.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) r.winning[i] = graph.final_node[i] ? 0 : 1;
    for (bool changed = true; changed;) {
        changed = false;
        ++r.iterations;
        auto next = r.winning;
        for (std::size_t i = 0; i < n; ++i) {
            if (!r.winning[i]) continue;
            bool ok = false;
            for (const auto &succ : graph.succ[i])
                if (all_in(succ, r.winning)) {
                    ok = true;
                    break;
                }
            if (!ok) {
                next[i] = 0;
                changed = true;
            }
        }
        r.winning = std::move(next);
    }
    r.action.assign(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        if (!r.winning[i]) continue;
        for (std::size_t a = 0; a < graph.succ[i].size(); ++a)
            if (all_in(graph.succ[i][a], r.winning)) {
                r.action[i] = static_cast<ActionId>(a);
                break;
            }
    }
    return r;
}

SureWinning solve_sure_cobuchi(const BeliefGraph &graph)
{
    // Least fixpoint over X of the greatest fixpoint over Y of
    //   CPre(X) or (non-final and CPre(Y)).
    // A node entering at round i picks an action into the previous X when it
    // can, otherwise one staying inside the new X; ranks never increase and
    // can stay constant only on non-final nodes.
    const auto n = graph.beliefs.size();
    SureWinning r;
    r.winning.assign(n, 0);
    r.action.assign(n, -1);
    auto can_force = [&](std::size_t i, const std::vector<char> &set) {
        for (std::size_t a = 0; a < graph.succ[i].size(); ++a)
            if (all_in(graph.succ[i][a], set)) return static_cast<ActionId>(a);
        return ActionId{-1};
    };
    for (;;) {
        ++r.iterations;
        const auto x = r.winning;
        std::vector<char> y(n, 1);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (!y[i]) continue;
                if (can_force(i, x) >= 0) continue;
                if (!graph.final_node[i] && can_force(i, y) >= 0) continue;
                y[i] = 0;
                changed = true;
            }
        }
        bool grew = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (!y[i] || x[i]) continue;
            grew = true;
            auto a = can_force(i, x);
            r.action[i] = a >= 0 ? a : can_force(i, y);
        }
        r.winning = std::move(y);
        if (!grew) break;
    }
    return r;
}

namespace {

std::vector<StateSet> members_of(const BeliefGraph &graph, const SureWinning &win)
{
    std::vector<StateSet> out;
    for (std::size_t i = 0; i < graph.beliefs.size(); ++i)
        if (win.winning[i]) out.push_back(graph.beliefs[i]);
    return out;
}

PositiveWinReport positive_win(const OneHalfGame &g, bool safety, const HalfPlayerOptions &options)
{
    const auto n = g.arena.num_states();
    const auto graph = build_belief_graph(g, options);
    const auto win = safety ? solve_sure_safety(graph) : solve_sure_cobuchi(graph);

    PositiveWinReport report;
    report.sure_beliefs = members_of(graph, win);
    report.iterations = win.iterations;
    report.beliefs = graph.beliefs.size();

    std::vector<char> target(n, 0), allowed(n, 1);
    for (std::size_t s = 0; s < n; ++s) {
        target[s] = win.winning[static_cast<std::size_t>(graph.find(StateSet::singleton(n, s)))];
        if (safety && g.arena.is_final(static_cast<StateId>(s))) allowed[s] = 0;
    }

    // Backward closure: states with a positive path through allowed states to a target.
    std::vector<std::vector<StateId>> pred(n);
    for (std::size_t s = 0; s < n; ++s)
        for (ActionId a = 0; a < g.num_actions(); ++a)
            for (const auto &[t, w] : g.delta(static_cast<StateId>(s), a).entries())
                pred[static_cast<std::size_t>(t)].push_back(static_cast<StateId>(s));
    report.winning_states = StateSet(n);
    std::deque<StateId> queue;
    for (std::size_t s = 0; s < n; ++s)
        if (target[s]) {
            report.winning_states.insert(s);
            queue.push_back(static_cast<StateId>(s));
        }
    while (!queue.empty()) {
        auto t = queue.front();
        queue.pop_front();
        for (auto s : pred[static_cast<std::size_t>(t)]) {
            auto si = static_cast<std::size_t>(s);
            if (!allowed[si] || report.winning_states.contains(si)) continue;
            report.winning_states.insert(si);
            queue.push_back(s);
        }
    }

    const auto init = static_cast<std::size_t>(g.arena.init);
    if (!report.winning_states.contains(init)) return report;

    // Shortest witness path by forward BFS in canonical action/state order.
    std::vector<int> parent(n, -1), parent_action(n, -1);
    std::vector<char> seen(n, 0);
    seen[init] = 1;
    std::deque<StateId> bfs{static_cast<StateId>(init)};
    StateId goal = target[init] ? static_cast<StateId>(init) : -1;
    while (goal < 0 && !bfs.empty()) {
        auto s = bfs.front();
        bfs.pop_front();
        for (ActionId a = 0; a < g.num_actions() && goal < 0; ++a)
            for (const auto &[t, w] : g.delta(s, a).entries()) {
                auto ti = static_cast<std::size_t>(t);
                if (seen[ti] || !allowed[ti]) continue;
                seen[ti] = 1;
                parent[ti] = s;
                parent_action[ti] = a;
                if (target[ti]) {
                    goal = t;
                    break;
                }
                bfs.push_back(t);
            }
    }
    std::vector<StateId> path{goal};
    std::vector<ActionId> path_actions;
    while (path.back() != static_cast<StateId>(init)) {
        auto s = static_cast<std::size_t>(path.back());
        path_actions.push_back(parent_action[s]);
        path.push_back(parent[s]);
    }
    std::reverse(path.begin(), path.end());
    std::reverse(path_actions.begin(), path_actions.end());
    report.witness_path = path;

    // Memory: one state per path step, then the reachable beliefs of the
    // sure-winning strategy started from the singleton at the path's end.
    FiniteMemoryStrategy w;
    w.owner = g.protagonist;
    const auto blocks = g.obs().size();
    const auto steps = path_actions.size();
    std::unordered_map<int, MemoryId> belief_memory;
    std::vector<int> belief_of;
    auto belief_mem = [&](int node) {
        auto [it, fresh] =
            belief_memory.emplace(node, static_cast<MemoryId>(steps + belief_of.size()));
        if (fresh) belief_of.push_back(node);
        return it->second;
    };
    for (std::size_t i = 0; i < steps; ++i) {
        w.memory.push_back("path" + std::to_string(i));
        w.move.push_back(Distribution::point(path_actions[i]));
    }
    const int start = graph.find(StateSet::singleton(n, static_cast<std::size_t>(goal)));
    const MemoryId start_mem = belief_mem(start);
    for (std::size_t i = 0; i < steps; ++i)
        w.update.emplace_back(blocks, i + 1 < steps ? static_cast<MemoryId>(i + 1) : start_mem);
    for (std::size_t k = 0; k < belief_of.size(); ++k) {
        const int node = belief_of[k];
        const auto self = static_cast<MemoryId>(steps + k);
        const ActionId a = win.action[static_cast<std::size_t>(node)];
        std::vector<MemoryId> row(blocks, self);
        for (const auto &[o, succ] : graph.succ[static_cast<std::size_t>(node)][static_cast<std::size_t>(a)])
            row[static_cast<std::size_t>(o)] = belief_mem(succ);
        w.memory.push_back("belief" + knowledge_name(g.arena, graph.beliefs[static_cast<std::size_t>(node)]));
        w.move.push_back(Distribution::point(a));
        w.update.push_back(std::move(row));
    }
    w.init = steps > 0 ? 0 : start_mem;
    report.witness = std::move(w);
    return report;
}

}

std::vector<StateSet> sure_safety_beliefs(const OneHalfGame &g, const HalfPlayerOptions &options)
{
    auto graph = build_belief_graph(g, options);
    return members_of(graph, solve_sure_safety(graph));
}

std::vector<StateSet> sure_cobuchi_beliefs(const OneHalfGame &g, const HalfPlayerOptions &options)
{
    auto graph = build_belief_graph(g, options);
    return members_of(graph, solve_sure_cobuchi(graph));
}

PositiveWinReport positive_safety(const OneHalfGame &g, const HalfPlayerOptions &options)
{
    return positive_win(g, true, options);
}

PositiveWinReport positive_cobuchi(const OneHalfGame &g, const HalfPlayerOptions &options)
{
    return positive_win(g, false, options);
}

}
