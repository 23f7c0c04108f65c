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

#include "ksg/markov.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace ksg::markov {

namespace {

bool flag(const Mask &m, std::size_t i)
{
    return !m.empty() && m[i];
}

std::vector<std::vector<int>> predecessors(const Graph &g)
{
    std::vector<std::vector<int>> pred(g.size());
    for (std::size_t u = 0; u < g.size(); ++u)
        for (const auto &[v, w] : g[u]) pred[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));
    return pred;
}

// Solves A x = b in place over the rationals; A is square and non-singular.
std::vector<Rational> gauss(std::vector<std::vector<Rational>> a, std::vector<Rational> b)
{
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw std::logic_error("singular system in reach_values");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        const Rational inv = 1 / a[col][col];
        for (std::size_t j = col; j < n; ++j) a[col][j] *= inv;
        b[col] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col];
            for (std::size_t j = col; j < n; ++j)
                if (a[col][j] != 0) a[r][j] -= f * a[col][j];
            b[r] -= f * b[col];
        }
    }
    return b;
}

}

Mask can_reach(const Graph &g, const Mask &target, const Mask &blocked)
{
    Mask seen(g.size(), 0);
    auto pred = predecessors(g);
    std::deque<int> queue;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (target[i]) {
            seen[i] = 1;
            queue.push_back(static_cast<int>(i));
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int u : pred[static_cast<std::size_t>(v)]) {
            auto ui = static_cast<std::size_t>(u);
            if (seen[ui] || flag(blocked, ui)) continue;
            seen[ui] = 1;
            queue.push_back(u);
        }
    }
    return seen;
}

std::vector<Rational> reach_values(const Graph &g, const Mask &target, const Mask &blocked)
{
    const auto n = g.size();
    std::vector<Rational> x(n, Rational(0));
    auto good = can_reach(g, target, blocked);
    std::vector<int> var(n, -1);
    int nvars = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (target[i])
            x[i] = 1;
        else if (good[i] && !flag(blocked, i))
            var[i] = nvars++;
    }
    if (nvars == 0) return x;
    std::vector<std::vector<Rational>> a(static_cast<std::size_t>(nvars),
                                         std::vector<Rational>(static_cast<std::size_t>(nvars)));
    std::vector<Rational> b(static_cast<std::size_t>(nvars));
    for (std::size_t i = 0; i < n; ++i) {
        if (var[i] < 0) continue;
        auto r = static_cast<std::size_t>(var[i]);
        a[r][r] += 1;
        for (const auto &[j, w] : g[i]) {
            auto ji = static_cast<std::size_t>(j);
            if (target[ji])
                b[r] += w;
            else if (var[ji] >= 0)
                a[r][static_cast<std::size_t>(var[ji])] -= w;
        }
    }
    auto sol = gauss(std::move(a), std::move(b));
    for (std::size_t i = 0; i < n; ++i)
        if (var[i] >= 0) x[i] = sol[static_cast<std::size_t>(var[i])];
    return x;
}

int scc(const std::vector<std::vector<int>> &adj, std::vector<int> &comp, const Mask &allowed)
{
    const int n = static_cast<int>(adj.size());
    comp.assign(adj.size(), -1);
    std::vector<int> index(adj.size(), -1), low(adj.size(), 0);
    std::vector<char> on_stack(adj.size(), 0);
    std::vector<int> stack;
    int counter = 0, ncomp = 0;
    // Iterative Tarjan: frames of (node, next edge position).
    std::vector<std::pair<int, std::size_t>> frames;
    for (int root = 0; root < n; ++root) {
        if (index[static_cast<std::size_t>(root)] >= 0 || (!allowed.empty() && !allowed[static_cast<std::size_t>(root)]))
            continue;
        frames.emplace_back(root, 0);
        while (!frames.empty()) {
            auto &[v, pos] = frames.back();
            auto vi = static_cast<std::size_t>(v);
            if (pos == 0 && index[vi] < 0) {
                index[vi] = low[vi] = counter++;
                stack.push_back(v);
                on_stack[vi] = 1;
            }
            if (pos < adj[vi].size()) {
                int w = adj[vi][pos++];
                auto wi = static_cast<std::size_t>(w);
                if (!allowed.empty() && !allowed[wi]) continue;
                if (index[wi] < 0)
                    frames.emplace_back(w, 0);
                else if (on_stack[wi])
                    low[vi] = std::min(low[vi], index[wi]);
                continue;
            }
            if (low[vi] == index[vi]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[static_cast<std::size_t>(w)] = 0;
                    comp[static_cast<std::size_t>(w)] = ncomp;
                } while (w != v);
                ++ncomp;
            }
            int done = v;
            frames.pop_back();
            if (!frames.empty()) {
                auto pi = static_cast<std::size_t>(frames.back().first);
                low[pi] = std::min(low[pi], low[static_cast<std::size_t>(done)]);
            }
        }
    }
    return ncomp;
}

std::vector<std::vector<int>> bottom_sccs(const Graph &g)
{
    std::vector<std::vector<int>> adj(g.size());
    for (std::size_t u = 0; u < g.size(); ++u)
        for (const auto &[v, w] : g[u]) adj[u].push_back(v);
    std::vector<int> comp;
    int k = scc(adj, comp);
    std::vector<char> bottom(static_cast<std::size_t>(k), 1);
    for (std::size_t u = 0; u < g.size(); ++u)
        for (int v : adj[u])
            if (comp[static_cast<std::size_t>(v)] != comp[u]) bottom[static_cast<std::size_t>(comp[u])] = 0;
    std::vector<std::vector<int>> out(static_cast<std::size_t>(k));
    for (std::size_t u = 0; u < g.size(); ++u) out[static_cast<std::size_t>(comp[u])].push_back(static_cast<int>(u));
    std::vector<std::vector<int>> result;
    for (int c = 0; c < k; ++c)
        if (bottom[static_cast<std::size_t>(c)]) result.push_back(std::move(out[static_cast<std::size_t>(c)]));
    std::sort(result.begin(), result.end());
    return result;
}

std::vector<std::vector<int>> maximal_end_components(const Mdp &mdp, const Mask &allowed)
{
    const auto n = mdp.size();
    Mask alive = allowed.empty() ? Mask(n, 1) : allowed;
    // enabled[s][a]: action a of s still keeps the play inside the candidate.
    std::vector<std::vector<char>> enabled(n);
    for (std::size_t s = 0; s < n; ++s) enabled[s].assign(mdp.actions[s].size(), 1);
    std::vector<int> comp;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            bool any = false;
            for (std::size_t a = 0; a < mdp.actions[s].size(); ++a) {
                if (!enabled[s][a]) continue;
                for (const auto &[t, w] : mdp.actions[s][a])
                    if (!alive[static_cast<std::size_t>(t)]) {
                        enabled[s][a] = 0;
                        break;
                    }
                any = any || enabled[s][a];
            }
            if (!any) {
                alive[s] = 0;
                changed = true;
            }
        }
        if (changed) continue;
        std::vector<std::vector<int>> adj(n);
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            for (std::size_t a = 0; a < mdp.actions[s].size(); ++a)
                if (enabled[s][a])
                    for (const auto &[t, w] : mdp.actions[s][a]) adj[s].push_back(t);
        }
        scc(adj, comp, alive);
        for (std::size_t s = 0; s < n; ++s) {
            if (!alive[s]) continue;
            for (std::size_t a = 0; a < mdp.actions[s].size(); ++a) {
                if (!enabled[s][a]) continue;
                for (const auto &[t, w] : mdp.actions[s][a])
                    if (comp[static_cast<std::size_t>(t)] != comp[s]) {
                        enabled[s][a] = 0;
                        changed = true;
                        break;
                    }
            }
        }
    }
    std::vector<std::vector<int>> groups;
    std::vector<int> group_of;
    if (!comp.empty()) {
        int k = 0;
        for (int c : comp) k = std::max(k, c + 1);
        groups.resize(static_cast<std::size_t>(k));
        for (std::size_t s = 0; s < n; ++s)
            if (alive[s] && comp[s] >= 0) groups[static_cast<std::size_t>(comp[s])].push_back(static_cast<int>(s));
    }
    std::vector<std::vector<int>> out;
    for (auto &g : groups)
        if (!g.empty()) out.push_back(std::move(g));
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Rational> max_reach_values(const Mdp &mdp, const Mask &target, const Mask &blocked)
{
    const auto n = mdp.size();
    // Distance to target in the support graph, ignoring probabilities.
    std::vector<int> dist(n, -1);
    std::vector<int> policy(n, 0);
    std::vector<std::vector<std::pair<int, int>>> pred(n);  // (state, action)
    for (std::size_t s = 0; s < n; ++s)
        for (std::size_t a = 0; a < mdp.actions[s].size(); ++a)
            for (const auto &[t, w] : mdp.actions[s][a])
                pred[static_cast<std::size_t>(t)].emplace_back(static_cast<int>(s), static_cast<int>(a));
    std::deque<int> queue;
    for (std::size_t s = 0; s < n; ++s)
        if (target[s]) {
            dist[s] = 0;
            queue.push_back(static_cast<int>(s));
        }
    while (!queue.empty()) {
        int t = queue.front();
        queue.pop_front();
        for (const auto &[s, a] : pred[static_cast<std::size_t>(t)]) {
            auto si = static_cast<std::size_t>(s);
            if (dist[si] >= 0 || flag(blocked, si)) continue;
            dist[si] = dist[static_cast<std::size_t>(t)] + 1;
            policy[si] = a;
            queue.push_back(s);
        }
    }

    auto evaluate = [&](const std::vector<int> &pol) {
        Graph g(n);
        for (std::size_t s = 0; s < n; ++s)
            if (!target[s] && !flag(blocked, s) && !mdp.actions[s].empty())
                g[s] = mdp.actions[s][static_cast<std::size_t>(pol[s])];
        return reach_values(g, target, blocked);
    };

    auto values = evaluate(policy);
    for (;;) {
        bool improved = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (target[s] || flag(blocked, s) || dist[s] < 0) continue;
            auto q = [&](std::size_t a) {
                Rational sum(0);
                for (const auto &[t, w] : mdp.actions[s][a]) sum += w * values[static_cast<std::size_t>(t)];
                return sum;
            };
            Rational best = q(static_cast<std::size_t>(policy[s]));
            for (std::size_t a = 0; a < mdp.actions[s].size(); ++a) {
                Rational v = q(a);
                if (v > best) {
                    best = v;
                    policy[s] = static_cast<int>(a);
                    improved = true;
                }
            }
        }
        if (!improved) break;
        values = evaluate(policy);
    }
    return values;
}

}
