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

#ifndef KSG_MARKOV_HPP
#define KSG_MARKOV_HPP

#include <utility>
#include <vector>

#include "ksg/rational.hpp"

namespace ksg::markov {

using Row = std::vector<std::pair<int, Rational>>;
using Graph = std::vector<Row>;
using Mask = std::vector<char>;

/// Nodes that can reach a target node through nodes outside blocked.
Mask can_reach(const Graph &g, const Mask &target, const Mask &blocked = {});

/// Exact probability of eventually hitting target from every node. Blocked
/// nodes are treated as absorbing failures. Nodes without a path to target
/// get 0; the remaining system is solved by exact Gaussian elimination.
std::vector<Rational> reach_values(const Graph &g, const Mask &target, const Mask &blocked = {});

/// Tarjan SCC ids over the subgraph induced by allowed (all nodes if empty).
/// Nodes outside allowed get -1. Returns the number of components.
int scc(const std::vector<std::vector<int>> &adj, std::vector<int> &comp, const Mask &allowed = {});

/// Nodes lying in a bottom strongly connected component.
std::vector<std::vector<int>> bottom_sccs(const Graph &g);

/// Markov decision process: actions[s][a] is a distribution over nodes.
struct Mdp
{
    std::vector<std::vector<Row>> actions;
    std::size_t size() const { return actions.size(); }
};

/// Maximal end components of the sub-MDP restricted to allowed nodes.
std::vector<std::vector<int>> maximal_end_components(const Mdp &mdp, const Mask &allowed);

/// Exact maximal probability of reaching target, with blocked nodes as
/// absorbing failures. Computed by policy iteration from a policy that
/// reaches the target with positive probability wherever that is possible.
std::vector<Rational> max_reach_values(const Mdp &mdp, const Mask &target, const Mask &blocked = {});

}

#endif
