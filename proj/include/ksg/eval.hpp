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

#ifndef KSG_EVAL_HPP
#define KSG_EVAL_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ksg/markov.hpp"
#include "ksg/model.hpp"

namespace ksg {

struct ProductNode
{
    StateId state = 0;
    MemoryId eve = 0;
    MemoryId adam = 0;
};

/// Markov chain induced by two finite-memory strategies: nodes are the
/// reachable (state, eve memory, adam memory) triples.
struct ProductChain
{
    std::vector<ProductNode> nodes;
    markov::Graph edges;
    int initial = 0;
    markov::Mask final_nodes;
};

ProductChain build_chain(const Arena &arena, const FiniteMemoryStrategy &eve,
                         const FiniteMemoryStrategy &adam);

Rational reach_probability(const ProductChain &chain);
/// Probability of reaching a bottom SCC that contains a final node.
Rational buchi_probability(const ProductChain &chain);
Rational objective_probability(const ProductChain &chain, Objective objective);

/// Exact probability that the objective holds when both strategies are played.
Rational evaluate(const Arena &arena, const FiniteMemoryStrategy &eve,
                  const FiniteMemoryStrategy &adam, Objective objective);

struct EvalResult
{
    enum class Method { Exact, MonteCarlo };

    Rational probability;
    Method method = Method::Exact;
    // Monte Carlo only.
    std::size_t samples = 0;
    std::size_t successes = 0;
    double estimate = 0.0;
    double half_width = 0.0;
    std::size_t horizon = 0;
    std::size_t buchi_window = 0;
    bool approximate = false;
    std::string generator;
    std::uint64_t seed = 0;
};

struct MonteCarloOptions
{
    std::size_t samples = 10'000;
    std::size_t horizon = 1'000;
    // 0 means a tenth of the horizon.
    std::size_t buchi_window = 0;
    std::uint64_t seed = 1;
    unsigned threads = 1;
};

inline constexpr const char *kGeneratorId = "mt19937_64+splitmix64-chunk-seeding";

/// Frequency estimate with a 95% normal-approximation half-width. Büchi
/// and co-Büchi are approximated by final visits in the trailing window.
/// Samples are split into fixed chunks with their own derived seeds, so
/// the estimate does not depend on the thread count.
EvalResult monte_carlo(const Arena &arena, const FiniteMemoryStrategy &eve,
                       const FiniteMemoryStrategy &adam, Objective objective,
                       const MonteCarloOptions &options);

/// Fully observable MDP for Adam once Eve's strategy is folded in: nodes
/// are reachable (state, eve memory) pairs, actions are Adam's.
struct FoldedMdp
{
    markov::Mdp mdp;
    std::vector<std::pair<StateId, MemoryId>> nodes;
    markov::Mask final_nodes;
};

FoldedMdp fold_eve_strategy(const Arena &arena, const FiniteMemoryStrategy &eve);

/// Least probability of the objective that a fully informed Adam can enforce
/// against eve. A value of 1 certifies eve almost-surely winning against every
/// Adam strategy, observation-based or not.
EvalResult best_response_full_info(const Arena &arena, const FiniteMemoryStrategy &eve,
                                   Objective objective);

enum class Verdict { Yes, No, Unknown };
std::string_view to_string(Verdict v);

struct BruteForceOptions
{
    std::size_t adam_memory_bound = 2;
    std::uint64_t max_candidates = 10'000'000;
};

/// Exhaustive oracle for tiny games. Yes when some knowledge-only uniform
/// candidate has value 1 against the fully informed adversary; No when every
/// candidate is beaten (value < 1) by some uniform observation-based Adam
/// transducer within the memory bound; Unknown otherwise.
Verdict brute_force_verdict(const Arena &arena, Objective objective,
                            const BruteForceOptions &options = {});

}

#endif
