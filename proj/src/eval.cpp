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

#include "ksg/eval.hpp"

#include <cmath>
#include <deque>
#include <map>
#include <random>
#include <thread>

#include "ksg/errors.hpp"
#include "ksg/knowledge.hpp"

namespace ksg {

ProductChain build_chain(const Arena &arena, const FiniteMemoryStrategy &eve,
                         const FiniteMemoryStrategy &adam)
{
    validate_strategy(arena, Player::Eve, eve);
    validate_strategy(arena, Player::Adam, adam);
    ProductChain chain;
    std::map<std::tuple<StateId, MemoryId, MemoryId>, int> ids;
    auto intern = [&](StateId s, MemoryId me, MemoryId ma) {
        auto [it, fresh] = ids.emplace(std::make_tuple(s, me, ma), static_cast<int>(chain.nodes.size()));
        if (fresh) chain.nodes.push_back({s, me, ma});
        return it->second;
    };
    chain.initial = intern(arena.init, eve.init, adam.init);
    for (std::size_t i = 0; i < chain.nodes.size(); ++i) {
        const auto node = chain.nodes[i];
        auto dist = step_distribution(arena, node.state, eve.move[static_cast<std::size_t>(node.eve)],
                                      adam.move[static_cast<std::size_t>(node.adam)]);
        std::vector<Distribution::Entry> row;
        for (const auto &[t, w] : dist.entries()) {
            auto ti = static_cast<std::size_t>(t);
            MemoryId me = eve.update[static_cast<std::size_t>(node.eve)]
                                    [static_cast<std::size_t>(arena.eve_obs.block_of[ti])];
            MemoryId ma = adam.update[static_cast<std::size_t>(node.adam)]
                                     [static_cast<std::size_t>(arena.adam_obs.block_of[ti])];
            row.emplace_back(intern(t, me, ma), w);
        }
        chain.edges.push_back(Distribution(std::move(row)).entries());
    }
    chain.final_nodes.resize(chain.nodes.size());
    for (std::size_t i = 0; i < chain.nodes.size(); ++i)
        chain.final_nodes[i] = arena.is_final(chain.nodes[i].state) ? 1 : 0;
    return chain;
}

Rational reach_probability(const ProductChain &chain)
{
    return markov::reach_values(chain.edges, chain.final_nodes)[static_cast<std::size_t>(chain.initial)];
}

Rational buchi_probability(const ProductChain &chain)
{
    markov::Mask accepting(chain.nodes.size(), 0);
    for (const auto &bscc : markov::bottom_sccs(chain.edges)) {
        bool has_final = false;
        for (int v : bscc) has_final = has_final || chain.final_nodes[static_cast<std::size_t>(v)];
        if (has_final)
            for (int v : bscc) accepting[static_cast<std::size_t>(v)] = 1;
    }
    return markov::reach_values(chain.edges, accepting)[static_cast<std::size_t>(chain.initial)];
}

Rational objective_probability(const ProductChain &chain, Objective objective)
{
    switch (objective) {
    case Objective::Reachability: return reach_probability(chain);
    case Objective::Safety: return 1 - reach_probability(chain);
    case Objective::Buchi: return buchi_probability(chain);
    case Objective::CoBuchi: return 1 - buchi_probability(chain);
    }
    return Rational(0);
}

Rational evaluate(const Arena &arena, const FiniteMemoryStrategy &eve,
                  const FiniteMemoryStrategy &adam, Objective objective)
{
    return objective_probability(build_chain(arena, eve, adam), objective);
}

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

struct Sampler
{
    std::vector<int> ids;
    std::vector<double> cdf;

    explicit Sampler(const Distribution &d)
    {
        double acc = 0;
        for (const auto &[id, w] : d.entries()) {
            acc += w.get_d();
            ids.push_back(id);
            cdf.push_back(acc);
        }
    }

    int draw(std::mt19937_64 &rng) const
    {
        // 53-bit uniform in [0, 1), scaled to the accumulated mass.
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53 * cdf.back();
        for (std::size_t i = 0; i + 1 < cdf.size(); ++i)
            if (u < cdf[i]) return ids[i];
        return ids.back();
    }
};

constexpr std::size_t kChunk = 1024;

}

EvalResult monte_carlo(const Arena &arena, const FiniteMemoryStrategy &eve,
                       const FiniteMemoryStrategy &adam, Objective objective,
                       const MonteCarloOptions &options)
{
    if (options.samples == 0) throw ValidationError("monte carlo needs at least one sample");
    validate_strategy(arena, Player::Eve, eve);
    validate_strategy(arena, Player::Adam, adam);
    const std::size_t window =
        options.buchi_window ? options.buchi_window : std::max<std::size_t>(1, options.horizon / 10);

    std::vector<Sampler> eve_moves, adam_moves, delta;
    for (const auto &d : eve.move) eve_moves.emplace_back(d);
    for (const auto &d : adam.move) adam_moves.emplace_back(d);
    for (const auto &d : arena.transitions) delta.emplace_back(d);

    const bool tail = objective == Objective::Buchi || objective == Objective::CoBuchi;
    auto run = [&](std::mt19937_64 &rng) {
        StateId s = arena.init;
        MemoryId me = eve.init, ma = adam.init;
        bool hit = arena.is_final(s) && (!tail || options.horizon <= window);
        for (std::size_t t = 1; t <= options.horizon && !(hit && !tail); ++t) {
            int e = eve_moves[static_cast<std::size_t>(me)].draw(rng);
            int a = adam_moves[static_cast<std::size_t>(ma)].draw(rng);
            s = delta[arena.index(s, e, a)].draw(rng);
            me = eve.update[static_cast<std::size_t>(me)][static_cast<std::size_t>(arena.eve_obs.block_of[static_cast<std::size_t>(s)])];
            ma = adam.update[static_cast<std::size_t>(ma)][static_cast<std::size_t>(arena.adam_obs.block_of[static_cast<std::size_t>(s)])];
            if (arena.is_final(s) && (!tail || t + window > options.horizon)) {
                hit = true;
                if (!tail) break;
            }
        }
        bool positive = objective == Objective::Reachability || objective == Objective::Buchi;
        return hit == positive;
    };

    const std::size_t chunks = (options.samples + kChunk - 1) / kChunk;
    std::vector<std::size_t> chunk_successes(chunks, 0);
    auto work = [&](std::size_t first) {
        for (std::size_t c = first; c < chunks; c += std::max(1U, options.threads)) {
            std::mt19937_64 rng(splitmix64(options.seed ^ splitmix64(c)));
            const std::size_t lo = c * kChunk, hi = std::min(options.samples, lo + kChunk);
            std::size_t ok = 0;
            for (std::size_t i = lo; i < hi; ++i) ok += run(rng) ? 1 : 0;
            chunk_successes[c] = ok;
        }
    };
    if (options.threads <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < options.threads; ++w) pool.emplace_back(work, w);
        for (auto &t : pool) t.join();
    }

    EvalResult r;
    r.method = EvalResult::Method::MonteCarlo;
    r.samples = options.samples;
    for (auto c : chunk_successes) r.successes += c;
    r.probability = Rational(static_cast<unsigned long>(r.successes), static_cast<unsigned long>(r.samples));
    r.probability.canonicalize();
    r.estimate = static_cast<double>(r.successes) / static_cast<double>(r.samples);
    r.half_width = 1.96 * std::sqrt(r.estimate * (1.0 - r.estimate) / static_cast<double>(r.samples));
    r.horizon = options.horizon;
    r.buchi_window = window;
    r.approximate = tail;
    r.generator = kGeneratorId;
    r.seed = options.seed;
    return r;
}

FoldedMdp fold_eve_strategy(const Arena &arena, const FiniteMemoryStrategy &eve)
{
    validate_strategy(arena, Player::Eve, eve);
    FoldedMdp out;
    std::map<std::pair<StateId, MemoryId>, int> ids;
    auto intern = [&](StateId s, MemoryId m) {
        auto [it, fresh] = ids.emplace(std::make_pair(s, m), static_cast<int>(out.nodes.size()));
        if (fresh) out.nodes.emplace_back(s, m);
        return it->second;
    };
    intern(arena.init, eve.init);
    for (std::size_t i = 0; i < out.nodes.size(); ++i) {
        const auto [s, m] = out.nodes[i];
        std::vector<markov::Row> actions;
        for (std::size_t a = 0; a < arena.adam_actions.size(); ++a) {
            auto dist = step_distribution(arena, s, eve.move[static_cast<std::size_t>(m)],
                                          Distribution::point(static_cast<int>(a)));
            std::vector<Distribution::Entry> row;
            for (const auto &[t, w] : dist.entries()) {
                MemoryId next = eve.update[static_cast<std::size_t>(m)][static_cast<std::size_t>(
                    arena.eve_obs.block_of[static_cast<std::size_t>(t)])];
                row.emplace_back(intern(t, next), w);
            }
            actions.push_back(Distribution(std::move(row)).entries());
        }
        out.mdp.actions.push_back(std::move(actions));
    }
    out.final_nodes.resize(out.nodes.size());
    for (std::size_t i = 0; i < out.nodes.size(); ++i)
        out.final_nodes[i] = arena.is_final(out.nodes[i].first) ? 1 : 0;
    return out;
}

EvalResult best_response_full_info(const Arena &arena, const FiniteMemoryStrategy &eve,
                                   Objective objective)
{
    const auto folded = fold_eve_strategy(arena, eve);
    const auto n = folded.nodes.size();
    const auto &fin = folded.final_nodes;

    auto union_of = [&](const std::vector<std::vector<int>> &groups, bool need_final) {
        markov::Mask m(n, 0);
        for (const auto &g : groups) {
            bool has_final = false;
            for (int v : g) has_final = has_final || fin[static_cast<std::size_t>(v)];
            if (need_final && !has_final) continue;
            for (int v : g) m[static_cast<std::size_t>(v)] = 1;
        }
        return m;
    };
    markov::Mask non_final(n);
    for (std::size_t i = 0; i < n; ++i) non_final[i] = fin[i] ? 0 : 1;

    // Adam maximizes the probability of the complementary event.
    std::vector<Rational> adam;
    switch (objective) {
    case Objective::Reachability: {
        auto safe = union_of(markov::maximal_end_components(folded.mdp, non_final), false);
        adam = markov::max_reach_values(folded.mdp, safe, fin);
        break;
    }
    case Objective::Buchi: {
        auto safe = union_of(markov::maximal_end_components(folded.mdp, non_final), false);
        adam = markov::max_reach_values(folded.mdp, safe);
        break;
    }
    case Objective::Safety:
        adam = markov::max_reach_values(folded.mdp, fin);
        break;
    case Objective::CoBuchi: {
        auto accepting = union_of(markov::maximal_end_components(folded.mdp, {}), true);
        adam = markov::max_reach_values(folded.mdp, accepting);
        break;
    }
    }
    EvalResult r;
    r.method = EvalResult::Method::Exact;
    r.probability = 1 - adam[0];
    return r;
}

std::string_view to_string(Verdict v)
{
    switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
    }
    return "?";
}

namespace {

// Uniform observation-based Adam transducers with exactly `size` memory
// states and initial memory 0, in a fixed enumeration order.
class AdamTransducers
{
public:
    AdamTransducers(const Arena &arena, std::size_t size)
        : arena_(arena), size_(size), moves_(size, 1), updates_(size * arena.adam_obs.size(), 0)
    {
    }

    FiniteMemoryStrategy current() const
    {
        FiniteMemoryStrategy s;
        s.owner = Player::Adam;
        s.init = 0;
        const auto blocks = arena_.adam_obs.size();
        for (std::size_t m = 0; m < size_; ++m) {
            s.memory.push_back("m" + std::to_string(m));
            std::vector<int> acts;
            for (std::size_t a = 0; a < arena_.adam_actions.size(); ++a)
                if (moves_[m] >> a & 1U) acts.push_back(static_cast<int>(a));
            s.move.push_back(Distribution::uniform(acts));
            s.update.emplace_back(updates_.begin() + static_cast<long>(m * blocks),
                                  updates_.begin() + static_cast<long>((m + 1) * blocks));
        }
        return s;
    }

    bool next()
    {
        for (auto &u : updates_) {
            if (++u < static_cast<MemoryId>(size_)) return true;
            u = 0;
        }
        const unsigned full = (1U << arena_.adam_actions.size()) - 1;
        for (auto &mv : moves_) {
            if (++mv <= full) return true;
            mv = 1;
        }
        return false;
    }

private:
    const Arena &arena_;
    std::size_t size_;
    std::vector<unsigned> moves_;
    std::vector<MemoryId> updates_;
};

}

Verdict brute_force_verdict(const Arena &arena, Objective objective, const BruteForceOptions &options)
{
    if (objective != Objective::Reachability && objective != Objective::Buchi)
        throw ValidationError("brute force verdicts exist for reach and buchi only");
    const auto ka = build_knowledge_arena(arena);
    const auto n = ka.knowledges.size();
    const std::uint64_t base = (std::uint64_t{1} << arena.eve_actions.size()) - 1;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (total > options.max_candidates / base) throw ResourceLimit("too many candidates for brute force");
        total *= base;
    }

    // Representatives of candidates that differ on the knowledges they can
    // actually reach; candidates agreeing there induce the same strategy.
    std::vector<FiniteMemoryStrategy> reps;
    std::vector<std::uint64_t> digits(n, 0);
    for (;;) {
        KnowledgeOnlyStrategy c;
        for (std::size_t k = 0; k < n; ++k)
            c.choice[ka.knowledges[k]] = static_cast<ActionSet>(digits[k] + 1);
        auto lowered = lower_strategy(arena, c);
        std::vector<char> used(n, 0);
        for (const auto &[k, dom] : reachable_knowledges(arena, c))
            used[static_cast<std::size_t>(ka.knowledge_index(k))] = 1;
        reps.push_back(std::move(lowered));
        // Advance the least significant digit among the used knowledges.
        std::size_t pos = n;
        for (std::size_t k = n; k-- > 0;)
            if (used[k]) {
                pos = k;
                break;
            }
        if (pos == n) break;
        for (std::size_t k = pos + 1; k < n; ++k) digits[k] = 0;
        std::size_t p = pos;
        for (;;) {
            if (++digits[p] < base) break;
            digits[p] = 0;
            if (p == 0) {
                p = n;
                break;
            }
            --p;
        }
        if (p == n) break;
    }

    for (const auto &eve : reps)
        if (best_response_full_info(arena, eve, objective).probability == 1) return Verdict::Yes;

    for (const auto &eve : reps) {
        bool refuted = false;
        for (std::size_t size = 1; size <= options.adam_memory_bound && !refuted; ++size) {
            AdamTransducers adam(arena, size);
            do {
                if (evaluate(arena, eve, adam.current(), objective) < 1) refuted = true;
            } while (!refuted && adam.next());
        }
        if (!refuted) return Verdict::Unknown;
    }
    return Verdict::No;
}

}
