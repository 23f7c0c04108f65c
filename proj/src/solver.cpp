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

#include "ksg/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <mutex>
#include <thread>

#include "ksg/errors.hpp"

namespace ksg {

namespace {

std::uint64_t radix(const KnowledgeArena &ka)
{
    return (std::uint64_t{1} << ka.eve_action_count) - 1;
}

}

std::uint64_t candidate_count(const KnowledgeArena &ka)
{
    const std::uint64_t base = radix(ka);
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < ka.knowledges.size(); ++i) {
        if (total > std::numeric_limits<std::uint64_t>::max() / base)
            return std::numeric_limits<std::uint64_t>::max();
        total *= base;
    }
    return total;
}

CandidateStrategy candidate_at(const KnowledgeArena &ka, std::uint64_t index)
{
    const std::uint64_t base = radix(ka);
    CandidateStrategy c;
    c.index = index;
    c.choice.assign(ka.knowledges.size(), 1);
    for (std::size_t k = ka.knowledges.size(); k-- > 0;) {
        c.choice[k] = static_cast<ActionSet>(index % base + 1);
        index /= base;
    }
    return c;
}

KnowledgeOnlyStrategy to_knowledge_only(const KnowledgeArena &ka, const CandidateStrategy &c)
{
    KnowledgeOnlyStrategy s;
    for (std::size_t k = 0; k < ka.knowledges.size(); ++k) s.choice[ka.knowledges[k]] = c.choice[k];
    return s;
}

CandidateEnumerator::CandidateEnumerator(const KnowledgeArena &ka, std::uint64_t cap)
    : ka_(&ka), total_(candidate_count(ka))
{
    if (total_ > cap)
        throw ResourceLimit(std::to_string(ka.knowledges.size()) + " knowledges give " +
                            (total_ == std::numeric_limits<std::uint64_t>::max() ? std::string("more than 2^64")
                                                                                 : std::to_string(total_)) +
                            " candidates, above the cap of " + std::to_string(cap));
}

bool CandidateEnumerator::next(CandidateStrategy &out)
{
    if (position_ >= total_) return false;
    out = candidate_at(*ka_, position_++);
    return true;
}

AdversaryGame fix_candidate(const Arena &arena, const KnowledgeArena &ka, const CandidateStrategy &c,
                            Objective eve_objective)
{
    if (eve_objective != Objective::Reachability && eve_objective != Objective::Buchi)
        throw ValidationError("only reach and buchi objectives can be decided");
    const auto &base = ka.arena;
    Arena g;
    g.states = base.states;
    g.eve_actions = {"*"};
    g.adam_actions = base.adam_actions;
    g.init = base.init;
    g.final_states = base.final_states;
    g.eve_obs = ObsPartition::single(base.num_states());
    const auto refined = refine_by_final(arena, arena.adam_obs);
    std::vector<BlockId> adam_block_of;
    for (const auto &st : ka.states)
        adam_block_of.push_back(refined.block_of[static_cast<std::size_t>(st.real)]);
    g.adam_obs = ObsPartition::from_block_of(std::move(adam_block_of), refined.size());
    g.reset_transitions();
    for (std::size_t s = 0; s < ka.states.size(); ++s) {
        const ActionSet dom = c.choice[static_cast<std::size_t>(ka.states[s].knowledge)];
        const auto acts = action_members(dom);
        Rational share(1, static_cast<unsigned long>(acts.size()));
        share.canonicalize();
        for (std::size_t x = 0; x < base.adam_actions.size(); ++x) {
            std::vector<Distribution::Entry> mix;
            for (auto e : acts) {
                const int ke = ka.eve_action_index(e, dom);
                for (const auto &[t, w] : base.delta(static_cast<StateId>(s), ke, static_cast<ActionId>(x)).entries())
                    mix.emplace_back(t, share * w);
            }
            g.delta(static_cast<StateId>(s), 0, static_cast<ActionId>(x)) = Distribution(std::move(mix));
        }
    }
    AdversaryGame out{make_one_half_game(std::move(g), Player::Adam),
                      eve_objective == Objective::Reachability ? Objective::Safety : Objective::CoBuchi};
    return out;
}

CandidateCheck check_candidate(const Arena &arena, const KnowledgeArena &ka, const CandidateStrategy &c,
                               Objective eve_objective, const SolverOptions &options)
{
    auto adversary = fix_candidate(arena, ka, c, eve_objective);
    HalfPlayerOptions hp;
    hp.max_beliefs = options.max_beliefs;
    CandidateCheck check;
    check.adam = adversary.adam_objective == Objective::Safety ? positive_safety(adversary.game, hp)
                                                               : positive_cobuchi(adversary.game, hp);
    check.eve_wins = !check.adam.witness.has_value();
    check.used_knowledges.assign(ka.knowledges.size(), 0);
    for (const auto &[k, dom] : reachable_knowledges(arena, to_knowledge_only(ka, c)))
        check.used_knowledges[static_cast<std::size_t>(ka.knowledge_index(k))] = 1;
    return check;
}

// Index of the next candidate that differs from c on a used knowledge: add
// one at the least significant used position and clear every lower one.
std::optional<std::uint64_t> next_distinct_candidate(const KnowledgeArena &ka, const CandidateStrategy &c,
                                                     const std::vector<char> &used)
{
    const std::uint64_t base = radix(ka);
    const auto n = ka.knowledges.size();
    std::size_t pos = n;
    for (std::size_t k = n; k-- > 0;)
        if (used[k]) {
            pos = k;
            break;
        }
    if (pos == n) return std::nullopt;
    std::vector<std::uint64_t> digits(n);
    for (std::size_t k = 0; k < n; ++k) digits[k] = k <= pos ? c.choice[k] - 1U : 0;
    std::size_t p = pos;
    for (;;) {
        if (++digits[p] < base) break;
        digits[p] = 0;
        if (p == 0) return std::nullopt;
        --p;
    }
    std::uint64_t index = 0;
    for (std::size_t k = 0; k < n; ++k) index = index * base + digits[k];
    return index;
}

namespace {

constexpr std::uint64_t kChunks = 64;

struct ChunkResult
{
    bool done = false;
    std::optional<std::uint64_t> success;
    std::uint64_t checked = 0;
    std::vector<CandidateDiagnostics> diagnostics;
};


}

SolveReport decide(const Arena &arena, Objective objective, const SolverOptions &options)
{
    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    };
    SolveReport report;
    report.objective = objective;
    if (objective != Objective::Reachability && objective != Objective::Buchi)
        throw ValidationError("only reach and buchi objectives can be decided");

    KnowledgeArenaOptions kopts;
    kopts.max_states = options.max_beliefs;
    KnowledgeArena ka;
    try {
        ka = build_knowledge_arena(arena, kopts);
    } catch (const ResourceLimit &e) {
        report.elapsed_ms = elapsed();
        throw SolveLimitError(e.what(), report);
    }
    report.knowledge_states = ka.states.size();
    report.knowledges = ka.knowledges.size();
    report.candidate_count = candidate_count(ka);
    try {
        CandidateEnumerator check_cap(ka, options.max_candidates);
    } catch (const ResourceLimit &e) {
        report.elapsed_ms = elapsed();
        throw SolveLimitError(e.what(), report);
    }

    const std::uint64_t total = report.candidate_count;
    const std::uint64_t chunk_size = (total + kChunks - 1) / kChunks;
    const std::uint64_t chunks = (total + chunk_size - 1) / chunk_size;
    std::vector<ChunkResult> results(chunks);
    std::atomic<std::uint64_t> best_chunk{chunks};
    std::atomic<std::uint64_t> next_chunk{0};
    std::mutex error_mutex;
    std::optional<std::string> limit_error;

    auto run_chunk = [&](std::uint64_t ci) {
        auto &res = results[ci];
        std::uint64_t index = ci * chunk_size;
        const std::uint64_t hi = std::min(total, index + chunk_size);
        while (index < hi) {
            if (best_chunk.load() < ci) return;
            const auto c = candidate_at(ka, index);
            auto check = check_candidate(arena, ka, c, objective, options);
            ++res.checked;
            if (options.debug_candidates) {
                CandidateDiagnostics d;
                d.index = c.index;
                d.choice = c.choice;
                d.eve_wins = check.eve_wins;
                d.adam_winning_states = check.adam.winning_states.count();
                d.sure_beliefs = check.adam.sure_beliefs.size();
                d.beliefs = check.adam.beliefs;
                d.iterations = check.adam.iterations;
                d.adam_witness_memory = check.adam.witness ? check.adam.witness->size() : 0;
                res.diagnostics.push_back(std::move(d));
            }
            if (check.eve_wins) {
                res.success = index;
                std::uint64_t cur = best_chunk.load();
                while (ci < cur && !best_chunk.compare_exchange_weak(cur, ci)) { }
                break;
            }
            auto skip = next_distinct_candidate(ka, c, check.used_knowledges);
            if (!skip) break;
            index = *skip;
        }
        res.done = true;
    };

    auto worker = [&] {
        for (;;) {
            const std::uint64_t ci = next_chunk.fetch_add(1);
            if (ci >= chunks || ci > best_chunk.load()) return;
            try {
                run_chunk(ci);
            } catch (const ResourceLimit &e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!limit_error) limit_error = e.what();
                best_chunk.store(0);
                return;
            }
        }
    };
    const unsigned threads = std::max(1U, options.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto &t : pool) t.join();
    }

    // Deterministic reduction: the first chunk holding a success decides.
    for (std::uint64_t ci = 0; ci < chunks; ++ci) {
        const auto &res = results[ci];
        report.candidates_checked += res.checked;
        for (const auto &d : res.diagnostics) report.diagnostics.push_back(d);
        if (res.success) {
            report.verdict = true;
            report.winning_candidate = candidate_at(ka, *res.success);
            break;
        }
        if (!res.done && !limit_error) throw std::logic_error("candidate chunk left unfinished");
    }
    if (limit_error && !report.verdict) {
        report.elapsed_ms = elapsed();
        throw SolveLimitError(*limit_error, report);
    }

    if (report.verdict) {
        const auto &c = *report.winning_candidate;
        auto witness = lower_strategy(arena, to_knowledge_only(ka, c));
        validate_strategy(arena, Player::Eve, witness);
        report.witness = std::move(witness);
        auto check = check_candidate(arena, ka, c, objective, options);
        std::vector<char> losing(ka.knowledges.size(), 0);
        for (std::size_t s = 0; s < ka.states.size(); ++s)
            if (check.adam.winning_states.contains(s))
                losing[static_cast<std::size_t>(ka.states[s].knowledge)] = 1;
        for (std::size_t k = 0; k < ka.knowledges.size(); ++k)
            if (!losing[k]) report.witness_winning_knowledges.push_back(ka.knowledges[k]);
    }
    report.elapsed_ms = elapsed();
    return report;
}

SolveReport decide_almost_sure_reach(const Arena &arena, const SolverOptions &options)
{
    return decide(arena, Objective::Reachability, options);
}

SolveReport decide_almost_sure_buchi(const Arena &arena, const SolverOptions &options)
{
    return decide(arena, Objective::Buchi, options);
}

CandidateStrategy random_safe_strategy(const Arena &arena, const KnowledgeArena &ka,
                                       const std::vector<Knowledge> &w)
{
    KnowledgeUpdater updater(arena);
    auto in_w = [&](const Knowledge &k) { return std::find(w.begin(), w.end(), k) != w.end(); };
    const ActionSet all = static_cast<ActionSet>((1U << arena.eve_actions.size()) - 1);
    CandidateStrategy c;
    c.choice.assign(ka.knowledges.size(), all);
    for (std::size_t k = 0; k < ka.knowledges.size(); ++k) {
        const auto &know = ka.knowledges[k];
        if (!in_w(know)) continue;
        ActionSet safe = 0;
        for (std::size_t e = 0; e < arena.eve_actions.size(); ++e) {
            const ActionSet single = ActionSet{1} << e;
            bool ok = true;
            for (std::size_t b = 0; b < arena.eve_obs.size() && ok; ++b) {
                auto next = updater.raw_update(know, static_cast<BlockId>(b), single);
                ok = next.empty() || in_w(next);
            }
            if (ok) safe |= single;
        }
        if (!safe)
            throw NotClosed("no action keeps knowledge " + knowledge_name(arena, know) + " inside the set");
        c.choice[k] = safe;
    }
    // Index in the enumeration order.
    const std::uint64_t base = radix(ka);
    for (auto choice : c.choice) c.index = c.index * base + (choice - 1U);
    return c;
}

}
