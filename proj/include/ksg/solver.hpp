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

#ifndef KSG_SOLVER_HPP
#define KSG_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "ksg/errors.hpp"
#include "ksg/halfplayer.hpp"
#include "ksg/knowledge.hpp"
#include "ksg/model.hpp"

namespace ksg {

/// Knowledge-only uniform strategy given as one non-empty action set per
/// reachable knowledge of the knowledge arena, with its enumeration index.
struct CandidateStrategy
{
    std::vector<ActionSet> choice;
    std::uint64_t index = 0;

    friend bool operator==(const CandidateStrategy &, const CandidateStrategy &) = default;
};

KnowledgeOnlyStrategy to_knowledge_only(const KnowledgeArena &ka, const CandidateStrategy &c);

/// (2^|actions| - 1)^knowledges, saturated at UINT64_MAX.
std::uint64_t candidate_count(const KnowledgeArena &ka);

CandidateStrategy candidate_at(const KnowledgeArena &ka, std::uint64_t index);

/// Every map from reachable knowledges to non-empty action sets, in
/// lexicographic order: knowledge 0 is the most significant position and
/// sets are ordered by ascending bitmask.
class CandidateEnumerator
{
public:
    /// Throws ResourceLimit if the candidate count exceeds cap.
    CandidateEnumerator(const KnowledgeArena &ka, std::uint64_t cap);

    std::uint64_t total() const { return total_; }
    bool next(CandidateStrategy &out);

private:
    const KnowledgeArena *ka_;
    std::uint64_t total_ = 0;
    std::uint64_t position_ = 0;
};

inline CandidateEnumerator enumerate_candidates(const KnowledgeArena &ka, std::uint64_t cap)
{
    return CandidateEnumerator(ka, cap);
}

/// Adam's view once Eve's candidate is fixed: states are knowledge-arena
/// states, Eve's uniform choice is folded into the transitions, Adam observes
/// his base blocks refined by final membership (numbered as
/// refine_by_final(base, base.adam_obs) numbers them).
struct AdversaryGame
{
    OneHalfGame game;
    Objective adam_objective = Objective::Safety;
};

AdversaryGame fix_candidate(const Arena &arena, const KnowledgeArena &ka, const CandidateStrategy &c,
                            Objective eve_objective);

struct SolverOptions
{
    std::uint64_t max_candidates = 10'000'000;
    std::size_t max_beliefs = 1'000'000;
    unsigned threads = 1;
    bool debug_candidates = false;
};

struct CandidateCheck
{
    bool eve_wins = false;
    PositiveWinReport adam;
    /// Knowledges Eve can reach while following the candidate.
    std::vector<char> used_knowledges;
};

CandidateCheck check_candidate(const Arena &arena, const KnowledgeArena &ka, const CandidateStrategy &c,
                               Objective eve_objective, const SolverOptions &options = {});

/// Index of the first candidate after c that differs from it on a knowledge
/// marked in used, or nothing when there is none. Candidates skipped over
/// agree with c wherever Eve can be, so they lower to the same strategy.
std::optional<std::uint64_t> next_distinct_candidate(const KnowledgeArena &ka, const CandidateStrategy &c,
                                                     const std::vector<char> &used);

struct CandidateDiagnostics
{
    std::uint64_t index = 0;
    std::vector<ActionSet> choice;
    bool eve_wins = false;
    std::size_t adam_winning_states = 0;
    std::size_t sure_beliefs = 0;
    std::size_t beliefs = 0;
    std::size_t iterations = 0;
    std::size_t adam_witness_memory = 0;
};

struct SolveReport
{
    bool verdict = false;
    Objective objective = Objective::Reachability;
    std::optional<FiniteMemoryStrategy> witness;
    std::optional<CandidateStrategy> winning_candidate;
    std::vector<Knowledge> witness_winning_knowledges;
    std::uint64_t candidates_checked = 0;
    std::uint64_t candidate_count = 0;
    std::size_t knowledge_states = 0;
    std::size_t knowledges = 0;
    double elapsed_ms = 0.0;
    std::vector<CandidateDiagnostics> diagnostics;
};

/// Thrown when a cap is exceeded while solving; carries what was known.
class SolveLimitError : public ResourceLimit
{
public:
    SolveLimitError(const std::string &what, SolveReport partial)
        : ResourceLimit(what), partial_(std::move(partial))
    {
    }
    const SolveReport &partial() const { return partial_; }

private:
    SolveReport partial_;
};

/// Does Eve have an almost-surely winning strategy? Every candidate is
/// checked by asking whether Adam positively wins the complementary
/// objective in the candidate's adversary game; the reported witness is the
/// canonically least candidate that survives, lowered to the base arena.
SolveReport decide(const Arena &arena, Objective objective, const SolverOptions &options = {});
SolveReport decide_almost_sure_reach(const Arena &arena, const SolverOptions &options = {});
SolveReport decide_almost_sure_buchi(const Arena &arena, const SolverOptions &options = {});

/// Assigns to each knowledge in w the Eve actions whose every successor
/// knowledge stays in w; knowledges outside w get every action.
/// Throws NotClosed when some knowledge of w has no such action.
CandidateStrategy random_safe_strategy(const Arena &arena, const KnowledgeArena &ka,
                                       const std::vector<Knowledge> &w);

}

#endif
