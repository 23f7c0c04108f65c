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

// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ksg/errors.hpp"
#include "ksg/eval.hpp"
#include "ksg/game_io.hpp"
#include "ksg/generator.hpp"
#include "ksg/knowledge.hpp"
#include "ksg/solver.hpp"

using namespace ksg;
namespace fs = std::filesystem;

namespace {

struct Outcome
{
    bool pass = false;
    std::string detail;
};

struct CorpusGame
{
    std::uint64_t seed = 0;
    Arena arena;
};

// Small games: at most 4 states, 2 actions per player, 2 blocks per player.
std::vector<CorpusGame> corpus()
{
    std::vector<CorpusGame> games;
    for (std::uint64_t i = 0; i < 240; ++i) {
        GenParams p;
        p.state_count = 2 + i % 3;
        p.eve_action_count = 2;
        p.adam_action_count = (i / 3) % 4 == 0 ? 1 : 2;
        p.transition_density = 0.4 + 0.2 * static_cast<double>(i % 4);
        p.eve_blocks = 1 + (i / 2) % 2;
        p.adam_blocks = 1 + (i / 5) % 2;
        p.final_count = 1 + (i % 7 == 0);
        p.seed = 1000 + i;
        games.push_back({p.seed, generate_game(p)});
    }
    return games;
}

struct Solved
{
    const CorpusGame *game = nullptr;
    Objective objective = Objective::Reachability;
    SolveReport report;
};

struct CorpusRun
{
    std::vector<Solved> solved;
    std::size_t skipped = 0;
    std::size_t yes = 0;
};

const CorpusRun &solved_corpus()
{
    static const auto games = corpus();
    static const CorpusRun run = [] {
        CorpusRun r;
        for (const auto &g : games)
            for (auto objective : {Objective::Reachability, Objective::Buchi}) {
                try {
                    Solved s{&g, objective, decide(g.arena, objective)};
                    r.yes += s.report.verdict;
                    r.solved.push_back(std::move(s));
                } catch (const ResourceLimit &) {
                    ++r.skipped;
                }
            }
        return r;
    }();
    return run;
}

std::string where(const Solved &s)
{
    return "seed " + std::to_string(s.game->seed) + " " + std::string(to_string(s.objective));
}

// Base arena in which Adam observes his blocks refined by final membership,
// numbered the way adversary-game witnesses number them.
Arena adam_refined(const Arena &arena)
{
    Arena a = arena;
    a.adam_obs = refine_by_final(arena, arena.adam_obs);
    return a;
}

std::string stats(const CorpusRun &r)
{
    return std::to_string(r.solved.size()) + " solved (" + std::to_string(r.yes) + " yes), " +
           std::to_string(r.skipped) + " over the candidate cap";
}

Outcome candidate_count_formula()
{
    std::size_t cases = 0;
    for (std::size_t n = 1; n <= 3; ++n)
        for (std::size_t k = 1; k <= 3; ++k) {
            // Chain of n states with discrete observations: n singleton knowledges.
            Arena a;
            for (std::size_t s = 0; s < n; ++s) a.states.push_back("s" + std::to_string(s));
            for (std::size_t e = 0; e < k; ++e) a.eve_actions.push_back("a" + std::to_string(e));
            a.adam_actions = {"x"};
            a.final_states.assign(n, 0);
            a.eve_obs = ObsPartition::discrete(n);
            a.adam_obs = ObsPartition::single(n);
            a.reset_transitions();
            for (std::size_t s = 0; s < n; ++s)
                for (std::size_t e = 0; e < k; ++e)
                    a.delta(static_cast<StateId>(s), static_cast<ActionId>(e), 0) =
                        Distribution::point(static_cast<int>(std::min(s + 1, n - 1)));
            const auto ka = build_knowledge_arena(a);
            if (ka.knowledges.size() != n) return {false, "arena has wrong knowledge count"};
            auto e = enumerate_candidates(ka, 1'000'000);
            std::uint64_t seen = 0;
            CandidateStrategy c;
            std::vector<std::vector<ActionSet>> all;
            while (e.next(c)) {
                ++seen;
                all.push_back(c.choice);
            }
            std::sort(all.begin(), all.end());
            const bool distinct = std::adjacent_find(all.begin(), all.end()) == all.end();
            const auto expected = static_cast<std::uint64_t>(std::pow((1U << k) - 1, n));
            if (seen != expected || !distinct || candidate_count(ka) != expected)
                return {false, "n=" + std::to_string(n) + " k=" + std::to_string(k) + " gave " +
                                   std::to_string(seen) + ", expected " + std::to_string(expected)};
            ++cases;
        }
    return {true, std::to_string(cases) + " (n, k) pairs match (2^k-1)^n"};
}

// Every uniform Adam transducer with up to max_memory states over his
// observations refined by final membership. Returns the least value found.
Rational bounded_adam_value(const Arena &arena, const FiniteMemoryStrategy &eve, Objective objective,
                            std::size_t max_memory)
{
    const auto refined = adam_refined(arena);
    const auto blocks = refined.adam_obs.size();
    const std::size_t sets = (std::size_t{1} << refined.adam_actions.size()) - 1;
    Rational least = 1;
    for (std::size_t m = 1; m <= max_memory; ++m) {
        std::vector<std::size_t> moves(m, 0), updates(m * blocks, 0);
        for (;;) {
            FiniteMemoryStrategy adam;
            adam.owner = Player::Adam;
            for (std::size_t i = 0; i < m; ++i) {
                adam.memory.push_back("m" + std::to_string(i));
                std::vector<int> support;
                for (std::size_t a = 0; a < refined.adam_actions.size(); ++a)
                    if ((moves[i] + 1) >> a & 1U) support.push_back(static_cast<int>(a));
                adam.move.push_back(Distribution::uniform(support));
                adam.update.emplace_back(updates.begin() + static_cast<long>(i * blocks),
                                         updates.begin() + static_cast<long>((i + 1) * blocks));
            }
            least = std::min(least, evaluate(refined, eve, adam, objective));
            // Odometer over moves then updates.
            std::size_t k = 0;
            for (; k < moves.size(); ++k) {
                if (++moves[k] < sets) break;
                moves[k] = 0;
            }
            if (k < moves.size()) continue;
            for (k = 0; k < updates.size(); ++k) {
                if (++updates[k] < m) break;
                updates[k] = 0;
            }
            if (k == updates.size()) break;
        }
    }
    return least;
}

Outcome yes_soundness()
{
    const auto &run = solved_corpus();
    std::size_t failures = 0, checked = 0, bounded_ones = 0;
    std::string first;
    for (const auto &s : run.solved) {
        if (!s.report.verdict) continue;
        ++checked;
        const auto value = best_response_full_info(s.game->arena, *s.report.witness, s.objective).probability;
        if (value != 1) {
            if (!failures) first = "; first: " + where(s) + " value " + format_rational(value);
            ++failures;
            bounded_ones += bounded_adam_value(s.game->arena, *s.report.witness, s.objective, 2) == 1;
        }
    }
    std::string detail = std::to_string(checked) + " yes witnesses, " + std::to_string(failures) +
                         " below 1 against a fully informed Adam; " + stats(run) + first;
    if (failures)
        detail += "; " + std::to_string(bounded_ones) + "/" + std::to_string(failures) +
                  " of those keep value 1 against every observation-based uniform Adam with memory <= 2";
    return {failures == 0 && run.solved.size() >= 200, detail};
}

Outcome no_completeness()
{
    const auto &run = solved_corpus();
    std::size_t failures = 0, candidates = 0, instances = 0;
    std::string first;
    for (const auto &s : run.solved) {
        if (s.report.verdict) continue;
        ++instances;
        const auto &arena = s.game->arena;
        const auto refined = adam_refined(arena);
        const auto ka = build_knowledge_arena(arena);
        auto e = enumerate_candidates(ka, 1'000'000);
        CandidateStrategy c;
        while (e.next(c)) {
            ++candidates;
            const auto check = check_candidate(arena, ka, c, s.objective);
            const auto eve = lower_strategy(arena, to_knowledge_only(ka, c));
            if (!check.adam.witness || evaluate(refined, eve, *check.adam.witness, s.objective) >= 1) {
                if (!failures) first = "; first: " + where(s) + " candidate " + std::to_string(c.index);
                ++failures;
            }
        }
    }
    return {failures == 0, std::to_string(instances) + " no instances, " + std::to_string(candidates) +
                               " candidates, " + std::to_string(failures) + " with Adam witness value 1" + first};
}

Outcome oracle_agreement()
{
    const auto &run = solved_corpus();
    std::size_t decided = 0, unknown = 0, disagreements = 0;
    std::string first;
    for (const auto &s : run.solved) {
        const auto v = brute_force_verdict(s.game->arena, s.objective);
        if (v == Verdict::Unknown) {
            ++unknown;
            continue;
        }
        ++decided;
        if ((v == Verdict::Yes) != s.report.verdict) {
            if (!disagreements)
                first = "; first: " + where(s) + " solver " + (s.report.verdict ? "yes" : "no") + " oracle " +
                        std::string(to_string(v));
            ++disagreements;
        }
    }
    return {disagreements == 0, std::to_string(decided) + " decided by the oracle, " + std::to_string(unknown) +
                                    " unknown, " + std::to_string(disagreements) + " disagreements" + first};
}

FiniteMemoryStrategy random_transducer(GenRng &rng, const Arena &arena, Player owner)
{
    const auto memory = 1 + rng.below(2);
    const auto actions = arena.num_actions(owner);
    FiniteMemoryStrategy s;
    s.owner = owner;
    for (std::size_t m = 0; m < memory; ++m) {
        s.memory.push_back("m" + std::to_string(m));
        std::vector<int> support;
        for (std::size_t a = 0; a < actions; ++a)
            if (rng.below(2)) support.push_back(static_cast<int>(a));
        if (support.empty()) support.push_back(static_cast<int>(rng.below(actions)));
        if (support.size() == 1 || rng.below(2)) {
            s.move.push_back(Distribution::uniform(support));
        } else {
            // Non-uniform mixture 1/3, 2/3 over the first two support actions.
            s.move.push_back(Distribution({{support[0], make_rational(1, 3)}, {support[1], make_rational(2, 3)}}));
        }
        std::vector<MemoryId> up;
        for (std::size_t b = 0; b < arena.obs(owner).size(); ++b) up.push_back(static_cast<MemoryId>(rng.below(memory)));
        s.update.push_back(std::move(up));
    }
    return s;
}

Outcome knowledge_arena_equivalence()
{
    GenRng rng(2024);
    std::size_t mismatches = 0;
    std::string first;
    const Objective objectives[] = {Objective::Reachability, Objective::Safety, Objective::Buchi, Objective::CoBuchi};
    for (std::uint64_t i = 0; i < 100; ++i) {
        GenParams p;
        p.state_count = 2 + i % 3;
        p.adam_action_count = 2;
        p.eve_blocks = 1 + i % 2;
        p.adam_blocks = 1 + (i / 2) % 2;
        p.seed = 5000 + i;
        const auto arena = generate_game(p);
        const auto ka = build_knowledge_arena(arena);
        const auto eve = random_transducer(rng, arena, Player::Eve);
        const auto adam = random_transducer(rng, arena, Player::Adam);
        const auto objective = objectives[i % 4];
        const auto base = evaluate(arena, eve, adam, objective);
        const auto lifted = evaluate(ka.arena, lift_strategy(arena, ka, eve), lift_adam_strategy(ka, adam), objective);
        if (base != lifted) {
            if (!mismatches)
                first = "; first: seed " + std::to_string(p.seed) + " " + format_rational(base) + " vs " +
                        format_rational(lifted);
            ++mismatches;
        }
    }
    return {mismatches == 0, "100 triples, " + std::to_string(mismatches) + " probability mismatches" + first};
}

int sample(std::mt19937_64 &rng, const Distribution &d)
{
    // Exact sampling: draw a uniform integer below the common denominator.
    mpz_class den = 1;
    for (const auto &[id, w] : d.entries()) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), w.get_den().get_mpz_t());
    const auto total = den.get_ui();
    auto r = rng() % total;
    for (const auto &[id, w] : d.entries()) {
        const auto share = (mpz_class(w * den)).get_ui();
        if (r < share) return id;
        r -= share;
    }
    return d.entries().back().first;
}

Outcome knowledge_accuracy()
{
    std::mt19937_64 rng(77);
    std::size_t plays = 0, steps = 0, violations = 0;
    for (std::uint64_t g = 0; g < 100; ++g) {
        GenParams p;
        p.state_count = 2 + g % 4;
        p.eve_action_count = 1 + g % 3;
        p.adam_action_count = 2;
        p.eve_blocks = 1 + g % p.state_count;
        p.adam_blocks = 1;
        p.seed = 9000 + g;
        const auto arena = generate_game(p);
        const KnowledgeUpdater updater(arena);
        const auto eve_actions = static_cast<ActionSet>(arena.eve_actions.size());
        for (int play = 0; play < 100; ++play, ++plays) {
            StateId s = arena.init;
            Knowledge k = StateSet::singleton(arena.num_states(), static_cast<std::size_t>(s));
            for (int t = 0; t < 30; ++t, ++steps) {
                const ActionSet dom = 1 + static_cast<ActionSet>(rng() % ((1U << eve_actions) - 1));
                const auto members = action_members(dom);
                const ActionId e = members[rng() % members.size()];
                const auto x = static_cast<ActionId>(rng() % arena.adam_actions.size());
                s = sample(rng, arena.delta(s, e, x));
                k = updater.update(k, arena.eve_obs.block_of[static_cast<std::size_t>(s)], dom);
                if (!k.contains(static_cast<std::size_t>(s))) ++violations;
            }
        }
    }
    return {violations == 0 && plays >= 10000, std::to_string(plays) + " plays, " + std::to_string(steps) +
                                                   " steps, " + std::to_string(violations) + " violations"};
}

// Classical attractor for Eve on a turn-based deterministic arena.
bool attractor_wins(const Arena &a)
{
    const auto n = a.num_states();
    std::vector<char> attr(n);
    for (std::size_t s = 0; s < n; ++s) attr[s] = a.is_final(static_cast<StateId>(s));
    auto succ = [&](std::size_t s, std::size_t e, std::size_t x) {
        return static_cast<std::size_t>(
            a.delta(static_cast<StateId>(s), static_cast<ActionId>(e), static_cast<ActionId>(x)).entries()[0].first);
    };
    for (bool grew = true; grew;) {
        grew = false;
        for (std::size_t s = 0; s < n; ++s) {
            if (attr[s]) continue;
            // Eve can force the target when some action of hers wins against every Adam action.
            bool win = false;
            for (std::size_t e = 0; e < a.eve_actions.size() && !win; ++e) {
                bool all = true;
                for (std::size_t x = 0; x < a.adam_actions.size(); ++x) all = all && attr[succ(s, e, x)];
                win = all;
            }
            if (win) {
                attr[s] = 1;
                grew = true;
            }
        }
    }
    return attr[static_cast<std::size_t>(a.init)];
}

Outcome perfect_information()
{
    std::size_t disagreements = 0, yes = 0;
    std::string first;
    for (std::uint64_t i = 0; i < 100; ++i) {
        const auto a = generate_turn_based(3 + i % 4, 2, 2, 1, 7000 + i);
        const bool solver = decide_almost_sure_reach(a).verdict;
        const bool classic = attractor_wins(a);
        yes += classic;
        if (solver != classic) {
            if (!disagreements) first = "; first: seed " + std::to_string(7000 + i);
            ++disagreements;
        }
    }
    return {disagreements == 0, "100 turn-based games (" + std::to_string(yes) + " attractor wins), " +
                                    std::to_string(disagreements) + " disagreements" + first};
}

Arena load(const std::string &name) { return parse_game(read_file(std::string(KSG_DATA_DIR) + "/" + name)); }

Outcome named_instances()
{
    std::vector<std::string> problems;
    const auto g1 = load("g1.json");
    const auto r1 = decide_almost_sure_reach(g1);
    if (!r1.verdict || best_response_full_info(g1, *r1.witness, Objective::Reachability).probability != 1)
        problems.push_back("G1 reach");
    const auto g1b = load("g1_buchi.json");
    const auto r1b = decide_almost_sure_buchi(g1b);
    if (!r1b.verdict || best_response_full_info(g1b, *r1b.witness, Objective::Buchi).probability != 1)
        problems.push_back("G1' buchi");
    const auto g2 = load("g2.json");
    for (auto objective : {Objective::Reachability, Objective::Buchi}) {
        if (decide(g2, objective).verdict) problems.push_back("G2 verdict");
        const auto ka = build_knowledge_arena(g2);
        const auto refined = adam_refined(g2);
        auto e = enumerate_candidates(ka, 1000);
        CandidateStrategy c;
        while (e.next(c)) {
            const auto check = check_candidate(g2, ka, c, objective);
            const auto eve = lower_strategy(g2, to_knowledge_only(ka, c));
            if (!check.adam.witness || evaluate(refined, eve, *check.adam.witness, objective) >= 1)
                problems.push_back("G2 candidate " + std::to_string(c.index));
        }
    }
    std::string detail = problems.empty() ? "G1 yes (1/1), G1' yes (1/1), G2 no with every candidate below 1" : "";
    for (const auto &p : problems) detail += p + " failed; ";
    return {problems.empty(), detail};
}

std::string strip_timing(const std::string &path)
{
    auto j = Json::parse(read_file(path));
    j.erase("elapsed_ms");
    return j.dump();
}

Outcome complexity_guard()
{
    const auto dir = fs::temp_directory_path() / "ksg_acceptance";
    fs::create_directories(dir);
    // Three knowledges and two Eve actions: 27 candidates.
    const auto game = (dir / "guard.json").string();
    write_file_atomic(game, R"({"states":["p","q","r","t"],"init":"p","final":[],"eve_actions":["a","b"],
 "adam_actions":["x","y"],"eve_obs":[["p"],["q","r"],["t"]],"adam_obs":[["p","q","r","t"]],"transitions":[
 {"from":"p","eve":"a","adam":"x","to":{"q":1}},{"from":"p","eve":"a","adam":"y","to":{"r":1}},
 {"from":"p","eve":"b","adam":"x","to":{"q":1}},{"from":"p","eve":"b","adam":"y","to":{"r":1}},
 {"from":"q","eve":"a","adam":"x","to":{"t":1}},{"from":"q","eve":"a","adam":"y","to":{"t":1}},
 {"from":"q","eve":"b","adam":"x","to":{"t":1}},{"from":"q","eve":"b","adam":"y","to":{"t":1}},
 {"from":"r","eve":"a","adam":"x","to":{"t":1}},{"from":"r","eve":"a","adam":"y","to":{"t":1}},
 {"from":"r","eve":"b","adam":"x","to":{"t":1}},{"from":"r","eve":"b","adam":"y","to":{"t":1}},
 {"from":"t","eve":"a","adam":"x","to":{"t":1}},{"from":"t","eve":"a","adam":"y","to":{"t":1}},
 {"from":"t","eve":"b","adam":"x","to":{"t":1}},{"from":"t","eve":"b","adam":"y","to":{"t":1}}]})");
    std::vector<int> codes;
    std::vector<std::string> reports;
    const auto out = (dir / "guard_report.json").string();
    for (int run = 0; run < 2; ++run) {
        fs::remove(out);
        const auto cmd = std::string("\"") + KSG_CLI_PATH + "\" solve \"" + game + "\" --max-candidates 1 --out \"" +
                         out + "\" > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        codes.push_back(WIFEXITED(status) ? WEXITSTATUS(status) : -1);
        reports.push_back(fs::exists(out) ? strip_timing(out) : "");
    }
    const bool partial = !reports[0].empty() && Json::parse(reports[0])["verdict"] == "unknown" &&
                         Json::parse(reports[0]).contains("error");
    const bool ok = codes[0] == 3 && codes[1] == 3 && partial && reports[0] == reports[1];
    return {ok, "exit codes " + std::to_string(codes[0]) + "," + std::to_string(codes[1]) +
                    (partial ? ", partial report written" : ", no partial report") +
                    (reports[0] == reports[1] ? ", identical across runs" : ", reports differ")};
}

Outcome monte_carlo_calibration()
{
    const auto a = parse_game(R"({"states":["s","f","d"],"init":"s","final":["f"],"eve_actions":["a"],
 "adam_actions":["x"],"eve_obs":[["s","f","d"]],"adam_obs":[["s","f","d"]],"transitions":[
 {"from":"s","eve":"a","adam":"x","to":{"f":"1/2","d":"1/2"}},
 {"from":"f","eve":"a","adam":"x","to":{"f":1}},{"from":"d","eve":"a","adam":"x","to":{"d":1}}]})");
    const auto eve = FiniteMemoryStrategy::memoryless(Player::Eve, Distribution::point(0), 1);
    const auto adam = FiniteMemoryStrategy::memoryless(Player::Adam, Distribution::point(0), 1);
    if (evaluate(a, eve, adam, Objective::Reachability) != make_rational(1, 2)) return {false, "chain is not 1/2"};
    int covered = 0;
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
        MonteCarloOptions o;
        o.samples = 1000;
        o.horizon = 10;
        o.seed = seed;
        const auto r = monte_carlo(a, eve, adam, Objective::Reachability, o);
        covered += std::abs(r.estimate - 0.5) <= r.half_width;
    }
    return {covered >= 25, std::to_string(covered) + "/30 intervals contain 1/2"};
}

}

int main()
{
    struct Criterion
    {
        const char *name;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"candidate count formula", candidate_count_formula},
        {"soundness of yes", yes_soundness},
        {"internal completeness of no", no_completeness},
        {"brute-force oracle agreement", oracle_agreement},
        {"base and knowledge arena probabilities agree", knowledge_arena_equivalence},
        {"knowledge tracking accuracy", knowledge_accuracy},
        {"perfect-information degeneracy", perfect_information},
        {"named instances", named_instances},
        {"candidate cap exits with a partial report", complexity_guard},
        {"Monte Carlo calibration", monte_carlo_calibration},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].run();
        } catch (const std::exception &e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        failed += !o.pass;
        std::printf("%s criterion %zu: %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name,
                    o.detail.c_str(), secs);
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
