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

#include <doctest.h>

#include <cmath>

#include "ksg/eval.hpp"
#include "ksg/generator.hpp"
#include "support.hpp"

using namespace ksg;
using ksg::test::q;

namespace {

// s splits evenly between final f and dead end d.
const char *kSplit = R"({"states":["s","f","d"],"init":"s","final":["f"],"eve_actions":["a"],"adam_actions":["x"],
"eve_obs":[["s","f","d"]],"adam_obs":[["s","f","d"]],"transitions":[
{"from":"s","eve":"a","adam":"x","to":{"f":"1/2","d":"1/2"}},
{"from":"f","eve":"a","adam":"x","to":{"f":1}},{"from":"d","eve":"a","adam":"x","to":{"d":1}}]})";

struct Pair
{
    Arena arena;
    FiniteMemoryStrategy eve, adam;
};

Pair trivial(const char *json)
{
    Pair p{parse_game(json), {}, {}};
    p.eve = test::constant(p.arena, Player::Eve, Distribution::point(0));
    p.adam = test::constant(p.arena, Player::Adam, Distribution::point(0));
    return p;
}

}

TEST_CASE("product chains")
{
    const auto g = test::load_game("g1.json");
    const auto eve = test::constant(g, Player::Eve, test::uniform_all(g, Player::Eve));
    const auto adam = test::constant(g, Player::Adam, Distribution::point(0));
    const auto chain = build_chain(g, eve, adam);
    REQUIRE(chain.nodes.size() == 2);
    const auto &row = chain.edges[static_cast<std::size_t>(chain.initial)];
    REQUIRE(row.size() == 2);
    for (const auto &e : row) CHECK(e.second == q(1, 2));
    for (const auto &r : chain.edges) {
        Rational sum = 0;
        for (const auto &e : r) sum += e.second;
        CHECK(sum == 1);
    }
    CHECK(reach_probability(chain) == 1);
    CHECK(evaluate(g, eve, adam, Objective::Safety) == 0);

    const auto deterministic = build_chain(g, test::constant(g, Player::Eve, Distribution::point(0)), adam);
    for (const auto &r : deterministic.edges) CHECK(r.size() == 1);
}

TEST_CASE("reach and Büchi probabilities")
{
    const auto split = trivial(kSplit);
    CHECK(evaluate(split.arena, split.eve, split.adam, Objective::Reachability) == q(1, 2));
    CHECK(evaluate(split.arena, split.eve, split.adam, Objective::Buchi) == q(1, 2));
    CHECK(evaluate(split.arena, split.eve, split.adam, Objective::CoBuchi) == q(1, 2));

    auto init_final = parse_game(kSplit);
    init_final.final_states = {1, 0, 0};
    const auto e = test::constant(init_final, Player::Eve, Distribution::point(0));
    const auto a = test::constant(init_final, Player::Adam, Distribution::point(0));
    CHECK(evaluate(init_final, e, a, Objective::Reachability) == 1);
    // The only final node is transient.
    CHECK(evaluate(init_final, e, a, Objective::Buchi) == 0);

    const auto g1b = test::load_game("g1_buchi.json");
    const auto uni = test::constant(g1b, Player::Eve, test::uniform_all(g1b, Player::Eve));
    const auto x = test::constant(g1b, Player::Adam, Distribution::point(0));
    CHECK(evaluate(g1b, uni, x, Objective::Buchi) == 1);
}

TEST_CASE("Monte Carlo")
{
    const auto split = trivial(kSplit);
    MonteCarloOptions o;
    o.samples = 100000;
    o.horizon = 10;
    o.seed = 3;
    const auto r = monte_carlo(split.arena, split.eve, split.adam, Objective::Reachability, o);
    CHECK(std::abs(r.estimate - 0.5) < 0.01);
    CHECK(r.generator == kGeneratorId);
    o.samples = 5000;
    const auto a = monte_carlo(split.arena, split.eve, split.adam, Objective::Reachability, o);
    o.threads = 3;
    const auto b = monte_carlo(split.arena, split.eve, split.adam, Objective::Reachability, o);
    CHECK(a.successes == b.successes);

    auto sure = parse_game(kSplit);
    sure.delta(0, 0, 0) = Distribution::point(1);
    const auto det = monte_carlo(sure, split.eve, split.adam, Objective::Reachability, o);
    CHECK(det.estimate == 1.0);
    CHECK(det.half_width == 0.0);

    const auto buchi = monte_carlo(split.arena, split.eve, split.adam, Objective::Buchi, o);
    CHECK(buchi.approximate);
    CHECK(buchi.buchi_window == 1);
}

TEST_CASE("full-information best response")
{
    const auto g1 = test::load_game("g1.json");
    CHECK(best_response_full_info(g1, test::constant(g1, Player::Eve, test::uniform_all(g1, Player::Eve)),
                                  Objective::Reachability)
              .probability == 1);
    // A deterministic Eve is beaten by the matching Adam action.
    CHECK(best_response_full_info(g1, test::constant(g1, Player::Eve, Distribution::point(0)),
                                  Objective::Reachability)
              .probability == 0);

    const auto g2 = test::load_game("g2.json");
    CHECK(best_response_full_info(g2, test::constant(g2, Player::Eve, Distribution::point(0)),
                                  Objective::Reachability)
              .probability == 0);

    // Dominance spot check: value 1 against full information implies value 1
    // against random observation-based Adam strategies.
    GenRng rng(5);
    int certified = 0;
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        GenParams p;
        p.state_count = 3;
        p.final_count = 1;
        p.eve_blocks = 2;
        p.adam_blocks = 2;
        p.seed = seed;
        const auto g = generate_game(p);
        const auto eve = test::constant(g, Player::Eve, test::uniform_all(g, Player::Eve));
        if (best_response_full_info(g, eve, Objective::Reachability).probability != 1) continue;
        ++certified;
        for (int i = 0; i < 100; ++i) {
            FiniteMemoryStrategy adam;
            adam.owner = Player::Adam;
            adam.memory = {"m0", "m1"};
            for (int m = 0; m < 2; ++m) {
                const auto choice = rng.below(3);
                adam.move.push_back(choice == 2 ? Distribution::uniform({0, 1})
                                                : Distribution::point(static_cast<int>(choice)));
                adam.update.push_back({static_cast<int>(rng.below(2)), static_cast<int>(rng.below(2))});
            }
            CHECK(evaluate(g, eve, adam, Objective::Reachability) == 1);
        }
    }
    CHECK(certified > 0);
}

TEST_CASE("brute-force oracle")
{
    CHECK(brute_force_verdict(test::load_game("g1.json"), Objective::Reachability) == Verdict::Yes);
    CHECK(brute_force_verdict(test::load_game("g2.json"), Objective::Reachability) == Verdict::No);
    CHECK(brute_force_verdict(test::load_game("g1_buchi.json"), Objective::Buchi) == Verdict::Yes);
    CHECK(to_string(Verdict::Unknown) == "unknown");
}
