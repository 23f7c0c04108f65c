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

#include <algorithm>

#include "ksg/eval.hpp"
#include "ksg/generator.hpp"
#include "ksg/halfplayer.hpp"
#include "ksg/markov.hpp"
#include "support.hpp"

using namespace ksg;

namespace {

bool has_belief(const std::vector<StateSet> &beliefs, const Arena &a, std::initializer_list<const char *> names)
{
    StateSet b(a.num_states());
    for (auto n : names) b.insert(static_cast<std::size_t>(a.state_index(n)));
    return std::find(beliefs.begin(), beliefs.end(), b) != beliefs.end();
}

OneHalfGame from_text(const char *json, Player protagonist)
{
    return make_one_half_game(parse_game(json), protagonist);
}

// Graph criterion on the fully observable MDP: some end component inside
// allowed is reachable from init (through non-final states only if
// through_nonfinal is set).
bool mdp_positive(const OneHalfGame &g, bool through_nonfinal)
{
    const auto n = g.arena.num_states();
    markov::Mdp mdp;
    mdp.actions.resize(n);
    markov::Graph graph(n);
    markov::Mask nonfinal(n), final_mask(n);
    for (std::size_t s = 0; s < n; ++s) {
        nonfinal[s] = !g.arena.is_final(static_cast<StateId>(s));
        final_mask[s] = !nonfinal[s];
        for (ActionId a = 0; a < g.num_actions(); ++a) {
            markov::Row row(g.delta(static_cast<StateId>(s), a).entries().begin(),
                            g.delta(static_cast<StateId>(s), a).entries().end());
            for (const auto &e : row) graph[s].push_back(e);
            mdp.actions[s].push_back(std::move(row));
        }
    }
    markov::Mask in_ec(n, 0);
    for (const auto &ec : markov::maximal_end_components(mdp, nonfinal))
        for (int s : ec) in_ec[static_cast<std::size_t>(s)] = 1;
    const auto reach = markov::can_reach(graph, in_ec, through_nonfinal ? final_mask : markov::Mask{});
    return reach[static_cast<std::size_t>(g.arena.init)] != 0;
}

}

TEST_CASE("sure safety")
{
    SUBCASE("absorbing non-final state")
    {
        const auto g = from_text(R"({"states":["s"],"init":"s","final":[],"eve_actions":["a"],"adam_actions":["x"],
            "eve_obs":[["s"]],"adam_obs":[["s"]],"transitions":[{"from":"s","eve":"a","adam":"x","to":{"s":1}}]})",
                                 Player::Eve);
        CHECK(has_belief(sure_safety_beliefs(g), g.arena, {"s"}));
        const auto r = positive_safety(g);
        REQUIRE(r.witness);
        CHECK(r.witness->size() == 1);
    }
    SUBCASE("every action risks a final state")
    {
        const auto g = from_text(R"({"states":["s","f"],"init":"s","final":["f"],"eve_actions":["a","b"],
            "adam_actions":["x"],"eve_obs":[["s","f"]],"adam_obs":[["s","f"]],"transitions":[
            {"from":"s","eve":"a","adam":"x","to":{"s":"1/2","f":"1/2"}},
            {"from":"s","eve":"b","adam":"x","to":{"f":1}},
            {"from":"f","eve":"a","adam":"x","to":{"f":1}},{"from":"f","eve":"b","adam":"x","to":{"f":1}}]})",
                                 Player::Eve);
        CHECK_FALSE(has_belief(sure_safety_beliefs(g), g.arena, {"s"}));
        CHECK_FALSE(positive_safety(g).witness);
    }
    SUBCASE("adversary dodges with y")
    {
        const auto g = make_one_half_game(test::load_game("g2.json"), Player::Adam);
        CHECK(has_belief(sure_safety_beliefs(g), g.arena, {"s0"}));
        const auto r = positive_safety(g);
        REQUIRE(r.witness);
        CHECK(r.witness_path.size() == 1);
        CHECK(r.witness->move[static_cast<std::size_t>(r.witness->init)] ==
              Distribution::point(g.arena.action_index(Player::Adam, "y")));
        const auto eve = test::constant(g.arena, Player::Eve, Distribution::point(0));
        CHECK(evaluate(g.arena, eve, *r.witness, Objective::Safety) == 1);
    }
}

TEST_CASE("co-Büchi on the escape game")
{
    const auto g = make_one_half_game(test::load_game("g4.json"), Player::Eve);
    CHECK(has_belief(sure_cobuchi_beliefs(g), g.arena, {"u"}));
    const auto r = positive_cobuchi(g);
    REQUIRE(r.witness);
    const auto adam = test::constant(g.arena, Player::Adam, Distribution::point(0));
    CHECK(evaluate(g.arena, *r.witness, adam, Objective::CoBuchi) > 0);
    // Avoiding v altogether is impossible from u.
    CHECK_FALSE(positive_safety(g).witness);
}

TEST_CASE("co-Büchi degenerate cases")
{
    SUBCASE("loop in non-final states")
    {
        const auto g = from_text(R"({"states":["s","t"],"init":"s","final":["t"],"eve_actions":["a","b"],
            "adam_actions":["x"],"eve_obs":[["s","t"]],"adam_obs":[["s","t"]],"transitions":[
            {"from":"s","eve":"a","adam":"x","to":{"s":1}},{"from":"s","eve":"b","adam":"x","to":{"t":1}},
            {"from":"t","eve":"a","adam":"x","to":{"s":1}},{"from":"t","eve":"b","adam":"x","to":{"t":1}}]})",
                                 Player::Eve);
        CHECK(has_belief(sure_cobuchi_beliefs(g), g.arena, {"s"}));
    }
    SUBCASE("everything final")
    {
        const auto g = from_text(R"({"states":["s","t"],"init":"s","final":["s","t"],"eve_actions":["a"],
            "adam_actions":["x"],"eve_obs":[["s"],["t"]],"adam_obs":[["s","t"]],"transitions":[
            {"from":"s","eve":"a","adam":"x","to":{"s":1}},{"from":"t","eve":"a","adam":"x","to":{"t":1}}]})",
                                 Player::Eve);
        CHECK(sure_cobuchi_beliefs(g).empty());
        CHECK_FALSE(positive_cobuchi(g).witness);
    }
}

TEST_CASE("perfect information agrees with the end-component criterion")
{
    int agree = 0;
    for (std::uint64_t seed = 1; seed <= 300; ++seed) {
        GenParams p;
        p.state_count = 1 + seed % 4;
        p.eve_action_count = 2;
        p.adam_action_count = 1;
        p.eve_blocks = p.state_count;
        p.adam_blocks = 1;
        p.final_count = seed % (p.state_count + 1);
        p.transition_density = 0.7;
        p.seed = seed;
        const auto g = make_one_half_game(generate_game(p), Player::Eve);
        const bool safety = positive_safety(g).witness.has_value();
        const bool cobuchi = positive_cobuchi(g).witness.has_value();
        CHECK(safety == mdp_positive(g, true));
        CHECK(cobuchi == mdp_positive(g, false));
        agree += safety == mdp_positive(g, true);
    }
    CHECK(agree == 300);
}

TEST_CASE("witnesses are positively winning and sure sets are closed")
{
    for (std::uint64_t seed = 1; seed <= 200; ++seed) {
        GenParams p;
        p.state_count = 2 + seed % 3;
        p.eve_action_count = 2;
        p.adam_action_count = 1;
        p.eve_blocks = 1 + seed % 2;
        p.final_count = 1;
        p.seed = seed;
        const auto g = make_one_half_game(generate_game(p), Player::Eve);
        const auto adam = test::constant(g.arena, Player::Adam, Distribution::point(0));

        const auto s = positive_safety(g);
        CHECK(s.witness.has_value() == s.winning_states.contains(static_cast<std::size_t>(g.arena.init)));
        if (s.witness) CHECK(evaluate(g.arena, *s.witness, adam, Objective::Safety) > 0);
        const auto c = positive_cobuchi(g);
        if (c.witness) CHECK(evaluate(g.arena, *c.witness, adam, Objective::CoBuchi) > 0);
        // Safety winning implies co-Büchi winning.
        CHECK((!s.witness || c.witness));

        const auto graph = build_belief_graph(g);
        const auto sure = solve_sure_safety(graph);
        CHECK(sure.iterations <= graph.beliefs.size() + 1);
        for (std::size_t b = 0; b < graph.beliefs.size(); ++b) {
            if (!sure.winning[b]) continue;
            CHECK_FALSE(graph.final_node[b]);
            for (const auto &[obs, next] : graph.succ[b][static_cast<std::size_t>(sure.action[b])])
                CHECK(sure.winning[static_cast<std::size_t>(next)]);
        }
    }
}

TEST_CASE("enlarging the final set never enlarges the winning set")
{
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        GenParams p;
        p.state_count = 4;
        p.eve_action_count = 2;
        p.adam_action_count = 1;
        p.eve_blocks = 2;
        p.final_count = 1;
        p.seed = seed;
        auto small = generate_game(p);
        auto big = small;
        big.final_states[static_cast<std::size_t>(seed % 4)] = 1;
        const auto gs = make_one_half_game(small, Player::Eve);
        const auto gb = make_one_half_game(big, Player::Eve);
        CHECK(positive_safety(gb).winning_states.subset_of(positive_safety(gs).winning_states));
        CHECK(positive_cobuchi(gb).winning_states.subset_of(positive_cobuchi(gs).winning_states));
    }
}
