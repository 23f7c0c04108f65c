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

#include "ksg/game_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "ksg/errors.hpp"

namespace ksg {

namespace {

const Json &field(const Json &doc, const char *key)
{
    auto it = doc.find(key);
    if (it == doc.end()) throw SchemaError(std::string("missing field \"") + key + "\"");
    return *it;
}

std::vector<std::string> string_array(const Json &doc, const char *key)
{
    const auto &arr = field(doc, key);
    if (!arr.is_array()) throw SchemaError(std::string("\"") + key + "\" must be an array");
    std::vector<std::string> out;
    for (const auto &v : arr) {
        if (!v.is_string())
            throw SchemaError(std::string("\"") + key + "\" must contain strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

std::string string_field(const Json &doc, const char *key)
{
    const auto &v = field(doc, key);
    if (!v.is_string()) throw SchemaError(std::string("\"") + key + "\" must be a string");
    return v.get<std::string>();
}

Rational probability(const Json &v)
{
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
    throw SchemaError("probabilities must be \"num/den\" strings or integers");
}

Json probability_json(const Rational &q)
{
    if (q == 1) return 1;
    return format_rational(q);
}

std::unordered_map<std::string, int> index_names(const std::vector<std::string> &names,
                                                 const char *what)
{
    std::unordered_map<std::string, int> idx;
    for (std::size_t i = 0; i < names.size(); ++i)
        if (!idx.emplace(names[i], static_cast<int>(i)).second)
            throw ValidationError(std::string("duplicate ") + what + " \"" + names[i] + "\"");
    return idx;
}

int lookup(const std::unordered_map<std::string, int> &idx, const std::string &name,
           const char *what)
{
    auto it = idx.find(name);
    if (it == idx.end()) throw ValidationError(std::string("unknown ") + what + " \"" + name + "\"");
    return it->second;
}

ObsPartition partition(const Json &doc, const char *key,
                       const std::unordered_map<std::string, int> &states)
{
    const auto &arr = field(doc, key);
    if (!arr.is_array()) throw SchemaError(std::string("\"") + key + "\" must be an array of arrays");
    ObsPartition p;
    p.block_of.assign(states.size(), -1);
    for (const auto &block : arr) {
        if (!block.is_array())
            throw SchemaError(std::string("\"") + key + "\" must be an array of arrays");
        std::vector<StateId> members;
        for (const auto &v : block) {
            if (!v.is_string()) throw SchemaError(std::string("\"") + key + "\" blocks hold state names");
            int s = lookup(states, v.get<std::string>(), "state");
            if (p.block_of[static_cast<std::size_t>(s)] != -1)
                throw ValidationError(std::string(key) + " is not a partition: state \"" +
                                      v.get<std::string>() + "\" appears twice");
            p.block_of[static_cast<std::size_t>(s)] = static_cast<BlockId>(p.blocks.size());
            members.push_back(s);
        }
        if (members.empty()) throw ValidationError(std::string(key) + " has an empty block");
        p.blocks.push_back(std::move(members));
    }
    for (std::size_t s = 0; s < p.block_of.size(); ++s)
        if (p.block_of[s] == -1)
            for (const auto &[name, id] : states)
                if (static_cast<std::size_t>(id) == s)
                    throw ValidationError(std::string(key) + " is not a partition: state \"" +
                                          name + "\" is in no block");
    return p;
}

Json partition_json(const Arena &arena, const ObsPartition &p)
{
    Json out = Json::array();
    for (const auto &block : p.blocks) {
        Json b = Json::array();
        for (StateId s : block) b.push_back(arena.states[static_cast<std::size_t>(s)]);
        out.push_back(std::move(b));
    }
    return out;
}

Json parse_json(std::string_view text)
{
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw SchemaError(e.what());
    }
}

}

Arena game_from_json(const Json &doc)
{
    if (!doc.is_object()) throw SchemaError("game document must be an object");
    Arena arena;
    arena.states = string_array(doc, "states");
    arena.eve_actions = string_array(doc, "eve_actions");
    arena.adam_actions = string_array(doc, "adam_actions");
    if (arena.states.empty()) throw ValidationError("no states");
    if (arena.eve_actions.empty()) throw ValidationError("no eve actions");
    if (arena.adam_actions.empty()) throw ValidationError("no adam actions");
    auto states = index_names(arena.states, "state");
    auto eve = index_names(arena.eve_actions, "eve action");
    auto adam = index_names(arena.adam_actions, "adam action");

    arena.init = lookup(states, string_field(doc, "init"), "state");
    arena.final_states.assign(arena.states.size(), 0);
    for (const auto &f : string_array(doc, "final"))
        arena.final_states[static_cast<std::size_t>(lookup(states, f, "state"))] = 1;
    arena.eve_obs = partition(doc, "eve_obs", states);
    arena.adam_obs = partition(doc, "adam_obs", states);

    arena.reset_transitions();
    const auto &trans = field(doc, "transitions");
    if (!trans.is_array()) throw SchemaError("\"transitions\" must be an array");
    for (const auto &t : trans) {
        if (!t.is_object()) throw SchemaError("each transition must be an object");
        const auto from = string_field(t, "from");
        const auto e = string_field(t, "eve");
        const auto a = string_field(t, "adam");
        const auto key = "(" + from + ", " + e + ", " + a + ")";
        auto &d = arena.delta(lookup(states, from, "state"), lookup(eve, e, "eve action"),
                              lookup(adam, a, "adam action"));
        if (!d.empty()) throw ValidationError("duplicate transition for " + key);
        const auto &to = field(t, "to");
        if (!to.is_object() || to.empty())
            throw SchemaError("\"to\" of " + key + " must be a non-empty object");
        std::vector<Distribution::Entry> entries;
        Rational sum(0);
        for (const auto &[name, w] : to.items()) {
            Rational q = probability(w);
            if (q <= 0)
                throw ValidationError("non-positive probability for \"" + name + "\" in " + key);
            sum += q;
            entries.emplace_back(lookup(states, name, "state"), q);
        }
        if (sum != 1)
            throw ValidationError("distribution for " + key + " sums to " + format_rational(sum) +
                                  ", not 1");
        d = Distribution(std::move(entries));
    }
    validate_arena(arena);
    return arena;
}

Arena parse_game(std::string_view text)
{
    return game_from_json(parse_json(text));
}

Json game_to_json(const Arena &arena)
{
    Json doc;
    doc["states"] = arena.states;
    doc["init"] = arena.states[static_cast<std::size_t>(arena.init)];
    Json fin = Json::array();
    for (std::size_t s = 0; s < arena.num_states(); ++s)
        if (arena.final_states[s]) fin.push_back(arena.states[s]);
    doc["final"] = fin;
    doc["eve_actions"] = arena.eve_actions;
    doc["adam_actions"] = arena.adam_actions;
    doc["eve_obs"] = partition_json(arena, arena.eve_obs);
    doc["adam_obs"] = partition_json(arena, arena.adam_obs);
    Json trans = Json::array();
    for (std::size_t s = 0; s < arena.num_states(); ++s)
        for (std::size_t e = 0; e < arena.eve_actions.size(); ++e)
            for (std::size_t a = 0; a < arena.adam_actions.size(); ++a) {
                Json t;
                t["from"] = arena.states[s];
                t["eve"] = arena.eve_actions[e];
                t["adam"] = arena.adam_actions[a];
                Json to = Json::object();
                for (const auto &[st, w] :
                     arena.delta(static_cast<StateId>(s), static_cast<ActionId>(e),
                                 static_cast<ActionId>(a))
                         .entries())
                    to[arena.states[static_cast<std::size_t>(st)]] = probability_json(w);
                t["to"] = std::move(to);
                trans.push_back(std::move(t));
            }
    doc["transitions"] = std::move(trans);
    return doc;
}

std::string serialize_game(const Arena &arena)
{
    return game_to_json(arena).dump(2) + "\n";
}

FiniteMemoryStrategy strategy_from_json(const Arena &arena, const Json &doc)
{
    if (!doc.is_object()) throw SchemaError("strategy document must be an object");
    FiniteMemoryStrategy strat;
    const auto owner = string_field(doc, "owner");
    if (owner == "eve")
        strat.owner = Player::Eve;
    else if (owner == "adam")
        strat.owner = Player::Adam;
    else
        throw ValidationError("owner must be \"eve\" or \"adam\", got \"" + owner + "\"");
    strat.memory = string_array(doc, "memory");
    if (strat.memory.empty()) throw ValidationError("strategy has no memory states");
    auto mem = index_names(strat.memory, "memory state");
    strat.init = lookup(mem, string_field(doc, "init"), "memory state");

    const auto &move = field(doc, "move");
    const auto &update = field(doc, "update");
    if (!move.is_object()) throw SchemaError("\"move\" must be an object");
    if (!update.is_object()) throw SchemaError("\"update\" must be an object");
    const auto blocks = arena.obs(strat.owner).size();
    const std::string who(to_string(strat.owner));
    strat.move.resize(strat.memory.size());
    strat.update.assign(strat.memory.size(), std::vector<MemoryId>(blocks, -1));

    for (const auto &[m, dist] : move.items()) {
        int mi = lookup(mem, m, "memory state");
        if (!dist.is_object()) throw SchemaError("move[" + m + "] must be an object");
        std::vector<Distribution::Entry> entries;
        for (const auto &[act, w] : dist.items()) {
            int ai = arena.action_index(strat.owner, act);
            if (ai < 0)
                throw ValidationError("move[" + m + "] names \"" + act + "\", not a " + who +
                                      " action");
            Rational q = probability(w);
            if (q <= 0) throw ValidationError("move[" + m + "][" + act + "] is not positive");
            entries.emplace_back(ai, q);
        }
        strat.move[static_cast<std::size_t>(mi)] = Distribution(std::move(entries));
    }
    for (std::size_t i = 0; i < strat.memory.size(); ++i)
        if (strat.move[i].empty()) throw ValidationError("move[" + strat.memory[i] + "] is missing");

    for (const auto &[m, row] : update.items()) {
        int mi = lookup(mem, m, "memory state");
        if (!row.is_object()) throw SchemaError("update[" + m + "] must be an object");
        for (const auto &[key, target] : row.items()) {
            std::size_t pos = 0;
            long b = -1;
            try {
                b = std::stol(key, &pos);
            } catch (const std::exception &) {
                pos = 0;
            }
            if (pos != key.size() || b < 0 || static_cast<std::size_t>(b) >= blocks)
                throw ValidationError("update[" + m + "] key \"" + key + "\" is not a " + who +
                                      " observation block index");
            if (!target.is_string()) throw SchemaError("update targets must be memory names");
            strat.update[static_cast<std::size_t>(mi)][static_cast<std::size_t>(b)] =
                lookup(mem, target.get<std::string>(), "memory state");
        }
    }
    for (std::size_t i = 0; i < strat.memory.size(); ++i)
        for (std::size_t b = 0; b < blocks; ++b)
            if (strat.update[i][b] < 0)
                throw ValidationError("update[" + strat.memory[i] + "] lacks observation block " +
                                      std::to_string(b));
    validate_strategy(arena, strat.owner, strat);
    return strat;
}

FiniteMemoryStrategy parse_strategy(const Arena &arena, std::string_view text)
{
    return strategy_from_json(arena, parse_json(text));
}

Json strategy_to_json(const Arena &arena, const FiniteMemoryStrategy &strat)
{
    Json doc;
    doc["owner"] = std::string(to_string(strat.owner));
    doc["memory"] = strat.memory;
    doc["init"] = strat.memory[static_cast<std::size_t>(strat.init)];
    const auto &actions = arena.actions(strat.owner);
    Json move = Json::object();
    Json update = Json::object();
    for (std::size_t m = 0; m < strat.memory.size(); ++m) {
        Json d = Json::object();
        for (const auto &[a, w] : strat.move[m].entries())
            d[actions[static_cast<std::size_t>(a)]] = probability_json(w);
        move[strat.memory[m]] = std::move(d);
        Json row = Json::object();
        for (std::size_t b = 0; b < strat.update[m].size(); ++b)
            row[std::to_string(b)] = strat.memory[static_cast<std::size_t>(strat.update[m][b])];
        update[strat.memory[m]] = std::move(row);
    }
    doc["move"] = std::move(move);
    doc["update"] = std::move(update);
    return doc;
}

std::string serialize_strategy(const Arena &arena, const FiniteMemoryStrategy &strat)
{
    return strategy_to_json(arena, strat).dump(2) + "\n";
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open \"" + path + "\"");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string &path, const std::string &content)
{
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write \"" + tmp + "\"");
        out << content;
        if (!out) throw Error("short write to \"" + tmp + "\"");
    }
    std::filesystem::rename(tmp, path);
}

}
