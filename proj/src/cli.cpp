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

#include "ksg/cli.hpp"

#include <chrono>
#include <cstdint>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "ksg/errors.hpp"
#include "ksg/eval.hpp"
#include "ksg/generator.hpp"
#include "ksg/knowledge.hpp"

namespace ksg {

namespace {

struct GlobalFlags
{
    std::uint64_t max_candidates = 10'000'000;
    std::size_t max_beliefs = 1'000'000;
    unsigned threads = 1;
    std::string out;
    std::uint64_t seed = 1;
};

Json global_config(const GlobalFlags &g)
{
    Json c;
    c["max_candidates"] = g.max_candidates;
    c["max_beliefs"] = g.max_beliefs;
    c["threads"] = g.threads;
    c["out"] = g.out.empty() ? Json(nullptr) : Json(g.out);
    c["seed"] = g.seed;
    return c;
}

class Timer
{
public:
    double ms() const
    {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Writes the primary document to --out, or to out when no path was given.
void emit(const GlobalFlags &g, std::ostream &out, const std::string &text)
{
    if (g.out.empty())
        out << text << '\n';
    else
        write_file_atomic(g.out, text + "\n");
}

// Side record for commands whose primary output is a game file: it goes to
// out when the game went to a file, otherwise to err to keep out parseable.
void emit_record(const GlobalFlags &g, std::ostream &out, std::ostream &err, const Json &record)
{
    (g.out.empty() ? err : out) << record.dump() << '\n';
}

Objective decidable_objective(const std::string &text)
{
    const auto o = parse_objective(text);
    if (o != Objective::Reachability && o != Objective::Buchi)
        throw ValidationError("solve supports only reach and buchi objectives");
    return o;
}

Json knowledge_list(const Arena &arena, const std::vector<Knowledge> &ks)
{
    Json arr = Json::array();
    for (const auto &k : ks) arr.push_back(knowledge_name(arena, k));
    return arr;
}

Json action_set_list(const Arena &arena, const std::vector<ActionSet> &choice)
{
    Json arr = Json::array();
    for (auto c : choice) arr.push_back(action_set_name(arena, c));
    return arr;
}

}

Json solve_report_to_json(const Arena &arena, const SolveReport &r, bool include_diagnostics)
{
    Json j;
    j["verdict"] = r.verdict ? "yes" : "no";
    j["objective"] = std::string(to_string(r.objective));
    j["witness"] = r.witness ? strategy_to_json(arena, *r.witness) : Json(nullptr);
    j["witness_winning_knowledges"] = knowledge_list(arena, r.witness_winning_knowledges);
    j["candidates_checked"] = r.candidates_checked;
    j["candidate_count"] = r.candidate_count;
    j["winning_candidate"] = r.winning_candidate ? Json(r.winning_candidate->index) : Json(nullptr);
    j["knowledge_states"] = r.knowledge_states;
    j["knowledges"] = r.knowledges;
    j["elapsed_ms"] = r.elapsed_ms;
    if (include_diagnostics) {
        Json diags = Json::array();
        for (const auto &d : r.diagnostics) {
            Json e;
            e["index"] = d.index;
            e["choice"] = action_set_list(arena, d.choice);
            e["eve_wins"] = d.eve_wins;
            e["adam_winning_states"] = d.adam_winning_states;
            e["sure_beliefs"] = d.sure_beliefs;
            e["beliefs"] = d.beliefs;
            e["iterations"] = d.iterations;
            e["adam_witness_memory"] = d.adam_witness_memory;
            diags.push_back(std::move(e));
        }
        j["candidates"] = std::move(diags);
    }
    return j;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Almost-sure winning for stochastic games with imperfect information", "ksg"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--max-candidates", g.max_candidates, "Cap on candidate strategies")->capture_default_str();
    app.add_option("--max-beliefs", g.max_beliefs, "Cap on knowledge states and beliefs")->capture_default_str();
    app.add_option("--threads", g.threads, "Worker threads")->capture_default_str()->check(CLI::Range(1U, 1024U));
    app.add_option("--out", g.out, "Write the primary output to this file");
    app.add_option("--seed", g.seed, "Random seed")->capture_default_str();

    std::string game_path, eve_path, adam_path, objective_text = "reach";
    bool debug_candidates = false, dump = false;
    MonteCarloOptions mc;
    GenParams gen;

    auto *solve = app.add_subcommand("solve", "Decide almost-sure winning and synthesize a witness");
    solve->add_option("game", game_path, "Game file")->required();
    solve->add_option("--objective", objective_text, "reach or buchi")->capture_default_str();
    solve->add_flag("--debug-candidates", debug_candidates, "Include per-candidate diagnostics");

    auto add_pair_options = [&](CLI::App *cmd) {
        cmd->add_option("--game", game_path, "Game file")->required();
        cmd->add_option("--eve", eve_path, "Eve strategy file")->required();
        cmd->add_option("--adam", adam_path, "Adam strategy file")->required();
        cmd->add_option("--objective", objective_text, "reach, buchi, safety or cobuchi")->capture_default_str();
    };
    auto *eval = app.add_subcommand("eval", "Exact objective probability of a strategy pair");
    add_pair_options(eval);

    auto *simulate = app.add_subcommand("simulate", "Monte Carlo estimate for a strategy pair");
    add_pair_options(simulate);
    simulate->add_option("--samples", mc.samples)->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--horizon", mc.horizon)->capture_default_str()->check(CLI::PositiveNumber);
    simulate->add_option("--window", mc.buchi_window, "Büchi window (0 = tenth of the horizon)")
        ->capture_default_str();

    auto *knowledge = app.add_subcommand("knowledge", "Build the knowledge arena");
    knowledge->add_option("game", game_path, "Game file")->required();
    knowledge->add_flag("--dump", dump, "Emit the knowledge arena as a game file");

    auto *gencmd = app.add_subcommand("gen", "Generate a seeded random game");
    gencmd->add_option("--states", gen.state_count)->capture_default_str();
    gencmd->add_option("--eve-actions", gen.eve_action_count)->capture_default_str();
    gencmd->add_option("--adam-actions", gen.adam_action_count)->capture_default_str();
    gencmd->add_option("--density", gen.transition_density)->capture_default_str();
    gencmd->add_option("--eve-blocks", gen.eve_blocks)->capture_default_str();
    gencmd->add_option("--adam-blocks", gen.adam_blocks)->capture_default_str();
    gencmd->add_option("--finals", gen.final_count)->capture_default_str();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    if (!rev.empty()) rev.pop_back();
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError &e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidInput;
    }

    const Timer timer;
    Json config = global_config(g);
    std::optional<Arena> arena;
    try {
        if (*solve) {
            const auto objective = decidable_objective(objective_text);
            config["game"] = game_path;
            config["objective"] = objective_text;
            config["debug_candidates"] = debug_candidates;
            arena = parse_game(read_file(game_path));
            SolverOptions opts;
            opts.max_candidates = g.max_candidates;
            opts.max_beliefs = g.max_beliefs;
            opts.threads = g.threads;
            opts.debug_candidates = debug_candidates;
            const auto report = decide(*arena, objective, opts);
            Json j = solve_report_to_json(*arena, report, debug_candidates);
            j["command"] = "solve";
            j["config"] = config;
            emit(g, out, j.dump(2));
            if (!g.out.empty())
                out << "verdict " << j["verdict"].get<std::string>() << " after " << report.candidates_checked
                    << " of " << report.candidate_count << " candidates\n";
            return kExitOk;
        }
        if (*eval || *simulate) {
            const auto objective = parse_objective(objective_text);
            config["game"] = game_path;
            config["eve"] = eve_path;
            config["adam"] = adam_path;
            config["objective"] = objective_text;
            arena = parse_game(read_file(game_path));
            const auto eve = parse_strategy(*arena, read_file(eve_path));
            const auto adam = parse_strategy(*arena, read_file(adam_path));
            if (eve.owner != Player::Eve || adam.owner != Player::Adam)
                throw ValidationError("--eve must be an Eve strategy and --adam an Adam strategy");
            Json j;
            if (*eval) {
                j["probability"] = format_rational(evaluate(*arena, eve, adam, objective));
                j["method"] = "exact";
                j["command"] = "eval";
            } else {
                mc.seed = g.seed;
                mc.threads = g.threads;
                const auto r = monte_carlo(*arena, eve, adam, objective, mc);
                j["estimate"] = r.estimate;
                j["half_width"] = r.half_width;
                j["confidence"] = 0.95;
                j["samples"] = r.samples;
                j["successes"] = r.successes;
                j["horizon"] = r.horizon;
                j["buchi_window"] = r.buchi_window;
                j["approximate"] = r.approximate;
                j["method"] = "monte_carlo";
                j["generator"] = r.generator;
                j["seed"] = r.seed;
                j["command"] = "simulate";
                config["samples"] = mc.samples;
                config["horizon"] = mc.horizon;
                config["window"] = mc.buchi_window;
            }
            j["config"] = config;
            j["elapsed_ms"] = timer.ms();
            emit(g, out, j.dump());
            return kExitOk;
        }
        if (*knowledge) {
            config["game"] = game_path;
            config["dump"] = dump;
            arena = parse_game(read_file(game_path));
            KnowledgeArenaOptions kopts;
            kopts.max_states = g.max_beliefs;
            const auto ka = build_knowledge_arena(*arena, kopts);
            Json rec;
            rec["command"] = "knowledge";
            rec["knowledge_states"] = ka.states.size();
            rec["knowledges"] = ka.knowledges.size();
            rec["edges"] = ka.edges;
            rec["config"] = config;
            rec["elapsed_ms"] = timer.ms();
            if (dump) {
                emit(g, out, serialize_game(knowledge_arena_as_game(ka)));
                emit_record(g, out, err, rec);
            } else {
                emit(g, out, rec.dump());
            }
            return kExitOk;
        }
        if (*gencmd) {
            gen.seed = g.seed;
            config["states"] = gen.state_count;
            config["eve_actions"] = gen.eve_action_count;
            config["adam_actions"] = gen.adam_action_count;
            config["density"] = gen.transition_density;
            config["eve_blocks"] = gen.eve_blocks;
            config["adam_blocks"] = gen.adam_blocks;
            config["finals"] = gen.final_count;
            emit(g, out, serialize_game(generate_game(gen)));
            Json rec;
            rec["command"] = "gen";
            rec["config"] = config;
            rec["elapsed_ms"] = timer.ms();
            emit_record(g, out, err, rec);
            return kExitOk;
        }
    } catch (const SolveLimitError &e) {
        Json j = solve_report_to_json(*arena, e.partial(), false);
        j["verdict"] = "unknown";
        j["witness"] = nullptr;
        j["error"] = e.what();
        j["command"] = "solve";
        j["config"] = config;
        emit(g, out, j.dump(2));
        err << e.what() << '\n';
        return kExitResourceLimit;
    } catch (const ResourceLimit &e) {
        err << e.what() << '\n';
        return kExitResourceLimit;
    } catch (const SchemaError &e) {
        err << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const ValidationError &e) {
        err << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const InconsistentObservation &e) {
        err << e.what() << '\n';
        return kExitInvalidInput;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitInvalidInput;
}

}
