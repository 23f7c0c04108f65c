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

#ifndef KSG_CLI_HPP
#define KSG_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "ksg/game_io.hpp"
#include "ksg/solver.hpp"

namespace ksg {

enum ExitCode { kExitOk = 0, kExitFailure = 1, kExitInvalidInput = 2, kExitResourceLimit = 3 };

/// Runs one command line (args[0] is the program name). Primary output goes
/// to --out when given and to out otherwise; diagnostics go to err.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Report document written by `solve`. Partial reports carry verdict
/// "unknown" and an "error" member.
Json solve_report_to_json(const Arena &arena, const SolveReport &report, bool include_diagnostics);

}

#endif
