#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ilc/convergence.hpp"

namespace ilc {

/// Exit codes of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitParse = 1, kExitUnknown = 2, kExitConfig = 3 };

/// Runs the `ilc` command line; args excludes the program name.
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// JSON form of a trace; `report` may be null.
nlohmann::json trace_export(const Trace& trace, const ConvergenceReport* report);
/// Rebuilds a trace by replaying the recorded steps; throws std::invalid_argument
/// when a recorded step does not reproduce.
Trace trace_decode(const nlohmann::json& doc);

}  // namespace ilc
