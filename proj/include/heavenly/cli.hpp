#pragma once

#include "heavenly/report.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace heavenly {

// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitFailed = 1, kExitUsage = 2 };

// Runs "heavenly <command> [flags]". args excludes the program name.
// Reports go to out (or to --out), diagnostics to err.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Human-readable rendering of a JSON report produced by run_cli.
std::string render_text(const Json& report);

}  // namespace heavenly
