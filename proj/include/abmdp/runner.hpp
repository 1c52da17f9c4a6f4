#pragma once

#include <string>

#include "abmdp/config.hpp"

namespace abmdp {

/// Executes one command (solve | train | simulate | sweep | detector-check)
/// with a fully resolved config. Writes the command's CSV outputs plus a
/// manifest.cfg recording the resolved configuration into the output
/// directory. Returns a process exit status (0 on success) and reports
/// failures on stderr.
int run_command(const std::string& command, RunConfig config);

/// Full command-line front end; argv as in main().
int cli_main(int argc, const char* const* argv);

}  // namespace abmdp
