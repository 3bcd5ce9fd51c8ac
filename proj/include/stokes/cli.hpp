#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "stokes/config.hpp"

namespace stokes {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kExitOk = 0, kExitNumerical = 1, kExitUsage = 2 };

/// Subcommands. Each writes a JSON summary to `out`; commands that produce
/// artifacts put them under config.output_dir.
int cmd_classify(const RunConfig& config, std::ostream& out);
int cmd_resonance(const RunConfig& config, std::ostream& out);
int cmd_atlas(const RunConfig& config, std::ostream& out);
int cmd_branch(const RunConfig& config, std::ostream& out);
int cmd_resonant_speed(const RunConfig& config, std::ostream& out);
int cmd_resonant_momentum(const RunConfig& config, std::ostream& out);
int cmd_selfcheck(const RunConfig& config, std::ostream& out);

/// Full command line (argv[0] included); errors are reported on `err` and
/// mapped to the exit codes above.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stokes
