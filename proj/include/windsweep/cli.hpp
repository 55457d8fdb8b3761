#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace windsweep {

/// Subcommands: clean, synth, eval, predict-eval. Returns 0 on success,
/// 1 on a runtime failure and 2 on a usage error.
int cli_main(int argc, char** argv);
/// `args` excludes the program name.
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace windsweep
