#pragma once

#include <string>
#include <vector>

namespace dmfd::cli {

/// Process exit codes.
enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,  ///< gradcheck found a failing cell, or an unexpected error
  kConfigError = 2,
  kIoError = 3,
  kDiverged = 4,
};

/// Parses arguments (and an optional `--config FILE`), runs the subcommand
/// and maps library exceptions to exit codes.
int run(int argc, char** argv);
int run(const std::vector<std::string>& args);

/// Reads `key = value` lines into flag arguments: `key = v` becomes
/// `--key v`, `key = true` becomes `--key`, `key = false` is dropped.
/// Blank lines and lines starting with '#' are ignored.
std::vector<std::string> config_to_args(const std::string& text);

}  // namespace dmfd::cli
