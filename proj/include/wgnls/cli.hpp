#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "wgnls/config.hpp"
#include "wgnls/constants.hpp"

namespace wgnls {

inline constexpr const char* kCodeVersion = "wgnls 0.1.0";

/// Subcommands understood by run_command.
const std::vector<std::string>& command_names();

struct CommandRequest {
  std::string command;
  std::string config_path;  ///< empty means all defaults
  std::vector<std::string> overrides;  ///< section.key=value
  std::string output_dir;   ///< overrides run.output_dir when set
  std::string snapshot;     ///< classify/evolve: read the datum from this snapshot
};

/// WGNLS_CONSTANTS_CACHE if set, else $XDG_CACHE_HOME/wgnls/constants.json,
/// else $HOME/.cache/wgnls/constants.json, else ./wgnls_constants.json.
std::string constants_cache_path();

/// Loads constants per run.constants_source: a path, or "compute", which
/// reads the cache and fills it on a miss.
GNConstants obtain_constants(const RunConfig& cfg);

/// Runs one command. Returns the process exit code: 0 on success (including
/// detected blow-up), 1 on a domain/numerical/IO failure, 2 on a usage or
/// configuration error. Failures are reported as one JSON object on err.
int run_command(const CommandRequest& req, std::ostream& out, std::ostream& err);

/// Exit code for an error kind (Usage and Config -> 2, everything else -> 1).
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace wgnls
