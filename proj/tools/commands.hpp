#pragma once

// Subcommand implementations behind the lofock binary, kept separate from
// argument parsing so tests can drive them directly.

#include <iosfwd>
#include <string>

#include "lofock/run_config.hpp"

namespace lofock::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;   // verify: a named check failed
inline constexpr int kExitConfigError = 2;   // unreadable/invalid configuration
inline constexpr int kExitSchemeError = 3;   // scheme file did not parse

// Built-in scheme name, or a path to a scheme file.
CircuitProgram resolve_scheme(const std::string& name_or_path);

int cmd_run(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& config, const std::string& param,
              const std::string& grid, std::ostream& out, std::ostream& err);
int cmd_verify(bool inject_fault, std::ostream& out, std::ostream& err);
int cmd_list_schemes(std::ostream& out);

}  // namespace lofock::cli
