#pragma once

#include <iosfwd>
#include <string>

#include "charflow/config.hpp"

namespace charflow {

enum ExitCode : int {
  kExitOk = 0,
  kExitChecksFailed = 1,  // verify found a residual above tolerance, or output could not be written
  kExitValidation = 2,
  kExitNumerical = 3,
};

int cmd_solve(const RunConfig& cfg, std::ostream& log);
int cmd_verify(const RunConfig& cfg, std::ostream& log);
int cmd_compare(const RunConfig& cfg, std::ostream& log);
int cmd_hodograph(const RunConfig& cfg, std::ostream& log);

/// Dispatches `command` and maps library errors onto exit codes, printing the
/// message to err.
int run_command(const std::string& command, const RunConfig& cfg, std::ostream& log, std::ostream& err);

}  // namespace charflow
