#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "hslab/config.hpp"
#include "hslab/report.hpp"

namespace hslab {

struct CommandResult {
  VerificationReport report;
  std::vector<std::string> artifacts;  // paths written, in order
  int exit_code = 0;                   // 0 iff no requested check failed
};

const std::vector<std::string>& command_names();

// Runs one command, writes its artifacts under cfg.out and prints the table to log.
CommandResult run_command(const std::string& name, const RunConfig& cfg, std::ostream& log);

}  // namespace hslab
