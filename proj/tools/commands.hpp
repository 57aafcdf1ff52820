#pragma once

#include <string>
#include <vector>

#include "eseplab/serialization.hpp"

namespace eseplab::cli {

struct CommandResult {
  std::vector<std::string> files;
  int exit_code = 0;
};

int resolve_threads(const RunConfig& c);

// Path CSVs for the first few replications plus summary.json.
CommandResult cmd_simulate(const RunConfig& c);
// quantity selects the table; see the --help text.
CommandResult cmd_analytic(const RunConfig& c);
CommandResult cmd_sweep(const RunConfig& c);
// exit_code 1 when any claim fails
CommandResult cmd_verify(const RunConfig& c);

extern const char* const kSimulateHelp;
extern const char* const kAnalyticHelp;
extern const char* const kSweepHelp;
extern const char* const kVerifyHelp;

}  // namespace eseplab::cli
