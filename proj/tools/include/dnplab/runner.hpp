#pragma once

#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "dnplab/scenario.hpp"

namespace dnplab {

enum ExitCode : int { kPass = 0, kConfigFailure = 1, kNumericFailure = 2, kCheckFailed = 3 };

struct RunOutcome {
  int exit_code = kPass;
  nlohmann::json verdict;
};

/// Runs the scenario and writes its artifacts below `out_dir`:
///   verdict.json, scenario.yaml, series.csv and, depending on the kind,
///   fields/*.csv, fields/*.bin, rates.csv, tail.csv, coercivity.csv.
/// Library errors are caught and mapped to exit codes; the verdict is written
/// in every case.
RunOutcome run_scenario(const Scenario& scenario, const std::string& out_dir, std::ostream& log);

/// Exit code for an in-flight exception (1 config, 2 numeric).
int exit_code_for_current_exception(std::string* message);

}  // namespace dnplab
