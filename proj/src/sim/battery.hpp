#pragma once

#include <string>
#include <vector>

#include "sim/config.hpp"
#include "sim/metrics.hpp"

namespace agnav {

/// One mission inside a sweep.
struct BatteryRun {
  std::string label;  // "key=value"
  uint64_t seed = 0;
  bool failed = false;
  std::string error;
  MissionMetrics metrics;
};

struct BatteryOutcome {
  std::vector<BatteryRun> runs;
  std::string runs_csv;        // one row per successful run
  std::string aggregates_csv;  // one row per sweep value, medians over reps
  std::string failures_csv;
  int failures = 0;
};

/// Runs reps missions per sweep value. Each rep r offsets both seed and
/// world_seed by r, so repetitions vary the world and the mission together.
/// A sweep value is applied by appending "key = value" to the base config;
/// the last assignment of a key wins. An empty key runs the base config as a
/// single arm labeled "base". Failed runs land in failures_csv and are
/// excluded from aggregates.
BatteryOutcome run_battery(const MissionConfig& base, const std::string& sweep_key,
                           const std::vector<std::string>& values, int reps);

}  // namespace agnav
