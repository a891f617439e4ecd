#pragma once

#include <string>

#include "core/world.hpp"
#include "sim/config.hpp"
#include "sim/metrics.hpp"

namespace agnav {

struct MissionResult {
  std::string trace;
  MissionMetrics metrics;
};

/// Runs one mission to completion. Deterministic: the returned trace is a
/// pure function of the config (and world, when supplied).
MissionResult run_mission(const MissionConfig& cfg);
MissionResult run_mission(const MissionConfig& cfg, const WorldModel& world);

/// World named by the config: generated from a preset or loaded from disk.
WorldModel world_for(const MissionConfig& cfg);

}  // namespace agnav
