#pragma once

#include <optional>
#include <string>

#include "core/geometry.hpp"

namespace agnav {

enum class TerrainMode { kLearned, kClassRank, kClassRankFrozen };
enum class CommsMode { kOff, kDownsampled, kFull };
enum class Scenario { kStandard, kHandoff };

/// Everything a mission run depends on. Parsed from `key = value` text; one
/// assignment per line, `#` starts a comment, unknown keys are errors.
struct MissionConfig {
  std::string world = "city";     // city | flat | ramp_fixture | handoff
  std::string world_dir;          // when set, load instead of generating
  uint64_t world_seed = 1;
  int clusters = 15;
  int roadblocks = 0;

  uint64_t seed = 1;
  int ugvs = 1;
  double duration = 1800.0;
  bool uav = true;

  TerrainMode terrain_mode = TerrainMode::kLearned;
  CommsMode comms_mode = CommsMode::kDownsampled;
  Scenario scenario = Scenario::kStandard;
  std::optional<Vec2> manual_goal;

  double goal_timeout = 300.0;
  double sync_pos_range = 50.0;
  double sync_full_range = 30.0;
};

/// Throws std::runtime_error naming the offending line on any malformed or
/// unknown assignment; the returned config is fully validated.
MissionConfig parse_config(const std::string& text);

MissionConfig load_config(const std::string& path);

/// Canonical text form; parse_config(serialize_config(c)) == c.
std::string serialize_config(const MissionConfig& cfg);

const char* terrain_mode_name(TerrainMode m);
const char* comms_mode_name(CommsMode m);

}  // namespace agnav
