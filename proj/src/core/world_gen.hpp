#pragma once

#include <cstdint>
#include <string>

#include "core/world.hpp"

namespace agnav {

// Class ids are positional; keep this order stable, configs refer to names.
enum ClassId : uint8_t {
  kRoad = 0,
  kSidewalk = 1,
  kGrass = 2,
  kBuilding = 3,
  kVehicle = 4,
  kPerson = 5,
};

std::vector<ClassInfo> default_palette();

struct CityParams {
  double size_m = 160.0;
  double resolution = 0.5;
  int vehicle_clusters = 15;
  int roadblocks = 0;
  uint64_t seed = 1;

  double road_spacing = 40.0;
  double road_halfwidth = 4.0;
  double sidewalk_width = 2.5;
  double curb_height = 0.15;
  double ramp_length = 1.0;     // run of the sloped strip, meters
  double ramp_spacing = 18.0;   // along-road distance between curb cuts
  double building_height = 6.0;
  double vehicle_height = 1.5;
  double roadblock_height = 1.2;
  int start_count = 8;
};

WorldModel generate_city(const CityParams& p);

/// Uniform flat drivable plane, no structures. Unit-test scenery.
WorldModel generate_flat(double size_m, double resolution);

/// Road strip plus an elevated walk reachable only via two curb cuts.
WorldModel generate_ramp_fixture();

/// Courtyard maze with three east-west corridors; the southern two are
/// barred mid-way by waist-high barriers that the overhead map does not show.
WorldModel generate_handoff();

/// Dispatch by preset name: "city", "flat", "ramp_fixture", "handoff".
/// Throws on unknown names. seed/clusters/roadblocks apply to "city".
WorldModel generate_world(const std::string& preset, uint64_t seed,
                          int vehicle_clusters, int roadblocks);

}  // namespace agnav
