#pragma once

#include <cstdint>
#include <cstring>
#include <vector>

#include "core/comms.hpp"
#include "core/coordination.hpp"
#include "core/geometry.hpp"

namespace agnav {

/// Fixed little-layout payload codecs for the replicated records. Every
/// encode/decode pair round-trips exactly; decoders throw std::runtime_error
/// on short buffers.

struct PosePayload {
  Pose2 pose;
  double time = 0.0;
  bool has_goal = false;
  Vec2 goal;
};

struct GoalPayload {
  Vec2 position;
  double time = 0.0;
};

struct ClaimPayload {
  bool active = false;
  GoalKey goal;
  double time = 0.0;
};

/// Visit and unreachable records share this shape.
struct MarkPayload {
  GoalKey goal;
  double time = 0.0;
};

struct MapCellsPayload {
  struct Cell {
    uint32_t index = 0;
    uint8_t cls = 0;
    uint8_t r = 0, g = 0, b = 0;
    float elevation = 0.0f;
  };
  std::vector<Cell> cells;
};

std::vector<uint8_t> encode_pose(const PosePayload& p);
PosePayload decode_pose(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_goal(const GoalPayload& p);
GoalPayload decode_goal(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_claim(const ClaimPayload& p);
ClaimPayload decode_claim(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_mark(const MarkPayload& p);
MarkPayload decode_mark(const std::vector<uint8_t>& bytes);

std::vector<uint8_t> encode_map_cells(const MapCellsPayload& p);
MapCellsPayload decode_map_cells(const std::vector<uint8_t>& bytes);

}  // namespace agnav
