#include "sim/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace agnav {
namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_num(const std::string& v, int line) {
  size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    fail(line, "expected a number, got '" + v + "'");
  }
  if (used != v.size()) fail(line, "trailing characters after number '" + v + "'");
  if (!std::isfinite(x)) fail(line, "number out of range '" + v + "'");
  return x;
}

int64_t parse_int(const std::string& v, int line) {
  const double x = parse_num(v, line);
  if (x != std::floor(x)) fail(line, "expected an integer, got '" + v + "'");
  return int64_t(x);
}

bool parse_bool(const std::string& v, int line) {
  if (v == "on" || v == "true" || v == "1") return true;
  if (v == "off" || v == "false" || v == "0") return false;
  fail(line, "expected on/off, got '" + v + "'");
}

Vec2 parse_vec(const std::string& v, int line) {
  const size_t comma = v.find(',');
  if (comma == std::string::npos) fail(line, "expected 'x,y', got '" + v + "'");
  return {parse_num(trim(v.substr(0, comma)), line),
          parse_num(trim(v.substr(comma + 1)), line)};
}

}  // namespace

MissionConfig parse_config(const std::string& text) {
  MissionConfig cfg;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string stripped = trim(raw);
    if (stripped.empty()) continue;
    const size_t eq = stripped.find('=');
    if (eq == std::string::npos) fail(line, "expected 'key = value'");
    const std::string key = trim(stripped.substr(0, eq));
    const std::string val = trim(stripped.substr(eq + 1));
    if (key.empty() || val.empty()) fail(line, "expected 'key = value'");

    if (key == "world") {
      if (val != "city" && val != "flat" && val != "ramp_fixture" && val != "handoff")
        fail(line, "unknown world preset '" + val + "'");
      cfg.world = val;
    } else if (key == "world_dir") {
      cfg.world_dir = val;
    } else if (key == "world_seed") {
      cfg.world_seed = uint64_t(parse_int(val, line));
    } else if (key == "clusters") {
      cfg.clusters = int(parse_int(val, line));
    } else if (key == "roadblocks") {
      cfg.roadblocks = int(parse_int(val, line));
    } else if (key == "seed") {
      cfg.seed = uint64_t(parse_int(val, line));
    } else if (key == "ugvs") {
      cfg.ugvs = int(parse_int(val, line));
    } else if (key == "duration") {
      cfg.duration = parse_num(val, line);
    } else if (key == "uav") {
      cfg.uav = parse_bool(val, line);
    } else if (key == "terrain_mode") {
      if (val == "learned")
        cfg.terrain_mode = TerrainMode::kLearned;
      else if (val == "class_rank")
        cfg.terrain_mode = TerrainMode::kClassRank;
      else if (val == "class_rank_frozen")
        cfg.terrain_mode = TerrainMode::kClassRankFrozen;
      else
        fail(line, "unknown terrain_mode '" + val + "'");
    } else if (key == "comms_mode") {
      if (val == "off")
        cfg.comms_mode = CommsMode::kOff;
      else if (val == "downsampled")
        cfg.comms_mode = CommsMode::kDownsampled;
      else if (val == "full")
        cfg.comms_mode = CommsMode::kFull;
      else
        fail(line, "unknown comms_mode '" + val + "'");
    } else if (key == "scenario") {
      if (val == "standard")
        cfg.scenario = Scenario::kStandard;
      else if (val == "handoff")
        cfg.scenario = Scenario::kHandoff;
      else
        fail(line, "unknown scenario '" + val + "'");
    } else if (key == "manual_goal") {
      cfg.manual_goal = parse_vec(val, line);
    } else if (key == "goal_timeout") {
      cfg.goal_timeout = parse_num(val, line);
    } else if (key == "sync_pos_range") {
      cfg.sync_pos_range = parse_num(val, line);
    } else if (key == "sync_full_range") {
      cfg.sync_full_range = parse_num(val, line);
    } else {
      fail(line, "unknown key '" + key + "'");
    }
  }

  if (cfg.ugvs < 1) throw std::runtime_error("config: ugvs must be at least 1");
  if (cfg.duration <= 0.0) throw std::runtime_error("config: duration must be positive");
  if (cfg.clusters < 0) throw std::runtime_error("config: clusters must be non-negative");
  if (cfg.roadblocks < 0) throw std::runtime_error("config: roadblocks must be non-negative");
  if (cfg.goal_timeout <= 0.0) throw std::runtime_error("config: goal_timeout must be positive");
  if (cfg.sync_full_range > cfg.sync_pos_range)
    throw std::runtime_error("config: sync_full_range must not exceed sync_pos_range");
  if (cfg.scenario == Scenario::kHandoff && !cfg.manual_goal)
    cfg.manual_goal = Vec2{132.0, 10.0};
  return cfg;
}

MissionConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const MissionConfig& cfg) {
  std::ostringstream out;
  out << "world = " << cfg.world << "\n";
  if (!cfg.world_dir.empty()) out << "world_dir = " << cfg.world_dir << "\n";
  out << "world_seed = " << cfg.world_seed << "\n";
  out << "clusters = " << cfg.clusters << "\n";
  out << "roadblocks = " << cfg.roadblocks << "\n";
  out << "seed = " << cfg.seed << "\n";
  out << "ugvs = " << cfg.ugvs << "\n";
  out << "duration = " << cfg.duration << "\n";
  out << "uav = " << (cfg.uav ? "on" : "off") << "\n";
  out << "terrain_mode = " << terrain_mode_name(cfg.terrain_mode) << "\n";
  out << "comms_mode = " << comms_mode_name(cfg.comms_mode) << "\n";
  out << "scenario = " << (cfg.scenario == Scenario::kHandoff ? "handoff" : "standard") << "\n";
  if (cfg.manual_goal)
    out << "manual_goal = " << cfg.manual_goal->x << "," << cfg.manual_goal->y << "\n";
  out << "goal_timeout = " << cfg.goal_timeout << "\n";
  out << "sync_pos_range = " << cfg.sync_pos_range << "\n";
  out << "sync_full_range = " << cfg.sync_full_range << "\n";
  return out.str();
}

const char* terrain_mode_name(TerrainMode m) {
  switch (m) {
    case TerrainMode::kLearned: return "learned";
    case TerrainMode::kClassRank: return "class_rank";
    case TerrainMode::kClassRankFrozen: return "class_rank_frozen";
  }
  return "?";
}

const char* comms_mode_name(CommsMode m) {
  switch (m) {
    case CommsMode::kOff: return "off";
    case CommsMode::kDownsampled: return "downsampled";
    case CommsMode::kFull: return "full";
  }
  return "?";
}

}  // namespace agnav
