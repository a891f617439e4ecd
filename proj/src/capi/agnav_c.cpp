#include "agnav/agnav.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "core/world.hpp"
#include "core/world_gen.hpp"
#include "sim/battery.hpp"
#include "sim/config.hpp"
#include "sim/metrics.hpp"
#include "sim/mission.hpp"

using namespace agnav;

struct agnav_world {
  WorldModel v;
};
struct agnav_config {
  MissionConfig v;
};
struct agnav_result {
  std::string trace;
  MissionMetrics metrics;
};
struct agnav_battery {
  BatteryOutcome v;
};

namespace {

thread_local std::string g_error;

void clear_error() { g_error.clear(); }

int set_error(int code, const std::string& what) {
  g_error = what;
  return code;
}

template <class T>
T* fail_null(int code, const std::string& what) {
  set_error(code, what);
  return nullptr;
}

int require(bool ok, const char* what) {
  if (ok) return AGNAV_OK;
  return set_error(AGNAV_ERR_ARGUMENT, what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void write_pgm(const std::string& path, int w, int h, const std::vector<uint8_t>& px) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P5\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(px.data()), std::streamsize(px.size()));
}

void write_ppm(const std::string& path, int w, int h, const std::vector<uint8_t>& px) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "P6\n" << w << " " << h << "\n255\n";
  out.write(reinterpret_cast<const char*>(px.data()), std::streamsize(px.size()));
}

std::vector<uint8_t> normalized_gray(const Grid<float>& g) {
  float lo = 1e30f, hi = -1e30f;
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x) {
      lo = std::min(lo, g.at(x, y));
      hi = std::max(hi, g.at(x, y));
    }
  const float span = hi > lo ? hi - lo : 1.0f;
  std::vector<uint8_t> px(size_t(g.width()) * size_t(g.height()));
  for (int y = 0; y < g.height(); ++y)
    for (int x = 0; x < g.width(); ++x)
      px[size_t(g.height() - 1 - y) * g.width() + x] =
          uint8_t(255.0f * (g.at(x, y) - lo) / span);
  return px;
}

}  // namespace

extern "C" {

const char* agnav_last_error(void) { return g_error.c_str(); }

void agnav_string_free(char* s) { std::free(s); }

/* ---- worlds ------------------------------------------------------------ */

agnav_world* agnav_world_generate(const char* preset, uint64_t seed, int clusters,
                                  int roadblocks) {
  if (!preset) return fail_null<agnav_world>(AGNAV_ERR_ARGUMENT, "preset is null");
  try {
    auto w = std::make_unique<agnav_world>();
    w->v = generate_world(preset, seed, clusters, roadblocks);
    clear_error();
    return w.release();
  } catch (const std::exception& e) {
    return fail_null<agnav_world>(AGNAV_ERR_RUNTIME, e.what());
  }
}

agnav_world* agnav_world_load(const char* dir) {
  if (!dir) return fail_null<agnav_world>(AGNAV_ERR_ARGUMENT, "dir is null");
  try {
    auto w = std::make_unique<agnav_world>();
    w->v = load_world(dir);
    clear_error();
    return w.release();
  } catch (const std::exception& e) {
    return fail_null<agnav_world>(AGNAV_ERR_IO, e.what());
  }
}

int agnav_world_save(const agnav_world* w, const char* dir) {
  if (int rc = require(w && dir, "world or dir is null")) return rc;
  try {
    save_world(w->v, dir);
    clear_error();
    return AGNAV_OK;
  } catch (const std::exception& e) {
    return set_error(AGNAV_ERR_IO, e.what());
  }
}

void agnav_world_free(agnav_world* w) { delete w; }

int agnav_world_width(const agnav_world* w) { return w ? w->v.width() : 0; }
int agnav_world_height(const agnav_world* w) { return w ? w->v.height() : 0; }
double agnav_world_resolution(const agnav_world* w) {
  return w ? w->v.truth.resolution : 0.0;
}
int agnav_world_goal_count(const agnav_world* w) {
  return w ? int(w->v.goal_clusters.size()) : 0;
}
int agnav_world_start_count(const agnav_world* w) {
  return w ? int(w->v.starts.size()) : 0;
}

int agnav_world_export_images(const agnav_world* w, const char* dir) {
  if (int rc = require(w && dir, "world or dir is null")) return rc;
  try {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const SemanticOrthomap& m = w->v.truth;
    const int wd = m.width(), ht = m.height();

    std::vector<uint8_t> rgb(size_t(wd) * size_t(ht) * 3);
    auto put = [&](int x, int y, uint8_t r, uint8_t g, uint8_t b) {
      const size_t i = (size_t(ht - 1 - y) * wd + x) * 3;
      rgb[i] = r;
      rgb[i + 1] = g;
      rgb[i + 2] = b;
    };
    for (int y = 0; y < ht; ++y)
      for (int x = 0; x < wd; ++x) {
        const uint8_t c = m.classes.at(x, y);
        if (c < m.palette.size())
          put(x, y, m.palette[c].color[0], m.palette[c].color[1], m.palette[c].color[2]);
        else
          put(x, y, 255, 0, 255);
      }
    write_ppm(std::string(dir) + "/class.ppm", wd, ht, rgb);

    for (int y = 0; y < ht; ++y)
      for (int x = 0; x < wd; ++x) {
        const auto& c = m.color.at(x, y);
        put(x, y, c[0], c[1], c[2]);
      }
    write_ppm(std::string(dir) + "/color.ppm", wd, ht, rgb);

    write_pgm(std::string(dir) + "/elevation.pgm", wd, ht, normalized_gray(m.elevation));
    write_pgm(std::string(dir) + "/surface.pgm", wd, ht, normalized_gray(w->v.surface));

    std::vector<uint8_t> known(size_t(wd) * size_t(ht));
    for (int y = 0; y < ht; ++y)
      for (int x = 0; x < wd; ++x)
        known[size_t(ht - 1 - y) * wd + x] = m.known.at(x, y) ? 255 : 0;
    write_pgm(std::string(dir) + "/known.pgm", wd, ht, known);

    clear_error();
    return AGNAV_OK;
  } catch (const std::exception& e) {
    return set_error(AGNAV_ERR_IO, e.what());
  }
}

/* ---- mission configs --------------------------------------------------- */

agnav_config* agnav_config_parse(const char* text) {
  if (!text) return fail_null<agnav_config>(AGNAV_ERR_ARGUMENT, "text is null");
  try {
    auto c = std::make_unique<agnav_config>();
    c->v = parse_config(text);
    clear_error();
    return c.release();
  } catch (const std::exception& e) {
    return fail_null<agnav_config>(AGNAV_ERR_PARSE, e.what());
  }
}

agnav_config* agnav_config_load(const char* path) {
  if (!path) return fail_null<agnav_config>(AGNAV_ERR_ARGUMENT, "path is null");
  try {
    auto c = std::make_unique<agnav_config>();
    c->v = load_config(path);
    clear_error();
    return c.release();
  } catch (const std::exception& e) {
    return fail_null<agnav_config>(AGNAV_ERR_PARSE, e.what());
  }
}

void agnav_config_free(agnav_config* c) { delete c; }

int agnav_config_set(agnav_config* c, const char* key, const char* value) {
  if (int rc = require(c && key && value, "config, key, or value is null")) return rc;
  try {
    // Reparse the whole text so assignments get the same validation as files.
    c->v = parse_config(serialize_config(c->v) + key + " = " + value + "\n");
    clear_error();
    return AGNAV_OK;
  } catch (const std::exception& e) {
    return set_error(AGNAV_ERR_PARSE, e.what());
  }
}

char* agnav_config_text(const agnav_config* c) {
  if (!c) return fail_null<char>(AGNAV_ERR_ARGUMENT, "config is null");
  clear_error();
  return dup_string(serialize_config(c->v));
}

/* ---- missions and metrics ---------------------------------------------- */

agnav_result* agnav_mission_run(const agnav_config* c) {
  if (!c) return fail_null<agnav_result>(AGNAV_ERR_ARGUMENT, "config is null");
  try {
    const MissionResult res = run_mission(c->v);
    auto r = std::make_unique<agnav_result>();
    r->trace = res.trace;
    r->metrics = res.metrics;
    clear_error();
    return r.release();
  } catch (const std::exception& e) {
    return fail_null<agnav_result>(AGNAV_ERR_RUNTIME, e.what());
  }
}

agnav_result* agnav_metrics_parse(const char* trace) {
  if (!trace) return fail_null<agnav_result>(AGNAV_ERR_ARGUMENT, "trace is null");
  try {
    auto r = std::make_unique<agnav_result>();
    r->trace = trace;
    r->metrics = compute_metrics(r->trace);
    clear_error();
    return r.release();
  } catch (const std::exception& e) {
    return fail_null<agnav_result>(AGNAV_ERR_PARSE, e.what());
  }
}

void agnav_result_free(agnav_result* r) { delete r; }

const char* agnav_result_trace(const agnav_result* r) {
  return r ? r->trace.c_str() : "";
}

double agnav_result_duration(const agnav_result* r) {
  return r ? r->metrics.duration : 0.0;
}
int agnav_result_goals_identified(const agnav_result* r) {
  return r ? r->metrics.goals_identified : 0;
}
int agnav_result_goals_visited(const agnav_result* r) {
  return r ? r->metrics.goals_visited : 0;
}
double agnav_result_visit_time_median(const agnav_result* r) {
  return r ? median(r->metrics.visit_times) : 0.0;
}
double agnav_result_claim_to_visit_median(const agnav_result* r) {
  return r ? median(r->metrics.claim_to_visit) : 0.0;
}
long agnav_result_records_moved(const agnav_result* r) {
  return r ? r->metrics.records_moved : 0;
}
int agnav_result_contacts(const agnav_result* r) { return r ? r->metrics.contacts : 0; }
int agnav_result_robot_count(const agnav_result* r) {
  return r ? int(r->metrics.robots.size()) : 0;
}

int agnav_result_robot(const agnav_result* r, int index, agnav_robot_stats* out) {
  if (int rc = require(r && out, "result or out is null")) return rc;
  if (index < 0 || index >= int(r->metrics.robots.size()))
    return set_error(AGNAV_ERR_ARGUMENT, "robot index out of range");
  const RobotMetrics& m = r->metrics.robots[size_t(index)];
  out->id = m.id;
  out->distance = m.distance;
  out->nav_time = m.nav_time;
  out->nav_time_visited = m.nav_time_visited;
  out->nav_time_failed = m.nav_time_failed;
  clear_error();
  return AGNAV_OK;
}

char* agnav_result_csv_row(const agnav_result* r, const char* label, uint64_t seed) {
  if (!r || !label) return fail_null<char>(AGNAV_ERR_ARGUMENT, "result or label is null");
  clear_error();
  return dup_string(metrics_csv_row(label, seed, r->metrics));
}

char* agnav_metrics_csv_header(void) {
  clear_error();
  return dup_string(metrics_csv_header());
}

/* ---- batteries --------------------------------------------------------- */

agnav_battery* agnav_battery_run(const agnav_config* base, const char* sweep_key,
                                 const char* const* values, int value_count, int reps) {
  if (!base || !sweep_key || (value_count > 0 && !values))
    return fail_null<agnav_battery>(AGNAV_ERR_ARGUMENT, "battery argument is null");
  if (value_count < 0 || reps < 1)
    return fail_null<agnav_battery>(AGNAV_ERR_ARGUMENT, "bad value_count or reps");
  try {
    std::vector<std::string> vals;
    vals.reserve(size_t(value_count));
    for (int i = 0; i < value_count; ++i) vals.emplace_back(values[i]);
    auto b = std::make_unique<agnav_battery>();
    b->v = run_battery(base->v, sweep_key, vals, reps);
    clear_error();
    return b.release();
  } catch (const std::exception& e) {
    return fail_null<agnav_battery>(AGNAV_ERR_RUNTIME, e.what());
  }
}

void agnav_battery_free(agnav_battery* b) { delete b; }

int agnav_battery_failures(const agnav_battery* b) { return b ? b->v.failures : 0; }
const char* agnav_battery_runs_csv(const agnav_battery* b) {
  return b ? b->v.runs_csv.c_str() : "";
}
const char* agnav_battery_aggregates_csv(const agnav_battery* b) {
  return b ? b->v.aggregates_csv.c_str() : "";
}
const char* agnav_battery_failures_csv(const agnav_battery* b) {
  return b ? b->v.failures_csv.c_str() : "";
}

}  // extern "C"
