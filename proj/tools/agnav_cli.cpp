// Command line front end. Talks to the stack exclusively through the shared
// library's C surface; everything here is argument plumbing and file IO.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "agnav/agnav.h"

namespace fs = std::filesystem;

namespace {

int die(const std::string& where) {
  std::fprintf(stderr, "agnav: %s: %s\n", where.c_str(), agnav_last_error());
  return 1;
}

bool write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << body;
  return bool(out);
}

std::string read_file(const fs::path& path, bool* ok) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  *ok = bool(in);
  return buf.str();
}

struct ConfigArgs {
  std::string config_path;
  std::vector<std::string> sets;  // key=value overrides, applied in order
};

void add_config_flags(CLI::App* cmd, ConfigArgs* args) {
  cmd->add_option("--config", args->config_path, "mission config file");
  cmd->add_option("--set", args->sets, "override, key=value, repeatable");
}

using ConfigPtr = std::unique_ptr<agnav_config, decltype(&agnav_config_free)>;

ConfigPtr build_config(const ConfigArgs& args, int* rc) {
  ConfigPtr cfg(args.config_path.empty() ? agnav_config_parse("")
                                         : agnav_config_load(args.config_path.c_str()),
                agnav_config_free);
  if (!cfg) {
    *rc = die("config");
    return cfg;
  }
  for (const std::string& s : args.sets) {
    const size_t eq = s.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "agnav: --set wants key=value, got '%s'\n", s.c_str());
      *rc = 1;
      cfg.reset();
      return cfg;
    }
    if (agnav_config_set(cfg.get(), s.substr(0, eq).c_str(), s.substr(eq + 1).c_str())) {
      *rc = die("--set " + s);
      cfg.reset();
      return cfg;
    }
  }
  *rc = 0;
  return cfg;
}

void print_summary(const agnav_result* res) {
  std::printf("duration       %.0f s\n", agnav_result_duration(res));
  std::printf("goals          %d identified, %d visited\n",
              agnav_result_goals_identified(res), agnav_result_goals_visited(res));
  std::printf("visit median   %.1f s\n", agnav_result_visit_time_median(res));
  std::printf("records moved  %ld\n", agnav_result_records_moved(res));
  std::printf("contacts       %d\n", agnav_result_contacts(res));
  for (int i = 0; i < agnav_result_robot_count(res); ++i) {
    agnav_robot_stats rs;
    if (agnav_result_robot(res, i, &rs)) continue;
    std::printf("robot %-2d       %.1f m driven, %.0f s navigating (%.0f s to visits)\n",
                rs.id, rs.distance, rs.nav_time, rs.nav_time_visited);
  }
}

int cmd_gen_world(const std::string& preset, uint64_t seed, int clusters, int roadblocks,
                  const std::string& out) {
  agnav_world* w = agnav_world_generate(preset.c_str(), seed, clusters, roadblocks);
  if (!w) return die("gen-world");
  const int rc = agnav_world_save(w, out.c_str());
  if (rc == 0)
    std::printf("%s: %dx%d cells @ %.2f m, %d goal clusters, %d starts\n", out.c_str(),
                agnav_world_width(w), agnav_world_height(w), agnav_world_resolution(w),
                agnav_world_goal_count(w), agnav_world_start_count(w));
  agnav_world_free(w);
  return rc ? die("save") : 0;
}

int cmd_run(const ConfigArgs& args, const std::string& out_dir) {
  int rc = 0;
  ConfigPtr cfg = build_config(args, &rc);
  if (!cfg) return rc;

  agnav_result* res = agnav_mission_run(cfg.get());
  if (!res) return die("run");

  fs::create_directories(out_dir);
  bool ok = write_file(fs::path(out_dir) / "trace.txt", agnav_result_trace(res));
  char* header = agnav_metrics_csv_header();
  char* row = agnav_result_csv_row(res, "run", 0);
  ok = ok && write_file(fs::path(out_dir) / "metrics.csv",
                        std::string(header) + "\n" + row + "\n");
  agnav_string_free(header);
  agnav_string_free(row);

  print_summary(res);
  agnav_result_free(res);
  if (!ok) {
    std::fprintf(stderr, "agnav: cannot write outputs under %s\n", out_dir.c_str());
    return 1;
  }
  std::printf("wrote %s/trace.txt and metrics.csv\n", out_dir.c_str());
  return 0;
}

int cmd_battery(const ConfigArgs& args, const std::string& sweep,
                const std::string& values_csv, int reps, const std::string& out_dir) {
  int rc = 0;
  ConfigPtr cfg = build_config(args, &rc);
  if (!cfg) return rc;

  std::vector<std::string> values;
  std::stringstream ss(values_csv);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) values.push_back(item);
  std::vector<const char*> cvals;
  for (const std::string& v : values) cvals.push_back(v.c_str());

  agnav_battery* b = agnav_battery_run(cfg.get(), sweep.c_str(),
                                       cvals.empty() ? nullptr : cvals.data(),
                                       int(cvals.size()), reps);
  if (!b) return die("battery");

  fs::create_directories(out_dir);
  bool ok = write_file(fs::path(out_dir) / "runs.csv", agnav_battery_runs_csv(b));
  ok = ok &&
       write_file(fs::path(out_dir) / "aggregates.csv", agnav_battery_aggregates_csv(b));
  ok = ok && write_file(fs::path(out_dir) / "failures.csv", agnav_battery_failures_csv(b));
  const int failures = agnav_battery_failures(b);
  agnav_battery_free(b);
  if (!ok) {
    std::fprintf(stderr, "agnav: cannot write outputs under %s\n", out_dir.c_str());
    return 1;
  }
  std::printf("wrote %s/{runs,aggregates,failures}.csv (%d failed runs)\n",
              out_dir.c_str(), failures);
  return failures == 0 ? 0 : 2;
}

int cmd_metrics(const std::string& trace_path, const std::string& label, uint64_t seed) {
  bool ok = false;
  const std::string trace = read_file(trace_path, &ok);
  if (!ok) {
    std::fprintf(stderr, "agnav: cannot read %s\n", trace_path.c_str());
    return 1;
  }
  agnav_result* res = agnav_metrics_parse(trace.c_str());
  if (!res) return die("metrics");
  char* header = agnav_metrics_csv_header();
  char* row = agnav_result_csv_row(res, label.c_str(), seed);
  std::printf("%s\n%s\n", header, row);
  agnav_string_free(header);
  agnav_string_free(row);
  agnav_result_free(res);
  return 0;
}

int cmd_export(const std::string& world_dir, const std::string& out) {
  agnav_world* w = agnav_world_load(world_dir.c_str());
  if (!w) return die("export-rasters");
  const int rc = agnav_world_export_images(w, out.c_str());
  agnav_world_free(w);
  if (rc) return die("export-rasters");
  std::printf("wrote viewable rasters under %s\n", out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"air-ground team navigation simulator"};
  app.require_subcommand(1);

  std::string preset = "city", out = "out", values, sweep, trace_path, label = "trace";
  uint64_t seed = 1;
  int clusters = 15, roadblocks = 0, reps = 1;
  ConfigArgs cfg_args;

  CLI::App* gen = app.add_subcommand("gen-world", "generate a world container");
  gen->add_option("--preset", preset, "city | flat | ramp_fixture | handoff");
  gen->add_option("--seed", seed, "generator seed");
  gen->add_option("--clusters", clusters, "goal cluster count (city)");
  gen->add_option("--roadblocks", roadblocks, "road barrier count (city)");
  gen->add_option("--out", out, "output directory")->required();

  CLI::App* run = app.add_subcommand("run", "run one mission");
  add_config_flags(run, &cfg_args);
  run->add_option("--out", out, "output directory for trace and metrics");

  CLI::App* bat = app.add_subcommand("battery", "run a config sweep");
  add_config_flags(bat, &cfg_args);
  bat->add_option("--sweep", sweep, "config key to sweep");
  bat->add_option("--values", values, "comma separated sweep values");
  bat->add_option("--reps", reps, "repetitions per value")->check(CLI::PositiveNumber);
  bat->add_option("--out", out, "output directory for csv files");

  CLI::App* met = app.add_subcommand("metrics", "recompute metrics from a trace");
  met->add_option("--trace", trace_path, "trace file")->required();
  met->add_option("--label", label, "label column value");
  met->add_option("--seed", seed, "seed column value");

  CLI::App* exp = app.add_subcommand("export-rasters", "dump viewable images");
  exp->add_option("--world", preset, "world container directory")->required();
  exp->add_option("--out", out, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) return cmd_gen_world(preset, seed, clusters, roadblocks, out);
  if (run->parsed()) return cmd_run(cfg_args, out);
  if (bat->parsed()) return cmd_battery(cfg_args, sweep, values, reps, out);
  if (met->parsed()) return cmd_metrics(trace_path, label, seed);
  if (exp->parsed()) return cmd_export(preset, out);
  return 1;
}
