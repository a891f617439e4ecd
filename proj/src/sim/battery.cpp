#include "sim/battery.hpp"

#include <map>
#include <stdexcept>

#include "sim/mission.hpp"
#include "sim/trace.hpp"

namespace agnav {

BatteryOutcome run_battery(const MissionConfig& base, const std::string& sweep_key,
                           const std::vector<std::string>& values, int reps) {
  if (reps < 1) throw std::runtime_error("battery: reps must be at least 1");
  std::vector<std::pair<std::string, MissionConfig>> arms;
  if (sweep_key.empty()) {
    arms.emplace_back("base", base);
  } else {
    for (const std::string& v : values) {
      const std::string text =
          serialize_config(base) + sweep_key + " = " + v + "\n";
      arms.emplace_back(sweep_key + "=" + v, parse_config(text));
    }
  }
  if (arms.empty()) throw std::runtime_error("battery: sweep has no values");

  BatteryOutcome out;
  out.runs_csv = "# agnav-metrics v1\n" + metrics_csv_header() + "\n";
  out.failures_csv = "# agnav-metrics v1\nlabel,seed,error\n";

  for (const auto& [label, arm_cfg] : arms) {
    for (int r = 0; r < reps; ++r) {
      MissionConfig cfg = arm_cfg;
      cfg.seed = arm_cfg.seed + uint64_t(r);
      cfg.world_seed = arm_cfg.world_seed + uint64_t(r);
      BatteryRun run;
      run.label = label;
      run.seed = cfg.seed;
      try {
        run.metrics = run_mission(cfg).metrics;
      } catch (const std::exception& e) {
        run.failed = true;
        run.error = e.what();
      }
      if (run.failed) {
        ++out.failures;
        out.failures_csv += strf("%s,%llu,%s\n", run.label.c_str(),
                                 (unsigned long long)run.seed, run.error.c_str());
      } else {
        out.runs_csv += metrics_csv_row(run.label, run.seed, run.metrics) + "\n";
      }
      out.runs.push_back(std::move(run));
    }
  }

  // Aggregates pool per-goal and per-robot values across an arm's reps.
  out.aggregates_csv =
      "# agnav-metrics v1\n"
      "label,runs,goals_identified_median,goals_visited_median,visit_time_median,"
      "claim_to_visit_median,nav_fraction_median\n";
  for (const auto& [label, arm_cfg] : arms) {
    (void)arm_cfg;
    std::vector<double> identified, visited, visit_times, claim_to_visit, nav;
    int ok = 0;
    for (const BatteryRun& run : out.runs) {
      if (run.label != label || run.failed) continue;
      ++ok;
      identified.push_back(double(run.metrics.goals_identified));
      visited.push_back(double(run.metrics.goals_visited));
      visit_times.insert(visit_times.end(), run.metrics.visit_times.begin(),
                         run.metrics.visit_times.end());
      claim_to_visit.insert(claim_to_visit.end(), run.metrics.claim_to_visit.begin(),
                            run.metrics.claim_to_visit.end());
      for (const RobotMetrics& rm : run.metrics.robots)
        if (run.metrics.duration > 0.0) nav.push_back(rm.nav_time / run.metrics.duration);
    }
    out.aggregates_csv +=
        strf("%s,%d,%.1f,%.1f,%.3f,%.3f,%.4f\n", label.c_str(), ok, median(identified),
             median(visited), median(visit_times), median(claim_to_visit), median(nav));
  }
  return out;
}

}  // namespace agnav
