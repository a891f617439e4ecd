#pragma once

#include <string>
#include <vector>

namespace agnav {

struct RobotMetrics {
  int id = 0;
  double distance = 0.0;
  double nav_time = 0.0;          // total time spent holding an active claim
  double nav_time_visited = 0.0;  // claim intervals that ended in a visit
  double nav_time_failed = 0.0;   // intervals ended by unreach/yield/cutoff
};

/// Mission outcome measures, derived entirely from the event trace. Goals are
/// deduplicated the same way the robots do it online: records whose positions
/// chain within 10 m count as one goal.
struct MissionMetrics {
  double duration = 0.0;
  int goals_identified = 0;
  int goals_visited = 0;
  std::vector<double> visit_times;     // one per deduped goal; unvisited = duration
  std::vector<double> claim_to_visit;  // per visit, claimant's final claim to arrival
  std::vector<RobotMetrics> robots;    // sorted by id
  long records_moved = 0;
  int contacts = 0;
};

/// Parses a mission trace. Throws std::runtime_error naming the last intact
/// event time when the trace is malformed or ends without an END line.
MissionMetrics compute_metrics(const std::string& trace);

double median(std::vector<double> v);

std::string metrics_csv_header();
std::string metrics_csv_row(const std::string& label, uint64_t seed, const MissionMetrics& m);

}  // namespace agnav
