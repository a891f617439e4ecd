#include "sim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "sim/trace.hpp"

namespace agnav {
namespace {

struct Fields {
  std::map<std::string, std::string> kv;

  bool has(const std::string& k) const { return kv.count(k) != 0; }

  const std::string& str(const std::string& k) const {
    auto it = kv.find(k);
    if (it == kv.end()) throw std::runtime_error("missing field " + k);
    return it->second;
  }

  double num(const std::string& k) const { return std::stod(str(k)); }
  int integer(const std::string& k) const { return int(std::stol(str(k))); }
};

// Goal keys print as "robot:seq".
std::pair<int, uint32_t> parse_goal_id(const std::string& s) {
  const size_t colon = s.find(':');
  if (colon == std::string::npos) throw std::runtime_error("bad goal id " + s);
  return {int(std::stol(s.substr(0, colon))), uint32_t(std::stoul(s.substr(colon + 1)))};
}

struct OpenClaim {
  std::pair<int, uint32_t> goal;
  double since = 0.0;
};

}  // namespace

MissionMetrics compute_metrics(const std::string& trace) {
  MissionMetrics m;
  double last_good = 0.0;
  bool ended = false;

  std::map<std::pair<int, uint32_t>, std::pair<double, double>> goal_pos;
  std::map<std::pair<int, uint32_t>, double> first_visit;
  std::map<int, OpenClaim> open;
  std::map<int, RobotMetrics> robots;

  auto close_claim = [&](int robot, double t, bool visited) {
    auto it = open.find(robot);
    if (it == open.end()) return std::pair<bool, double>{false, 0.0};
    const double span = t - it->second.since;
    auto& r = robots[robot];
    r.id = robot;
    r.nav_time += span;
    (visited ? r.nav_time_visited : r.nav_time_failed) += span;
    const double since = it->second.since;
    open.erase(it);
    return std::pair<bool, double>{true, since};
  };

  std::istringstream in(trace);
  std::string line;
  int lineno = 0;
  try {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.empty()) continue;
      const size_t tab = line.find('\t');
      if (tab == std::string::npos) throw std::runtime_error("no tab");
      const double t = std::stod(line.substr(0, tab));
      std::istringstream body(line.substr(tab + 1));
      std::string event;
      body >> event;
      Fields f;
      std::string tok;
      while (body >> tok) {
        const size_t eq = tok.find('=');
        if (eq == std::string::npos) throw std::runtime_error("bad field " + tok);
        f.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
      }

      if (event == "GOAL") {
        goal_pos[{f.integer("robot"), uint32_t(f.integer("seq"))}] = {f.num("x"), f.num("y")};
      } else if (event == "CLAIM") {
        const int robot = f.integer("robot");
        close_claim(robot, t, false);
        open[robot] = {parse_goal_id(f.str("goal")), t};
      } else if (event == "VISIT") {
        const int robot = f.integer("robot");
        const auto goal = parse_goal_id(f.str("goal"));
        auto [had, since] = close_claim(robot, t, true);
        if (had) m.claim_to_visit.push_back(t - since);
        auto it = first_visit.find(goal);
        if (it == first_visit.end()) first_visit[goal] = t;
      } else if (event == "UNREACH" || event == "RELEASE") {
        close_claim(f.integer("robot"), t, false);
      } else if (event == "SYNC") {
        m.records_moved += long(f.num("moved"));
      } else if (event == "CONTACT") {
        ++m.contacts;
      } else if (event == "SUMMARY") {
        auto& r = robots[f.integer("robot")];
        r.id = f.integer("robot");
        r.distance = f.num("distance");
      } else if (event == "END") {
        m.duration = f.num("t");
        ended = true;
      }
      last_good = t;
    }
  } catch (const std::exception&) {
    throw std::runtime_error(strf("trace truncated after t=%.3f (line %d)", last_good, lineno));
  }
  if (!ended)
    throw std::runtime_error(strf("trace truncated after t=%.3f (no END)", last_good));

  for (auto& [robot, claim] : open) {
    auto& r = robots[robot];
    r.id = robot;
    const double span = m.duration - claim.since;
    r.nav_time += span;
    r.nav_time_failed += span;
  }

  // Dedup goal records exactly like the online board: chain within 10 m.
  std::vector<std::pair<int, uint32_t>> keys;
  std::vector<std::pair<double, double>> pos;
  for (const auto& [k, p] : goal_pos) {
    keys.push_back(k);
    pos.push_back(p);
  }
  std::vector<size_t> parent(keys.size());
  std::iota(parent.begin(), parent.end(), size_t(0));
  auto find = [&](size_t i) {
    while (parent[i] != i) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };
  for (size_t i = 0; i < keys.size(); ++i)
    for (size_t j = i + 1; j < keys.size(); ++j) {
      const double dx = pos[i].first - pos[j].first;
      const double dy = pos[i].second - pos[j].second;
      if (std::sqrt(dx * dx + dy * dy) <= 10.0) {
        const size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }
    }

  std::map<size_t, double> cluster_visit;
  for (size_t i = 0; i < keys.size(); ++i) {
    const size_t root = find(i);
    if (!cluster_visit.count(root)) cluster_visit[root] = -1.0;
    auto it = first_visit.find(keys[i]);
    if (it != first_visit.end()) {
      double& v = cluster_visit[root];
      if (v < 0.0 || it->second < v) v = it->second;
    }
  }
  // A visit may reference a goal announced only through the visit itself
  // (manual goals); those still count as one identified goal each.
  for (const auto& [goal, t] : first_visit) {
    if (!goal_pos.count(goal)) {
      m.visit_times.push_back(t);
      ++m.goals_visited;
      ++m.goals_identified;
    }
  }
  for (const auto& [root, v] : cluster_visit) {
    ++m.goals_identified;
    if (v >= 0.0) {
      ++m.goals_visited;
      m.visit_times.push_back(v);
    } else {
      m.visit_times.push_back(m.duration);
    }
  }

  for (auto& [id, r] : robots) m.robots.push_back(r);
  std::sort(m.robots.begin(), m.robots.end(),
            [](const RobotMetrics& a, const RobotMetrics& b) { return a.id < b.id; });
  return m;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::string metrics_csv_header() {
  return "label,seed,goals_identified,goals_visited,visit_time_median,"
         "claim_to_visit_median,nav_fraction_mean,distance_total,records_moved,contacts";
}

std::string metrics_csv_row(const std::string& label, uint64_t seed, const MissionMetrics& m) {
  double nav_sum = 0.0, dist = 0.0;
  for (const auto& r : m.robots) {
    nav_sum += m.duration > 0.0 ? r.nav_time / m.duration : 0.0;
    dist += r.distance;
  }
  const double nav_mean = m.robots.empty() ? 0.0 : nav_sum / double(m.robots.size());
  return strf("%s,%llu,%d,%d,%.3f,%.3f,%.4f,%.2f,%ld,%d", label.c_str(),
              (unsigned long long)seed, m.goals_identified, m.goals_visited,
              median(m.visit_times), median(m.claim_to_visit), nav_mean, dist,
              m.records_moved, m.contacts);
}

}  // namespace agnav
