#include "core/comms.hpp"

#include <utility>

namespace agnav {

bool ReplicaStore::put(const RecordKey& key, uint32_t version,
                       std::vector<uint8_t> payload) {
  auto it = records_.find(key);
  if (it != records_.end() && it->second.version >= version) return false;
  records_[key] = {key, version, std::move(payload)};
  return true;
}

const DbRecord* ReplicaStore::find(const RecordKey& key) const {
  auto it = records_.find(key);
  return it == records_.end() ? nullptr : &it->second;
}

namespace {

int pull_missing(ReplicaStore& dst, const ReplicaStore& src, bool full) {
  int moved = 0;
  for (const auto& [key, rec] : src.all()) {
    if (!full && !is_high_tier(key.topic)) continue;
    if (dst.put(key, rec.version, rec.payload)) ++moved;
  }
  return moved;
}

}  // namespace

std::vector<TransferStat> sync_tick(const std::vector<SyncNode>& nodes,
                                    const SyncPolicy& policy) {
  std::vector<TransferStat> stats;
  for (size_t i = 0; i < nodes.size(); ++i) {
    for (size_t j = i + 1; j < nodes.size(); ++j) {
      const double d = distance(nodes[i].position, nodes[j].position);
      if (d > policy.pos_range) continue;
      stats.push_back({nodes[i].id, nodes[j].id, d <= policy.full_range, 0});
    }
  }
  // Repeat the pair exchanges until quiescent so records relay through
  // intermediates within the tick; in-range stores then match exactly.
  for (;;) {
    int round_moved = 0;
    size_t s = 0;
    for (size_t i = 0; i < nodes.size(); ++i) {
      for (size_t j = i + 1; j < nodes.size(); ++j) {
        const double d = distance(nodes[i].position, nodes[j].position);
        if (d > policy.pos_range) continue;
        const bool full = d <= policy.full_range;
        int moved = pull_missing(*nodes[j].store, *nodes[i].store, full);
        moved += pull_missing(*nodes[i].store, *nodes[j].store, full);
        stats[s++].moved += moved;
        round_moved += moved;
      }
    }
    if (round_moved == 0) break;
  }
  std::erase_if(stats, [](const TransferStat& s) { return s.moved == 0; });
  return stats;
}

bool ScanShareFilter::should_share(const Vec2& scan_pos) {
  if (mode_ == ScanShareMode::kOff) return false;
  if (mode_ == ScanShareMode::kFull) return true;
  for (const Vec2& p : shared_)
    if (distance(scan_pos, p) < min_dist_) return false;
  shared_.push_back(scan_pos);
  return true;
}

}  // namespace agnav
