#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "core/geometry.hpp"

namespace agnav {

enum class Topic : uint8_t {
  kPose = 0,
  kGoal,
  kClaim,
  kVisit,
  kUnreach,
  kScan,
  kMapCells,
};

/// Goal-lifecycle topics ride the high tier and sync at the longer range;
/// bulk terrain data only moves at close range.
inline bool is_high_tier(Topic t) { return t < Topic::kScan; }

struct RecordKey {
  Topic topic = Topic::kPose;
  int origin = -1;
  uint32_t seq = 0;

  bool operator<(const RecordKey& o) const {
    if (topic != o.topic) return topic < o.topic;
    if (origin != o.origin) return origin < o.origin;
    return seq < o.seq;
  }
  bool operator==(const RecordKey& o) const {
    return topic == o.topic && origin == o.origin && seq == o.seq;
  }
};

struct DbRecord {
  RecordKey key;
  uint32_t version = 1;
  std::vector<uint8_t> payload;
};

/// One node's replica. Only the origin writes new versions of its own keys;
/// everything else arrives through sync_tick.
class ReplicaStore {
 public:
  /// Stores the record unless the held version is already >= the offered one.
  bool put(const RecordKey& key, uint32_t version, std::vector<uint8_t> payload);

  const DbRecord* find(const RecordKey& key) const;
  const std::map<RecordKey, DbRecord>& all() const { return records_; }
  size_t size() const { return records_.size(); }

 private:
  std::map<RecordKey, DbRecord> records_;
};

struct SyncPolicy {
  double pos_range = 50.0;   // high tier syncs inside this
  double full_range = 30.0;  // everything syncs inside this
};

struct SyncNode {
  int id = -1;
  Vec2 position;
  ReplicaStore* store = nullptr;
};

struct TransferStat {
  int a = -1, b = -1;
  bool full = false;  // pair was inside full_range
  int moved = 0;      // records copied, both directions
};

/// One opportunistic exchange round: every pair in range runs bidirectional
/// anti-entropy by version over the tier its distance allows. Returns one
/// stat per pair that moved at least one record.
std::vector<TransferStat> sync_tick(const std::vector<SyncNode>& nodes,
                                    const SyncPolicy& policy);

enum class ScanShareMode : uint8_t { kOff, kDownsampled, kFull };

/// Publish-side gate for reachability scans: downsampled mode shares a scan
/// only when it is at least min_dist from every previously shared one.
class ScanShareFilter {
 public:
  ScanShareFilter(ScanShareMode mode, double min_dist = 2.0)
      : mode_(mode), min_dist_(min_dist) {}

  bool should_share(const Vec2& scan_pos);

 private:
  ScanShareMode mode_;
  double min_dist_;
  std::vector<Vec2> shared_;
};

}  // namespace agnav
