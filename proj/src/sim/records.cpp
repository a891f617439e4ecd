#include "sim/records.hpp"

#include <stdexcept>

namespace agnav {
namespace {

struct Writer {
  std::vector<uint8_t> out;

  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const size_t at = out.size();
    out.resize(at + sizeof(T));
    std::memcpy(out.data() + at, &v, sizeof(T));
  }
};

struct Reader {
  const uint8_t* data;
  size_t size;
  size_t at = 0;

  template <typename T>
  T get() {
    static_assert(std::is_trivially_copyable_v<T>);
    if (at + sizeof(T) > size) throw std::runtime_error("record payload truncated");
    T v;
    std::memcpy(&v, data + at, sizeof(T));
    at += sizeof(T);
    return v;
  }
};

}  // namespace

std::vector<uint8_t> encode_pose(const PosePayload& p) {
  Writer w;
  w.put(p.pose.x);
  w.put(p.pose.y);
  w.put(p.pose.yaw);
  w.put(p.time);
  w.put<uint8_t>(p.has_goal ? 1 : 0);
  w.put(p.goal.x);
  w.put(p.goal.y);
  return std::move(w.out);
}

PosePayload decode_pose(const std::vector<uint8_t>& bytes) {
  Reader r{bytes.data(), bytes.size()};
  PosePayload p;
  p.pose.x = r.get<double>();
  p.pose.y = r.get<double>();
  p.pose.yaw = r.get<double>();
  p.time = r.get<double>();
  p.has_goal = r.get<uint8_t>() != 0;
  p.goal.x = r.get<double>();
  p.goal.y = r.get<double>();
  return p;
}

std::vector<uint8_t> encode_goal(const GoalPayload& p) {
  Writer w;
  w.put(p.position.x);
  w.put(p.position.y);
  w.put(p.time);
  return std::move(w.out);
}

GoalPayload decode_goal(const std::vector<uint8_t>& bytes) {
  Reader r{bytes.data(), bytes.size()};
  GoalPayload p;
  p.position.x = r.get<double>();
  p.position.y = r.get<double>();
  p.time = r.get<double>();
  return p;
}

std::vector<uint8_t> encode_claim(const ClaimPayload& p) {
  Writer w;
  w.put<uint8_t>(p.active ? 1 : 0);
  w.put<int32_t>(p.goal.robot);
  w.put<uint32_t>(p.goal.seq);
  w.put(p.time);
  return std::move(w.out);
}

ClaimPayload decode_claim(const std::vector<uint8_t>& bytes) {
  Reader r{bytes.data(), bytes.size()};
  ClaimPayload p;
  p.active = r.get<uint8_t>() != 0;
  p.goal.robot = r.get<int32_t>();
  p.goal.seq = r.get<uint32_t>();
  p.time = r.get<double>();
  return p;
}

std::vector<uint8_t> encode_mark(const MarkPayload& p) {
  Writer w;
  w.put<int32_t>(p.goal.robot);
  w.put<uint32_t>(p.goal.seq);
  w.put(p.time);
  return std::move(w.out);
}

MarkPayload decode_mark(const std::vector<uint8_t>& bytes) {
  Reader r{bytes.data(), bytes.size()};
  MarkPayload p;
  p.goal.robot = r.get<int32_t>();
  p.goal.seq = r.get<uint32_t>();
  p.time = r.get<double>();
  return p;
}

std::vector<uint8_t> encode_map_cells(const MapCellsPayload& p) {
  Writer w;
  w.put<uint32_t>(uint32_t(p.cells.size()));
  for (const auto& c : p.cells) {
    w.put(c.index);
    w.put(c.cls);
    w.put(c.r);
    w.put(c.g);
    w.put(c.b);
    w.put(c.elevation);
  }
  return std::move(w.out);
}

MapCellsPayload decode_map_cells(const std::vector<uint8_t>& bytes) {
  Reader r{bytes.data(), bytes.size()};
  MapCellsPayload p;
  const uint32_t n = r.get<uint32_t>();
  p.cells.reserve(n);
  for (uint32_t i = 0; i < n; ++i) {
    MapCellsPayload::Cell c;
    c.index = r.get<uint32_t>();
    c.cls = r.get<uint8_t>();
    c.r = r.get<uint8_t>();
    c.g = r.get<uint8_t>();
    c.b = r.get<uint8_t>();
    c.elevation = r.get<float>();
    p.cells.push_back(c);
  }
  return p;
}

}  // namespace agnav
