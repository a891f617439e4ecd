#include "core/world.hpp"

#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

static_assert(std::endian::native == std::endian::little,
              "raster layers are stored little-endian");

namespace agnav {
namespace {

namespace fs = std::filesystem;

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

template <typename T>
void write_raw(const fs::path& p, const Grid<T>& g) {
  std::ofstream f(p, std::ios::binary);
  if (!f) fail("cannot write raster layer " + p.string());
  f.write(reinterpret_cast<const char*>(g.data()),
          static_cast<std::streamsize>(g.size() * sizeof(T)));
  if (!f) fail("short write on raster layer " + p.string());
}

template <typename T>
Grid<T> read_raw(const fs::path& p, int w, int h, const char* layer) {
  std::ifstream f(p, std::ios::binary | std::ios::ate);
  if (!f) fail(std::string("missing raster layer '") + layer + "': " + p.string());
  const auto bytes = static_cast<size_t>(f.tellg());
  const size_t want = static_cast<size_t>(w) * h * sizeof(T);
  if (bytes != want) {
    std::ostringstream os;
    os << "raster layer '" << layer << "' has " << bytes << " bytes, expected "
       << want << " for " << w << "x" << h;
    fail(os.str());
  }
  f.seekg(0);
  Grid<T> g(w, h);
  f.read(reinterpret_cast<char*>(g.data()), static_cast<std::streamsize>(want));
  if (!f) fail(std::string("short read on raster layer '") + layer + "'");
  return g;
}

std::map<std::string, std::string> parse_manifest(const fs::path& p) {
  std::ifstream f(p);
  if (!f) fail("cannot open world manifest " + p.string());
  std::string line;
  if (!std::getline(f, line) || line != "agnav-world v1")
    fail("world manifest " + p.string() + " lacks 'agnav-world v1' header");
  std::map<std::string, std::string> kv;
  int line_no = 1;
  while (std::getline(f, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("world manifest line " + std::to_string(line_no) + " is not 'key = value'");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

const std::string& need(const std::map<std::string, std::string>& kv,
                        const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) fail("world manifest missing key '" + key + "'");
  return it->second;
}

std::vector<double> parse_numbers(const std::string& s) {
  std::vector<double> out;
  std::istringstream is(s);
  double v;
  while (is >> v) out.push_back(v);
  return out;
}

}  // namespace

SemanticOrthomap SemanticOrthomap::unknown_like(const SemanticOrthomap& ref) {
  SemanticOrthomap m;
  m.resolution = ref.resolution;
  m.origin = ref.origin;
  m.palette = ref.palette;
  m.classes = Grid<uint8_t>(ref.width(), ref.height(), kUnknownClass);
  m.color = Grid<std::array<uint8_t, 3>>(ref.width(), ref.height());
  m.elevation = Grid<float>(ref.width(), ref.height(), 0.0f);
  m.known = Grid<uint8_t>(ref.width(), ref.height(), 0);
  return m;
}

void WorldModel::validate() const {
  const int w = truth.classes.width(), h = truth.classes.height();
  if (w <= 0 || h <= 0) fail("world has empty class layer");
  auto check_dims = [&](int lw, int lh, const char* layer) {
    if (lw != w || lh != h) {
      std::ostringstream os;
      os << "layer '" << layer << "' is " << lw << "x" << lh
         << " but layer 'class' is " << w << "x" << h;
      fail(os.str());
    }
  };
  check_dims(truth.color.width(), truth.color.height(), "color");
  check_dims(truth.elevation.width(), truth.elevation.height(), "elevation");
  check_dims(truth.known.width(), truth.known.height(), "known");
  check_dims(surface.width(), surface.height(), "surface");
  if (truth.resolution <= 0.0) fail("world resolution must be positive");
  if (truth.palette.empty()) fail("world palette is empty");
  const int nc = truth.num_classes();
  for (size_t i = 0; i < truth.classes.size(); ++i) {
    const uint8_t c = truth.classes[i];
    if (c != kUnknownClass && c >= nc) {
      std::ostringstream os;
      os << "layer 'class' holds id " << int(c) << " at index " << i
         << " but the palette has " << nc << " classes";
      fail(os.str());
    }
  }
  for (const auto& p : starts) {
    int cx, cy;
    if (!truth.cell_of(p.position(), &cx, &cy))
      fail("robot start pose lies outside the map");
  }
}

WorldModel load_world(const std::string& dir) {
  const fs::path root(dir);
  const auto kv = parse_manifest(root / "world.txt");
  const int w = std::stoi(need(kv, "width"));
  const int h = std::stoi(need(kv, "height"));
  if (w <= 0 || h <= 0) fail("world manifest declares non-positive dimensions");

  WorldModel world;
  world.truth.resolution = std::stod(need(kv, "resolution"));
  world.truth.origin = {std::stod(need(kv, "origin_x")), std::stod(need(kv, "origin_y"))};

  const int nc = std::stoi(need(kv, "num_classes"));
  for (int i = 0; i < nc; ++i) {
    std::istringstream is(need(kv, "class." + std::to_string(i)));
    ClassInfo ci;
    int r, g, b;
    if (!(is >> ci.name >> r >> g >> b))
      fail("world manifest class." + std::to_string(i) + " is not 'name r g b'");
    ci.color = {uint8_t(r), uint8_t(g), uint8_t(b)};
    world.truth.palette.push_back(ci);
  }

  world.truth.classes = read_raw<uint8_t>(root / "class.u8", w, h, "class");
  world.truth.color = read_raw<std::array<uint8_t, 3>>(root / "color.u8x3", w, h, "color");
  world.truth.elevation = read_raw<float>(root / "elevation.f32", w, h, "elevation");
  world.truth.known = read_raw<uint8_t>(root / "known.u8", w, h, "known");
  world.surface = read_raw<float>(root / "surface.f32", w, h, "surface");

  if (auto it = kv.find("clusters"); it != kv.end()) {
    std::istringstream is(it->second);
    std::string part;
    while (std::getline(is, part, ';')) {
      const auto nums = parse_numbers(part);
      if (nums.empty()) continue;
      if (nums.size() != 2) fail("world manifest 'clusters' entries must be 'x y'");
      world.goal_clusters.push_back({nums[0], nums[1]});
    }
  }
  if (auto it = kv.find("starts"); it != kv.end()) {
    std::istringstream is(it->second);
    std::string part;
    while (std::getline(is, part, ';')) {
      const auto nums = parse_numbers(part);
      if (nums.empty()) continue;
      if (nums.size() != 3) fail("world manifest 'starts' entries must be 'x y yaw'");
      world.starts.push_back({nums[0], nums[1], nums[2]});
    }
  }

  world.validate();
  return world;
}

void save_world(const WorldModel& world, const std::string& dir) {
  world.validate();
  const fs::path root(dir);
  fs::create_directories(root);

  std::ofstream f(root / "world.txt");
  if (!f) fail("cannot write world manifest in " + dir);
  f.precision(17);  // reloads must reproduce poses exactly
  f << "agnav-world v1\n";
  f << "width = " << world.width() << "\n";
  f << "height = " << world.height() << "\n";
  f << "resolution = " << world.truth.resolution << "\n";
  f << "origin_x = " << world.truth.origin.x << "\n";
  f << "origin_y = " << world.truth.origin.y << "\n";
  f << "num_classes = " << world.truth.num_classes() << "\n";
  for (int i = 0; i < world.truth.num_classes(); ++i) {
    const auto& ci = world.truth.palette[i];
    f << "class." << i << " = " << ci.name << " " << int(ci.color[0]) << " "
      << int(ci.color[1]) << " " << int(ci.color[2]) << "\n";
  }
  f << "clusters =";
  for (size_t i = 0; i < world.goal_clusters.size(); ++i)
    f << (i ? " ;" : "") << " " << world.goal_clusters[i].x << " "
      << world.goal_clusters[i].y;
  f << "\n";
  f << "starts =";
  for (size_t i = 0; i < world.starts.size(); ++i)
    f << (i ? " ;" : "") << " " << world.starts[i].x << " " << world.starts[i].y
      << " " << world.starts[i].yaw;
  f << "\n";
  f.close();

  write_raw(root / "class.u8", world.truth.classes);
  write_raw(root / "color.u8x3", world.truth.color);
  write_raw(root / "elevation.f32", world.truth.elevation);
  write_raw(root / "known.u8", world.truth.known);
  write_raw(root / "surface.f32", world.surface);
}

}  // namespace agnav
