#include "recad/geometry/export.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <map>
#include <tuple>

#include "recad/error.hpp"
#include "recad/geometry/solid.hpp"

namespace recad::geom {

namespace {

void append_number(std::string* out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out->append(buf, res.ptr);
}

template <typename T>
void put(std::vector<unsigned char>* out, T value) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out->insert(out->end(), bytes, bytes + sizeof(T));
}

class Reader {
 public:
  explicit Reader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

  template <typename T>
  T get() {
    if (pos_ + sizeof(T) > bytes_.size()) throw Error(ErrorCategory::kParse, "voxel file truncated");
    unsigned char raw[sizeof(T)];
    std::memcpy(raw, bytes_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(raw, raw + sizeof(T));
    pos_ += sizeof(T);
    T value;
    std::memcpy(&value, raw, sizeof(T));
    return value;
  }

  bool done() const { return pos_ == bytes_.size(); }

 private:
  const std::vector<unsigned char>& bytes_;
  std::size_t pos_ = 0;
};

constexpr char kMagic[4] = {'R', 'C', 'V', 'X'};

}  // namespace

namespace {

constexpr int kSeamDepth = 7;

struct BoundaryProbe {
  const Solid& solid;
  double delta;

  // 1 when p is a boundary point with the solid behind n, -1 when the solid
  // is in front of n, 0 otherwise.
  int side(Vec3 p, Vec3 n) const {
    const bool behind = solid.contains(p - n * delta);
    const bool ahead = solid.contains(p + n * delta);
    return behind == ahead ? 0 : (behind ? 1 : -1);
  }
};

void emit_triangle(TriMesh* out, const std::array<Vec3, 3>& v, bool flip, const TriangleTag& tag) {
  const auto base = static_cast<std::uint32_t>(out->vertices.size());
  out->vertices.insert(out->vertices.end(), v.begin(), v.end());
  out->triangles.push_back(flip ? std::array<std::uint32_t, 3>{base, base + 2, base + 1}
                                : std::array<std::uint32_t, 3>{base, base + 1, base + 2});
  out->tags.push_back(tag);
}

void classify(const BoundaryProbe& probe, const std::array<Vec3, 3>& v, Vec3 n, int depth, const TriangleTag& tag,
              TriMesh* out) {
  const Vec3 c = (v[0] + v[1] + v[2]) * (1.0 / 3.0);
  const int mid = probe.side(c, n);
  bool uniform = true;
  for (const Vec3& corner : v) uniform = uniform && probe.side(corner + (c - corner) * 1e-3, n) == mid;
  if (uniform || depth == kSeamDepth) {
    if (mid != 0) emit_triangle(out, v, mid < 0, tag);
    return;
  }
  const Vec3 m01 = (v[0] + v[1]) * 0.5, m12 = (v[1] + v[2]) * 0.5, m20 = (v[2] + v[0]) * 0.5;
  for (const auto& sub : {std::array<Vec3, 3>{v[0], m01, m20}, std::array<Vec3, 3>{m01, v[1], m12},
                          std::array<Vec3, 3>{m20, m12, v[2]}, std::array<Vec3, 3>{m01, m12, m20}}) {
    classify(probe, sub, n, depth + 1, tag, out);
  }
}

}  // namespace

TriMesh boundary_mesh(const CADModel& model) {
  const Solid solid(model);
  const BoundaryProbe probe{solid, 1e-7 * std::max(model_diagonal(model), 1e-9)};
  TriMesh out;
  for (std::size_t se = 0; se < model.pairs.size(); ++se) {
    const SEPair& pair = model.pairs[se];
    const TriMesh prism = extrude_mesh(pair.sketch, pair.extrude, solid.chord_tol(), static_cast<std::uint32_t>(se));
    for (std::size_t t = 0; t < prism.triangles.size(); ++t) {
      const auto& tri = prism.triangles[t];
      classify(probe, {prism.vertices[tri[0]], prism.vertices[tri[1]], prism.vertices[tri[2]]},
               triangle_normal(prism, t), 0, prism.tags[t], &out);
    }
  }
  return out;
}

std::string write_obj(const TriMesh& mesh) {
  std::map<std::tuple<double, double, double>, std::size_t> ids;
  std::vector<std::size_t> remap(mesh.vertices.size(), 0);
  std::string vertices;
  std::string faces;
  for (const auto& tri : mesh.triangles) {
    faces += 'f';
    for (std::uint32_t v : tri) {
      if (remap[v] == 0) {
        const Vec3 p = mesh.vertices[v];
        const auto [it, inserted] = ids.try_emplace({p.x, p.y, p.z}, ids.size() + 1);
        if (inserted) {
          vertices += "v ";
          append_number(&vertices, p.x);
          vertices += ' ';
          append_number(&vertices, p.y);
          vertices += ' ';
          append_number(&vertices, p.z);
          vertices += '\n';
        }
        remap[v] = it->second;
      }
      faces += ' ';
      faces += std::to_string(remap[v]);
    }
    faces += '\n';
  }
  return vertices + faces;
}

std::vector<unsigned char> write_voxels(const VoxelGrid& grid) {
  std::vector<std::uint32_t> runs;
  std::uint8_t current = 0;
  std::uint32_t length = 0;
  for (std::uint8_t v : grid.occupancy) {
    const std::uint8_t bit = v ? 1 : 0;
    if (bit != current) {
      runs.push_back(length);
      current = bit;
      length = 0;
    }
    ++length;
  }
  runs.push_back(length);
  std::vector<unsigned char> out(kMagic, kMagic + 4);
  put<std::uint32_t>(&out, 1);
  for (int d : grid.dims) put<std::uint32_t>(&out, static_cast<std::uint32_t>(d));
  put(&out, grid.origin.x);
  put(&out, grid.origin.y);
  put(&out, grid.origin.z);
  put(&out, grid.cell);
  put<std::uint64_t>(&out, runs.size());
  for (std::uint32_t r : runs) put(&out, r);
  return out;
}

VoxelGrid read_voxels(const std::vector<unsigned char>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw Error(ErrorCategory::kParse, "not a voxel file: bad magic");
  }
  const std::vector<unsigned char> body(bytes.begin() + 4, bytes.end());
  Reader r(body);
  if (r.get<std::uint32_t>() != 1) throw Error(ErrorCategory::kParse, "unsupported voxel file version");
  VoxelGrid grid;
  for (int& d : grid.dims) {
    const std::uint32_t v = r.get<std::uint32_t>();
    if (v == 0 || v > 4096) throw Error(ErrorCategory::kParse, "voxel file: bad dimensions");
    d = static_cast<int>(v);
  }
  grid.origin.x = r.get<double>();
  grid.origin.y = r.get<double>();
  grid.origin.z = r.get<double>();
  grid.cell = r.get<double>();
  if (!(grid.cell > 0.0)) throw Error(ErrorCategory::kParse, "voxel file: bad cell size");
  const std::uint64_t count = r.get<std::uint64_t>();
  grid.occupancy.reserve(grid.size());
  std::uint8_t value = 0;
  for (std::uint64_t i = 0; i < count; ++i) {
    const std::uint32_t run = r.get<std::uint32_t>();
    if (grid.occupancy.size() + run > grid.size()) throw Error(ErrorCategory::kParse, "voxel file: runs exceed grid size");
    grid.occupancy.insert(grid.occupancy.end(), run, value);
    value ^= 1;
  }
  if (grid.occupancy.size() != grid.size() || !r.done()) {
    throw Error(ErrorCategory::kParse, "voxel file: run lengths do not match the grid");
  }
  return grid;
}

}  // namespace recad::geom
