#include "recad/geometry/voxel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recad/error.hpp"

namespace recad::geom {

std::size_t VoxelGrid::count() const {
  return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), 1));
}

bool VoxelGrid::same_frame(const VoxelGrid& other) const {
  return origin == other.origin && cell == other.cell && dims == other.dims;
}

Box3 auto_bounds(const Solid& solid) {
  Box3 b = solid.bounds();
  if (b.empty()) return {{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}};
  const Vec3 e = b.extent();
  double largest = std::max({e.x, e.y, e.z});
  if (!(largest > 0.0)) largest = 1.0;
  const double half = largest * (0.5 + 0.05);
  const Vec3 c = b.center();
  return {{c.x - half, c.y - half, c.z - half}, {c.x + half, c.y + half, c.z + half}};
}

VoxelGrid make_cube_grid(const Box3& bounds, int resolution) {
  if (resolution < 1) throw Error(ErrorCategory::kPrecondition, "voxel grid: resolution must be positive");
  const Vec3 e = bounds.extent();
  double side = std::max({e.x, e.y, e.z});
  if (!(side > 0.0)) side = 1.0;
  const Vec3 c = bounds.center();
  VoxelGrid grid;
  grid.cell = side / resolution;
  grid.origin = {c.x - side / 2.0, c.y - side / 2.0, c.z - side / 2.0};
  grid.dims = {resolution, resolution, resolution};
  grid.occupancy.assign(grid.size(), 0);
  return grid;
}

VoxelGrid make_centered_grid(double half_extent, int resolution) {
  if (resolution < 1 || !(half_extent > 0.0) || !std::isfinite(half_extent)) {
    throw Error(ErrorCategory::kPrecondition, "centered grid: bad extent or resolution");
  }
  int exponent = 0;
  const double mantissa = std::frexp(2.0 * half_extent / resolution, &exponent);
  constexpr double kSteps = 1 << 20;
  VoxelGrid grid;
  grid.cell = std::ldexp(std::ceil(mantissa * kSteps) / kSteps, exponent);
  const double o = -0.5 * resolution * grid.cell;
  grid.origin = {o, o, o};
  grid.dims = {resolution, resolution, resolution};
  grid.occupancy.assign(grid.size(), 0);
  return grid;
}

void fill_grid(const Solid& solid, VoxelGrid* grid) {
  grid->occupancy.assign(grid->size(), 0);
  for (int k = 0; k < grid->dims[2]; ++k) {
    for (int j = 0; j < grid->dims[1]; ++j) {
      for (int i = 0; i < grid->dims[0]; ++i) {
        if (solid.contains(grid->center(i, j, k))) grid->occupancy[grid->index(i, j, k)] = 1;
      }
    }
  }
}

VoxelGrid voxelize(const CADModel& model, int resolution, std::optional<Box3> bounds,
                   double chord_tol) {
  if (resolution < 8) throw Error(ErrorCategory::kPrecondition, "voxelize: resolution must be at least 8");
  const Solid solid(model, chord_tol);
  VoxelGrid grid = make_cube_grid(bounds ? *bounds : auto_bounds(solid), resolution);
  fill_grid(solid, &grid);
  return grid;
}

Vec3 AxisRotation::apply(Vec3 v) const {
  const double in[3] = {v.x, v.y, v.z};
  double out[3];
  for (int r = 0; r < 3; ++r) out[r] = m[r][0] * in[0] + m[r][1] * in[1] + m[r][2] * in[2];
  return {out[0], out[1], out[2]};
}

const std::vector<AxisRotation>& axis_rotations() {
  static const std::vector<AxisRotation> rotations = [] {
    std::vector<AxisRotation> out;
    std::array<int, 3> perm{0, 1, 2};
    do {
      for (int signs = 0; signs < 8; ++signs) {
        AxisRotation r;
        for (int row = 0; row < 3; ++row) r.m[row][perm[row]] = (signs >> row) & 1 ? -1 : 1;
        const auto& a = r.m;
        const int det = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                        a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                        a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        if (det == 1) out.push_back(r);
      }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
  }();
  return rotations;
}

VoxelGrid rotate_grid(const VoxelGrid& grid, const AxisRotation& r) {
  const int n = grid.dims[0];
  if (grid.dims[1] != n || grid.dims[2] != n || grid.origin.x != -0.5 * n * grid.cell ||
      grid.origin.y != grid.origin.x || grid.origin.z != grid.origin.x) {
    throw Error(ErrorCategory::kPrecondition, "rotate_grid: grid must be cubic and origin-centred");
  }
  VoxelGrid out = grid;
  std::fill(out.occupancy.begin(), out.occupancy.end(), 0);
  // Doubled centre coordinates 2i + 1 - n are integers; R maps them exactly.
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        if (!grid.occupancy[grid.index(i, j, k)]) continue;
        const int q[3] = {2 * i + 1 - n, 2 * j + 1 - n, 2 * k + 1 - n};
        int idx[3];
        for (int row = 0; row < 3; ++row) {
          const int v = r.m[row][0] * q[0] + r.m[row][1] * q[1] + r.m[row][2] * q[2];
          idx[row] = (v + n - 1) / 2;
        }
        out.occupancy[out.index(idx[0], idx[1], idx[2])] = 1;
      }
    }
  }
  return out;
}

}  // namespace recad::geom
