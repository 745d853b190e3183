#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "recad/cad_model.hpp"
#include "recad/geometry/solid.hpp"

namespace recad::geom {

/// Axis-aligned occupancy grid. Cell (i, j, k) covers
/// [origin + (i, j, k) * cell, origin + (i + 1, j + 1, k + 1) * cell).
struct VoxelGrid {
  Vec3 origin;
  double cell = 1.0;
  std::array<int, 3> dims{0, 0, 0};
  std::vector<std::uint8_t> occupancy;  // 0 or 1, x fastest

  std::size_t size() const {
    return static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  }
  std::size_t index(int i, int j, int k) const {
    return static_cast<std::size_t>(i) +
           static_cast<std::size_t>(dims[0]) * (static_cast<std::size_t>(j) +
                                                static_cast<std::size_t>(dims[1]) * k);
  }
  Vec3 center(int i, int j, int k) const {
    return {origin.x + (i + 0.5) * cell, origin.y + (j + 0.5) * cell,
            origin.z + (k + 0.5) * cell};
  }
  bool at(int i, int j, int k) const { return occupancy[index(i, j, k)] != 0; }
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  bool same_frame(const VoxelGrid& other) const;
};

/// Bounding box of the model padded 5% of its largest extent per side and
/// grown to a cube around its centre.
Box3 auto_bounds(const Solid& solid);

/// A cube grid with `resolution` cells per axis over `bounds` (non-cube
/// bounds are grown to a cube about their centre).
VoxelGrid make_cube_grid(const Box3& bounds, int resolution);

/// A cube grid centred on the world origin, half-width `half_extent`, whose
/// cell size is rounded up to a short dyadic value so that cell centres are
/// exactly antisymmetric; the 24 axis rotations then permute cells exactly.
VoxelGrid make_centered_grid(double half_extent, int resolution);

/// occupancy(cell) = membership(model, cell centre). Throws
/// Error{kPrecondition} for resolution < 8. An empty result is flagged via
/// VoxelGrid::empty().
VoxelGrid voxelize(const CADModel& model, int resolution,
                   std::optional<Box3> bounds = std::nullopt, double chord_tol = 0.0);

/// Fills a pre-framed grid from a compiled solid.
void fill_grid(const Solid& solid, VoxelGrid* grid);

// ---------------------------------------------------------------------------
// Proper axis-aligned rotations

/// Signed permutation matrix with determinant +1.
struct AxisRotation {
  std::array<std::array<int, 3>, 3> m{};

  Vec3 apply(Vec3 v) const;
  friend bool operator==(const AxisRotation&, const AxisRotation&) = default;
};

/// The 24 proper rotations in a fixed order; element 0 is the identity.
const std::vector<AxisRotation>& axis_rotations();

/// Occupancy of R applied to the solid in a cube grid centred on the origin.
/// Throws Error{kPrecondition} when the grid is not origin-centred and cubic.
VoxelGrid rotate_grid(const VoxelGrid& grid, const AxisRotation& r);

}  // namespace recad::geom
