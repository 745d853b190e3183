#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "recad/cad_model.hpp"

namespace recad::geom {

enum class TriangleKind : std::uint8_t { kTopCap, kBottomCap, kWall };

struct TriangleTag {
  std::uint32_t se = 0;
  TriangleKind kind = TriangleKind::kWall;
};

struct TriMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<std::uint32_t, 3>> triangles;  // outward winding
  std::vector<TriangleTag> tags;                         // one per triangle

  void append(const TriMesh& other);
};

/// Watertight prism of one SE pair: caps at +dist_pos and -dist_neg along the
/// sketch normal, quad-split side walls, outward-consistent winding.
TriMesh extrude_mesh(const Sketch& sketch, const Extrude& extrude, double chord_tol,
                     std::uint32_t se_index = 0);

/// Union of every SE pair's prism mesh (no boolean evaluation).
TriMesh model_mesh(const CADModel& model, double chord_tol);

double mesh_volume(const TriMesh& mesh);
double triangle_area(const TriMesh& mesh, std::size_t t);
Vec3 triangle_normal(const TriMesh& mesh, std::size_t t);  // unit length

}  // namespace recad::geom
