#pragma once

// File formats (see docs/formats.md):
//  - OBJ: "v x y z" lines in first-use order after exact-coordinate
//    deduplication, then "f a b c" with 1-based indices.
//  - RCVX: little-endian voxel file, header {magic "RCVX", u32 version = 1,
//    3 x u32 dims, 3 x f64 origin, f64 cell, u64 run count} followed by u32
//    run lengths alternating empty / occupied, starting with empty.

#include <string>
#include <vector>

#include "recad/cad_model.hpp"
#include "recad/geometry/mesh.hpp"
#include "recad/geometry/voxel.hpp"

namespace recad::geom {

std::string write_obj(const TriMesh& mesh);

/// Prism triangles of every SE pair that lie on the boundary of the boolean
/// result, probed just behind and in front of each triangle. Triangles whose
/// probes disagree are split at edge midpoints down to a fixed depth, so
/// boolean seams are resolved to 1/128 of the prism triangle size. Faces
/// with the solid in front are flipped. Empty for an empty solid.
TriMesh boundary_mesh(const CADModel& model);

std::vector<unsigned char> write_voxels(const VoxelGrid& grid);
/// Throws Error{kParse} on malformed data.
VoxelGrid read_voxels(const std::vector<unsigned char>& bytes);

}  // namespace recad::geom
