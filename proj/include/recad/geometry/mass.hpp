#pragma once

// Mass properties of voxelized solids and the similarity normalization that
// moves the centroid to the origin and scales the radius of gyration
// sqrt(tr(I) / (2 Vol)) to one.

#include "recad/cad_model.hpp"
#include "recad/geometry/voxel.hpp"

namespace recad::geom {

struct MassProperties {
  double volume = 0.0;
  Vec3 centroid;
  double inertia_trace = 0.0;  // unit density, about the centroid
  bool centroid_defined = false;

  double gyration_radius() const;
};

/// Riemann sums over occupied cell centres. Throws Error{kEmptySolid}.
MassProperties mass_properties(const VoxelGrid& grid);

/// x -> (x + translation) * scale
struct SimilarityTransform {
  Vec3 translation;
  double scale = 1.0;

  Vec3 apply(Vec3 p) const { return (p + translation) * scale; }
};

/// translation = -centroid, scale = 1 / gyration radius.
/// Throws Error{kEmptySolid} for zero volume.
SimilarityTransform normalize_transform(const MassProperties& props);

/// Applies the transform to the model parameters exactly (sketch origins
/// move and scale, in-plane coordinates and distances scale).
CADModel transform_model(const CADModel& model, const SimilarityTransform& t);

/// Rotates every sketch plane about the world origin.
CADModel rotate_model(const CADModel& model, const AxisRotation& r);

/// Voxelizes with auto bounds, measures, and returns the normalized model.
CADModel normalize_model(const CADModel& model, int resolution,
                         SimilarityTransform* applied = nullptr);

}  // namespace recad::geom
