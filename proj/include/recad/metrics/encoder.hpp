#pragma once

// Pluggable shape encoders for geometric similarity.

#include <vector>

#include "recad/cad_model.hpp"
#include "recad/geometry/voxel.hpp"

namespace recad::metrics {

class EncoderInterface {
 public:
  virtual ~EncoderInterface() = default;

  virtual std::vector<double> embed(const geom::VoxelGrid& grid) const = 0;

  /// Cosine of the embeddings clamped to [0, 1]; 1 for identical grids.
  virtual double similarity(const geom::VoxelGrid& a, const geom::VoxelGrid& b) const;
};

/// Embeds the flattened occupancy grid minus its mean. similarity() evaluates
/// the same cosine from integer cell counts, so it is exactly symmetric.
class OccupancyEncoder : public EncoderInterface {
 public:
  std::vector<double> embed(const geom::VoxelGrid& grid) const override;
  double similarity(const geom::VoxelGrid& a, const geom::VoxelGrid& b) const override;
};

/// Cosine of two vectors clamped to [0, 1]. Zero vectors are similar only to
/// equal vectors.
double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b);

/// Similarity of two grids on one origin-centred cube grid after aligning
/// them with the IoU-maximizing rotations: the largest encoder similarity
/// over those rotations, applied to either argument. Symmetric in a and b.
double aligned_similarity(const geom::VoxelGrid& a, const geom::VoxelGrid& b, const EncoderInterface& encoder);

/// Both solids voxelized on a common grid and compared with
/// aligned_similarity, after normalizing them (centroid at origin, unit
/// radius of gyration) when `normalize` is set. Throws Error{kEmptySolid}
/// when either solid is empty.
double geometric_similarity(const CADModel& a, const CADModel& b, const EncoderInterface& encoder,
                            int resolution = 64, bool normalize = true);

}  // namespace recad::metrics
