#pragma once

// Geometric evaluation metrics: chamfer distance, voxel IoU under the best
// axis-aligned rotation, and primitive F1.

#include <array>
#include <cstddef>
#include <vector>

#include "recad/cad_model.hpp"
#include "recad/geometry/voxel.hpp"

namespace recad::metrics {

/// Symmetric mean of squared nearest-neighbour distances:
/// (mean_a d^2(., b) + mean_b d^2(., a)) / 2. Throws Error{kPrecondition}
/// for an empty set.
double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b);

/// Squared distance from p to its nearest point of `points` (exact kd-tree
/// search). Throws Error{kPrecondition} when `points` is empty.
class NearestNeighbors {
 public:
  explicit NearestNeighbors(std::vector<Vec3> points);
  double squared_distance(Vec3 p) const;

 private:
  struct Node {
    int point = -1;
    int axis = 0;
    int left = -1;
    int right = -1;
  };
  int build(std::vector<int>& idx, std::size_t lo, std::size_t hi, int depth);
  void search(int node, Vec3 p, double* best) const;

  std::vector<Vec3> points_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// |a and b| / |a or b|, 0 when both are empty. Throws Error{kPrecondition}
/// when the grids do not share a frame.
double iou(const geom::VoxelGrid& a, const geom::VoxelGrid& b);

struct IouBest {
  double score = 0.0;
  std::size_t rotation = 0;  // index into geom::axis_rotations()
};

/// max over the 24 proper axis rotations R of iou(R a, b). The first
/// maximizer in rotation order is reported. Both grids must be the same
/// origin-centred cube grid.
IouBest iou_best_grids(const geom::VoxelGrid& a, const geom::VoxelGrid& b);

/// Indices of every rotation attaining the maximum of iou_best_grids.
std::vector<std::size_t> best_rotations(const geom::VoxelGrid& a, const geom::VoxelGrid& b);

/// Both models voxelized on one origin-centred cube grid whose half extent is
/// 1.05 times the largest absolute bounding-box coordinate of either solid.
struct CommonGrids {
  geom::VoxelGrid a;
  geom::VoxelGrid b;
};
CommonGrids common_grids(const CADModel& a, const CADModel& b, int resolution);

/// iou_best_grids on common_grids, after normalizing both solids (centroid at
/// the origin, unit radius of gyration) when `normalize` is set. Throws
/// Error{kEmptySolid} when either solid is empty.
IouBest iou_best(const CADModel& a, const CADModel& b, int resolution = 64, bool normalize = false);

/// Macro-averaged F1 over curve types (line, arc, circle) present in either
/// model, from multiset counts: F1_t = 2 min(p_t, g_t) / (p_t + g_t).
double primitive_f1(const CADModel& pred, const CADModel& gt);

/// Curve counts by kind: [lines, arcs, circles].
std::array<std::size_t, 3> curve_type_counts(const CADModel& model);

}  // namespace recad::metrics
