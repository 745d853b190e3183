#pragma once

// Analytic point membership for sketch-extrude models.
//
// Membership is evaluated per point as a left fold over the SE pairs:
// new/join OR the prism in, cut removes it, intersect keeps the overlap.
// Prisms use the same tessellated loops as the meshes, so sampled mesh
// points sit exactly on the membership boundary.

#include <vector>

#include "recad/cad_model.hpp"
#include "recad/geometry/curves.hpp"
#include "recad/geometry/polygon.hpp"

namespace recad::geom {

struct Box3 {
  Vec3 min{1e300, 1e300, 1e300};
  Vec3 max{-1e300, -1e300, -1e300};

  bool empty() const { return min.x > max.x; }
  void add(Vec3 p);
  void add(const Box3& b);
  bool contains(Vec3 p) const;
  Vec3 center() const { return (min + max) * 0.5; }
  Vec3 extent() const { return max - min; }
  double diagonal() const { return empty() ? 0.0 : norm(extent()); }
};

/// Orthonormal frame of a sketch plane.
struct PlaneFrame {
  Vec3 origin;
  Vec3 x_axis;
  Vec3 y_axis;
  Vec3 normal;

  static PlaneFrame of(const Sketch& sketch);
  Point2 project(Vec3 p) const;
  double height(Vec3 p) const;
  Vec3 to_world(Point2 q, double h) const;
};

/// Diagonal of a conservative bounding box (arcs and circles bounded by their
/// full circle). Used to derive default tolerances.
double model_diagonal(const CADModel& model);

/// 1e-3 of the model diagonal.
double default_chord_tol(const CADModel& model);

bool point_in_face(const Face& face, Point2 p, double chord_tol);
bool point_in_se(const SEPair& se, Vec3 p, double chord_tol);
bool membership(const CADModel& model, Vec3 p, double chord_tol);

/// A model with every loop tessellated once, for bulk membership queries.
class Solid {
 public:
  /// chord_tol <= 0 selects default_chord_tol(model).
  explicit Solid(const CADModel& model, double chord_tol = 0.0);

  bool contains(Vec3 p) const;
  bool contains_se(std::size_t se, Vec3 p) const;

  /// World bounds of the new/join prisms (a superset of the solid).
  const Box3& bounds() const { return bounds_; }
  double chord_tol() const { return chord_tol_; }
  std::size_t size() const { return prisms_.size(); }

 private:
  struct FaceRings {
    std::vector<Polyline2> rings;
    Bounds2 bounds;
  };
  struct Prism {
    PlaneFrame frame;
    double top = 0.0;
    double bottom = 0.0;
    BooleanOp op = BooleanOp::kNewBody;
    std::vector<FaceRings> faces;
    Bounds2 bounds;
    Box3 world_bounds;
  };

  bool in_prism(const Prism& prism, Vec3 p) const;

  std::vector<Prism> prisms_;
  Box3 bounds_;
  double chord_tol_ = 0.0;
};

}  // namespace recad::geom
