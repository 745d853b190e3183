#pragma once

// Planar polygon predicates and ear-clipping triangulation with holes.

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "recad/cad_model.hpp"
#include "recad/geometry/curves.hpp"

namespace recad::geom {

inline constexpr double kBoundaryTolerance = 1e-9;

double signed_area(std::span<const Point2> ring);

struct Bounds2 {
  Point2 min{1e300, 1e300};
  Point2 max{-1e300, -1e300};

  void add(Point2 p);
  bool contains(Point2 p, double pad = 0.0) const;
  double diagonal() const;
};

Bounds2 bounds_of(std::span<const Point2> ring);

enum class Side { kOutside, kBoundary, kInside };

/// Classifies `p` against a closed ring (even-odd rule); points within
/// kBoundaryTolerance of an edge are kBoundary.
Side classify_point(std::span<const Point2> ring, Point2 p);

/// Even-odd membership over several rings; boundary points count as inside.
bool point_in_rings(std::span<const Polyline2> rings, Point2 p);

/// True when segments [a,b] and [c,d] cross at a single interior point of
/// both (touching endpoints and collinear overlaps do not count).
bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d);

/// True when any two non-adjacent edges of `ring` cross or touch.
bool ring_self_intersects(std::span<const Point2> ring);

/// True when an edge of `a` crosses an edge of `b`.
bool rings_cross(std::span<const Point2> a, std::span<const Point2> b);

struct Triangulation {
  std::vector<Point2> vertices;                          // all rings, concatenated
  std::vector<std::size_t> ring_offsets;                 // start of each ring
  std::vector<std::array<std::uint32_t, 3>> triangles;  // counter-clockwise
};

/// Triangulates the region inside `rings[0]` minus `rings[1..]`. Triangle
/// indices refer to the concatenated input vertices in their input order.
/// Throws Error{kGeometry} for zero-area or self-intersecting input.
Triangulation triangulate_polygon(std::span<const Polyline2> rings);

Triangulation triangulate_face(const Face& face, double chord_tol);

double triangulation_area(const Triangulation& t);

}  // namespace recad::geom
