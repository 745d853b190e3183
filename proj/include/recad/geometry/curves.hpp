#pragma once

// Loop resolution and tessellation.

#include <vector>

#include "recad/cad_model.hpp"

namespace recad::geom {

inline constexpr int kMinCurveSegments = 8;

struct ArcGeometry {
  Point2 center;
  double radius = 0.0;
};

/// Centre and radius of the arc from `start` to `end` sweeping `sweep_deg`
/// degrees in the flagged direction. Throws Error{kGeometry} for a sweep
/// outside (0, 360) or coincident endpoints.
ArcGeometry solve_arc(Point2 start, Point2 end, double sweep_deg, bool clockwise);

/// A curve with relative offsets resolved to absolute coordinates.
struct Segment {
  CurveKind kind = CurveKind::kLine;
  Point2 from;
  Point2 to;
  double sweep_deg = 0.0;  // arcs only
  bool clockwise = false;  // arcs only
  double radius = 0.0;     // circles only; centre is `from`
};

/// Absolute segments of a loop. A closed loop whose pen does not end on the
/// start point gets an implicit closing line.
std::vector<Segment> resolve_loop(const Loop& loop);

/// Distance between the last resolved endpoint and the start point, before
/// any implicit closing line. Zero for circle loops.
double closure_gap(const Loop& loop);

/// True when resolve_loop appends a closing line to `loop`.
bool has_implicit_close(const Loop& loop);

struct Polyline2 {
  std::vector<Point2> vertices;
  bool closed = true;
};

/// Replaces arcs and circles by chords whose sagitta is at most `chord_tol`,
/// with at least kMinCurveSegments chords per arc or circle. The closing
/// vertex is not repeated. Throws Error{kGeometry} on degenerate arcs.
Polyline2 tessellate_loop(const Loop& loop, double chord_tol);

/// Number of chords used for an arc of `sweep_deg` degrees on `radius`.
int arc_segment_count(double radius, double sweep_deg, double chord_tol);

}  // namespace recad::geom
