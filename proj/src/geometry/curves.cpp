#include "recad/geometry/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "recad/error.hpp"

namespace recad::geom {

namespace {

constexpr double kDuplicateVertex = 1e-12;

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

void push_distinct(std::vector<Point2>* out, Point2 p) {
  if (!out->empty() && norm(p - out->back()) <= kDuplicateVertex) return;
  out->push_back(p);
}

}  // namespace

ArcGeometry solve_arc(Point2 start, Point2 end, double sweep_deg, bool clockwise) {
  if (!(sweep_deg > 0.0 && sweep_deg < 360.0)) {
    throw Error(ErrorCategory::kGeometry, "degenerate arc: sweep must lie in (0, 360)");
  }
  const Point2 chord = end - start;
  const double length = norm(chord);
  if (!(length > 0.0)) {
    throw Error(ErrorCategory::kGeometry, "degenerate arc: coincident endpoints");
  }
  const double half = radians(sweep_deg) / 2.0;
  const Point2 mid = (start + end) * 0.5;
  const Point2 left{-chord.y / length, chord.x / length};
  // Signed distance from the chord midpoint to the centre, positive on the
  // left of start->end for counter-clockwise arcs shorter than a half turn.
  const double offset = sweep_deg == 180.0 ? 0.0 : (length / 2.0) / std::tan(half);
  ArcGeometry arc;
  arc.radius = length / (2.0 * std::sin(half));
  arc.center = clockwise ? mid - left * offset : mid + left * offset;
  return arc;
}

std::vector<Segment> resolve_loop(const Loop& loop) {
  std::vector<Segment> out;
  Point2 pen = loop.start;
  for (const CurveCmd& cmd : loop.curves) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          Segment s;
          s.from = pen;
          if constexpr (std::is_same_v<T, Line>) {
            s.kind = CurveKind::kLine;
            s.to = c.relative ? pen + c.end : c.end;
          } else if constexpr (std::is_same_v<T, Arc>) {
            s.kind = CurveKind::kArc;
            s.to = c.relative ? pen + c.end : c.end;
            s.sweep_deg = c.sweep_deg;
            s.clockwise = c.clockwise;
          } else {
            s.kind = CurveKind::kCircle;
            s.from = loop.start;
            s.to = loop.start;
            s.radius = c.radius;
          }
          pen = s.to;
          out.push_back(s);
        },
        cmd);
  }
  if (loop.closed && !loop.is_circle() && !out.empty() &&
      norm(pen - loop.start) > kCloseTolerance) {
    out.push_back({CurveKind::kLine, pen, loop.start});
  }
  return out;
}

double closure_gap(const Loop& loop) {
  if (loop.is_circle()) return 0.0;
  Point2 pen = loop.start;
  for (const CurveCmd& cmd : loop.curves) {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (!std::is_same_v<T, Circle>) pen = c.relative ? pen + c.end : c.end;
        },
        cmd);
  }
  return norm(pen - loop.start);
}

bool has_implicit_close(const Loop& loop) {
  return loop.closed && !loop.curves.empty() && !loop.is_circle() && closure_gap(loop) > kCloseTolerance;
}

int arc_segment_count(double radius, double sweep_deg, double chord_tol) {
  const double ratio = std::clamp(1.0 - chord_tol / radius, -1.0, 1.0);
  const double max_step = 2.0 * std::acos(ratio);
  const double sweep = radians(sweep_deg);
  int n = kMinCurveSegments;
  if (max_step > 0.0) {
    const double needed = std::ceil(sweep / max_step);
    if (needed > n) n = static_cast<int>(std::min(needed, 1e6));
  }
  return n;
}

Polyline2 tessellate_loop(const Loop& loop, double chord_tol) {
  if (!(chord_tol > 0.0)) {
    throw Error(ErrorCategory::kPrecondition, "tessellate_loop: chord_tol must be positive");
  }
  Polyline2 poly;
  for (const Segment& s : resolve_loop(loop)) {
    switch (s.kind) {
      case CurveKind::kLine:
        push_distinct(&poly.vertices, s.from);
        break;
      case CurveKind::kArc: {
        const ArcGeometry arc = solve_arc(s.from, s.to, s.sweep_deg, s.clockwise);
        const int n = arc_segment_count(arc.radius, s.sweep_deg, chord_tol);
        const double a0 = std::atan2(s.from.y - arc.center.y, s.from.x - arc.center.x);
        const double step = (s.clockwise ? -1.0 : 1.0) * radians(s.sweep_deg) / n;
        push_distinct(&poly.vertices, s.from);
        for (int k = 1; k < n; ++k) {
          const double a = a0 + step * k;
          push_distinct(&poly.vertices, {arc.center.x + arc.radius * std::cos(a),
                                         arc.center.y + arc.radius * std::sin(a)});
        }
        break;
      }
      case CurveKind::kCircle: {
        const int n = arc_segment_count(s.radius, 360.0, chord_tol);
        for (int k = 0; k < n; ++k) {
          const double a = 2.0 * std::numbers::pi * k / n;
          push_distinct(&poly.vertices,
                        {s.from.x + s.radius * std::cos(a), s.from.y + s.radius * std::sin(a)});
        }
        break;
      }
    }
  }
  while (poly.vertices.size() > 1 &&
         norm(poly.vertices.back() - poly.vertices.front()) <= kDuplicateVertex) {
    poly.vertices.pop_back();
  }
  return poly;
}

}  // namespace recad::geom
