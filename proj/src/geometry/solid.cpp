#include "recad/geometry/solid.hpp"

#include <algorithm>
#include <cmath>

namespace recad::geom {

void Box3::add(Vec3 p) {
  min = {std::min(min.x, p.x), std::min(min.y, p.y), std::min(min.z, p.z)};
  max = {std::max(max.x, p.x), std::max(max.y, p.y), std::max(max.z, p.z)};
}

void Box3::add(const Box3& b) {
  if (b.empty()) return;
  add(b.min);
  add(b.max);
}

bool Box3::contains(Vec3 p) const {
  return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y && p.z >= min.z &&
         p.z <= max.z;
}

PlaneFrame PlaneFrame::of(const Sketch& sketch) {
  return {sketch.origin, sketch.x_axis, sketch.y_axis(), sketch.normal};
}

Point2 PlaneFrame::project(Vec3 p) const {
  const Vec3 d = p - origin;
  return {dot(d, x_axis), dot(d, y_axis)};
}

double PlaneFrame::height(Vec3 p) const { return dot(p - origin, normal); }

Vec3 PlaneFrame::to_world(Point2 q, double h) const {
  return origin + x_axis * q.x + y_axis * q.y + normal * h;
}

namespace {

void add_prism_box(const PlaneFrame& frame, const Bounds2& b, double bottom, double top,
                   Box3* out) {
  for (double x : {b.min.x, b.max.x}) {
    for (double y : {b.min.y, b.max.y}) {
      for (double h : {bottom, top}) out->add(frame.to_world({x, y}, h));
    }
  }
}

// In-plane bounds of a loop with every arc and circle bounded by its full
// circle.
void add_loop_bounds(const Loop& loop, Bounds2* b) {
  for (const Segment& s : resolve_loop(loop)) {
    b->add(s.from);
    b->add(s.to);
    double r = 0.0;
    Point2 c;
    if (s.kind == CurveKind::kCircle) {
      r = s.radius;
      c = s.from;
    } else if (s.kind == CurveKind::kArc && s.sweep_deg > 0.0 && s.sweep_deg < 360.0 &&
               !(s.from == s.to)) {
      const ArcGeometry arc = solve_arc(s.from, s.to, s.sweep_deg, s.clockwise);
      r = arc.radius;
      c = arc.center;
    } else {
      continue;
    }
    if (std::isfinite(r)) {
      b->add({c.x - r, c.y - r});
      b->add({c.x + r, c.y + r});
    }
  }
}

constexpr double kHeightTolerance = kBoundaryTolerance;

}  // namespace

double model_diagonal(const CADModel& model) {
  Box3 box;
  for (const SEPair& pair : model.pairs) {
    Bounds2 b;
    for (const Face& face : pair.sketch.faces) add_loop_bounds(face.outer, &b);
    if (b.min.x > b.max.x) continue;
    add_prism_box(PlaneFrame::of(pair.sketch), b, -pair.extrude.dist_neg, pair.extrude.dist_pos,
                  &box);
  }
  return box.diagonal();
}

double default_chord_tol(const CADModel& model) {
  const double d = model_diagonal(model);
  return d > 0.0 && std::isfinite(d) ? 1e-3 * d : 1e-3;
}

bool point_in_face(const Face& face, Point2 p, double chord_tol) {
  std::vector<Polyline2> rings;
  rings.push_back(tessellate_loop(face.outer, chord_tol));
  for (const Loop& h : face.holes) rings.push_back(tessellate_loop(h, chord_tol));
  return point_in_rings(rings, p);
}

bool point_in_se(const SEPair& se, Vec3 p, double chord_tol) {
  const PlaneFrame frame = PlaneFrame::of(se.sketch);
  const double h = frame.height(p);
  if (h < -se.extrude.dist_neg - kHeightTolerance || h > se.extrude.dist_pos + kHeightTolerance) {
    return false;
  }
  const Point2 q = frame.project(p);
  return std::any_of(se.sketch.faces.begin(), se.sketch.faces.end(),
                     [&](const Face& f) { return point_in_face(f, q, chord_tol); });
}

bool membership(const CADModel& model, Vec3 p, double chord_tol) {
  return Solid(model, chord_tol).contains(p);
}

Solid::Solid(const CADModel& model, double chord_tol)
    : chord_tol_(chord_tol > 0.0 ? chord_tol : default_chord_tol(model)) {
  prisms_.reserve(model.pairs.size());
  for (const SEPair& pair : model.pairs) {
    Prism prism;
    prism.frame = PlaneFrame::of(pair.sketch);
    prism.top = pair.extrude.dist_pos;
    prism.bottom = -pair.extrude.dist_neg;
    prism.op = pair.op;
    for (const Face& face : pair.sketch.faces) {
      FaceRings fr;
      fr.rings.push_back(tessellate_loop(face.outer, chord_tol_));
      for (const Loop& h : face.holes) fr.rings.push_back(tessellate_loop(h, chord_tol_));
      for (Point2 v : fr.rings.front().vertices) fr.bounds.add(v);
      prism.bounds.add(fr.bounds.min);
      prism.bounds.add(fr.bounds.max);
      prism.faces.push_back(std::move(fr));
    }
    if (!prism.faces.empty()) {
      add_prism_box(prism.frame, prism.bounds, prism.bottom, prism.top, &prism.world_bounds);
      const double pad = kBoundaryTolerance;
      prism.world_bounds.min = prism.world_bounds.min - Vec3{pad, pad, pad};
      prism.world_bounds.max = prism.world_bounds.max + Vec3{pad, pad, pad};
    }
    if (prism.op == BooleanOp::kNewBody || prism.op == BooleanOp::kJoin) {
      bounds_.add(prism.world_bounds);
    }
    prisms_.push_back(std::move(prism));
  }
}

bool Solid::in_prism(const Prism& prism, Vec3 p) const {
  if (prism.faces.empty() || !prism.world_bounds.contains(p)) return false;
  const double h = prism.frame.height(p);
  if (h < prism.bottom - kHeightTolerance || h > prism.top + kHeightTolerance) return false;
  const Point2 q = prism.frame.project(p);
  for (const FaceRings& face : prism.faces) {
    if (!face.bounds.contains(q, kBoundaryTolerance)) continue;
    if (point_in_rings(face.rings, q)) return true;
  }
  return false;
}

bool Solid::contains_se(std::size_t se, Vec3 p) const { return in_prism(prisms_.at(se), p); }

bool Solid::contains(Vec3 p) const {
  bool acc = false;
  for (const Prism& prism : prisms_) {
    switch (prism.op) {
      case BooleanOp::kNewBody:
      case BooleanOp::kJoin:
        if (!acc) acc = in_prism(prism, p);
        break;
      case BooleanOp::kCut:
        if (acc) acc = !in_prism(prism, p);
        break;
      case BooleanOp::kIntersect:
        if (acc) acc = in_prism(prism, p);
        break;
    }
  }
  return acc;
}

}  // namespace recad::geom
