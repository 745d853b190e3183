// Reader for the DeepCAD-style sequence JSON and profile merging.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "json_access.hpp"
#include "recad/error.hpp"
#include "recad/geometry/curves.hpp"
#include "recad/geometry/polygon.hpp"
#include "recad/model_io.hpp"

namespace recad {

namespace {

using geom::Polyline2;
using geom::Side;

double distance_to_ring(Point2 p, const std::vector<Point2>& ring) {
  double best = 1e300;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const Point2 a = ring[i];
    const Point2 ab = ring[(i + 1) % ring.size()] - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, norm(p - (a + ab * t)));
  }
  return best;
}

// Vertices and edge midpoints of a ring.
std::vector<Point2> probe_points(const std::vector<Point2>& ring) {
  std::vector<Point2> out;
  out.reserve(ring.size() * 2);
  for (std::size_t i = 0; i < ring.size(); ++i) {
    out.push_back(ring[i]);
    out.push_back((ring[i] + ring[(i + 1) % ring.size()]) * 0.5);
  }
  return out;
}

bool coincident(const Polyline2& a, const Polyline2& b, double tol) {
  const auto on = [tol](const Polyline2& x, const Polyline2& y) {
    for (Point2 p : probe_points(x.vertices)) {
      if (distance_to_ring(p, y.vertices) > tol) return false;
    }
    return true;
  };
  return on(a, b) && on(b, a);
}

// Whether ring `a` lies inside ring `b`. Throws when they cross.
bool contained_in(const Polyline2& a, const Polyline2& b) {
  bool any_inside = false;
  bool any_outside = false;
  for (Point2 p : probe_points(a.vertices)) {
    const Side side = geom::classify_point(b.vertices, p);
    any_inside |= side == Side::kInside;
    any_outside |= side == Side::kOutside;
  }
  if ((any_inside && any_outside) || geom::rings_cross(a.vertices, b.vertices)) {
    throw Error(ErrorCategory::kGeometry, "profile loops intersect");
  }
  return any_inside;
}

double loops_extent(const std::vector<Loop>& loops) {
  geom::Bounds2 b;
  for (const Loop& loop : loops) {
    for (const geom::Segment& s : geom::resolve_loop(loop)) {
      b.add(s.from);
      b.add(s.to);
      if (s.kind == CurveKind::kCircle) {
        b.add({s.from.x - s.radius, s.from.y - s.radius});
        b.add({s.from.x + s.radius, s.from.y + s.radius});
      }
    }
  }
  return b.diagonal();
}

}  // namespace

std::vector<Face> merge_profiles_to_faces(const std::vector<std::vector<Loop>>& profiles) {
  std::vector<Loop> loops;
  for (const auto& profile : profiles) loops.insert(loops.end(), profile.begin(), profile.end());
  const double extent = loops_extent(loops);
  const double chord_tol = extent > 0.0 ? 1e-3 * extent : 1e-3;
  std::vector<Polyline2> rings;
  for (const Loop& loop : loops) rings.push_back(geom::tessellate_loop(loop, chord_tol));

  // Coincident loops come from adjacent profiles sharing a boundary; each
  // pair cancels.
  const std::size_t n = loops.size();
  std::vector<bool> alive(n, true);
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    for (std::size_t j = i + 1; j < n; ++j) {
      if (alive[j] && coincident(rings[i], rings[j], 2.0 * chord_tol + geom::kBoundaryTolerance)) {
        alive[i] = false;
        alive[j] = false;
        break;
      }
    }
  }

  std::vector<std::vector<std::size_t>> containers(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && alive[j] && contained_in(rings[i], rings[j])) containers[i].push_back(j);
    }
  }

  std::vector<Face> faces;
  std::vector<std::size_t> face_of(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i] || containers[i].size() % 2 != 0) continue;
    face_of[i] = faces.size();
    faces.push_back({loops[i], {}});
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!alive[i] || containers[i].size() % 2 == 0) continue;
    // The innermost container has the most containers of its own.
    const std::size_t parent = *std::max_element(
        containers[i].begin(), containers[i].end(),
        [&](std::size_t a, std::size_t b) { return containers[a].size() < containers[b].size(); });
    faces[face_of[parent]].holes.push_back(loops[i]);
  }
  return faces;
}

// ---------------------------------------------------------------------------
// External sequence JSON

namespace {

using ojson = nlohmann::ordered_json;
using View = detail::JsonView<ojson>;

constexpr double kChainTolerance = 1e-6;

Point2 read_xy(const View& v) { return {v.at("x").number(), v.at("y").number()}; }

Vec3 read_xyz(const View& v) {
  return {v.at("x").number(), v.at("y").number(), v.has("z") ? v.at("z").number() : 0.0};
}

Vec3 unit(Vec3 v, const View& where) {
  const double n = norm(v);
  if (!(n > 0.0)) where.fail("zero-length axis");
  return v * (1.0 / n);
}

struct RawCurve {
  CurveKind kind = CurveKind::kLine;
  Point2 start;
  Point2 end;
  Point2 center;
  double radius = 0.0;
  bool ccw = true;
};

RawCurve reversed(RawCurve c) {
  std::swap(c.start, c.end);
  c.ccw = !c.ccw;
  return c;
}

double sweep_of(const RawCurve& c) {
  const double a0 = std::atan2(c.start.y - c.center.y, c.start.x - c.center.x);
  const double a1 = std::atan2(c.end.y - c.center.y, c.end.x - c.center.x);
  double sweep = (c.ccw ? a1 - a0 : a0 - a1) * 180.0 / std::numbers::pi;
  while (sweep <= 0.0) sweep += 360.0;
  while (sweep >= 360.0) sweep -= 360.0;
  return sweep;
}

RawCurve read_curve(const View& v) {
  const std::string type = v.at("type").string();
  RawCurve c;
  if (type == "Line3D") {
    c.kind = CurveKind::kLine;
    c.start = read_xy(v.at("start_point"));
    c.end = read_xy(v.at("end_point"));
  } else if (type == "Arc3D") {
    c.kind = CurveKind::kArc;
    c.start = read_xy(v.at("start_point"));
    c.end = read_xy(v.at("end_point"));
    c.center = read_xy(v.at("center_point"));
    c.ccw = !v.has("normal") || read_xyz(v.at("normal")).z >= 0.0;
  } else if (type == "Circle3D") {
    c.kind = CurveKind::kCircle;
    c.center = read_xy(v.at("center_point"));
    c.radius = v.at("radius").number();
  } else {
    throw Error(ErrorCategory::kUnsupported,
                v.path() + ": unsupported curve type \"" + type + "\"");
  }
  return c;
}

Loop read_external_loop(const View& v) {
  const View curves_view = v.at("profile_curves");
  std::vector<RawCurve> curves;
  for (std::size_t i = 0; i < curves_view.size(); ++i) curves.push_back(read_curve(curves_view.at(i)));
  if (curves.empty()) v.fail("loop has no curves");
  if (curves.front().kind == CurveKind::kCircle) {
    if (curves.size() != 1) v.fail("circle mixed with other curves");
    return {curves.front().center, {Circle{curves.front().radius}}, true};
  }
  // Chain curves head to tail, reversing any that run backwards.
  std::vector<RawCurve> chain{curves.front()};
  std::vector<bool> used(curves.size(), false);
  used[0] = true;
  for (std::size_t step = 1; step < curves.size(); ++step) {
    const Point2 pen = chain.back().end;
    bool found = false;
    for (std::size_t i = 0; i < curves.size() && !found; ++i) {
      if (used[i]) continue;
      if (curves[i].kind == CurveKind::kCircle) v.fail("circle mixed with other curves");
      if (norm(curves[i].start - pen) <= kChainTolerance) {
        chain.push_back(curves[i]);
      } else if (norm(curves[i].end - pen) <= kChainTolerance) {
        chain.push_back(reversed(curves[i]));
      } else {
        continue;
      }
      used[i] = true;
      found = true;
    }
    if (!found) v.fail("profile curves do not form a connected loop");
  }
  Loop loop;
  loop.start = chain.front().start;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    const RawCurve& c = chain[i];
    const Point2 end = (i + 1 == chain.size() && norm(c.end - loop.start) <= kChainTolerance)
                           ? loop.start
                           : c.end;
    if (c.kind == CurveKind::kLine) {
      loop.curves.push_back(Line{end, false});
    } else {
      loop.curves.push_back(Arc{end, sweep_of(c), !c.ccw, false});
    }
  }
  return loop;
}

BooleanOp read_operation(const View& v) {
  const std::string op = v.string();
  if (op == "NewBodyFeatureOperation") return BooleanOp::kNewBody;
  if (op == "JoinFeatureOperation") return BooleanOp::kJoin;
  if (op == "CutFeatureOperation") return BooleanOp::kCut;
  if (op == "IntersectFeatureOperation") return BooleanOp::kIntersect;
  throw Error(ErrorCategory::kUnsupported, v.path() + ": unsupported operation \"" + op + "\"");
}

double extent_distance(const View& feature, const std::string& key) {
  return feature.at(key).at("distance").at("value").number();
}

Extrude read_extent(const View& feature) {
  const std::string type = feature.at("extent_type").string();
  const double one = extent_distance(feature, "extent_one");
  if (type == "OneSideFeatureExtentType") return {one, 0.0};
  if (type == "SymmetricFeatureExtentType") return {one / 2.0, one / 2.0};
  if (type == "TwoSidesFeatureExtentType") return {one, extent_distance(feature, "extent_two")};
  throw Error(ErrorCategory::kUnsupported,
              feature.at("extent_type").path() + ": unsupported extent type \"" + type + "\"");
}

SEPair read_extrude(const View& entities, const View& feature) {
  const View refs = feature.at("profiles");
  if (refs.size() == 0) refs.fail("extrude references no profiles");
  std::string sketch_id;
  std::vector<std::vector<Loop>> profiles;
  for (std::size_t i = 0; i < refs.size(); ++i) {
    const View ref = refs.at(i);
    const std::string sid = ref.at("sketch").string();
    if (sketch_id.empty()) {
      sketch_id = sid;
    } else if (sid != sketch_id) {
      ref.at("sketch").fail("profiles from several sketches in one extrude");
    }
    const View sketch = entities.at(sid);
    const View loops = sketch.at("profiles").at(ref.at("profile").string()).at("loops");
    std::vector<Loop> profile;
    for (std::size_t l = 0; l < loops.size(); ++l) profile.push_back(read_external_loop(loops.at(l)));
    profiles.push_back(std::move(profile));
  }
  const View sketch = entities.at(sketch_id);
  if (sketch.at("type").string() != "Sketch") sketch.at("type").fail("expected a Sketch entity");
  const View transform = sketch.at("transform");
  SEPair pair;
  pair.sketch.origin = read_xyz(transform.at("origin"));
  const Vec3 normal = unit(read_xyz(transform.at("z_axis")), transform.at("z_axis"));
  Vec3 x_axis = read_xyz(transform.at("x_axis"));
  x_axis = unit(x_axis - normal * dot(x_axis, normal), transform.at("x_axis"));
  pair.sketch.normal = normal;
  pair.sketch.x_axis = x_axis;
  pair.sketch.faces = merge_profiles_to_faces(profiles);
  pair.extrude = read_extent(feature);
  pair.op = read_operation(feature.at("operation"));
  return pair;
}

}  // namespace

CADModel from_external_json(std::string_view text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw Error(ErrorCategory::kParse, std::string("invalid JSON: ") + e.what());
  }
  const View root(j, "");
  const View entities = root.at("entities");
  if (!entities.node().is_object()) entities.fail("expected an object");
  std::vector<std::pair<std::string, std::string>> order;  // (entity id, path for errors)
  if (root.has("sequence")) {
    const View seq = root.at("sequence");
    for (std::size_t i = 0; i < seq.size(); ++i) order.emplace_back(seq.at(i).at("entity").string(), seq.at(i).path());
  } else {
    for (const auto& [id, value] : entities.node().items()) order.emplace_back(id, "entities." + id);
  }
  CADModel model;
  for (const auto& [id, where] : order) {
    const View entity = entities.at(id);
    const std::string type = entity.at("type").string();
    if (type == "Sketch") continue;
    if (type != "ExtrudeFeature") {
      throw Error(ErrorCategory::kUnsupported, where + ": unsupported feature type \"" + type + "\"");
    }
    model.pairs.push_back(read_extrude(entities, entity));
  }
  if (model.pairs.empty()) root.fail("no extrude features");
  return model;
}

}  // namespace recad
