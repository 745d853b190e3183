#include "recad/cad_model.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>

#include "recad/error.hpp"
#include "recad/geometry/curves.hpp"
#include "recad/geometry/polygon.hpp"
#include "recad/geometry/solid.hpp"

namespace recad {

std::string_view to_string(CurveKind kind) {
  switch (kind) {
    case CurveKind::kLine: return "line";
    case CurveKind::kArc: return "arc";
    case CurveKind::kCircle: return "circle";
  }
  return "unknown";
}

std::string_view to_string(BooleanOp op) {
  switch (op) {
    case BooleanOp::kNewBody: return "new";
    case BooleanOp::kJoin: return "join";
    case BooleanOp::kCut: return "cut";
    case BooleanOp::kIntersect: return "intersect";
  }
  return "unknown";
}

bool parse_boolean_op(std::string_view text, BooleanOp* out) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "new" || lower == "newbody" || lower == "new_body") {
    *out = BooleanOp::kNewBody;
  } else if (lower == "join" || lower == "union") {
    *out = BooleanOp::kJoin;
  } else if (lower == "cut") {
    *out = BooleanOp::kCut;
  } else if (lower == "intersect") {
    *out = BooleanOp::kIntersect;
  } else {
    return false;
  }
  return true;
}

std::string_view to_string(Level level) {
  switch (level) {
    case Level::kLoop: return "L";
    case Level::kFace: return "F";
    case Level::kSketch: return "S";
    case Level::kSE: return "SE";
    case Level::kMSE: return "MSE";
  }
  return "?";
}

bool parse_level(std::string_view text, Level* out) {
  for (Level l : {Level::kLoop, Level::kFace, Level::kSketch, Level::kSE, Level::kMSE}) {
    if (to_string(l) == text) {
      *out = l;
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Validation

bool ValidationReport::has(std::string_view code) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.code == code; });
}

std::string ValidationReport::summary() const {
  std::ostringstream out;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) out << "; ";
    out << violations[i].path << ": " << violations[i].message;
  }
  return out.str();
}

namespace {

bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }
bool finite(Vec3 v) { return std::isfinite(v.x) && std::isfinite(v.y) && std::isfinite(v.z); }

class Checker {
 public:
  explicit Checker(double chord_tol) : chord_tol_(chord_tol) {}

  void add(std::string code, std::string path, std::string message) {
    report_.violations.push_back({std::move(code), std::move(path), std::move(message)});
  }

  // Returns the tessellated loop when the loop is well-formed.
  std::optional<geom::Polyline2> check_loop(const Loop& loop, const std::string& path) {
    const std::size_t before = report_.violations.size();
    if (!finite(loop.start)) add("non-finite", path + ".start", "non-finite start point");
    if (loop.curves.empty()) {
      add("empty-loop", path, "loop has no curves");
      return std::nullopt;
    }
    bool has_circle = false;
    for (std::size_t i = 0; i < loop.curves.size(); ++i) {
      const std::string cpath = path + ".curves[" + std::to_string(i) + "]";
      std::visit(
          [&](const auto& c) {
            using T = std::decay_t<decltype(c)>;
            if constexpr (std::is_same_v<T, Line>) {
              if (!finite(c.end)) add("non-finite", cpath, "non-finite line end");
            } else if constexpr (std::is_same_v<T, Arc>) {
              if (!finite(c.end) || !std::isfinite(c.sweep_deg)) {
                add("non-finite", cpath, "non-finite arc parameter");
              } else if (!(c.sweep_deg > 0.0 && c.sweep_deg < 360.0)) {
                add("bad-arc-sweep", cpath, "arc sweep must lie in (0, 360) degrees");
              }
            } else {
              has_circle = true;
              if (!std::isfinite(c.radius) || !(c.radius > 0.0)) {
                add("bad-circle-radius", cpath, "circle radius must be positive");
              }
            }
          },
          loop.curves[i]);
    }
    if (has_circle && loop.curves.size() > 1) {
      add("circle-mixed", path, "a circle must be the only curve of its loop");
    }
    if (report_.violations.size() != before) return std::nullopt;

    const double gap = geom::closure_gap(loop);
    if (!loop.closed && gap > kCloseTolerance) {
      std::ostringstream msg;
      msg << "open loop: path ends " << gap << " from its start";
      add("open-loop", path, msg.str());
      return std::nullopt;
    }
    geom::Polyline2 poly;
    try {
      poly = geom::tessellate_loop(loop, chord_tol_);
    } catch (const Error& e) {
      add("degenerate-arc", path, e.what());
      return std::nullopt;
    }
    const double area = std::abs(geom::signed_area(poly.vertices));
    const double scale = geom::bounds_of(poly.vertices).diagonal();
    if (poly.vertices.size() < 3 || !(area > 1e-12 * std::max(1.0, scale * scale))) {
      add("degenerate-loop", path, "loop encloses no area");
      return std::nullopt;
    }
    if (geom::ring_self_intersects(poly.vertices)) {
      add("self-intersecting-loop", path, "loop crosses itself");
      return std::nullopt;
    }
    return poly;
  }

  void check_face(const Face& face, const std::string& path) {
    auto outer = check_loop(face.outer, path + ".outer");
    std::vector<std::optional<geom::Polyline2>> holes;
    for (std::size_t h = 0; h < face.holes.size(); ++h) {
      holes.push_back(check_loop(face.holes[h], path + ".holes[" + std::to_string(h) + "]"));
    }
    if (!outer) return;
    for (std::size_t h = 0; h < holes.size(); ++h) {
      if (!holes[h]) continue;
      const std::string hpath = path + ".holes[" + std::to_string(h) + "]";
      bool inside = !geom::rings_cross(outer->vertices, holes[h]->vertices);
      for (Point2 p : holes[h]->vertices) {
        if (!inside) break;
        inside = geom::classify_point(outer->vertices, p) == geom::Side::kInside;
      }
      if (!inside) add("hole-outside-outer", hpath, "hole is not strictly inside the outer loop");
    }
    for (std::size_t a = 0; a < holes.size(); ++a) {
      for (std::size_t b = a + 1; b < holes.size(); ++b) {
        if (!holes[a] || !holes[b]) continue;
        const auto& ra = holes[a]->vertices;
        const auto& rb = holes[b]->vertices;
        bool overlap = geom::rings_cross(ra, rb) ||
                       geom::classify_point(rb, ra.front()) != geom::Side::kOutside ||
                       geom::classify_point(ra, rb.front()) != geom::Side::kOutside;
        if (overlap) {
          add("holes-overlap", path + ".holes[" + std::to_string(b) + "]",
              "hole overlaps hole " + std::to_string(a));
        }
      }
    }
  }

  void check_pair(const SEPair& pair, const std::string& path) {
    const Sketch& s = pair.sketch;
    const std::string spath = path + ".sketch";
    if (!finite(s.origin) || !finite(s.x_axis) || !finite(s.normal)) {
      add("non-finite", spath, "non-finite sketch plane");
    } else {
      if (std::abs(norm(s.x_axis) - 1.0) > 1e-9) add("axis-not-unit", spath + ".x_axis", "x_axis is not unit length");
      if (std::abs(norm(s.normal) - 1.0) > 1e-9) add("normal-not-unit", spath + ".normal", "normal is not unit length");
      if (std::abs(dot(s.x_axis, s.normal)) > 1e-9) add("axes-not-orthogonal", spath, "x_axis is not orthogonal to normal");
    }
    if (s.faces.empty()) add("no-faces", spath + ".faces", "sketch has no faces");
    for (std::size_t f = 0; f < s.faces.size(); ++f) {
      check_face(s.faces[f], spath + ".faces[" + std::to_string(f) + "]");
    }
    const Extrude& e = pair.extrude;
    const std::string epath = path + ".extrude";
    if (!std::isfinite(e.dist_pos) || !std::isfinite(e.dist_neg)) {
      add("non-finite", epath, "non-finite extrusion distance");
    } else if (e.dist_pos < 0.0 || e.dist_neg < 0.0) {
      add("negative-extrusion", epath, "extrusion distances must be non-negative");
    } else if (!(e.dist_pos + e.dist_neg > 0.0)) {
      add("zero-extrusion", epath, "extrusion has zero total depth");
    }
  }

  ValidationReport take() { return std::move(report_); }

 private:
  double chord_tol_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_model(const CADModel& model) {
  double tol = 1e-3;
  try {
    const double diag = geom::model_diagonal(model);
    if (std::isfinite(diag) && diag > 0.0) tol = 1e-3 * diag;
  } catch (const Error&) {
  }
  Checker checker(tol);
  if (model.pairs.empty()) {
    checker.add("empty-model", "pairs", "model has no SE pairs");
  } else if (model.pairs.front().op != BooleanOp::kNewBody) {
    checker.add("first-op-not-new-body", "pairs[0].op", "first op must be NewBody");
  }
  for (std::size_t i = 0; i < model.pairs.size(); ++i) {
    checker.check_pair(model.pairs[i], "pairs[" + std::to_string(i) + "]");
  }
  return checker.take();
}

void require_valid(const CADModel& model) {
  ValidationReport report = validate_model(model);
  if (!report.ok()) {
    throw Error(ErrorCategory::kValidation, report.violations.front().path + ": " +
                                                report.violations.front().message);
  }
}

// ---------------------------------------------------------------------------
// Primitives

std::vector<PrimitiveEntry> extract_primitives(const CADModel& model) {
  require_valid(model);
  std::vector<PrimitiveEntry> out;
  for (std::size_t i = 0; i < model.pairs.size(); ++i) {
    const SEPair& pair = model.pairs[i];
    const int se = static_cast<int>(i);
    for (std::size_t f = 0; f < pair.sketch.faces.size(); ++f) {
      const Face& face = pair.sketch.faces[f];
      const int fi = static_cast<int>(f);
      out.push_back({face.outer, Level::kLoop, {se, fi, 0}});
      for (std::size_t h = 0; h < face.holes.size(); ++h) {
        out.push_back({face.holes[h], Level::kLoop, {se, fi, static_cast<int>(h) + 1}});
      }
      out.push_back({face, Level::kFace, {se, fi, -1}});
    }
    out.push_back({pair.sketch, Level::kSketch, {se, -1, -1}});
    out.push_back({pair, Level::kSE, {se, -1, -1}});
  }
  if (model.pairs.size() > 1) out.push_back({model, Level::kMSE, {}});
  return out;
}

std::size_t count_curves(const Loop& loop) { return loop.curves.size() + (geom::has_implicit_close(loop) ? 1 : 0); }

std::size_t count_curves(const Face& face) {
  std::size_t n = count_curves(face.outer);
  for (const Loop& h : face.holes) n += count_curves(h);
  return n;
}

std::size_t count_curves(const Sketch& sketch) {
  std::size_t n = 0;
  for (const Face& f : sketch.faces) n += count_curves(f);
  return n;
}

std::size_t count_curves(const SEPair& pair) { return count_curves(pair.sketch); }

std::size_t count_curves(const CADModel& model) {
  std::size_t n = 0;
  for (const SEPair& p : model.pairs) n += count_curves(p);
  return n;
}

std::size_t count_curves(const Primitive& p) {
  return std::visit([](const auto& v) { return count_curves(v); }, p);
}

CADModel canonical_model(const Primitive& p) {
  auto wrap = [](std::vector<Face> faces) {
    SEPair pair;
    pair.sketch.faces = std::move(faces);
    pair.extrude = {kCanonicalExtrusion, 0.0};
    pair.op = BooleanOp::kNewBody;
    return CADModel{{std::move(pair)}};
  };
  return std::visit(
      [&](const auto& v) -> CADModel {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Loop>) {
          return wrap({Face{v, {}}});
        } else if constexpr (std::is_same_v<T, Face>) {
          return wrap({v});
        } else if constexpr (std::is_same_v<T, Sketch>) {
          return wrap(v.faces);
        } else if constexpr (std::is_same_v<T, SEPair>) {
          SEPair pair = v;
          pair.op = BooleanOp::kNewBody;
          return CADModel{{std::move(pair)}};
        } else {
          return v;
        }
      },
      p);
}

}  // namespace recad
