#pragma once

// Sketch-extrude CAD model types.
//
// A CADModel is an ordered list of sketch-extrude (SE) pairs combined with
// boolean operations. Each sketch holds faces on a plane, each face an outer
// loop and optional hole loops, and each loop a closed chain of lines and arcs
// or a single circle.

#include <cmath>
#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace recad {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(Point2 a, double s) { return {a.x * s, a.y * s}; }
inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator-(Vec3 a) { return {-a.x, -a.y, -a.z}; }
inline Vec3 operator*(Vec3 a, double s) { return {a.x * s, a.y * s, a.z * s}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Vec3 a) { return std::sqrt(dot(a, a)); }

// Curve commands. Coordinates of `relative` commands are offsets from the
// current pen position.
struct Line {
  Point2 end;
  bool relative = false;

  friend bool operator==(const Line&, const Line&) = default;
};

struct Arc {
  Point2 end;
  double sweep_deg = 90.0;  // strictly inside (0, 360)
  bool clockwise = false;
  bool relative = false;

  friend bool operator==(const Arc&, const Arc&) = default;
};

// Full circle centred at the loop's start point.
struct Circle {
  double radius = 1.0;

  friend bool operator==(const Circle&, const Circle&) = default;
};

using CurveCmd = std::variant<Line, Arc, Circle>;

enum class CurveKind { kLine, kArc, kCircle };

inline CurveKind kind_of(const CurveCmd& c) { return static_cast<CurveKind>(c.index()); }
std::string_view to_string(CurveKind kind);

struct Loop {
  Point2 start;
  std::vector<CurveCmd> curves;
  bool closed = true;

  bool is_circle() const {
    return curves.size() == 1 && std::holds_alternative<Circle>(curves.front());
  }

  friend bool operator==(const Loop&, const Loop&) = default;
};

struct Face {
  Loop outer;
  std::vector<Loop> holes;

  friend bool operator==(const Face&, const Face&) = default;
};

struct Sketch {
  Vec3 origin;
  Vec3 x_axis{1.0, 0.0, 0.0};
  Vec3 normal{0.0, 0.0, 1.0};
  std::vector<Face> faces;

  Vec3 y_axis() const { return cross(normal, x_axis); }

  friend bool operator==(const Sketch&, const Sketch&) = default;
};

struct Extrude {
  double dist_pos = 0.0;  // along the sketch normal
  double dist_neg = 0.0;  // against the sketch normal

  friend bool operator==(const Extrude&, const Extrude&) = default;
};

enum class BooleanOp { kNewBody, kJoin, kCut, kIntersect };

/// Script spelling: "new", "join", "cut", "intersect".
std::string_view to_string(BooleanOp op);
/// Accepts the script spellings case-insensitively plus "newbody"/"new_body"/"union".
bool parse_boolean_op(std::string_view text, BooleanOp* out);

struct SEPair {
  Sketch sketch;
  Extrude extrude;
  BooleanOp op = BooleanOp::kNewBody;

  friend bool operator==(const SEPair&, const SEPair&) = default;
};

struct CADModel {
  std::vector<SEPair> pairs;

  friend bool operator==(const CADModel&, const CADModel&) = default;
};

/// Loop endpoints must meet within this distance (model units).
inline constexpr double kCloseTolerance = 1e-6;

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string code;     // stable identifier, e.g. "open-loop"
  std::string path;     // e.g. "pairs[0].sketch.faces[1].holes[0]"
  std::string message;  // human-readable

  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const;
  std::string summary() const;
};

ValidationReport validate_model(const CADModel& model);

/// Throws Error{kValidation} carrying the first violation.
void require_valid(const CADModel& model);

// ---------------------------------------------------------------------------
// Primitive hierarchy

enum class Level { kLoop = 0, kFace = 1, kSketch = 2, kSE = 3, kMSE = 4 };

std::string_view to_string(Level level);  // "L", "F", "S", "SE", "MSE"
bool parse_level(std::string_view text, Level* out);

using Primitive = std::variant<Loop, Face, Sketch, SEPair, CADModel>;

inline Level level_of(const Primitive& p) { return static_cast<Level>(p.index()); }

struct SourceIndex {
  int se = -1;
  int face = -1;
  int loop = -1;  // 0 = outer, k = holes[k-1]

  friend bool operator==(const SourceIndex&, const SourceIndex&) = default;
};

struct PrimitiveEntry {
  Primitive primitive;
  Level level;
  SourceIndex source;
};

/// Every loop, face, sketch and SE pair of a valid model in document order,
/// followed by the model itself when it has more than one SE pair.
/// Throws Error{kValidation} for invalid models.
std::vector<PrimitiveEntry> extract_primitives(const CADModel& model);

std::size_t count_curves(const Loop& loop);
std::size_t count_curves(const Face& face);
std::size_t count_curves(const Sketch& sketch);
std::size_t count_curves(const SEPair& pair);
std::size_t count_curves(const CADModel& model);
std::size_t count_curves(const Primitive& p);

/// Lifts any primitive into an executable model. Loops, faces and sketches are
/// placed on the canonical plane (origin 0, x (1,0,0), normal (0,0,1)) and
/// extruded by (0.1, 0); an SE pair becomes a single new-body model.
CADModel canonical_model(const Primitive& p);

inline constexpr double kCanonicalExtrusion = 0.1;

}  // namespace recad
