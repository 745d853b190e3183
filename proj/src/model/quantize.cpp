#include "recad/quantize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "recad/error.hpp"

namespace recad {

namespace {

std::uint8_t quantize_field(double v, const std::string& field) {
  if (!(v >= -1.0 && v <= 1.0)) {
    throw Error(ErrorCategory::kRange,
                field + ": value " + std::to_string(v) + " outside [-1, 1]");
  }
  const double scaled = (v + 1.0) / 2.0 * 255.0;
  return static_cast<std::uint8_t>(std::clamp(std::floor(scaled + 0.5), 0.0, 255.0));
}

int round_half_up(double v) { return static_cast<int>(std::floor(v + 0.5)); }

int wrap_degrees(int d) { return ((d % 360) + 360) % 360; }

double wrap_degrees(double d) {
  double w = std::fmod(d, 360.0);
  if (w < 0.0) w += 360.0;
  if (w >= 360.0) w -= 360.0;
  return w;
}

// Exact for multiples of 90 degrees.
void sincos_deg(double deg, double* s, double* c) {
  const double turns = deg / 90.0;
  if (turns == std::floor(turns)) {
    static constexpr double kSin[4] = {0.0, 1.0, 0.0, -1.0};
    static constexpr double kCos[4] = {1.0, 0.0, -1.0, 0.0};
    const int q = static_cast<int>(((static_cast<long long>(turns) % 4) + 4) % 4);
    *s = kSin[q];
    *c = kCos[q];
    return;
  }
  const double rad = deg * std::numbers::pi / 180.0;
  *s = std::sin(rad);
  *c = std::cos(rad);
}

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

QPoint2 quantize_point(Point2 p, const std::string& field) {
  return {quantize_field(p.x, field + ".x"), quantize_field(p.y, field + ".y")};
}

Point2 dequantize_point(QPoint2 q) { return {dequantize_coord(q.x), dequantize_coord(q.y)}; }

QLoop quantize_loop(const Loop& loop, const std::string& path) {
  QLoop q;
  q.start = quantize_point(loop.start, path + ".start");
  q.closed = loop.closed;
  for (std::size_t i = 0; i < loop.curves.size(); ++i) {
    const std::string cpath = path + ".curves[" + std::to_string(i) + "]";
    q.curves.push_back(std::visit(
        [&](const auto& c) -> QCurve {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Line>) {
            return QLine{quantize_point(c.end, cpath + ".end"), c.relative};
          } else if constexpr (std::is_same_v<T, Arc>) {
            if (!(c.sweep_deg >= 0.0 && c.sweep_deg < 360.0)) {
              throw Error(ErrorCategory::kRange, cpath + ".sweep: outside [0, 360)");
            }
            const int sweep = std::clamp(round_half_up(c.sweep_deg), 1, 359);
            return QArc{quantize_point(c.end, cpath + ".end"), sweep, c.clockwise, c.relative};
          } else {
            return QCircle{quantize_field(c.radius, cpath + ".radius")};
          }
        },
        loop.curves[i]));
  }
  return q;
}

Loop dequantize_loop(const QLoop& q) {
  Loop loop;
  loop.start = dequantize_point(q.start);
  loop.closed = q.closed;
  for (const QCurve& qc : q.curves) {
    loop.curves.push_back(std::visit(
        [](const auto& c) -> CurveCmd {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, QLine>) {
            return Line{dequantize_point(c.end), c.relative};
          } else if constexpr (std::is_same_v<T, QArc>) {
            return Arc{dequantize_point(c.end), static_cast<double>(c.sweep_deg), c.clockwise,
                       c.relative};
          } else {
            return Circle{dequantize_coord(c.radius)};
          }
        },
        qc));
  }
  return loop;
}

QPlane quantize_plane(const Sketch& s, const std::string& path) {
  QPlane q;
  q.origin = {quantize_field(s.origin.x, path + ".origin.x"),
              quantize_field(s.origin.y, path + ".origin.y"),
              quantize_field(s.origin.z, path + ".origin.z")};
  const PlaneAngles a = plane_angles(s.x_axis, s.normal);
  q.theta = std::clamp(round_half_up(a.theta), 0, 180);
  q.phi = wrap_degrees(round_half_up(a.phi));
  q.gamma = wrap_degrees(round_half_up(a.gamma));
  // Canonical form at the poles, where phi and gamma rotate about the same axis.
  if (q.theta == 0) {
    q.gamma = wrap_degrees(q.phi + q.gamma);
    q.phi = 0;
  } else if (q.theta == 180) {
    q.gamma = wrap_degrees(q.gamma - q.phi);
    q.phi = 0;
  }
  return q;
}

}  // namespace

std::uint8_t quantize_coord(double v) { return quantize_field(v, "value"); }

double dequantize_coord(std::uint8_t k) { return 2.0 * k / 255.0 - 1.0; }

PlaneAngles plane_angles(Vec3 x_axis, Vec3 normal) {
  const Vec3 y_axis = cross(normal, x_axis);
  PlaneAngles a;
  const double nz = std::clamp(normal.z, -1.0, 1.0);
  if (nz > 1.0 - 1e-12) {
    a.theta = 0.0;
    a.gamma = wrap_degrees(degrees(std::atan2(x_axis.y, x_axis.x)));
  } else if (nz < -1.0 + 1e-12) {
    a.theta = 180.0;
    a.gamma = wrap_degrees(degrees(std::atan2(x_axis.y, -x_axis.x)));
  } else {
    a.theta = degrees(std::acos(nz));
    a.phi = wrap_degrees(degrees(std::atan2(normal.y, normal.x)));
    a.gamma = wrap_degrees(degrees(std::atan2(y_axis.z, -x_axis.z)));
  }
  return a;
}

void plane_axes(double theta_deg, double phi_deg, double gamma_deg, Vec3* x_axis,
                Vec3* normal) {
  double st, ct, sp, cp, sg, cg;
  sincos_deg(theta_deg, &st, &ct);
  sincos_deg(phi_deg, &sp, &cp);
  sincos_deg(gamma_deg, &sg, &cg);
  // Columns of Rz(phi) * Ry(theta) * Rz(gamma).
  *x_axis = {cp * ct * cg - sp * sg, sp * ct * cg + cp * sg, -st * cg};
  *normal = {cp * st, sp * st, ct};
}

QuantizedModel quantize(const CADModel& model) {
  QuantizedModel q;
  for (std::size_t i = 0; i < model.pairs.size(); ++i) {
    const SEPair& pair = model.pairs[i];
    const std::string path = "pairs[" + std::to_string(i) + "]";
    QSEPair qp;
    qp.sketch.plane = quantize_plane(pair.sketch, path + ".sketch");
    for (std::size_t f = 0; f < pair.sketch.faces.size(); ++f) {
      const Face& face = pair.sketch.faces[f];
      const std::string fpath = path + ".sketch.faces[" + std::to_string(f) + "]";
      QFace qf;
      qf.outer = quantize_loop(face.outer, fpath + ".outer");
      for (std::size_t h = 0; h < face.holes.size(); ++h) {
        qf.holes.push_back(quantize_loop(face.holes[h], fpath + ".holes[" + std::to_string(h) + "]"));
      }
      qp.sketch.faces.push_back(std::move(qf));
    }
    qp.dist_pos = quantize_field(pair.extrude.dist_pos, path + ".extrude.dist_pos");
    qp.dist_neg = quantize_field(pair.extrude.dist_neg, path + ".extrude.dist_neg");
    qp.op = pair.op;
    q.pairs.push_back(std::move(qp));
  }
  return q;
}

CADModel dequantize(const QuantizedModel& q) {
  CADModel model;
  for (const QSEPair& qp : q.pairs) {
    SEPair pair;
    const QPlane& plane = qp.sketch.plane;
    pair.sketch.origin = {dequantize_coord(plane.origin[0]), dequantize_coord(plane.origin[1]),
                          dequantize_coord(plane.origin[2])};
    plane_axes(plane.theta, plane.phi, plane.gamma, &pair.sketch.x_axis, &pair.sketch.normal);
    for (const QFace& qf : qp.sketch.faces) {
      Face face;
      face.outer = dequantize_loop(qf.outer);
      for (const QLoop& h : qf.holes) face.holes.push_back(dequantize_loop(h));
      pair.sketch.faces.push_back(std::move(face));
    }
    pair.extrude = {dequantize_coord(qp.dist_pos), dequantize_coord(qp.dist_neg)};
    pair.op = qp.op;
    model.pairs.push_back(std::move(pair));
  }
  return model;
}

}  // namespace recad
