#pragma once

// 8-bit quantization of model parameters.
//
// Positional values (coordinates, offsets, radii, origins, extrusion
// distances) in [-1, 1] map to round((v + 1) / 2 * 255) with round-half-up.
// Angles are whole degrees: arc sweeps directly, sketch planes as ZYZ Euler
// angles (theta in [0, 180], phi and gamma in [0, 360)) of the rotation that
// takes the world frame to (x_axis, y_axis, normal).

#include <array>
#include <cstdint>
#include <variant>
#include <vector>

#include "recad/cad_model.hpp"

namespace recad {

inline constexpr int kQuantLevels = 256;

std::uint8_t quantize_coord(double v);  // throws Error{kRange} outside [-1, 1]
double dequantize_coord(std::uint8_t k);

struct QPoint2 {
  std::uint8_t x = 0;
  std::uint8_t y = 0;
  friend bool operator==(const QPoint2&, const QPoint2&) = default;
};

struct QLine {
  QPoint2 end;
  bool relative = false;
  friend bool operator==(const QLine&, const QLine&) = default;
};

struct QArc {
  QPoint2 end;
  int sweep_deg = 90;  // [1, 359]
  bool clockwise = false;
  bool relative = false;
  friend bool operator==(const QArc&, const QArc&) = default;
};

struct QCircle {
  std::uint8_t radius = 0;
  friend bool operator==(const QCircle&, const QCircle&) = default;
};

using QCurve = std::variant<QLine, QArc, QCircle>;

struct QLoop {
  QPoint2 start;
  std::vector<QCurve> curves;
  bool closed = true;
  friend bool operator==(const QLoop&, const QLoop&) = default;
};

struct QFace {
  QLoop outer;
  std::vector<QLoop> holes;
  friend bool operator==(const QFace&, const QFace&) = default;
};

struct QPlane {
  std::array<std::uint8_t, 3> origin{};
  int theta = 0;  // [0, 180]; phi is 0 whenever theta is 0 or 180
  int phi = 0;    // [0, 360)
  int gamma = 0;  // [0, 360)
  friend bool operator==(const QPlane&, const QPlane&) = default;
};

struct QSketch {
  QPlane plane;
  std::vector<QFace> faces;
  friend bool operator==(const QSketch&, const QSketch&) = default;
};

struct QSEPair {
  QSketch sketch;
  std::uint8_t dist_pos = 0;
  std::uint8_t dist_neg = 0;
  BooleanOp op = BooleanOp::kNewBody;
  friend bool operator==(const QSEPair&, const QSEPair&) = default;
};

struct QuantizedModel {
  std::vector<QSEPair> pairs;
  friend bool operator==(const QuantizedModel&, const QuantizedModel&) = default;
};

QuantizedModel quantize(const CADModel& model);
CADModel dequantize(const QuantizedModel& q);

/// Whole-degree Euler angles of an orthonormal plane frame, canonicalised so
/// that phi = 0 at the poles. Angles are real-valued (not yet rounded).
struct PlaneAngles {
  double theta = 0.0;
  double phi = 0.0;
  double gamma = 0.0;
};

PlaneAngles plane_angles(Vec3 x_axis, Vec3 normal);
void plane_axes(double theta_deg, double phi_deg, double gamma_deg, Vec3* x_axis,
                Vec3* normal);

}  // namespace recad
