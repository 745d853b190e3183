#pragma once

// Model builders and random generators shared by unit and acceptance tests.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "recad/cad_model.hpp"

namespace recad::testing {

inline Loop square_loop(double x0, double y0, double side) {
  Loop loop;
  loop.start = {x0, y0};
  loop.curves = {Line{{x0 + side, y0}}, Line{{x0 + side, y0 + side}}, Line{{x0, y0 + side}},
                 Line{{x0, y0}}};
  return loop;
}

inline Loop rect_loop(double x0, double y0, double w, double h) {
  Loop loop;
  loop.start = {x0, y0};
  loop.curves = {Line{{x0 + w, y0}}, Line{{x0 + w, y0 + h}}, Line{{x0, y0 + h}}, Line{{x0, y0}}};
  return loop;
}

inline Loop circle_loop(double cx, double cy, double r) {
  Loop loop;
  loop.start = {cx, cy};
  loop.curves = {Circle{r}};
  return loop;
}

/// Regular n-gon with vertices on the circle of radius r about (cx, cy).
inline Loop polygon_loop(double cx, double cy, double r, int n) {
  Loop loop;
  loop.start = {cx + r, cy};
  for (int i = 1; i <= n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    loop.curves.push_back(Line{i == n ? loop.start : Point2{cx + r * std::cos(a), cy + r * std::sin(a)}});
  }
  return loop;
}

inline SEPair prism(std::vector<Face> faces, double dist_pos, double dist_neg = 0.0,
                    BooleanOp op = BooleanOp::kNewBody, Vec3 origin = {}) {
  SEPair pair;
  pair.sketch.origin = origin;
  pair.sketch.faces = std::move(faces);
  pair.extrude = {dist_pos, dist_neg};
  pair.op = op;
  return pair;
}

/// Axis-aligned cube [x0, x0+s] x [y0, y0+s] x [z0, z0+s].
inline CADModel cube(double s = 1.0, Vec3 corner = {}) {
  return {{prism({Face{square_loop(corner.x, corner.y, s), {}}}, s, 0.0, BooleanOp::kNewBody,
                 {0.0, 0.0, corner.z})}};
}

/// Cube of side s centred at the origin minus a coaxial z cylinder of radius r
/// through its full height.
inline CADModel cube_minus_cylinder(double s, double r) {
  CADModel m;
  m.pairs.push_back(prism({Face{square_loop(-s / 2, -s / 2, s), {}}}, s / 2, s / 2));
  m.pairs.push_back(prism({Face{circle_loop(0.0, 0.0, r), {}}}, s / 2, s / 2, BooleanOp::kCut));
  return m;
}

// ---------------------------------------------------------------------------
// Random valid primitives

class Generator {
 public:
  explicit Generator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  // A convex-ish loop inside the disc of radius r about (cx, cy): a circle, a
  // polygon, or a polygon with one edge replaced by an outward arc.
  Loop loop(double cx, double cy, double r) {
    const int kind = integer(0, 2);
    if (kind == 0) {
      const double radius = r * uniform(0.4, 1.0);
      inradius_ = radius;
      return circle_loop(cx, cy, radius);
    }
    const int n = integer(3, 7);
    std::vector<Point2> pts;
    const double phase = uniform(0.0, 2.0 * std::numbers::pi);
    for (int i = 0; i < n; ++i) {
      const double a = phase + 2.0 * std::numbers::pi * (i + uniform(-0.2, 0.2)) / n;
      const double rad = r * uniform(0.6, 0.9);
      pts.push_back({cx + rad * std::cos(a), cy + rad * std::sin(a)});
    }
    inradius_ = r;
    for (int i = 0; i < n; ++i) {
      const Point2 a = pts[i];
      const Point2 ab = pts[(i + 1) % n] - a;
      const double t = std::clamp(dot(Point2{cx, cy} - a, ab) / dot(ab, ab), 0.0, 1.0);
      inradius_ = std::min(inradius_, norm(Point2{cx, cy} - (a + ab * t)));
    }
    Loop l;
    l.start = pts[0];
    const bool relative = coin();
    for (int i = 1; i <= n; ++i) {
      const Point2 from = pts[i - 1];
      const Point2 to = pts[i % n];
      const Point2 end = relative ? to - from : to;
      if (kind == 2 && i == n) {
        // Counter-clockwise polygon: a short counter-clockwise arc bulges to
        // the right of its chord, i.e. outwards.
        l.curves.push_back(Arc{end, uniform(20.0, 60.0), false, relative});
      } else {
        l.curves.push_back(Line{end, relative});
      }
    }
    return l;
  }

  Face face(double cx, double cy, double r) {
    Face f;
    f.outer = loop(cx, cy, r);
    if (coin()) f.holes.push_back(circle_loop(cx, cy, inradius_ * uniform(0.3, 0.7)));
    return f;
  }

  Sketch sketch() {
    Sketch s;
    const int faces = integer(1, 2);
    for (int i = 0; i < faces; ++i) {
      const double cx = faces == 1 ? uniform(-0.1, 0.1) : (i == 0 ? -0.4 : 0.4);
      s.faces.push_back(face(cx, uniform(-0.1, 0.1), faces == 1 ? uniform(0.3, 0.6) : 0.35));
    }
    return s;
  }

  SEPair se_pair() {
    SEPair p;
    p.sketch = sketch();
    const int plane = integer(0, 2);
    if (plane == 1) {
      p.sketch.x_axis = {0.0, 1.0, 0.0};
      p.sketch.normal = {1.0, 0.0, 0.0};
    } else if (plane == 2) {
      p.sketch.x_axis = {1.0, 0.0, 0.0};
      p.sketch.normal = {0.0, -1.0, 0.0};
    }
    p.sketch.origin = {uniform(-0.1, 0.1), uniform(-0.1, 0.1), uniform(-0.1, 0.1)};
    p.extrude = {uniform(0.1, 0.4), coin() ? uniform(0.05, 0.3) : 0.0};
    return p;
  }

  CADModel model() {
    CADModel m;
    m.pairs.push_back(se_pair());
    if (coin()) {
      SEPair second = se_pair();
      second.op = coin() ? BooleanOp::kJoin : BooleanOp::kCut;
      if (second.op == BooleanOp::kCut) {
        // A small through-hole so the cut never removes everything.
        second.sketch.faces = {Face{circle_loop(0.0, 0.0, uniform(0.05, 0.15)), {}}};
        second.sketch.x_axis = m.pairs[0].sketch.x_axis;
        second.sketch.normal = m.pairs[0].sketch.normal;
        second.sketch.origin = m.pairs[0].sketch.origin;
        second.extrude = {1.0, 1.0};
      }
      m.pairs.push_back(second);
    }
    return m;
  }

  Primitive primitive() {
    switch (integer(0, 4)) {
      case 0: return loop(0.0, 0.0, uniform(0.3, 0.8));
      case 1: return face(0.0, 0.0, uniform(0.3, 0.8));
      case 2: return sketch();
      case 3: return se_pair();
      default: return model();
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
  double inradius_ = 0.0;
};

}  // namespace recad::testing
