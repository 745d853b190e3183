#include "recad/geometry/polygon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recad/error.hpp"

namespace recad::geom {

namespace {

double orient(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
  const Point2 ab = b - a;
  const double len2 = dot(ab, ab);
  double t = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return norm(p - (a + ab * t));
}

struct Edge {
  Point2 a;
  Point2 b;
  int ring = 0;
  std::size_t index = 0;  // position within its ring
  double min_x = 0.0;
  double max_x = 0.0;
};

void collect_edges(std::span<const Point2> ring, int ring_id, std::vector<Edge>* out) {
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) {
    Edge e{ring[i], ring[(i + 1) % n], ring_id, i, 0.0, 0.0};
    e.min_x = std::min(e.a.x, e.b.x);
    e.max_x = std::max(e.a.x, e.b.x);
    out->push_back(e);
  }
}

// Calls fn(e1, e2) for every pair of edges whose x-ranges overlap; stops when
// fn returns true and reports whether it did.
template <typename Fn>
bool any_edge_pair(std::vector<Edge>& edges, Fn fn) {
  std::sort(edges.begin(), edges.end(),
            [](const Edge& l, const Edge& r) { return l.min_x < r.min_x; });
  for (std::size_t i = 0; i < edges.size(); ++i) {
    for (std::size_t j = i + 1; j < edges.size() && edges[j].min_x <= edges[i].max_x; ++j) {
      if (fn(edges[i], edges[j])) return true;
    }
  }
  return false;
}

bool segments_touch(Point2 a, Point2 b, Point2 c, Point2 d) {
  constexpr double kTouch = 1e-12;
  return segments_cross(a, b, c, d) || point_segment_distance(a, c, d) <= kTouch ||
         point_segment_distance(b, c, d) <= kTouch || point_segment_distance(c, a, b) <= kTouch ||
         point_segment_distance(d, a, b) <= kTouch;
}

}  // namespace

double signed_area(std::span<const Point2> ring) {
  double twice = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(ring[i], ring[(i + 1) % n]);
  return twice / 2.0;
}

void Bounds2::add(Point2 p) {
  min.x = std::min(min.x, p.x);
  min.y = std::min(min.y, p.y);
  max.x = std::max(max.x, p.x);
  max.y = std::max(max.y, p.y);
}

bool Bounds2::contains(Point2 p, double pad) const {
  return p.x >= min.x - pad && p.x <= max.x + pad && p.y >= min.y - pad && p.y <= max.y + pad;
}

double Bounds2::diagonal() const { return min.x > max.x ? 0.0 : norm(max - min); }

Bounds2 bounds_of(std::span<const Point2> ring) {
  Bounds2 b;
  for (Point2 p : ring) b.add(p);
  return b;
}

Side classify_point(std::span<const Point2> ring, Point2 p) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point2 a = ring[j];
    const Point2 b = ring[i];
    if (p.x >= std::min(a.x, b.x) - kBoundaryTolerance &&
        p.x <= std::max(a.x, b.x) + kBoundaryTolerance &&
        p.y >= std::min(a.y, b.y) - kBoundaryTolerance &&
        p.y <= std::max(a.y, b.y) + kBoundaryTolerance &&
        point_segment_distance(p, a, b) <= kBoundaryTolerance) {
      return Side::kBoundary;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside ? Side::kInside : Side::kOutside;
}

bool point_in_rings(std::span<const Polyline2> rings, Point2 p) {
  bool inside = false;
  for (const Polyline2& ring : rings) {
    switch (classify_point(ring.vertices, p)) {
      case Side::kBoundary: return true;
      case Side::kInside: inside = !inside; break;
      case Side::kOutside: break;
    }
  }
  return inside;
}

bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  const double d1 = orient(a, b, c);
  const double d2 = orient(a, b, d);
  const double d3 = orient(c, d, a);
  const double d4 = orient(c, d, b);
  return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
         ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

bool ring_self_intersects(std::span<const Point2> ring) {
  const std::size_t n = ring.size();
  if (n < 4) return false;
  std::vector<Edge> edges;
  collect_edges(ring, 0, &edges);
  return any_edge_pair(edges, [n](const Edge& e1, const Edge& e2) {
    const std::size_t gap = e1.index > e2.index ? e1.index - e2.index : e2.index - e1.index;
    if (gap == 1 || gap == n - 1) return false;  // adjacent edges share a vertex
    return segments_touch(e1.a, e1.b, e2.a, e2.b);
  });
}

bool rings_cross(std::span<const Point2> a, std::span<const Point2> b) {
  std::vector<Edge> edges;
  collect_edges(a, 0, &edges);
  collect_edges(b, 1, &edges);
  return any_edge_pair(edges, [](const Edge& e1, const Edge& e2) {
    return e1.ring != e2.ring && segments_cross(e1.a, e1.b, e2.a, e2.b);
  });
}

// ---------------------------------------------------------------------------
// Ear clipping with hole bridging.

namespace {

class EarClipper {
 public:
  explicit EarClipper(const Triangulation& t) : vertices_(t.vertices) {}

  // Appends ring `r` (vertex indices [begin, end)) as a circular list in the
  // requested orientation and returns one of its nodes.
  int add_ring(std::size_t begin, std::size_t end, bool ccw) {
    std::span<const Point2> ring(vertices_.data() + begin, end - begin);
    const bool is_ccw = signed_area(ring) > 0.0;
    const std::size_t n = end - begin;
    int first = -1;
    int last = -1;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t idx = (is_ccw == ccw) ? begin + k : end - 1 - k;
      const int node = new_node(static_cast<std::uint32_t>(idx));
      if (first < 0) {
        first = node;
      } else {
        nodes_[last].next = node;
        nodes_[node].prev = last;
      }
      last = node;
    }
    nodes_[last].next = first;
    nodes_[first].prev = last;
    return first;
  }

  void eliminate_holes(int outer, std::vector<int> holes) {
    std::vector<std::pair<double, int>> order;
    for (int h : holes) {
      int left = h;
      int node = h;
      do {
        const Point2 p = pt(node);
        const Point2 l = pt(left);
        if (p.x < l.x || (p.x == l.x && p.y < l.y)) left = node;
        node = nodes_[node].next;
      } while (node != h);
      order.emplace_back(pt(left).x, left);
    }
    // Leftmost holes first, each bridged leftwards to the boundary so far.
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [x, hole] : order) {
      const int bridge = find_bridge(hole, outer);
      if (bridge < 0) throw Error(ErrorCategory::kGeometry, "triangulation: hole is not inside the face");
      split(bridge, hole);
    }
  }

  void clip(int start, std::vector<std::array<std::uint32_t, 3>>* out) {
    int ear = start;
    int stop = ear;
    std::size_t remaining = count(start);
    while (remaining > 3) {
      const int prev = nodes_[ear].prev;
      const int next = nodes_[ear].next;
      if (is_ear(ear)) {
        out->push_back({nodes_[prev].index, nodes_[ear].index, nodes_[next].index});
        unlink(ear);
        --remaining;
        ear = next;
        stop = ear;
        continue;
      }
      ear = next;
      if (ear == stop) {
        // A full pass without an ear: drop one degenerate (collinear or
        // duplicated) vertex and retry.
        const int degenerate = find_degenerate(ear);
        if (degenerate < 0) throw Error(ErrorCategory::kGeometry, "triangulation failed: polygon is not simple");
        ear = nodes_[degenerate].next;
        unlink(degenerate);
        --remaining;
        stop = ear;
      }
    }
    if (remaining == 3) {
      const int a = nodes_[ear].prev;
      const int c = nodes_[ear].next;
      if (orient(pt(a), pt(ear), pt(c)) > 0.0) {
        out->push_back({nodes_[a].index, nodes_[ear].index, nodes_[c].index});
      }
    }
  }

 private:
  struct Node {
    std::uint32_t index = 0;
    int prev = -1;
    int next = -1;
  };

  int new_node(std::uint32_t index) {
    nodes_.push_back({index, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }

  Point2 pt(int node) const { return vertices_[nodes_[node].index]; }

  std::size_t count(int start) const {
    std::size_t n = 0;
    int node = start;
    do {
      ++n;
      node = nodes_[node].next;
    } while (node != start);
    return n;
  }

  void unlink(int node) {
    nodes_[nodes_[node].prev].next = nodes_[node].next;
    nodes_[nodes_[node].next].prev = nodes_[node].prev;
  }

  bool same_point(int a, int b) const { return pt(a) == pt(b); }

  static bool in_triangle(Point2 a, Point2 b, Point2 c, Point2 p) {
    return orient(a, b, p) >= 0.0 && orient(b, c, p) >= 0.0 && orient(c, a, p) >= 0.0;
  }

  bool is_ear(int ear) const {
    const int prev = nodes_[ear].prev;
    const int next = nodes_[ear].next;
    const Point2 a = pt(prev);
    const Point2 b = pt(ear);
    const Point2 c = pt(next);
    if (orient(a, b, c) <= 0.0) return false;
    const double min_x = std::min({a.x, b.x, c.x});
    const double max_x = std::max({a.x, b.x, c.x});
    const double min_y = std::min({a.y, b.y, c.y});
    const double max_y = std::max({a.y, b.y, c.y});
    for (int node = nodes_[next].next; node != prev; node = nodes_[node].next) {
      const Point2 p = pt(node);
      if (p.x < min_x || p.x > max_x || p.y < min_y || p.y > max_y) continue;
      if (p == a || p == b || p == c) continue;
      if (in_triangle(a, b, c, p)) return false;
    }
    return true;
  }

  int find_degenerate(int start) const {
    int node = start;
    do {
      const int prev = nodes_[node].prev;
      const int next = nodes_[node].next;
      if (same_point(node, next) || orient(pt(prev), pt(node), pt(next)) == 0.0) return node;
      node = next;
    } while (node != start);
    return -1;
  }

  // Whether direction towards p lies inside the polygon's interior angle at a.
  bool locally_inside(int a, Point2 p) const {
    const Point2 prev = pt(nodes_[a].prev);
    const Point2 here = pt(a);
    const Point2 next = pt(nodes_[a].next);
    if (orient(prev, here, next) >= 0.0) {
      return orient(prev, here, p) >= 0.0 && orient(here, next, p) >= 0.0;
    }
    return orient(prev, here, p) >= 0.0 || orient(here, next, p) >= 0.0;
  }

  // Vertex of the outer list visible from the hole's leftmost vertex, found by
  // casting a ray towards -x.
  int find_bridge(int hole, int outer) const {
    const Point2 m = pt(hole);
    double best_x = -1e300;
    int edge = -1;
    int node = outer;
    do {
      const Point2 a = pt(node);
      const Point2 b = pt(nodes_[node].next);
      if (m.y <= std::max(a.y, b.y) && m.y >= std::min(a.y, b.y) && a.y != b.y) {
        const double x = a.x + (m.y - a.y) * (b.x - a.x) / (b.y - a.y);
        if (x <= m.x && x > best_x) {
          best_x = x;
          edge = a.x < b.x ? node : nodes_[node].next;
          if (x == m.x) return m.y == a.y ? node : (m.y == b.y ? nodes_[node].next : edge);
        }
      }
      node = nodes_[node].next;
    } while (node != outer);
    return edge < 0 ? -1 : refine_bridge(hole, outer, edge, best_x);
  }

  int refine_bridge(int hole, int outer, int candidate, double hit_x) const {
    const Point2 m = pt(hole);
    const Point2 p = pt(candidate);
    const Point2 hit{hit_x, m.y};
    int best = candidate;
    double best_tan = 1e300;
    int node = outer;
    do {
      const Point2 q = pt(node);
      const bool in_sector = (m.x >= q.x && q.x >= p.x && m.x != q.x) &&
                             (m.y < p.y ? in_triangle(hit, m, p, q) || in_triangle(m, hit, p, q)
                                        : in_triangle(m, hit, p, q) || in_triangle(hit, m, p, q));
      if (in_sector && locally_inside(node, m)) {
        const double t = std::abs(m.y - q.y) / (m.x - q.x);
        if (t < best_tan || (t == best_tan && q.x > pt(best).x)) {
          best = node;
          best_tan = t;
        }
      }
      node = nodes_[node].next;
    } while (node != outer);
    // Among coincident copies (from earlier bridges) pick one whose interior
    // angle contains the bridge direction.
    node = outer;
    do {
      if (pt(node) == pt(best) && locally_inside(node, m)) return node;
      node = nodes_[node].next;
    } while (node != outer);
    return best;
  }

  // Connects outer node a with hole node b by a doubled edge.
  void split(int a, int b) {
    const int a2 = new_node(nodes_[a].index);
    const int b2 = new_node(nodes_[b].index);
    const int an = nodes_[a].next;
    const int bp = nodes_[b].prev;
    nodes_[a].next = b;
    nodes_[b].prev = a;
    nodes_[a2].next = an;
    nodes_[an].prev = a2;
    nodes_[b2].next = a2;
    nodes_[a2].prev = b2;
    nodes_[bp].next = b2;
    nodes_[b2].prev = bp;
  }

  const std::vector<Point2>& vertices_;
  std::vector<Node> nodes_;
};

}  // namespace

Triangulation triangulate_polygon(std::span<const Polyline2> rings) {
  if (rings.empty()) throw Error(ErrorCategory::kGeometry, "triangulation: no rings");
  Triangulation t;
  for (const Polyline2& ring : rings) {
    if (ring.vertices.size() < 3) throw Error(ErrorCategory::kGeometry, "degenerate face: ring with fewer than 3 vertices");
    t.ring_offsets.push_back(t.vertices.size());
    t.vertices.insert(t.vertices.end(), ring.vertices.begin(), ring.vertices.end());
  }
  const double outer_area = std::abs(signed_area(rings[0].vertices));
  const double scale = bounds_of(rings[0].vertices).diagonal();
  if (!(outer_area > 1e-12 * std::max(1.0, scale * scale))) {
    throw Error(ErrorCategory::kGeometry, "degenerate face: zero area");
  }
  for (std::size_t r = 0; r < rings.size(); ++r) {
    if (ring_self_intersects(rings[r].vertices)) {
      throw Error(ErrorCategory::kGeometry, "self-intersecting face boundary");
    }
    for (std::size_t s = r + 1; s < rings.size(); ++s) {
      if (rings_cross(rings[r].vertices, rings[s].vertices)) {
        throw Error(ErrorCategory::kGeometry, "face boundaries intersect");
      }
    }
  }
  EarClipper clipper(t);
  const std::size_t total = t.vertices.size();
  auto ring_end = [&](std::size_t r) {
    return r + 1 < t.ring_offsets.size() ? t.ring_offsets[r + 1] : total;
  };
  const int outer = clipper.add_ring(0, ring_end(0), /*ccw=*/true);
  std::vector<int> holes;
  for (std::size_t r = 1; r < rings.size(); ++r) {
    holes.push_back(clipper.add_ring(t.ring_offsets[r], ring_end(r), /*ccw=*/false));
  }
  clipper.eliminate_holes(outer, holes);
  clipper.clip(outer, &t.triangles);
  return t;
}

Triangulation triangulate_face(const Face& face, double chord_tol) {
  std::vector<Polyline2> rings;
  rings.push_back(tessellate_loop(face.outer, chord_tol));
  for (const Loop& h : face.holes) rings.push_back(tessellate_loop(h, chord_tol));
  return triangulate_polygon(rings);
}

double triangulation_area(const Triangulation& t) {
  double area = 0.0;
  for (const auto& tri : t.triangles) {
    area += orient(t.vertices[tri[0]], t.vertices[tri[1]], t.vertices[tri[2]]) / 2.0;
  }
  return area;
}

}  // namespace recad::geom
