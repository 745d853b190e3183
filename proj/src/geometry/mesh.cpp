#include "recad/geometry/mesh.hpp"

#include "recad/geometry/polygon.hpp"
#include "recad/geometry/solid.hpp"

namespace recad::geom {

namespace {

// Drops vertices lying exactly on the segment between their neighbours so the
// cap triangulation and the walls share every boundary edge.
Polyline2 drop_collinear(Polyline2 ring) {
  bool changed = true;
  while (changed && ring.vertices.size() > 3) {
    changed = false;
    auto& v = ring.vertices;
    for (std::size_t i = 0; i < v.size() && v.size() > 3; ++i) {
      const Point2 a = v[(i + v.size() - 1) % v.size()];
      const Point2 b = v[i];
      const Point2 c = v[(i + 1) % v.size()];
      if (cross(b - a, c - a) == 0.0 && dot(b - a, c - b) > 0.0) {
        v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
        changed = true;
        --i;
      }
    }
  }
  return ring;
}

}  // namespace

void TriMesh::append(const TriMesh& other) {
  const auto offset = static_cast<std::uint32_t>(vertices.size());
  vertices.insert(vertices.end(), other.vertices.begin(), other.vertices.end());
  for (const auto& t : other.triangles) triangles.push_back({t[0] + offset, t[1] + offset, t[2] + offset});
  tags.insert(tags.end(), other.tags.begin(), other.tags.end());
}

TriMesh extrude_mesh(const Sketch& sketch, const Extrude& extrude, double chord_tol,
                     std::uint32_t se_index) {
  const PlaneFrame frame = PlaneFrame::of(sketch);
  const double top = extrude.dist_pos;
  const double bottom = -extrude.dist_neg;
  TriMesh mesh;
  for (const Face& face : sketch.faces) {
    std::vector<Polyline2> rings;
    rings.push_back(drop_collinear(tessellate_loop(face.outer, chord_tol)));
    for (const Loop& h : face.holes) rings.push_back(drop_collinear(tessellate_loop(h, chord_tol)));
    const Triangulation tri = triangulate_polygon(rings);
    const auto n = static_cast<std::uint32_t>(tri.vertices.size());
    const auto base = static_cast<std::uint32_t>(mesh.vertices.size());
    for (Point2 p : tri.vertices) mesh.vertices.push_back(frame.to_world(p, top));
    for (Point2 p : tri.vertices) mesh.vertices.push_back(frame.to_world(p, bottom));
    for (const auto& t : tri.triangles) {
      mesh.triangles.push_back({base + t[0], base + t[1], base + t[2]});
      mesh.tags.push_back({se_index, TriangleKind::kTopCap});
    }
    for (const auto& t : tri.triangles) {
      mesh.triangles.push_back({base + n + t[0], base + n + t[2], base + n + t[1]});
      mesh.tags.push_back({se_index, TriangleKind::kBottomCap});
    }
    // Walls: traverse each ring with the region on its left (outer CCW, holes
    // CW); the outward side is then on the right of each edge.
    for (std::size_t r = 0; r < rings.size(); ++r) {
      const std::size_t begin = tri.ring_offsets[r];
      const std::size_t end = r + 1 < rings.size() ? tri.ring_offsets[r + 1] : tri.vertices.size();
      const std::size_t count = end - begin;
      const double area = signed_area(rings[r].vertices);
      const bool forward = (r == 0) == (area > 0.0);
      for (std::size_t k = 0; k < count; ++k) {
        std::uint32_t a = static_cast<std::uint32_t>(begin + k);
        std::uint32_t b = static_cast<std::uint32_t>(begin + (k + 1) % count);
        if (!forward) std::swap(a, b);
        const std::uint32_t a1 = base + a;
        const std::uint32_t b1 = base + b;
        const std::uint32_t a0 = base + n + a;
        const std::uint32_t b0 = base + n + b;
        mesh.triangles.push_back({a0, b0, b1});
        mesh.triangles.push_back({a0, b1, a1});
        mesh.tags.push_back({se_index, TriangleKind::kWall});
        mesh.tags.push_back({se_index, TriangleKind::kWall});
      }
    }
  }
  return mesh;
}

TriMesh model_mesh(const CADModel& model, double chord_tol) {
  TriMesh mesh;
  for (std::size_t i = 0; i < model.pairs.size(); ++i) {
    const SEPair& pair = model.pairs[i];
    mesh.append(extrude_mesh(pair.sketch, pair.extrude, chord_tol, static_cast<std::uint32_t>(i)));
  }
  return mesh;
}

double mesh_volume(const TriMesh& mesh) {
  double six = 0.0;
  for (const auto& t : mesh.triangles) {
    six += dot(mesh.vertices[t[0]], cross(mesh.vertices[t[1]], mesh.vertices[t[2]]));
  }
  return six / 6.0;
}

double triangle_area(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const Vec3 a = mesh.vertices[tri[0]];
  return 0.5 * norm(cross(mesh.vertices[tri[1]] - a, mesh.vertices[tri[2]] - a));
}

Vec3 triangle_normal(const TriMesh& mesh, std::size_t t) {
  const auto& tri = mesh.triangles[t];
  const Vec3 a = mesh.vertices[tri[0]];
  const Vec3 c = cross(mesh.vertices[tri[1]] - a, mesh.vertices[tri[2]] - a);
  const double len = norm(c);
  return len > 0.0 ? c * (1.0 / len) : Vec3{};
}

}  // namespace recad::geom
