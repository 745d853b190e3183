#include <doctest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "../support/builders.hpp"
#include "recad/error.hpp"
#include "recad/geometry/curves.hpp"
#include "recad/geometry/export.hpp"
#include "recad/geometry/mass.hpp"
#include "recad/geometry/mesh.hpp"
#include "recad/geometry/polygon.hpp"
#include "recad/geometry/sampling.hpp"
#include "recad/geometry/solid.hpp"
#include "recad/geometry/voxel.hpp"

using namespace recad;
using namespace recad::geom;
using namespace recad::testing;

namespace {

constexpr double kPi = std::numbers::pi;

double voxel_volume(const VoxelGrid& g) {
  return static_cast<double>(g.count()) * g.cell * g.cell * g.cell;
}

double grid_iou(const VoxelGrid& a, const VoxelGrid& b) {
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.occupancy.size(); ++i) {
    inter += a.occupancy[i] & b.occupancy[i];
    uni += a.occupancy[i] | b.occupancy[i];
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

VoxelGrid filled_sphere(double radius, int res) {
  VoxelGrid g = make_centered_grid(radius * 1.1, res);
  for (int k = 0; k < res; ++k)
    for (int j = 0; j < res; ++j)
      for (int i = 0; i < res; ++i)
        if (norm(g.center(i, j, k)) <= radius) g.occupancy[g.index(i, j, k)] = 1;
  return g;
}

}  // namespace

TEST_CASE("solve_arc examples") {
  const ArcGeometry semi = solve_arc({1, 0}, {-1, 0}, 180.0, false);
  CHECK(semi.center.x == doctest::Approx(0.0));
  CHECK(semi.center.y == doctest::Approx(0.0));
  CHECK(semi.radius == doctest::Approx(1.0));

  const ArcGeometry quarter = solve_arc({1, 0}, {0, 1}, 90.0, false);
  CHECK(std::abs(quarter.center.x) < 1e-12);
  CHECK(std::abs(quarter.center.y) < 1e-12);
  CHECK(quarter.radius == doctest::Approx(1.0).epsilon(1e-12));

  // Walking the sweep from the start reaches the end.
  for (bool cw : {false, true}) {
    for (double sweep : {15.0, 90.0, 179.0, 181.0, 300.0}) {
      const Point2 s{0.3, -0.2};
      const Point2 e{-0.1, 0.45};
      const ArcGeometry arc = solve_arc(s, e, sweep, cw);
      const double a0 = std::atan2(s.y - arc.center.y, s.x - arc.center.x);
      const double a = a0 + (cw ? -1.0 : 1.0) * sweep * kPi / 180.0;
      CHECK(std::abs(arc.center.x + arc.radius * std::cos(a) - e.x) < 1e-9);
      CHECK(std::abs(arc.center.y + arc.radius * std::sin(a) - e.y) < 1e-9);
    }
  }

  CHECK_THROWS_AS(solve_arc({1, 0}, {0, 1}, 0.0, false), Error);
  CHECK_THROWS_AS(solve_arc({1, 0}, {0, 1}, 360.0, false), Error);
  CHECK_THROWS_AS(solve_arc({1, 0}, {1, 0}, 90.0, false), Error);
}

TEST_CASE("tessellate_loop") {
  CHECK(tessellate_loop(square_loop(0, 0, 1), 1e-3).vertices.size() == 4);

  const Polyline2 circle = tessellate_loop(circle_loop(0.0, 0.0, 1.0), 1e-3);
  const auto min_n = static_cast<std::size_t>(std::ceil(kPi / std::acos(1.0 - 1e-3)));
  CHECK(circle.vertices.size() >= min_n);
  for (Point2 p : circle.vertices) CHECK(std::abs(norm(p) - 1.0) <= 1e-9);
  // Sagitta bound on every chord.
  for (std::size_t i = 0; i < circle.vertices.size(); ++i) {
    const Point2 mid = (circle.vertices[i] + circle.vertices[(i + 1) % circle.vertices.size()]) * 0.5;
    CHECK(1.0 - norm(mid) <= 1e-3 + 1e-12);
  }

  CHECK(arc_segment_count(1.0, 180.0, 1.0) == kMinCurveSegments);
  Loop semi;
  semi.start = {1, 0};
  semi.curves = {Arc{{-1, 0}, 180.0, false, false}, Line{{1, 0}}};
  CHECK(tessellate_loop(semi, 1.0).vertices.size() == kMinCurveSegments + 1);
}

TEST_CASE("resolve_loop relative moves and implicit close") {
  Loop loop;
  loop.start = {0.5, 0.5};
  loop.curves = {Line{{1, 0}, true}, Line{{0, 1}, true}, Line{{-1, 0}, true}};
  const auto segs = resolve_loop(loop);
  REQUIRE(segs.size() == 4);
  CHECK(segs[2].to == Point2{0.5, 1.5});
  CHECK(segs[3].to == loop.start);
  CHECK(closure_gap(loop) == doctest::Approx(1.0));
}

TEST_CASE("triangulate_face") {
  const Triangulation sq = triangulate_face(Face{square_loop(0, 0, 1), {}}, 1e-3);
  CHECK(sq.triangles.size() == 2);
  CHECK(triangulation_area(sq) == doctest::Approx(1.0));

  const Triangulation holed = triangulate_face(
      Face{square_loop(0, 0, 1), {square_loop(0.25, 0.25, 0.5)}}, 1e-3);
  CHECK(triangulation_area(holed) == doctest::Approx(0.75).epsilon(1e-9));

  Loop flat;
  flat.start = {0, 0};
  flat.curves = {Line{{1, 0}}, Line{{2, 0}}, Line{{0, 0}}};
  CHECK_THROWS_AS(triangulate_face(Face{flat, {}}, 1e-3), Error);

  Loop bowtie;
  bowtie.start = {0, 0};
  bowtie.curves = {Line{{1, 1}}, Line{{1, 0}}, Line{{0, 1}}, Line{{0, 0}}};
  CHECK_THROWS_AS(triangulate_face(Face{bowtie, {}}, 1e-3), Error);
}

TEST_CASE("triangulation area identity on random faces with holes") {
  Generator gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Face face = gen.face(0.0, 0.0, gen.uniform(0.2, 0.9));
    std::vector<Polyline2> rings{tessellate_loop(face.outer, 1e-3)};
    for (const Loop& h : face.holes) rings.push_back(tessellate_loop(h, 1e-3));
    double expected = std::abs(signed_area(rings[0].vertices));
    for (std::size_t r = 1; r < rings.size(); ++r) expected -= std::abs(signed_area(rings[r].vertices));
    const Triangulation t = triangulate_polygon(rings);
    CHECK(std::abs(triangulation_area(t) - expected) <= 1e-6 * expected);
    for (const auto& tri : t.triangles) {
      const Point2 a = t.vertices[tri[0]];
      CHECK(cross(t.vertices[tri[1]] - a, t.vertices[tri[2]] - a) > 0.0);
    }
  }
}

TEST_CASE("triangulation of a concave comb with several holes") {
  Loop comb;
  comb.start = {0, 0};
  comb.curves = {Line{{5, 0}}, Line{{5, 3}}, Line{{4, 3}}, Line{{4, 1}}, Line{{3, 1}},
                 Line{{3, 3}}, Line{{2, 3}}, Line{{2, 1}}, Line{{1, 1}}, Line{{1, 3}},
                 Line{{0, 3}}, Line{{0, 0}}};
  Face face{comb, {square_loop(0.2, 0.2, 0.5), square_loop(1.2, 0.2, 0.5), square_loop(4.2, 0.2, 0.5),
                   circle_loop(0.5, 2.0, 0.3)}};
  const Triangulation t = triangulate_face(face, 1e-3);
  const double circle = std::abs(signed_area(tessellate_loop(circle_loop(0.5, 2.0, 0.3), 1e-3).vertices));
  CHECK(triangulation_area(t) == doctest::Approx(11.0 - 3 * 0.25 - circle).epsilon(1e-9));
}

TEST_CASE("extrude_mesh volumes and watertightness") {
  const Sketch unit{{}, {1, 0, 0}, {0, 0, 1}, {Face{square_loop(0, 0, 1), {}}}};
  const TriMesh cube_mesh = extrude_mesh(unit, {1.0, 0.0}, 1e-3);
  CHECK(mesh_volume(cube_mesh) == doctest::Approx(1.0));

  const TriMesh straddle = extrude_mesh(unit, {0.5, 0.5}, 1e-3);
  CHECK(mesh_volume(straddle) == doctest::Approx(1.0));
  double zmin = 1e9, zmax = -1e9;
  for (Vec3 v : straddle.vertices) {
    zmin = std::min(zmin, v.z);
    zmax = std::max(zmax, v.z);
  }
  CHECK(zmin == -0.5);
  CHECK(zmax == 0.5);

  const double r = 0.4, h = 0.7;
  double previous_error = 1.0;
  for (double tol : {1e-2, 1e-3, 1e-4}) {
    const Sketch disc{{}, {1, 0, 0}, {0, 0, 1}, {Face{circle_loop(0, 0, r), {}}}};
    const double err = std::abs(mesh_volume(extrude_mesh(disc, {h, 0}, tol)) - kPi * r * r * h);
    CHECK(err < previous_error);
    previous_error = err;
  }
  CHECK(previous_error / (kPi * r * r * h) < 5e-4);

  // Each undirected edge is used by exactly two triangles, once per direction.
  Generator gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    const SEPair p = gen.se_pair();
    const TriMesh m = extrude_mesh(p.sketch, p.extrude, 1e-3);
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (const auto& t : m.triangles) {
      for (int e = 0; e < 3; ++e) ++directed[{t[e], t[(e + 1) % 3]}];
    }
    bool watertight = true;
    for (const auto& [edge, count] : directed) {
      const auto rev = directed.find({edge.second, edge.first});
      watertight &= count == 1 && rev != directed.end() && rev->second == 1;
    }
    CHECK(watertight);
    for (std::size_t t = 0; t < m.triangles.size(); ++t) CHECK(triangle_area(m, t) > 1e-14);
    CHECK(mesh_volume(m) > 0.0);
  }
}

TEST_CASE("point membership") {
  const Face holed{square_loop(0, 0, 1), {square_loop(0.25, 0.25, 0.5)}};
  CHECK(point_in_face(Face{square_loop(0, 0, 1), {}}, {0.5, 0.5}, 1e-3));
  CHECK_FALSE(point_in_face(holed, {0.5, 0.5}, 1e-3));
  CHECK(point_in_face(holed, {1.0, 0.5}, 1e-3));
  CHECK(point_in_face(holed, {0.25, 0.5}, 1e-3));

  const CADModel c = cube();
  CHECK(point_in_se(c.pairs[0], {0.5, 0.5, 0.5}, 1e-3));
  CHECK_FALSE(point_in_se(c.pairs[0], {0.5, 0.5, 1.0 + 1e-6}, 1e-3));
  const SEPair holed_se = prism({holed}, 1.0);
  CHECK_FALSE(point_in_se(holed_se, {0.5, 0.5, 0.5}, 1e-3));

  const CADModel cut = cube_minus_cylinder(1.0, 0.3);
  CHECK_FALSE(membership(cut, {0, 0, 0}, 1e-3));
  CHECK(membership(cut, {0.45, 0.45, 0.45}, 1e-3));
  CHECK_FALSE(membership(cube(), {2, 0.5, 0.5}, 1e-3));

  CADModel inter = cube();
  inter.pairs.push_back(prism({Face{square_loop(0.5, 0.5, 1), {}}}, 1.0, 0.0, BooleanOp::kIntersect));
  CHECK(membership(inter, {0.75, 0.75, 0.5}, 1e-3));
  CHECK_FALSE(membership(inter, {0.25, 0.25, 0.5}, 1e-3));
}

TEST_CASE("voxelize volumes") {
  const VoxelGrid g64 = voxelize(cube(), 64);
  CHECK(voxel_volume(g64) == doctest::Approx(1.0).epsilon(0.05));

  // Exact-fit bounds: every cell centre lies inside.
  const VoxelGrid fit = voxelize(cube(), 64, Box3{{0, 0, 0}, {1, 1, 1}});
  CHECK(fit.count() == fit.size());

  const VoxelGrid g128 = voxelize(cube(), 128);
  CHECK(voxel_volume(g128) == doctest::Approx(1.0).epsilon(0.02));

  const double s = 1.0, r = 0.3;
  const VoxelGrid cut = voxelize(cube_minus_cylinder(s, r), 128);
  CHECK(voxel_volume(cut) == doctest::Approx(s * s * s - kPi * r * r * s).epsilon(0.02));

  const VoxelGrid empty = voxelize(CADModel{}, 16);
  CHECK(empty.empty());
  CHECK_THROWS_AS(voxelize(cube(), 4), Error);
}

TEST_CASE("voxel occupancy matches an independent per-point fold") {
  Generator gen(3);
  for (int trial = 0; trial < 6; ++trial) {
    const CADModel m = gen.model();
    const VoxelGrid g = voxelize(m, 24);
    const double tol = default_chord_tol(m);
    bool same = true;
    for (int k = g.dims[2] - 1; k >= 0; --k) {
      for (int i = 0; i < g.dims[0]; ++i) {
        for (int j = g.dims[1] - 1; j >= 0; --j) {
          const Vec3 c = g.center(i, j, k);
          bool acc = false;
          for (const SEPair& p : m.pairs) {
            const bool in = point_in_se(p, c, tol);
            switch (p.op) {
              case BooleanOp::kNewBody:
              case BooleanOp::kJoin: acc = acc || in; break;
              case BooleanOp::kCut: acc = acc && !in; break;
              case BooleanOp::kIntersect: acc = acc && in; break;
            }
          }
          same &= acc == g.at(i, j, k);
        }
      }
    }
    CHECK(same);
  }
}

TEST_CASE("mass properties") {
  const MassProperties cube_props = mass_properties(voxelize(cube(), 128, Box3{{0, 0, 0}, {1, 1, 1}}));
  CHECK(cube_props.volume == doctest::Approx(1.0));
  CHECK(cube_props.inertia_trace / (2 * cube_props.volume) == doctest::Approx(0.25).epsilon(0.02));
  CHECK(cube_props.centroid.x == doctest::Approx(0.5));

  const double R = 0.8;
  const MassProperties sphere = mass_properties(filled_sphere(R, 96));
  CHECK(sphere.inertia_trace / (2 * sphere.volume) == doctest::Approx(0.6 * R * R).epsilon(0.02));
  CHECK(normalize_transform(sphere).scale == doctest::Approx(1.0 / (R * std::sqrt(0.6))).epsilon(0.02));

  const MassProperties shifted =
      mass_properties(voxelize(cube(1.0, {2, 3, 4}), 64, Box3{{2, 3, 4}, {3, 4, 5}}));
  const MassProperties base = mass_properties(voxelize(cube(), 64, Box3{{0, 0, 0}, {1, 1, 1}}));
  CHECK(shifted.centroid.x - base.centroid.x == doctest::Approx(2.0));
  CHECK(shifted.centroid.z - base.centroid.z == doctest::Approx(4.0));
  CHECK(shifted.inertia_trace == doctest::Approx(base.inertia_trace).epsilon(1e-9));

  CHECK(normalize_transform(cube_props).scale == doctest::Approx(2.0).epsilon(0.02));

  MassProperties unit_props;
  unit_props.volume = 3.0;
  unit_props.inertia_trace = 6.0;
  unit_props.centroid_defined = true;
  const SimilarityTransform id = normalize_transform(unit_props);
  CHECK(std::abs(id.scale - 1.0) <= 1e-6);
  CHECK(norm(id.translation) <= 1e-6);

  VoxelGrid none = make_centered_grid(1.0, 8);
  CHECK_THROWS_AS(mass_properties(none), Error);
  CHECK_THROWS_AS(normalize_transform(MassProperties{}), Error);
}

TEST_CASE("normalization is invariant to scale and translation") {
  Generator gen(5);
  for (int trial = 0; trial < 4; ++trial) {
    const CADModel m = gen.model();
    const double s = gen.uniform(0.3, 3.0);
    const Vec3 t{gen.uniform(-2, 2), gen.uniform(-2, 2), gen.uniform(-2, 2)};
    const CADModel moved = transform_model(m, {t, s});
    const Box3 frame{{-3, -3, -3}, {3, 3, 3}};
    const VoxelGrid a = voxelize(normalize_model(m, 64), 64, frame);
    const VoxelGrid b = voxelize(normalize_model(moved, 64), 64, frame);
    CHECK(grid_iou(a, b) >= 0.98);
    const MassProperties p = mass_properties(voxelize(normalize_model(m, 64), 128));
    CHECK(norm(p.centroid) < 0.05);
    CHECK(p.gyration_radius() == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("axis rotations") {
  const auto& rs = axis_rotations();
  CHECK(rs.size() == 24);
  CHECK(rs[0].apply({1, 2, 3}) == Vec3{1, 2, 3});
  std::set<std::array<std::array<int, 3>, 3>> unique;
  for (const AxisRotation& r : rs) unique.insert(r.m);
  CHECK(unique.size() == 24);

  // Grid rotation agrees with voxelizing the rotated model on a centred grid.
  const CADModel m = cube_minus_cylinder(1.0, 0.2);
  CADModel off = m;
  for (SEPair& p : off.pairs) p.sketch.origin = p.sketch.origin + Vec3{0.1, 0.05, 0.0};
  VoxelGrid base = make_centered_grid(1.0, 32);
  fill_grid(Solid(off), &base);
  for (const AxisRotation& r : rs) {
    VoxelGrid direct = make_centered_grid(1.0, 32);
    fill_grid(Solid(rotate_model(off, r)), &direct);
    CHECK(rotate_grid(base, r).occupancy == direct.occupancy);
  }
}

TEST_CASE("sample_surface") {
  const auto pts = sample_surface(cube(), 500, 42);
  REQUIRE(pts.size() == 500);
  const double eps = 1e-4 * std::sqrt(3.0);
  for (Vec3 p : pts) {
    const double d = std::min({std::abs(p.x), std::abs(p.x - 1), std::abs(p.y), std::abs(p.y - 1),
                               std::abs(p.z), std::abs(p.z - 1)});
    CHECK(d < eps);
  }
  CHECK(sample_surface(cube(), 500, 42) == pts);
  CHECK(sample_surface(cube(), 500, 43) != pts);

  CADModel twin = cube();
  twin.pairs.push_back(prism({Face{square_loop(1, 0, 1), {}}}, 1.0, 0.0, BooleanOp::kJoin));
  for (Vec3 p : sample_surface(twin, 400, 1)) CHECK(std::abs(p.x - 1.0) > 1e-6);

  CADModel gone = cube();
  gone.pairs.push_back(prism({Face{square_loop(-1, -1, 3), {}}}, 2.0, 1.0, BooleanOp::kCut));
  CHECK_THROWS_AS(sample_surface(gone, 10, 0), Error);
}

TEST_CASE("exports") {
  const std::string obj = write_obj(model_mesh(cube(), 1e-3));
  std::size_t v = 0, f = 0;
  for (std::size_t pos = 0; pos < obj.size();) {
    const std::size_t end = obj.find('\n', pos);
    if (obj.compare(pos, 2, "v ") == 0) ++v;
    if (obj.compare(pos, 2, "f ") == 0) ++f;
    pos = end + 1;
  }
  CHECK(v == 8);
  CHECK(f == 12);

  const VoxelGrid g = voxelize(cube_minus_cylinder(1.0, 0.3), 20);
  const VoxelGrid back = read_voxels(write_voxels(g));
  CHECK(back.occupancy == g.occupancy);
  CHECK(back.origin == g.origin);
  CHECK(back.cell == g.cell);
  auto bytes = write_voxels(g);
  bytes.pop_back();
  CHECK_THROWS_AS(read_voxels(bytes), Error);
}

TEST_CASE("boundary_mesh keeps only faces of the boolean result") {
  const TriMesh c = boundary_mesh(cube());
  CHECK(c.triangles.size() == 12);
  const std::string obj = write_obj(c);
  CHECK(std::count(obj.begin(), obj.end(), 'v') == 8);
  CHECK(mesh_volume(c) == doctest::Approx(1.0).epsilon(1e-12));

  const double s = 1.0, r = 0.25;
  const TriMesh holed = boundary_mesh(cube_minus_cylinder(s, r));
  CHECK(mesh_volume(holed) == doctest::Approx(s * s * s - std::numbers::pi * r * r * s).epsilon(0.01));

  CADModel gone = cube();
  gone.pairs.push_back(prism({Face{square_loop(-1, -1, 3), {}}}, 2.0, 1.0, BooleanOp::kCut));
  CHECK(boundary_mesh(gone).triangles.empty());
}
