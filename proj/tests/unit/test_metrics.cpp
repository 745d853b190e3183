#include <doctest.h>

#include <algorithm>
#include <random>

#include "../support/builders.hpp"
#include "../support/oracles.hpp"
#include "recad/error.hpp"
#include "recad/geometry/mass.hpp"
#include "recad/geometry/sampling.hpp"
#include "recad/metrics/encoder.hpp"
#include "recad/metrics/metrics.hpp"
#include "recad/metrics/report.hpp"
#include "recad/script/emitter.hpp"

using namespace recad;
using namespace recad::geom;
using namespace recad::metrics;
using namespace recad::testing;

namespace {

CADModel box(Vec3 corner, double w, double h, double d) {
  return {{prism({Face{rect_loop(corner.x, corner.y, w, h), {}}}, d, 0.0, BooleanOp::kNewBody,
                 {0.0, 0.0, corner.z})}};
}

CADModel cylinder(double r, double h) { return {{prism({Face{circle_loop(0, 0, r), {}}}, h / 2, h / 2)}}; }

std::vector<Vec3> random_points(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < n; ++i) pts.push_back({u(rng), u(rng), u(rng)});
  return pts;
}

}  // namespace

TEST_CASE("chamfer examples") {
  const std::vector<Vec3> pts = {{0, 0, 0}, {1, 2, 3}, {-1, 0.5, 2}};
  CHECK(chamfer(pts, pts) == 0.0);
  CHECK(chamfer({{0, 0, 0}}, {{0.3, 0.4, 0}}) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(chamfer({}, pts), Error);

  const auto a = sample_surface(cube(), 2000, 1);
  const auto b = sample_surface(cube(1.0, {0.1, 0, 0}), 2000, 2);
  CHECK(chamfer(a, b) == brute_chamfer(a, b));
  CHECK(chamfer(a, b) > 0.0);
}

TEST_CASE("chamfer matches the brute-force oracle exactly") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_points(rng, 1 + rng() % 500);
    auto b = random_points(rng, 1 + rng() % 500);
    if (trial % 5 == 0) b.insert(b.end(), a.begin(), a.begin() + static_cast<std::ptrdiff_t>(a.size() / 2));
    const double cd = chamfer(a, b);
    CHECK(cd == brute_chamfer(a, b));
    CHECK(cd == chamfer(b, a));
    CHECK(cd >= 0.0);
  }
  // Duplicated and collinear points stress the tree's tie handling.
  std::vector<Vec3> line;
  for (int i = 0; i < 300; ++i) line.push_back({static_cast<double>(i % 17), 0.0, 0.0});
  const auto cloud = random_points(rng, 200);
  CHECK(chamfer(line, cloud) == brute_chamfer(line, cloud));
}

TEST_CASE("iou examples") {
  VoxelGrid a = make_cube_grid(Box3{{0, 0, 0}, {4, 4, 4}}, 8);
  VoxelGrid b = a;
  VoxelGrid c = a;
  for (int k = 0; k < 8; ++k)
    for (int j = 0; j < 8; ++j)
      for (int i = 0; i < 4; ++i) {
        a.occupancy[a.index(i, j, k)] = 1;
        b.occupancy[b.index(i + 2, j, k)] = 1;
        c.occupancy[c.index(i + 4, j, k)] = 1;
      }
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, c) == 0.0);
  CHECK(iou(a, b) == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  VoxelGrid empty = make_cube_grid(Box3{{0, 0, 0}, {4, 4, 4}}, 8);
  CHECK(iou(empty, empty) == 0.0);
  CHECK_THROWS_AS(iou(a, make_cube_grid(Box3{{0, 0, 0}, {4, 4, 4}}, 16)), Error);
}

TEST_CASE("iou_best is closed under the rotation group") {
  CADModel part = box({0.1, -0.2, 0.05}, 0.8, 0.4, 0.25);
  part.pairs.push_back(prism({Face{circle_loop(0.5, 0.0, 0.1), {}}}, 0.5, 0.5, BooleanOp::kCut, {0, 0, 0}));
  const IouBest self = iou_best(part, part, 48);
  CHECK(self.score == 1.0);
  CHECK(self.rotation == 0);
  for (const AxisRotation& r : axis_rotations()) {
    CHECK(iou_best(part, rotate_model(part, r), 48).score == self.score);
  }

  const CADModel cyl = cylinder(0.3, 0.6);
  const CommonGrids grids = common_grids(part, cyl, 32);
  double oracle = 0.0;
  for (const AxisRotation& r : axis_rotations()) {
    VoxelGrid rotated = grids.a;
    std::fill(rotated.occupancy.begin(), rotated.occupancy.end(), 0);
    fill_grid(Solid(rotate_model(part, r)), &rotated);
    oracle = std::max(oracle, count_iou(rotated, grids.b));
  }
  CHECK(iou_best(part, cyl, 32).score == oracle);
  CHECK(oracle > 0.0);
  CHECK(oracle < 1.0);

  // A cube against the filled sphere of equal radius of gyration.
  const double R = 0.5 * std::sqrt(5.0 / 3.0) * std::sqrt(0.5) * 2.0 / std::sqrt(2.0);
  VoxelGrid sphere = make_centered_grid(1.0, 32);
  for (int k = 0; k < 32; ++k)
    for (int j = 0; j < 32; ++j)
      for (int i = 0; i < 32; ++i)
        sphere.occupancy[sphere.index(i, j, k)] = norm(sphere.center(i, j, k)) <= R;
  VoxelGrid cube_grid = make_centered_grid(1.0, 32);
  fill_grid(Solid(box({-0.5, -0.5, -0.5}, 1.0, 1.0, 1.0)), &cube_grid);
  double brute = 0.0;
  for (const AxisRotation& r : axis_rotations()) brute = std::max(brute, count_iou(rotate_grid(cube_grid, r), sphere));
  CHECK(iou_best_grids(cube_grid, sphere).score == brute);

  CADModel gone = cube();
  gone.pairs.push_back(prism({Face{square_loop(-1, -1, 3), {}}}, 2.0, 1.0, BooleanOp::kCut));
  CHECK_THROWS_AS(iou_best(gone, cube(), 32), Error);
}

TEST_CASE("iou_best with normalization ignores scale and position") {
  const CADModel part = box({0.1, -0.2, 0.05}, 0.8, 0.4, 0.25);
  const CADModel moved = transform_model(part, SimilarityTransform{{0.3, -0.1, 0.2}, 1.7});
  CHECK(iou_best(part, moved, 64, true).score >= 0.95);
  CHECK(iou_best(part, moved, 64, false).score < 0.5);
}

TEST_CASE("primitive_f1") {
  CHECK(primitive_f1(cube(), cube()) == 1.0);

  auto with_circles = [](int circles) {
    Face f{square_loop(-1, -1, 2), {}};
    for (int i = 0; i < circles; ++i) f.holes.push_back(circle_loop(-0.5 + i * 0.8, 0.0, 0.2));
    return CADModel{{prism({f}, 0.5)}};
  };
  CHECK(primitive_f1(with_circles(1), with_circles(2)) == 5.0 / 6.0);

  Loop arcs;
  arcs.start = {1, 0};
  arcs.curves = {Arc{{-1, 0}, 180.0, false, false}, Arc{{1, 0}, 180.0, false, false}};
  const CADModel round{{prism({Face{arcs, {}}}, 0.5)}};
  CHECK(primitive_f1(round, cube()) == 0.0);

  Generator gen(7);
  for (int trial = 0; trial < 100; ++trial) {
    const CADModel a = gen.model();
    const CADModel b = gen.model();
    CHECK(primitive_f1(a, b) == primitive_f1(b, a));
    CADModel reversed = a;
    std::reverse(reversed.pairs.begin(), reversed.pairs.end());
    CHECK(primitive_f1(reversed, b) == primitive_f1(a, b));
    const double f = primitive_f1(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
  }
}

TEST_CASE("invalidity_ratio") {
  std::vector<MetricReport> reports(8);
  for (MetricReport& r : reports) r.valid = true;
  CHECK(invalidity_ratio(reports) == 0.0);
  reports[3] = failed_report(ErrorCategory::kParse, "broken");
  CHECK(invalidity_ratio(reports) == 0.125);
  for (MetricReport& r : reports) r.valid = false;
  CHECK(invalidity_ratio(reports) == 1.0);
  CHECK_THROWS_AS(invalidity_ratio(std::vector<MetricReport>{}), Error);

  std::vector<script::ExecutionOutcome> outcomes = {script::try_run_script("x = 1\n"),
                                                    script::try_run_script(script::emit_hardcoded(cube()))};
  CHECK(invalidity_ratio(outcomes) == 0.5);
}

TEST_CASE("occupancy encoder") {
  const OccupancyEncoder enc;
  const CommonGrids g = common_grids(cube(0.5, {-0.5, -0.5, -0.5}), cube(0.5, {0.2, 0.2, 0.2}), 32);
  CHECK(enc.similarity(g.a, g.a) == 1.0);
  CHECK(enc.similarity(g.a, g.b) == 0.0);
  CHECK(cosine_similarity(enc.embed(g.a), enc.embed(g.a)) == doctest::Approx(1.0).epsilon(1e-12));

  Generator gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    const CommonGrids pair = common_grids(gen.model(), gen.model(), 24);
    const double s = enc.similarity(pair.a, pair.b);
    CHECK(s == enc.similarity(pair.b, pair.a));
    CHECK(s == doctest::Approx(cosine_similarity(enc.embed(pair.a), enc.embed(pair.b))).epsilon(1e-9));
  }
}

TEST_CASE("geometric_similarity") {
  const OccupancyEncoder enc;
  const CADModel part = box({0.1, -0.2, 0.05}, 0.8, 0.4, 0.25);
  CHECK(geometric_similarity(part, part, enc, 48) == 1.0);
  const CADModel turned = rotate_model(part, axis_rotations()[5]);
  CHECK(geometric_similarity(part, turned, enc, 48) >= 0.95);
  const CADModel scaled = transform_model(part, SimilarityTransform{{0.2, 0.1, 0}, 0.6});
  CHECK(geometric_similarity(part, scaled, enc, 48) >= 0.9);

  Generator gen(19);
  for (int trial = 0; trial < 8; ++trial) {
    const CADModel a = gen.model();
    const CADModel b = gen.model();
    const double s = geometric_similarity(a, b, enc, 32);
    CHECK(s == geometric_similarity(b, a, enc, 32));
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
  }
}

TEST_CASE("evaluate_pair and summarize") {
  const CADModel part = cube_minus_cylinder(1.0, 0.2);
  EvalOptions opts;
  opts.resolution = 48;
  opts.samples = 500;
  const MetricReport self = evaluate_pair(part, part, opts);
  REQUIRE(self.valid);
  CHECK(*self.chamfer_x1e3 == 0.0);
  CHECK(*self.iou_best == 1.0);
  CHECK(*self.p_f1 == 1.0);

  CADModel gone = cube();
  gone.pairs.push_back(prism({Face{square_loop(-1, -1, 3), {}}}, 2.0, 1.0, BooleanOp::kCut));
  const MetricReport empty = evaluate_pair(gone, part, opts);
  CHECK_FALSE(empty.valid);
  CHECK(empty.failure_category == ErrorCategory::kEmptySolid);
  CHECK_FALSE(empty.iou_best.has_value());
  CHECK(to_json(empty)["iou_best"].is_null());

  const MetricReport off = evaluate_pair(cube(1.0, {0.05, 0, 0}), cube(), opts);
  const EvalSummary s = summarize({self, empty, off});
  CHECK(s.pairs == 3);
  CHECK(s.valid == 2);
  CHECK(s.invalidity_ratio == doctest::Approx(1.0 / 3.0));
  CHECK(*s.mean_chamfer_x1e3 == doctest::Approx(0.5 * *off.chamfer_x1e3));
  CHECK(*s.median_chamfer_x1e3 == doctest::Approx(0.5 * *off.chamfer_x1e3));

  const MetricReport broken = evaluate_outcome(script::try_run_script("cad_model = (\n"), part, opts);
  CHECK(broken.failure_category == ErrorCategory::kParse);
}
