#include "recad/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "recad/error.hpp"
#include "recad/geometry/curves.hpp"
#include "recad/geometry/mass.hpp"
#include "recad/geometry/solid.hpp"

namespace recad::metrics {

namespace {

double coord(Vec3 p, int axis) { return axis == 0 ? p.x : axis == 1 ? p.y : p.z; }

double squared(Vec3 a, Vec3 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double dz = a.z - b.z;
  return dx * dx + dy * dy + dz * dz;
}

}  // namespace

// ---------------------------------------------------------------------------
// Chamfer distance

NearestNeighbors::NearestNeighbors(std::vector<Vec3> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCategory::kPrecondition, "nearest-neighbour set is empty");
  std::vector<int> idx(points_.size());
  std::iota(idx.begin(), idx.end(), 0);
  nodes_.reserve(points_.size());
  root_ = build(idx, 0, idx.size(), 0);
}

int NearestNeighbors::build(std::vector<int>& idx, std::size_t lo, std::size_t hi, int depth) {
  if (lo >= hi) return -1;
  const int axis = depth % 3;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::nth_element(idx.begin() + static_cast<std::ptrdiff_t>(lo), idx.begin() + static_cast<std::ptrdiff_t>(mid),
                   idx.begin() + static_cast<std::ptrdiff_t>(hi), [&](int a, int b) {
                     return coord(points_[a], axis) < coord(points_[b], axis);
                   });
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({idx[mid], axis, -1, -1});
  const int left = build(idx, lo, mid, depth + 1);
  const int right = build(idx, mid + 1, hi, depth + 1);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void NearestNeighbors::search(int node, Vec3 p, double* best) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  const Vec3 q = points_[n.point];
  *best = std::min(*best, squared(p, q));
  const double diff = coord(p, n.axis) - coord(q, n.axis);
  const int near = diff < 0 ? n.left : n.right;
  const int far = diff < 0 ? n.right : n.left;
  search(near, p, best);
  if (diff * diff <= *best) search(far, p, best);
}

double NearestNeighbors::squared_distance(Vec3 p) const {
  double best = std::numeric_limits<double>::infinity();
  search(root_, p, &best);
  return best;
}

double chamfer(const std::vector<Vec3>& a, const std::vector<Vec3>& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCategory::kPrecondition, "chamfer of an empty point set");
  const NearestNeighbors in_a(a);
  const NearestNeighbors in_b(b);
  double sum_a = 0.0;
  for (Vec3 p : a) sum_a += in_b.squared_distance(p);
  double sum_b = 0.0;
  for (Vec3 p : b) sum_b += in_a.squared_distance(p);
  return 0.5 * (sum_a / static_cast<double>(a.size()) + sum_b / static_cast<double>(b.size()));
}

// ---------------------------------------------------------------------------
// IoU

double iou(const geom::VoxelGrid& a, const geom::VoxelGrid& b) {
  if (!a.same_frame(b)) throw Error(ErrorCategory::kPrecondition, "iou of grids with different frames");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.occupancy.size(); ++i) {
    inter += a.occupancy[i] & b.occupancy[i];
    uni += a.occupancy[i] | b.occupancy[i];
  }
  return uni == 0 ? 0.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

namespace {

std::vector<double> rotation_scores(const geom::VoxelGrid& a, const geom::VoxelGrid& b) {
  if (!a.same_frame(b)) throw Error(ErrorCategory::kPrecondition, "iou of grids with different frames");
  std::vector<double> scores;
  for (const geom::AxisRotation& r : geom::axis_rotations()) scores.push_back(iou(geom::rotate_grid(a, r), b));
  return scores;
}

}  // namespace

IouBest iou_best_grids(const geom::VoxelGrid& a, const geom::VoxelGrid& b) {
  const std::vector<double> scores = rotation_scores(a, b);
  IouBest best;
  best.score = scores[0];
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > best.score) best = {scores[i], i};
  }
  return best;
}

std::vector<std::size_t> best_rotations(const geom::VoxelGrid& a, const geom::VoxelGrid& b) {
  const std::vector<double> scores = rotation_scores(a, b);
  const double top = *std::max_element(scores.begin(), scores.end());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] == top) out.push_back(i);
  }
  return out;
}

CommonGrids common_grids(const CADModel& a, const CADModel& b, int resolution) {
  const geom::Solid sa(a);
  const geom::Solid sb(b);
  double half = 0.0;
  for (const geom::Box3* box : {&sa.bounds(), &sb.bounds()}) {
    if (box->empty()) continue;
    for (double v : {box->min.x, box->min.y, box->min.z, box->max.x, box->max.y, box->max.z}) {
      half = std::max(half, std::abs(v));
    }
  }
  half = half > 0.0 ? 1.05 * half : 1.0;
  CommonGrids out{geom::make_centered_grid(half, resolution), geom::make_centered_grid(half, resolution)};
  geom::fill_grid(sa, &out.a);
  geom::fill_grid(sb, &out.b);
  return out;
}

IouBest iou_best(const CADModel& a, const CADModel& b, int resolution, bool normalize) {
  const CommonGrids grids = normalize ? common_grids(geom::normalize_model(a, resolution),
                                                     geom::normalize_model(b, resolution), resolution)
                                      : common_grids(a, b, resolution);
  if (grids.a.empty() || grids.b.empty()) throw Error(ErrorCategory::kEmptySolid, "solid is empty");
  return iou_best_grids(grids.a, grids.b);
}

// ---------------------------------------------------------------------------
// Primitive F1

std::array<std::size_t, 3> curve_type_counts(const CADModel& model) {
  std::array<std::size_t, 3> counts{};
  auto add = [&](const Loop& loop) {
    for (const CurveCmd& c : loop.curves) ++counts[c.index()];
    if (geom::has_implicit_close(loop)) ++counts[0];
  };
  for (const SEPair& pair : model.pairs) {
    for (const Face& face : pair.sketch.faces) {
      add(face.outer);
      for (const Loop& hole : face.holes) add(hole);
    }
  }
  return counts;
}

double primitive_f1(const CADModel& pred, const CADModel& gt) {
  const auto p = curve_type_counts(pred);
  const auto g = curve_type_counts(gt);
  // Sum of 2 m_t / (p_t + g_t) as an exact fraction, divided once at the end.
  std::uint64_t num = 0;
  std::uint64_t den = 1;
  std::uint64_t types = 0;
  for (std::size_t t = 0; t < 3; ++t) {
    const std::uint64_t total = p[t] + g[t];
    if (total == 0) continue;
    ++types;
    const std::uint64_t m2 = 2 * std::min(p[t], g[t]);
    num = num * total + m2 * den;
    den *= total;
    const std::uint64_t k = std::gcd(num, den);
    num /= k;
    den /= k;
  }
  if (types == 0) return 1.0;
  return static_cast<double>(num) / static_cast<double>(den * types);
}

}  // namespace recad::metrics
