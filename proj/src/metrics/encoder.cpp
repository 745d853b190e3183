#include "recad/metrics/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "recad/error.hpp"
#include "recad/geometry/mass.hpp"
#include "recad/metrics/metrics.hpp"

namespace recad::metrics {

double cosine_similarity(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw Error(ErrorCategory::kPrecondition, "embeddings differ in length");
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return a == b ? 1.0 : 0.0;
  return std::clamp(dot / std::sqrt(na * nb), 0.0, 1.0);
}

double EncoderInterface::similarity(const geom::VoxelGrid& a, const geom::VoxelGrid& b) const {
  return cosine_similarity(embed(a), embed(b));
}

std::vector<double> OccupancyEncoder::embed(const geom::VoxelGrid& grid) const {
  const double mean = grid.occupancy.empty()
                          ? 0.0
                          : static_cast<double>(grid.count()) / static_cast<double>(grid.occupancy.size());
  std::vector<double> out(grid.occupancy.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = grid.occupancy[i] - mean;
  return out;
}

double OccupancyEncoder::similarity(const geom::VoxelGrid& a, const geom::VoxelGrid& b) const {
  if (a.occupancy.size() != b.occupancy.size()) {
    throw Error(ErrorCategory::kPrecondition, "grids differ in size");
  }
  std::size_t ca = 0, cb = 0, cab = 0;
  for (std::size_t i = 0; i < a.occupancy.size(); ++i) {
    ca += a.occupancy[i];
    cb += b.occupancy[i];
    cab += a.occupancy[i] & b.occupancy[i];
  }
  // For 0/1 vectors: <a - ma, b - mb> = cab - ca cb / n and |a - ma|^2 = ca - ca^2 / n.
  const double n = static_cast<double>(a.occupancy.size());
  const double fa = static_cast<double>(ca), fb = static_cast<double>(cb);
  const double va = fa - fa * fa / n;
  const double vb = fb - fb * fb / n;
  if (va <= 0.0 || vb <= 0.0) return a.occupancy == b.occupancy ? 1.0 : 0.0;
  const double dot = static_cast<double>(cab) - fa * fb / n;
  return std::clamp(dot / std::sqrt(va * vb), 0.0, 1.0);
}

namespace {

std::size_t inverse_rotation(std::size_t index) {
  const auto& rs = geom::axis_rotations();
  geom::AxisRotation t;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) t.m[i][j] = rs[index].m[j][i];
  return static_cast<std::size_t>(std::find(rs.begin(), rs.end(), t) - rs.begin());
}

}  // namespace

double aligned_similarity(const geom::VoxelGrid& a, const geom::VoxelGrid& b, const EncoderInterface& encoder) {
  const auto& rs = geom::axis_rotations();
  double best = 0.0;
  for (std::size_t r : best_rotations(a, b)) {
    best = std::max(best, encoder.similarity(geom::rotate_grid(a, rs[r]), b));
    best = std::max(best, encoder.similarity(a, geom::rotate_grid(b, rs[inverse_rotation(r)])));
  }
  return best;
}

double geometric_similarity(const CADModel& a, const CADModel& b, const EncoderInterface& encoder,
                            int resolution, bool normalize) {
  const CommonGrids grids = normalize ? common_grids(geom::normalize_model(a, resolution),
                                                     geom::normalize_model(b, resolution), resolution)
                                      : common_grids(a, b, resolution);
  if (grids.a.empty() || grids.b.empty()) throw Error(ErrorCategory::kEmptySolid, "solid is empty");
  return aligned_similarity(grids.a, grids.b, encoder);
}

}  // namespace recad::metrics
