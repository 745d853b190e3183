#include "recad/geometry/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "recad/error.hpp"
#include "recad/geometry/mesh.hpp"
#include "recad/geometry/solid.hpp"

namespace recad::geom {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a Weyl sequence
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

std::vector<Vec3> sample_surface(const CADModel& model, std::size_t n, std::uint64_t seed,
                                 double chord_tol) {
  if (n == 0) throw Error(ErrorCategory::kPrecondition, "sample_surface: n must be positive");
  const Solid solid(model, chord_tol);
  const TriMesh mesh = model_mesh(model, solid.chord_tol());
  std::vector<double> cumulative;
  cumulative.reserve(mesh.triangles.size());
  double total = 0.0;
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    total += triangle_area(mesh, t);
    cumulative.push_back(total);
  }
  if (!(total > 0.0)) throw Error(ErrorCategory::kEmptySolid, "sample_surface: model has no surface");
  const double eps = 1e-4 * model_diagonal(model);
  const std::size_t max_attempts = 1000 + 200 * n;
  std::vector<Vec3> points;
  points.reserve(n);
  for (std::uint64_t k = 0; points.size() < n; ++k) {
    if (k >= max_attempts) {
      throw Error(ErrorCategory::kEmptySolid, "sample_surface: boundary of the solid is empty");
    }
    const std::uint64_t state = mix_seed(seed, k);
    const double u0 = unit_double(mix_seed(state, 0)) * total;
    const double u1 = unit_double(mix_seed(state, 1));
    const double u2 = unit_double(mix_seed(state, 2));
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u0);
    const std::size_t t = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                                cumulative.size() - 1);
    const auto& tri = mesh.triangles[t];
    const double r1 = std::sqrt(u1);
    const Vec3 p = mesh.vertices[tri[0]] * (1.0 - r1) + mesh.vertices[tri[1]] * (r1 * (1.0 - u2)) +
                   mesh.vertices[tri[2]] * (r1 * u2);
    const Vec3 d = triangle_normal(mesh, t) * eps;
    if (solid.contains(p + d) != solid.contains(p - d)) points.push_back(p);
  }
  return points;
}

}  // namespace recad::geom
