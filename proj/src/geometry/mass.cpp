#include "recad/geometry/mass.hpp"

#include <cmath>

#include "recad/error.hpp"

namespace recad::geom {

double MassProperties::gyration_radius() const {
  return volume > 0.0 ? std::sqrt(inertia_trace / (2.0 * volume)) : 0.0;
}

MassProperties mass_properties(const VoxelGrid& grid) {
  std::size_t count = 0;
  Vec3 sum;
  for (int k = 0; k < grid.dims[2]; ++k) {
    for (int j = 0; j < grid.dims[1]; ++j) {
      for (int i = 0; i < grid.dims[0]; ++i) {
        if (!grid.at(i, j, k)) continue;
        sum = sum + grid.center(i, j, k);
        ++count;
      }
    }
  }
  if (count == 0) throw Error(ErrorCategory::kEmptySolid, "mass properties of an empty grid");
  const double cell3 = grid.cell * grid.cell * grid.cell;
  MassProperties props;
  props.volume = static_cast<double>(count) * cell3;
  props.centroid = sum * (1.0 / static_cast<double>(count));
  props.centroid_defined = true;
  double second = 0.0;
  for (int k = 0; k < grid.dims[2]; ++k) {
    for (int j = 0; j < grid.dims[1]; ++j) {
      for (int i = 0; i < grid.dims[0]; ++i) {
        if (!grid.at(i, j, k)) continue;
        const Vec3 d = grid.center(i, j, k) - props.centroid;
        second += dot(d, d);
      }
    }
  }
  props.inertia_trace = 2.0 * second * cell3;
  return props;
}

SimilarityTransform normalize_transform(const MassProperties& props) {
  const double r = props.gyration_radius();
  if (!(props.volume > 0.0) || !(r > 0.0)) {
    throw Error(ErrorCategory::kEmptySolid, "cannot normalize a solid with zero volume");
  }
  return {-props.centroid, 1.0 / r};
}

namespace {

Loop scale_loop(const Loop& loop, double s) {
  Loop out = loop;
  out.start = loop.start * s;
  for (CurveCmd& cmd : out.curves) {
    std::visit(
        [s](auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Circle>) {
            c.radius *= s;
          } else {
            c.end = c.end * s;
          }
        },
        cmd);
  }
  return out;
}

}  // namespace

CADModel transform_model(const CADModel& model, const SimilarityTransform& t) {
  CADModel out = model;
  for (SEPair& pair : out.pairs) {
    pair.sketch.origin = t.apply(pair.sketch.origin);
    for (Face& face : pair.sketch.faces) {
      face.outer = scale_loop(face.outer, t.scale);
      for (Loop& h : face.holes) h = scale_loop(h, t.scale);
    }
    pair.extrude.dist_pos *= t.scale;
    pair.extrude.dist_neg *= t.scale;
  }
  return out;
}

CADModel rotate_model(const CADModel& model, const AxisRotation& r) {
  CADModel out = model;
  for (SEPair& pair : out.pairs) {
    pair.sketch.origin = r.apply(pair.sketch.origin);
    pair.sketch.x_axis = r.apply(pair.sketch.x_axis);
    pair.sketch.normal = r.apply(pair.sketch.normal);
  }
  return out;
}

CADModel normalize_model(const CADModel& model, int resolution, SimilarityTransform* applied) {
  const VoxelGrid grid = voxelize(model, resolution);
  const SimilarityTransform t = normalize_transform(mass_properties(grid));
  if (applied) *applied = t;
  return transform_model(model, t);
}

}  // namespace recad::geom
