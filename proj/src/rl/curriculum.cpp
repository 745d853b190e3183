#include "recad/rl/curriculum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <tuple>

#include "recad/error.hpp"
#include "recad/geometry/solid.hpp"
#include "recad/geometry/voxel.hpp"
#include "recad/metrics/encoder.hpp"
#include "recad/model_io.hpp"
#include "recad/script/emitter.hpp"

namespace recad::rl {

namespace {

struct PosedGrid {
  geom::VoxelGrid grid;
  std::vector<std::uint64_t> bits;
  std::size_t count = 0;
};

std::vector<std::uint64_t> pack(const std::vector<std::uint8_t>& occ) {
  std::vector<std::uint64_t> bits((occ.size() + 63) / 64, 0);
  for (std::size_t i = 0; i < occ.size(); ++i) {
    if (occ[i]) bits[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  return bits;
}

PosedGrid canonical_pose(const geom::VoxelGrid& grid) {
  PosedGrid best;
  bool first = true;
  for (const geom::AxisRotation& r : geom::axis_rotations()) {
    geom::VoxelGrid g = geom::rotate_grid(grid, r);
    if (first || g.occupancy < best.grid.occupancy) {
      best.grid = std::move(g);
      first = false;
    }
  }
  best.bits = pack(best.grid.occupancy);
  best.count = best.grid.count();
  return best;
}

// OccupancyEncoder::similarity evaluated on packed bits with the same
// arithmetic.
double occupancy_similarity(const PosedGrid& a, const PosedGrid& b) {
  std::size_t cab = 0;
  for (std::size_t w = 0; w < a.bits.size(); ++w) cab += static_cast<std::size_t>(std::popcount(a.bits[w] & b.bits[w]));
  const double n = static_cast<double>(a.grid.occupancy.size());
  const double fa = static_cast<double>(a.count), fb = static_cast<double>(b.count);
  const double va = fa - fa * fa / n;
  const double vb = fb - fb * fb / n;
  if (va <= 0.0 || vb <= 0.0) return a.bits == b.bits ? 1.0 : 0.0;
  const double dot = static_cast<double>(cab) - fa * fb / n;
  return std::clamp(dot / std::sqrt(va * vb), 0.0, 1.0);
}

std::string entry_id(const std::string& source, const PrimitiveEntry& e) {
  std::string id = source + "/" + std::string(to_string(e.level));
  if (e.level == Level::kMSE) return id;
  id += "/" + std::to_string(e.source.se);
  if (e.level == Level::kFace || e.level == Level::kLoop) id += "." + std::to_string(e.source.face);
  if (e.level == Level::kLoop) id += "." + std::to_string(e.source.loop);
  return id;
}

}  // namespace

std::vector<std::size_t> dedup_indices(const std::vector<Primitive>& prims, const metrics::EncoderInterface& encoder,
                                       const DedupOptions& opts) {
  if (!(opts.threshold > 0.0 && opts.threshold <= 1.0)) {
    throw Error(ErrorCategory::kPrecondition, "dedup threshold must lie in (0, 1]");
  }
  if (opts.resolution < 2) throw Error(ErrorCategory::kPrecondition, "resolution must be at least 2");

  std::vector<geom::Solid> solids;
  solids.reserve(prims.size());
  std::array<double, 5> half_extent{};
  for (const Primitive& p : prims) {
    solids.emplace_back(canonical_model(p));
    const geom::Box3& b = solids.back().bounds();
    double& h = half_extent[static_cast<std::size_t>(level_of(p))];
    if (!b.empty()) {
      for (double v : {b.min.x, b.min.y, b.min.z, b.max.x, b.max.y, b.max.z}) h = std::max(h, std::abs(v));
    }
  }

  const auto* occupancy = dynamic_cast<const metrics::OccupancyEncoder*>(&encoder);
  std::vector<PosedGrid> posed;
  posed.reserve(prims.size());
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const double h = half_extent[static_cast<std::size_t>(level_of(prims[i]))];
    geom::VoxelGrid grid = geom::make_centered_grid(h > 0.0 ? 1.05 * h : 1.0, opts.resolution);
    geom::fill_grid(solids[i], &grid);
    posed.push_back(canonical_pose(grid));
  }

  std::vector<std::size_t> kept;
  std::array<std::vector<std::size_t>, 5> kept_by_level;
  for (std::size_t i = 0; i < prims.size(); ++i) {
    auto& same = kept_by_level[static_cast<std::size_t>(level_of(prims[i]))];
    const bool duplicate = std::any_of(same.begin(), same.end(), [&](std::size_t k) {
      // Primitives below the grid resolution leave empty grids that say
      // nothing about their shape.
      if (posed[i].count == 0 || posed[k].count == 0) return prims[i] == prims[k];
      const double s = occupancy ? occupancy_similarity(posed[i], posed[k])
                                 : encoder.similarity(posed[i].grid, posed[k].grid);
      return s > opts.threshold;
    });
    if (duplicate) continue;
    same.push_back(i);
    kept.push_back(i);
  }
  return kept;
}

std::vector<Primitive> dedup_primitives(const std::vector<Primitive>& prims, const metrics::EncoderInterface& encoder,
                                        const DedupOptions& opts) {
  std::vector<Primitive> out;
  for (std::size_t i : dedup_indices(prims, encoder, opts)) out.push_back(prims[i]);
  return out;
}

bool curriculum_before(const ManifestEntry& a, const ManifestEntry& b) {
  return std::forward_as_tuple(a.level, a.curve_count, a.source, a.id) <
         std::forward_as_tuple(b.level, b.curve_count, b.source, b.id);
}

std::vector<ManifestEntry> build_curriculum(const std::vector<SourceModel>& models,
                                            const metrics::EncoderInterface& encoder, const DedupOptions& opts) {
  std::vector<ManifestEntry> all;
  for (const SourceModel& m : models) {
    for (PrimitiveEntry& e : extract_primitives(m.model)) {
      ManifestEntry entry;
      entry.id = entry_id(m.id, e);
      entry.level = e.level;
      entry.curve_count = count_curves(e.primitive);
      entry.source = m.id;
      entry.primitive = std::move(e.primitive);
      all.push_back(std::move(entry));
    }
  }
  std::stable_sort(all.begin(), all.end(), curriculum_before);
  std::vector<Primitive> prims;
  prims.reserve(all.size());
  for (const ManifestEntry& e : all) prims.push_back(e.primitive);
  std::vector<ManifestEntry> out;
  for (std::size_t i : dedup_indices(prims, encoder, opts)) out.push_back(std::move(all[i]));
  return out;
}

std::vector<std::string> rewrite_filter(const Primitive& reference, const std::vector<std::string>& candidates,
                                        const metrics::EncoderInterface& encoder, const RewriteOptions& opts) {
  if (!(opts.tau_s > 0.0 && opts.tau_s < 1.0)) throw Error(ErrorCategory::kPrecondition, "tau_s must lie in (0, 1)");
  const CADModel ref = canonical_model(reference);
  std::vector<std::string> kept;
  for (const std::string& c : candidates) {
    const script::ExecutionOutcome run = script::try_run_script(c, opts.limits);
    if (!run.ok()) continue;
    try {
      if (metrics::geometric_similarity(*run.model, ref, encoder, opts.resolution, opts.normalize) > opts.tau_s) {
        kept.push_back(c);
      }
    } catch (const Error&) {
    }
  }
  if (kept.empty()) kept.push_back(script::emit_hardcoded(reference));
  return kept;
}

nlohmann::ordered_json to_json(const ManifestEntry& entry, const std::vector<std::string>& guidance,
                               std::optional<bool> hard) {
  nlohmann::ordered_json j;
  j["id"] = entry.id;
  j["level"] = std::string(to_string(entry.level));
  j["curve_count"] = entry.curve_count;
  j["source"] = entry.source;
  j["model"] = nlohmann::ordered_json::parse(model_to_json(canonical_model(entry.primitive)).dump());
  j["guidance"] = guidance;
  j["hard"] = hard ? nlohmann::ordered_json(*hard) : nlohmann::ordered_json(nullptr);
  return j;
}

ManifestQuestion question_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCategory::kParse, "manifest line must be an object");
  if (!j.contains("id") || !j["id"].is_string()) throw Error(ErrorCategory::kParse, "manifest line needs a string 'id'");
  if (!j.contains("model")) throw Error(ErrorCategory::kParse, "manifest line needs a 'model'");
  ManifestQuestion out;
  out.question.id = j["id"].get<std::string>();
  out.question.gt = model_from_json(j["model"]);
  if (j.contains("modality")) {
    const auto& m = j["modality"];
    if (m == "image") {
      out.question.modality = Modality::kImage;
    } else if (m != "text") {
      throw Error(ErrorCategory::kParse, "modality must be \"text\" or \"image\"");
    }
  }
  if (j.contains("payload")) {
    if (!j["payload"].is_string()) throw Error(ErrorCategory::kParse, "'payload' must be a string");
    out.question.payload = j["payload"].get<std::string>();
  }
  if (j.contains("guidance")) {
    if (!j["guidance"].is_array()) throw Error(ErrorCategory::kParse, "'guidance' must be an array");
    for (const auto& g : j["guidance"]) {
      if (!g.is_string()) throw Error(ErrorCategory::kParse, "guidance references must be strings");
      out.guidance_refs.push_back(g.get<std::string>());
    }
  }
  if (j.contains("hard") && !j["hard"].is_null()) {
    if (!j["hard"].is_boolean()) throw Error(ErrorCategory::kParse, "'hard' must be a boolean or null");
    out.question.hard = j["hard"].get<bool>();
  }
  return out;
}

}  // namespace recad::rl
