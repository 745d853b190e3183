#pragma once

// Hierarchical primitive curriculum, near-duplicate removal and the
// candidate rewrite filter.

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "recad/cad_model.hpp"
#include "recad/metrics/encoder.hpp"
#include "recad/rl/policy.hpp"
#include "recad/script/interpreter.hpp"

namespace recad::rl {

struct SourceModel {
  std::string id;
  CADModel model;
};

struct ManifestEntry {
  std::string id;  // "<source>/<level>/<se>.<face>.<loop>" with unused indices omitted
  Level level = Level::kLoop;
  std::size_t curve_count = 0;
  std::string source;
  Primitive primitive;
};

struct DedupOptions {
  double threshold = 0.95;
  int resolution = 32;
};

/// Greedy scan: a primitive is dropped when its similarity to an earlier kept
/// primitive of the same level exceeds the threshold. Each primitive is lifted
/// with canonical_model, voxelized in one origin-centred frame per level and
/// put in a canonical pose (the lexicographically smallest of its 24 axis
/// rotations). Returns the kept indices in input order. Throws
/// Error{kPrecondition} for a threshold outside (0, 1].
std::vector<std::size_t> dedup_indices(const std::vector<Primitive>& prims, const metrics::EncoderInterface& encoder,
                                       const DedupOptions& opts = {});

std::vector<Primitive> dedup_primitives(const std::vector<Primitive>& prims, const metrics::EncoderInterface& encoder,
                                        const DedupOptions& opts = {});

/// Strict curriculum order: level, then curve count, then source id, then id.
bool curriculum_before(const ManifestEntry& a, const ManifestEntry& b);

/// Every primitive of every model, sorted by curriculum_before and then
/// deduplicated in that order. Throws Error{kValidation} for invalid models.
std::vector<ManifestEntry> build_curriculum(const std::vector<SourceModel>& models,
                                            const metrics::EncoderInterface& encoder, const DedupOptions& opts = {});

struct RewriteOptions {
  double tau_s = 0.95;
  int resolution = 64;
  bool normalize = false;
  script::ExecLimits limits;
};

/// Candidates whose executed model has geometric similarity above tau_s to
/// the reference primitive, in input order; the hardcoded script of the
/// reference when none survive. Throws Error{kPrecondition} for tau_s outside
/// (0, 1).
std::vector<std::string> rewrite_filter(const Primitive& reference, const std::vector<std::string>& candidates,
                                        const metrics::EncoderInterface& encoder, const RewriteOptions& opts = {});

/// {"id", "level", "curve_count", "source", "model", "guidance", "hard"}.
/// The model is the native JSON of canonical_model(primitive).
nlohmann::ordered_json to_json(const ManifestEntry& entry, const std::vector<std::string>& guidance = {},
                               std::optional<bool> hard = std::nullopt);

/// Question from one manifest line; guidance references are resolved by the
/// caller. Throws Error{kParse} on malformed lines.
struct ManifestQuestion {
  Question question;
  std::vector<std::string> guidance_refs;
};
ManifestQuestion question_from_json(const nlohmann::json& j);

}  // namespace recad::rl
