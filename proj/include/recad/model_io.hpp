#pragma once

// Model serialization: the native "recad/1" JSON schema and a reader for the
// DeepCAD-style sequence JSON (sketch / extrude entities with profile loops).
// Both schemas are documented in docs/formats.md.

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "recad/cad_model.hpp"

namespace recad {

inline constexpr std::string_view kSchemaTag = "recad/1";

nlohmann::json model_to_json(const CADModel& model);
std::string model_to_string(const CADModel& model);  // pretty-printed, trailing newline

/// Throws Error{kParse} with a JSON path on malformed input.
CADModel model_from_json(const nlohmann::json& j);
CADModel model_from_string(std::string_view text);

/// Groups closed loops into faces by containment depth: loops at even depth
/// become outer boundaries, loops at odd depth become holes of their
/// innermost container. Coincident loops cancel in pairs (the shared boundary
/// of two adjacent profiles is interior to their union).
/// Throws Error{kGeometry} when two loops cross.
std::vector<Face> merge_profiles_to_faces(const std::vector<std::vector<Loop>>& profiles);

/// Reads the external sequence format. Throws Error{kParse} (with path) on
/// malformed input and Error{kUnsupported} on curve or feature types outside
/// the line / arc / circle, sketch / extrude interface.
CADModel from_external_json(std::string_view text);

/// True when `text` parses as JSON carrying the native schema tag.
bool is_native_json(const nlohmann::json& j);

}  // namespace recad
