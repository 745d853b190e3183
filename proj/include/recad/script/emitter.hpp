#pragma once

// Converts primitives to hard-coded scripts.

#include <string>

#include "recad/cad_model.hpp"

namespace recad::script {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// A script that rebuilds `model` exactly when executed.
std::string emit_model(const CADModel& model);

/// emit_model of canonical_model(p): sub-model primitives are wrapped on the
/// canonical plane so the script always yields an executable model.
std::string emit_hardcoded(const Primitive& p);

}  // namespace recad::script
