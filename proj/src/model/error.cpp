#include "recad/error.hpp"

namespace recad {

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kParse: return "parse";
    case ErrorCategory::kResource: return "resource";
    case ErrorCategory::kContract: return "contract";
    case ErrorCategory::kEvaluation: return "evaluation";
    case ErrorCategory::kValidation: return "validation";
    case ErrorCategory::kGeometry: return "geometry";
    case ErrorCategory::kEmptySolid: return "empty-solid";
    case ErrorCategory::kExtraction: return "extraction";
    case ErrorCategory::kRange: return "range";
    case ErrorCategory::kUnsupported: return "unsupported-feature";
    case ErrorCategory::kPrecondition: return "precondition";
    case ErrorCategory::kIo: return "io";
    case ErrorCategory::kUnpaired: return "unpaired";
  }
  return "unknown";
}

}  // namespace recad
