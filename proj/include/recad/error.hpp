#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace recad {

/// Machine-readable failure classes. Every error raised by the kernel carries
/// one of these; the invalidity ratio and the reward bucket failures by it.
enum class ErrorCategory {
  kParse,          // lexical, syntax, or rejected-construct errors
  kResource,       // sandbox step / loop / curve limits
  kContract,       // `cad_model` unbound or of the wrong type
  kEvaluation,     // runtime numeric or type errors inside a script
  kValidation,     // model violates a type invariant
  kGeometry,       // self-intersections, degenerate faces, intersecting loops
  kEmptySolid,     // solid with no occupied volume
  kExtraction,     // no script payload in a model response
  kRange,          // value outside a quantization range
  kUnsupported,    // feature outside the modelling interface
  kPrecondition,   // caller violated an operation precondition
  kIo,             // file system errors (CLI only)
  kUnpaired,       // evaluation input without a counterpart
};

std::string_view to_string(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const noexcept { return category_; }

 private:
  ErrorCategory category_;
};

}  // namespace recad
