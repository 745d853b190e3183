#pragma once

// Sandboxed evaluation of CAD scripts.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "recad/cad_model.hpp"
#include "recad/error.hpp"
#include "recad/script/ast.hpp"

namespace recad::script {

struct ExecLimits {
  std::int64_t max_steps = 200'000;     // statements plus evaluated expression nodes
  std::int64_t max_loop_iters = 10'000;  // total for-loop iterations of one run
  std::int64_t max_curves = 5'000;       // curve commands issued on all loops
};

/// Throws Error{kPrecondition} unless every limit is positive.
void check_limits(const ExecLimits& limits);

/// Runs the program and returns the validated model bound to `cad_model`.
/// Errors: kResource (limits), kContract (`cad_model` unbound or not a
/// CADModel), kEvaluation (runtime type and numeric errors), kValidation
/// (the resulting model violates an invariant). The interpreter touches no
/// files, clock, network or environment.
CADModel execute(const ScriptAst& ast, const ExecLimits& limits = {});

/// tokenize, parse and execute.
CADModel run_script(std::string_view source, const ExecLimits& limits = {});

struct ExecutionOutcome {
  std::optional<CADModel> model;
  std::optional<ErrorCategory> failure;
  std::string message;

  bool ok() const { return model.has_value(); }
};

/// run_script that reports failures instead of throwing.
ExecutionOutcome try_run_script(std::string_view source, const ExecLimits& limits = {});

}  // namespace recad::script
