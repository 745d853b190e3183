#pragma once

// Reward for generated CAD solutions: gated geometric agreement plus a
// format term for the leading think block.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "recad/cad_model.hpp"
#include "recad/error.hpp"
#include "recad/metrics/encoder.hpp"
#include "recad/script/interpreter.hpp"

namespace recad::reward {

struct RewardConfig {
  double lambda1 = 0.1;  // geometric weight
  double lambda2 = 0.9;  // format weight
  double tau = 0.55;     // similarity gate
  bool normalize_before = false;  // set for image tasks
  int resolution = 64;
  bool strict_zero_on_failure = false;  // failed execution also forfeits the format term
  script::ExecLimits limits;
};

/// Throws Error{kPrecondition} unless lambdas are non-negative, 0 <= tau < 1,
/// resolution >= 2 and the limits are positive.
void check_config(const RewardConfig& cfg);

struct RewardBreakdown {
  double geometric = 0.0;
  int format = 0;
  double total = 0.0;
  std::optional<ErrorCategory> failure_category;
  std::string message;
  std::optional<double> iou_best;
  std::optional<double> similarity;
};

/// max(0, (s - tau) / (1 - tau)).
double phi(double s, double tau);

/// 1 iff the text starts, after leading whitespace, with <think> and closes
/// it with </think> before the script payload.
int format_reward(std::string_view text);

/// The last fenced code block, or the text after the think block when there
/// is no fence. Throws Error{kExtraction} when the payload is blank.
std::string extract_script(std::string_view text);

/// Executes the extracted script and scores it against `gt`:
/// geometric = min(iou_best, phi(similarity, tau)), total = lambda1 geometric
/// + lambda2 format. Failures are recorded, never thrown.
RewardBreakdown compute_reward(std::string_view text, const CADModel& gt, const RewardConfig& cfg,
                               const metrics::EncoderInterface& encoder);

/// compute_reward over many solutions on up to `threads` workers. Results are
/// in input order and independent of the thread count.
std::vector<RewardBreakdown> compute_rewards(const std::vector<std::string>& texts, const CADModel& gt,
                                             const RewardConfig& cfg, const metrics::EncoderInterface& encoder,
                                             std::size_t threads = 1);

/// {total, geometric, format, failure_category, iou_best, similarity}; absent
/// values are null.
nlohmann::ordered_json to_json(const RewardBreakdown& breakdown);

}  // namespace recad::reward
