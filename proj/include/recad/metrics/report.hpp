#pragma once

// Per-pair metric reports and batch summaries.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "recad/cad_model.hpp"
#include "recad/error.hpp"
#include "recad/script/interpreter.hpp"

namespace recad::metrics {

struct EvalOptions {
  int resolution = 64;
  std::size_t samples = 2000;  // surface points per model for chamfer
  std::uint64_t seed = 0;
  bool normalize = false;      // normalize both solids before every metric
};

struct MetricReport {
  bool valid = false;
  std::optional<ErrorCategory> failure_category;
  std::string message;
  // Present only when valid.
  std::optional<double> chamfer_x1e3;
  std::optional<double> iou_best;
  std::optional<double> p_f1;
  std::optional<std::size_t> alignment;  // index into geom::axis_rotations()
};

/// All metrics of a predicted model against the ground truth. Failures such
/// as an empty predicted solid are recorded, never thrown.
MetricReport evaluate_pair(const CADModel& pred, const CADModel& gt, const EvalOptions& options = {});

/// As above for a script execution result; failed executions are invalid.
MetricReport evaluate_outcome(const script::ExecutionOutcome& pred, const CADModel& gt,
                              const EvalOptions& options = {});

/// A report for an input that could not be evaluated at all.
MetricReport failed_report(ErrorCategory category, std::string message);

/// Fraction of failed outcomes. Throws Error{kPrecondition} when empty.
double invalidity_ratio(const std::vector<MetricReport>& reports);
double invalidity_ratio(const std::vector<script::ExecutionOutcome>& outcomes);

struct EvalSummary {
  std::size_t pairs = 0;
  std::size_t valid = 0;
  std::optional<double> mean_chamfer_x1e3;
  std::optional<double> median_chamfer_x1e3;
  std::optional<double> mean_iou_best;
  std::optional<double> mean_p_f1;
  double invalidity_ratio = 0.0;
};

/// Means and median over valid reports; the invalidity ratio over all.
EvalSummary summarize(const std::vector<MetricReport>& reports);

nlohmann::ordered_json to_json(const MetricReport& report);
nlohmann::ordered_json to_json(const EvalSummary& summary);

}  // namespace recad::metrics
