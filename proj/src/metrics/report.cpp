#include "recad/metrics/report.hpp"

#include <algorithm>

#include "recad/geometry/mass.hpp"
#include "recad/geometry/sampling.hpp"
#include "recad/metrics/metrics.hpp"

namespace recad::metrics {

MetricReport failed_report(ErrorCategory category, std::string message) {
  MetricReport r;
  r.failure_category = category;
  r.message = std::move(message);
  return r;
}

MetricReport evaluate_pair(const CADModel& pred, const CADModel& gt, const EvalOptions& options) {
  try {
    const CADModel a = options.normalize ? geom::normalize_model(pred, options.resolution) : pred;
    const CADModel b = options.normalize ? geom::normalize_model(gt, options.resolution) : gt;
    const IouBest best = iou_best(a, b, options.resolution, false);
    const double cd = chamfer(geom::sample_surface(a, options.samples, options.seed),
                              geom::sample_surface(b, options.samples, options.seed));
    MetricReport r;
    r.valid = true;
    r.chamfer_x1e3 = cd * 1e3;
    r.iou_best = best.score;
    r.p_f1 = primitive_f1(pred, gt);
    r.alignment = best.rotation;
    return r;
  } catch (const Error& e) {
    return failed_report(e.category(), e.what());
  }
}

MetricReport evaluate_outcome(const script::ExecutionOutcome& pred, const CADModel& gt,
                              const EvalOptions& options) {
  if (!pred.ok()) return failed_report(pred.failure.value_or(ErrorCategory::kEvaluation), pred.message);
  return evaluate_pair(*pred.model, gt, options);
}

double invalidity_ratio(const std::vector<MetricReport>& reports) {
  if (reports.empty()) throw Error(ErrorCategory::kPrecondition, "invalidity ratio of no outcomes");
  const auto failed = std::count_if(reports.begin(), reports.end(), [](const MetricReport& r) { return !r.valid; });
  return static_cast<double>(failed) / static_cast<double>(reports.size());
}

double invalidity_ratio(const std::vector<script::ExecutionOutcome>& outcomes) {
  if (outcomes.empty()) throw Error(ErrorCategory::kPrecondition, "invalidity ratio of no outcomes");
  const auto failed =
      std::count_if(outcomes.begin(), outcomes.end(), [](const script::ExecutionOutcome& o) { return !o.ok(); });
  return static_cast<double>(failed) / static_cast<double>(outcomes.size());
}

EvalSummary summarize(const std::vector<MetricReport>& reports) {
  EvalSummary s;
  s.pairs = reports.size();
  std::vector<double> cds;
  double iou_sum = 0.0, f1_sum = 0.0;
  for (const MetricReport& r : reports) {
    if (!r.valid) continue;
    ++s.valid;
    cds.push_back(*r.chamfer_x1e3);
    iou_sum += *r.iou_best;
    f1_sum += *r.p_f1;
  }
  if (!reports.empty()) s.invalidity_ratio = invalidity_ratio(reports);
  if (s.valid == 0) return s;
  const double n = static_cast<double>(s.valid);
  double cd_sum = 0.0;
  for (double c : cds) cd_sum += c;
  s.mean_chamfer_x1e3 = cd_sum / n;
  s.mean_iou_best = iou_sum / n;
  s.mean_p_f1 = f1_sum / n;
  std::sort(cds.begin(), cds.end());
  const std::size_t mid = cds.size() / 2;
  s.median_chamfer_x1e3 = cds.size() % 2 ? cds[mid] : 0.5 * (cds[mid - 1] + cds[mid]);
  return s;
}

namespace {

template <typename T>
nlohmann::ordered_json optional_json(const std::optional<T>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json to_json(const MetricReport& r) {
  nlohmann::ordered_json j;
  j["chamfer_x1e3"] = optional_json(r.chamfer_x1e3);
  j["iou_best"] = optional_json(r.iou_best);
  j["p_f1"] = optional_json(r.p_f1);
  j["valid"] = r.valid;
  j["failure_category"] =
      r.failure_category ? nlohmann::ordered_json(std::string(to_string(*r.failure_category)))
                         : nlohmann::ordered_json(nullptr);
  j["alignment"] = optional_json(r.alignment);
  return j;
}

nlohmann::ordered_json to_json(const EvalSummary& s) {
  nlohmann::ordered_json j;
  j["pairs"] = s.pairs;
  j["valid"] = s.valid;
  j["mean_chamfer_x1e3"] = optional_json(s.mean_chamfer_x1e3);
  j["median_chamfer_x1e3"] = optional_json(s.median_chamfer_x1e3);
  j["mean_iou_best"] = optional_json(s.mean_iou_best);
  j["mean_p_f1"] = optional_json(s.mean_p_f1);
  j["invalidity_ratio"] = s.invalidity_ratio;
  return j;
}

}  // namespace recad::metrics
