#include "recad/reward/reward.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <new>
#include <thread>

#include "recad/metrics/metrics.hpp"

namespace recad::reward {

namespace {

constexpr std::string_view kOpen = "<think>";
constexpr std::string_view kClose = "</think>";
constexpr std::string_view kFence = "```";

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::size_t skip_space(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  return i;
}

struct Fence {
  std::size_t open = 0;  // position of the opening backticks
  std::string_view body;
};

// Fences open at the start of a line; the rest of the opening line is an
// info string. An unterminated last fence runs to the end of the text.
std::optional<Fence> last_fence(std::string_view text) {
  std::optional<Fence> last;
  std::size_t pos = 0;
  while (true) {
    std::size_t open = text.find(kFence, pos);
    while (open != std::string_view::npos && open > 0 && text[open - 1] != '\n') {
      open = text.find(kFence, open + 1);
    }
    if (open == std::string_view::npos) break;
    std::size_t line_end = text.find('\n', open);
    if (line_end == std::string_view::npos) {
      last = Fence{open, {}};
      break;
    }
    const std::size_t body_start = line_end + 1;
    std::size_t close = body_start;
    while (true) {
      close = text.find(kFence, close);
      if (close == std::string_view::npos || close == 0 || text[close - 1] == '\n') break;
      ++close;
    }
    if (close == std::string_view::npos) {
      last = Fence{open, text.substr(body_start)};
      break;
    }
    last = Fence{open, text.substr(body_start, close - body_start)};
    const std::size_t after = text.find('\n', close);
    if (after == std::string_view::npos) break;
    pos = after + 1;
  }
  return last;
}

// Offset just past the closing tag of a leading think block, if any.
std::optional<std::size_t> think_end(std::string_view text) {
  const std::size_t start = skip_space(text);
  if (text.substr(start, kOpen.size()) != kOpen) return std::nullopt;
  const std::size_t close = text.find(kClose, start + kOpen.size());
  if (close == std::string_view::npos) return std::nullopt;
  return close + kClose.size();
}

}  // namespace

void check_config(const RewardConfig& cfg) {
  if (!(cfg.lambda1 >= 0.0) || !(cfg.lambda2 >= 0.0)) {
    throw Error(ErrorCategory::kPrecondition, "reward weights must be non-negative");
  }
  if (!(cfg.tau >= 0.0 && cfg.tau < 1.0)) throw Error(ErrorCategory::kPrecondition, "tau must lie in [0, 1)");
  if (cfg.resolution < 2) throw Error(ErrorCategory::kPrecondition, "resolution must be at least 2");
  script::check_limits(cfg.limits);
}

double phi(double s, double tau) { return std::max(0.0, (s - tau) / (1.0 - tau)); }

int format_reward(std::string_view text) {
  const std::optional<std::size_t> end = think_end(text);
  if (!end) return 0;
  const std::optional<Fence> fence = last_fence(text);
  return !fence || fence->open >= *end ? 1 : 0;
}

std::string extract_script(std::string_view text) {
  std::string_view payload;
  if (const std::optional<Fence> fence = last_fence(text)) {
    payload = fence->body;
  } else if (const std::optional<std::size_t> end = think_end(text)) {
    payload = text.substr(*end);
  } else {
    payload = text;
  }
  if (is_blank(payload)) throw Error(ErrorCategory::kExtraction, "solution contains no script");
  return std::string(payload);
}

RewardBreakdown compute_reward(std::string_view text, const CADModel& gt, const RewardConfig& cfg,
                               const metrics::EncoderInterface& encoder) {
  RewardBreakdown out;
  out.format = format_reward(text);
  try {
    const CADModel pred = script::run_script(extract_script(text), cfg.limits);
    const double iou = metrics::iou_best(pred, gt, cfg.resolution, cfg.normalize_before).score;
    const double sim = metrics::geometric_similarity(pred, gt, encoder, cfg.resolution, cfg.normalize_before);
    out.iou_best = iou;
    out.similarity = sim;
    out.geometric = std::min(iou, phi(sim, cfg.tau));
  } catch (const Error& e) {
    out.failure_category = e.category();
    out.message = e.what();
  } catch (const std::bad_alloc&) {
    out.failure_category = ErrorCategory::kResource;
    out.message = "out of memory";
  }
  if (out.failure_category) {
    out.geometric = 0.0;
    if (cfg.strict_zero_on_failure) out.format = 0;
  }
  out.total = cfg.lambda1 * out.geometric + cfg.lambda2 * out.format;
  return out;
}

std::vector<RewardBreakdown> compute_rewards(const std::vector<std::string>& texts, const CADModel& gt,
                                             const RewardConfig& cfg, const metrics::EncoderInterface& encoder,
                                             std::size_t threads) {
  std::vector<RewardBreakdown> out(texts.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < texts.size(); i = next++) out[i] = compute_reward(texts[i], gt, cfg, encoder);
  };
  const std::size_t n = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(texts.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n; ++t) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  return out;
}

nlohmann::ordered_json to_json(const RewardBreakdown& b) {
  nlohmann::ordered_json j;
  j["total"] = b.total;
  j["geometric"] = b.geometric;
  j["format"] = b.format;
  j["failure_category"] =
      b.failure_category ? nlohmann::ordered_json(to_string(*b.failure_category)) : nlohmann::ordered_json(nullptr);
  j["iou_best"] = b.iou_best ? nlohmann::ordered_json(*b.iou_best) : nlohmann::ordered_json(nullptr);
  j["similarity"] = b.similarity ? nlohmann::ordered_json(*b.similarity) : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace recad::reward
