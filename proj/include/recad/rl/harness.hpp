#pragma once

// Hard-question gating and the mixed guided/unguided training objective over
// a policy, plus exact expectations for the categorical mock policy.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "recad/metrics/encoder.hpp"
#include "recad/reward/reward.hpp"
#include "recad/rl/grpo.hpp"
#include "recad/rl/policy.hpp"

namespace recad::rl {

using RewardFn = std::function<double(const Question& q, const std::string& solution_text)>;

/// compute_reward totals memoized per (question id, solution text). Image
/// questions are scored with normalization. Safe to share across threads.
class RewardCache {
 public:
  RewardCache(reward::RewardConfig cfg, const metrics::EncoderInterface& encoder);

  double operator()(const Question& q, const std::string& solution_text);
  RewardFn fn();
  std::size_t size() const;

 private:
  reward::RewardConfig cfg_;
  const metrics::EncoderInterface& encoder_;
  mutable std::mutex mu_;
  std::map<std::pair<std::string, std::string>, double> cache_;
};

struct HarnessConfig {
  std::size_t group_size = 8;
  double epsilon = 0.2;
  std::optional<double> beta;  // required
  double tau_h = 0.8;
  std::size_t hardness_samples = 8;
  std::uint64_t seed = 0;
  bool reevaluate_hardness = false;
};

/// Throws Error{kPrecondition} for group_size < 2, hardness_samples < 1,
/// epsilon outside (0, 1), tau_h outside (0, 1], or a missing or negative beta.
void check_config(const HarnessConfig& cfg);

/// Samples n unguided solutions and reports whether the best reward is below
/// tau_h. Throws Error{kPrecondition} for n = 0 or tau_h outside (0, 1].
bool classify_hardness(const Question& q, const PolicyInterface& policy, const RewardFn& reward_fn, std::size_t n,
                       double tau_h, std::uint64_t seed);

/// n rollouts, the first `guided` of them conditioned on guidance codes
/// 0..guided-1, rewarded and with joint advantages.
Group sample_group(const Question& q, const PolicyInterface& policy, const RewardFn& reward_fn, std::size_t n,
                   std::size_t guided, std::uint64_t seed);

/// Guided slots for a hard question: one per guidance code, at most n - 1.
std::size_t guided_slots(const Question& q, std::size_t n);

struct QuestionReport {
  std::string id;
  bool hard = false;
  std::size_t guided = 0;
  double objective = 0.0;
  double kl = 0.0;
  std::vector<double> rewards;
  std::vector<double> advantages;
  std::optional<std::string> warning;
};

struct TrainStepReport {
  std::size_t step = 0;
  std::vector<QuestionReport> questions;
  double objective = 0.0;  // batch mean
  std::size_t hard = 0;
};

/// Per question: hardness (cached unless reevaluate_hardness), then the
/// guided objective for hard questions with guidance and the plain objective
/// otherwise. A hard question without guidance falls back to the plain
/// objective with a warning. Throws Error{kPrecondition} for an empty batch.
TrainStepReport mixed_loss(const std::vector<Question>& batch, const PolicyInterface& policy,
                           const RewardFn& reward_fn, const HarnessConfig& cfg, std::size_t step = 0);

nlohmann::ordered_json to_json(const QuestionReport& report);
nlohmann::ordered_json to_json(const TrainStepReport& report);

/// Exact expectation of grpo_objective over groups of n unguided draws from
/// the mock policy, enumerating outcome multisets with multinomial weights.
double expected_grpo_objective(const MockCategoricalPolicy& policy, const Question& q, const RewardFn& reward_fn,
                               std::size_t n, double eps, double beta);

/// Exact expectation of guided_objective when the first `guided` slots are
/// drawn under guidance codes 0..guided-1 and the rest unguided.
double expected_guided_objective(const MockCategoricalPolicy& policy, const Question& q, const RewardFn& reward_fn,
                                 std::size_t n, std::size_t guided, double eps, double beta);

}  // namespace recad::rl
