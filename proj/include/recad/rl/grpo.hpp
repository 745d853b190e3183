#pragma once

// Group-relative advantages and the clipped surrogate objectives, with and
// without off-policy guidance.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace recad::rl {

/// One sampled solution with per-token log-probabilities. logp_num is the
/// current policy given the question alone; logp_den is the sampling policy
/// in its sampling context (with the guidance code for guided rollouts).
struct Rollout {
  std::vector<std::string> tokens;
  std::vector<double> logp_num;
  std::vector<double> logp_den;
  bool guided = false;
  std::optional<std::size_t> guidance_index;
  std::string solution_text;
  double reward = 0.0;
};

struct Group {
  std::string question_id;
  std::vector<Rollout> rollouts;
  std::vector<double> advantages;  // empty until assigned
};

inline constexpr double kStdGuard = 1e-8;

/// (R_i - mean) / max(std, kStdGuard) with the population standard deviation.
/// Throws Error{kPrecondition} for fewer than two rewards.
std::vector<double> group_advantages(const std::vector<double>& rewards);

/// Advantages of all rollouts of the group, guided or not, computed jointly.
void assign_advantages(Group* group);

/// min(r A, clip(r, 1 - eps, 1 + eps) A).
double clip_term(double r, double a, double eps);

/// Mean over tokens of clip_term(exp(num - den), a, eps). Throws
/// Error{kPrecondition} for an empty rollout or mismatched sequences.
double rollout_term(const Rollout& rollout, double a, double eps);

/// Mean rollout term over the group minus beta kl. Every rollout must be
/// on-policy and advantages must be assigned.
double grpo_objective(const Group& group, double eps, double beta, double kl);

/// Mean rollout term of the on-policy rollouts (0 when there are none) plus
/// the mean rollout term of the guided rollouts, minus beta kl. Requires at
/// least one guided rollout.
double guided_objective(const Group& group, double eps, double beta, double kl);

}  // namespace recad::rl
