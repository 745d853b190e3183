#include "recad/rl/grpo.hpp"

#include <algorithm>
#include <cmath>

#include "recad/error.hpp"

namespace recad::rl {

namespace {

void check_epsilon(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCategory::kPrecondition, "clip epsilon must lie in (0, 1)");
}

void check_advantages(const Group& group) {
  if (group.rollouts.empty()) throw Error(ErrorCategory::kPrecondition, "group has no rollouts");
  if (group.advantages.size() != group.rollouts.size()) {
    throw Error(ErrorCategory::kPrecondition, "advantages are not assigned");
  }
}

}  // namespace

std::vector<double> group_advantages(const std::vector<double>& rewards) {
  const std::size_t n = rewards.size();
  if (n < 2) throw Error(ErrorCategory::kPrecondition, "advantages need at least two rewards");
  if (std::all_of(rewards.begin(), rewards.end(), [&](double r) { return r == rewards.front(); })) {
    return std::vector<double>(n, 0.0);
  }
  double mean = 0.0;
  for (double r : rewards) mean += r;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double r : rewards) var += (r - mean) * (r - mean);
  var /= static_cast<double>(n);
  const double scale = std::max(std::sqrt(var), kStdGuard);
  std::vector<double> out;
  out.reserve(n);
  for (double r : rewards) out.push_back((r - mean) / scale);
  return out;
}

void assign_advantages(Group* group) {
  std::vector<double> rewards;
  rewards.reserve(group->rollouts.size());
  for (const Rollout& r : group->rollouts) rewards.push_back(r.reward);
  group->advantages = group_advantages(rewards);
}

double clip_term(double r, double a, double eps) {
  return std::min(r * a, std::clamp(r, 1.0 - eps, 1.0 + eps) * a);
}

double rollout_term(const Rollout& rollout, double a, double eps) {
  const std::size_t n = rollout.logp_num.size();
  if (n == 0) throw Error(ErrorCategory::kPrecondition, "rollout has no tokens");
  if (rollout.logp_den.size() != n) throw Error(ErrorCategory::kPrecondition, "ratio sequences differ in length");
  double sum = 0.0;
  for (std::size_t t = 0; t < n; ++t) sum += clip_term(std::exp(rollout.logp_num[t] - rollout.logp_den[t]), a, eps);
  return sum / static_cast<double>(n);
}

double grpo_objective(const Group& group, double eps, double beta, double kl) {
  check_epsilon(eps);
  check_advantages(group);
  double sum = 0.0;
  for (std::size_t i = 0; i < group.rollouts.size(); ++i) {
    if (group.rollouts[i].guided) {
      throw Error(ErrorCategory::kPrecondition, "grpo_objective needs on-policy rollouts only");
    }
    sum += rollout_term(group.rollouts[i], group.advantages[i], eps);
  }
  return sum / static_cast<double>(group.rollouts.size()) - beta * kl;
}

double guided_objective(const Group& group, double eps, double beta, double kl) {
  check_epsilon(eps);
  check_advantages(group);
  double on_sum = 0.0, guided_sum = 0.0;
  std::size_t on = 0, guided = 0;
  for (std::size_t i = 0; i < group.rollouts.size(); ++i) {
    const double term = rollout_term(group.rollouts[i], group.advantages[i], eps);
    if (group.rollouts[i].guided) {
      guided_sum += term;
      ++guided;
    } else {
      on_sum += term;
      ++on;
    }
  }
  if (guided == 0) throw Error(ErrorCategory::kPrecondition, "guided_objective needs a guided rollout");
  const double on_mean = on ? on_sum / static_cast<double>(on) : 0.0;
  return on_mean + guided_sum / static_cast<double>(guided) - beta * kl;
}

}  // namespace recad::rl
