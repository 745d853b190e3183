#include "recad/rl/harness.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "recad/error.hpp"

namespace recad::rl {

namespace {

constexpr std::uint64_t kHardnessStream = 0x68617264;  // "hard"

// Calls visit(counts) for every composition of m into k non-negative parts.
void for_each_multiset(std::size_t k, std::size_t m, const std::function<void(const std::vector<std::size_t>&)>& visit) {
  std::vector<std::size_t> counts(k, 0);
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t slot, std::size_t left) {
    if (slot + 1 == k) {
      counts[slot] = left;
      visit(counts);
      return;
    }
    for (std::size_t c = 0; c <= left; ++c) {
      counts[slot] = c;
      rec(slot + 1, left - c);
    }
  };
  rec(0, m);
}

// m! / prod(c_k!) * prod(p_k^c_k), the coefficient built from exact binomials.
double multinomial_weight(const std::vector<std::size_t>& counts, const std::vector<double>& p) {
  double coef = 1.0;
  double w = 1.0;
  std::size_t m = 0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    for (std::size_t j = 1; j <= counts[k]; ++j) coef = coef * static_cast<double>(m + j) / static_cast<double>(j);
    m += counts[k];
    for (std::size_t j = 0; j < counts[k]; ++j) w *= p[k];
  }
  return coef * w;
}

struct OutcomeRollouts {
  std::vector<double> p_unguided;
  std::vector<Rollout> unguided;
  std::vector<std::vector<double>> p_guided;        // per guidance slot
  std::vector<std::vector<Rollout>> guided;          // per guidance slot
};

OutcomeRollouts enumerate_outcomes(const MockCategoricalPolicy& policy, const Question& q, const RewardFn& reward_fn,
                                   std::size_t guided_slots) {
  OutcomeRollouts out;
  const std::vector<std::string> texts = policy.outcome_texts(q);
  std::map<std::string, double> rewards;
  for (const std::string& t : texts) {
    if (!rewards.count(t)) rewards[t] = reward_fn(q, t);
  }
  auto make = [&](const std::string& text, std::optional<std::size_t> guidance) {
    Rollout r;
    r.solution_text = text;
    r.tokens = tokenize_solution(text);
    r.guided = guidance.has_value();
    r.guidance_index = guidance;
    r.logp_num = policy.logprob(q, r.tokens, std::nullopt, PolicyVersion::kCurrent);
    r.logp_den = policy.logprob(q, r.tokens, guidance, PolicyVersion::kOld);
    r.reward = rewards[text];
    return r;
  };
  out.p_unguided = policy.probabilities(std::nullopt, PolicyVersion::kOld);
  for (const std::string& t : texts) out.unguided.push_back(make(t, std::nullopt));
  for (std::size_t j = 0; j < guided_slots; ++j) {
    out.p_guided.push_back(policy.probabilities(j, PolicyVersion::kOld));
    out.guided.emplace_back();
    for (const std::string& t : texts) out.guided.back().push_back(make(t, j));
  }
  return out;
}

}  // namespace

RewardCache::RewardCache(reward::RewardConfig cfg, const metrics::EncoderInterface& encoder)
    : cfg_(std::move(cfg)), encoder_(encoder) {
  reward::check_config(cfg_);
}

double RewardCache::operator()(const Question& q, const std::string& solution_text) {
  auto key = std::make_pair(q.id, solution_text);
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  }
  reward::RewardConfig cfg = cfg_;
  cfg.normalize_before = q.modality == Modality::kImage;
  const double total = reward::compute_reward(solution_text, q.gt, cfg, encoder_).total;
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(std::move(key), total);
  return total;
}

RewardFn RewardCache::fn() {
  return [this](const Question& q, const std::string& text) { return (*this)(q, text); };
}

std::size_t RewardCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

void check_config(const HarnessConfig& cfg) {
  if (cfg.group_size < 2) throw Error(ErrorCategory::kPrecondition, "group size must be at least 2");
  if (cfg.hardness_samples < 1) throw Error(ErrorCategory::kPrecondition, "hardness needs at least one sample");
  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) {
    throw Error(ErrorCategory::kPrecondition, "clip epsilon must lie in (0, 1)");
  }
  if (!(cfg.tau_h > 0.0 && cfg.tau_h <= 1.0)) throw Error(ErrorCategory::kPrecondition, "tau_h must lie in (0, 1]");
  if (!cfg.beta) throw Error(ErrorCategory::kPrecondition, "the KL weight beta has no default and must be set");
  if (!(*cfg.beta >= 0.0)) throw Error(ErrorCategory::kPrecondition, "beta must be non-negative");
}

bool classify_hardness(const Question& q, const PolicyInterface& policy, const RewardFn& reward_fn, std::size_t n,
                       double tau_h, std::uint64_t seed) {
  if (n == 0) throw Error(ErrorCategory::kPrecondition, "hardness needs at least one sample");
  if (!(tau_h > 0.0 && tau_h <= 1.0)) throw Error(ErrorCategory::kPrecondition, "tau_h must lie in (0, 1]");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const Rollout r = policy.sample(q, std::nullopt, derive_seed(seed, i, kHardnessStream));
    best = std::max(best, reward_fn(q, r.solution_text));
  }
  return best < tau_h;
}

Group sample_group(const Question& q, const PolicyInterface& policy, const RewardFn& reward_fn, std::size_t n,
                   std::size_t guided, std::uint64_t seed) {
  if (guided > n) throw Error(ErrorCategory::kPrecondition, "more guided slots than rollouts");
  Group g;
  g.question_id = q.id;
  for (std::size_t i = 0; i < n; ++i) {
    std::optional<std::size_t> guidance;
    if (i < guided) guidance = i;
    Rollout r = policy.sample(q, guidance, derive_seed(seed, i, 0));
    r.reward = reward_fn(q, r.solution_text);
    g.rollouts.push_back(std::move(r));
  }
  assign_advantages(&g);
  return g;
}

std::size_t guided_slots(const Question& q, std::size_t n) {
  return n == 0 ? 0 : std::min(q.guidance_codes.size(), n - 1);
}

TrainStepReport mixed_loss(const std::vector<Question>& batch, const PolicyInterface& policy,
                           const RewardFn& reward_fn, const HarnessConfig& cfg, std::size_t step) {
  check_config(cfg);
  if (batch.empty()) throw Error(ErrorCategory::kPrecondition, "batch is empty");
  TrainStepReport report;
  report.step = step;
  double sum = 0.0;
  for (const Question& q : batch) {
    QuestionReport qr;
    qr.id = q.id;
    const std::uint64_t qseed = derive_seed(cfg.seed, hash_text(q.id), 0);
    qr.hard = q.hard && !cfg.reevaluate_hardness
                  ? *q.hard
                  : classify_hardness(q, policy, reward_fn, cfg.hardness_samples, cfg.tau_h, qseed);
    qr.guided = qr.hard ? guided_slots(q, cfg.group_size) : 0;
    if (qr.hard && qr.guided == 0) qr.warning = "hard question has no guidance; using the unguided objective";
    const Group g = sample_group(q, policy, reward_fn, cfg.group_size, qr.guided, derive_seed(qseed, step, 1));
    qr.kl = policy.kl(q);
    qr.objective = qr.guided > 0 ? guided_objective(g, cfg.epsilon, *cfg.beta, qr.kl)
                                 : grpo_objective(g, cfg.epsilon, *cfg.beta, qr.kl);
    for (const Rollout& r : g.rollouts) qr.rewards.push_back(r.reward);
    qr.advantages = g.advantages;
    sum += qr.objective;
    report.hard += qr.hard;
    report.questions.push_back(std::move(qr));
  }
  report.objective = sum / static_cast<double>(batch.size());
  return report;
}

nlohmann::ordered_json to_json(const QuestionReport& r) {
  nlohmann::ordered_json j;
  j["id"] = r.id;
  j["hard"] = r.hard;
  j["guided"] = r.guided;
  j["objective"] = r.objective;
  j["kl"] = r.kl;
  double mean = 0.0;
  for (double v : r.rewards) mean += v;
  j["reward_mean"] = r.rewards.empty() ? 0.0 : mean / static_cast<double>(r.rewards.size());
  j["reward_max"] = r.rewards.empty() ? 0.0 : *std::max_element(r.rewards.begin(), r.rewards.end());
  j["rewards"] = r.rewards;
  j["advantages"] = r.advantages;
  j["warning"] = r.warning ? nlohmann::ordered_json(*r.warning) : nlohmann::ordered_json(nullptr);
  return j;
}

nlohmann::ordered_json to_json(const TrainStepReport& r) {
  nlohmann::ordered_json j;
  j["step"] = r.step;
  j["objective"] = r.objective;
  j["hard"] = r.hard;
  j["questions"] = nlohmann::ordered_json::array();
  for (const QuestionReport& q : r.questions) j["questions"].push_back(to_json(q));
  return j;
}

double expected_grpo_objective(const MockCategoricalPolicy& policy, const Question& q, const RewardFn& reward_fn,
                               std::size_t n, double eps, double beta) {
  if (n < 2) throw Error(ErrorCategory::kPrecondition, "group size must be at least 2");
  const OutcomeRollouts o = enumerate_outcomes(policy, q, reward_fn, 0);
  double expectation = 0.0;
  for_each_multiset(o.unguided.size(), n, [&](const std::vector<std::size_t>& counts) {
    Group g;
    for (std::size_t k = 0; k < counts.size(); ++k) g.rollouts.insert(g.rollouts.end(), counts[k], o.unguided[k]);
    assign_advantages(&g);
    expectation += multinomial_weight(counts, o.p_unguided) * grpo_objective(g, eps, 0.0, 0.0);
  });
  return expectation - beta * policy.kl(q);
}

double expected_guided_objective(const MockCategoricalPolicy& policy, const Question& q, const RewardFn& reward_fn,
                                 std::size_t n, std::size_t guided, double eps, double beta) {
  if (n < 2) throw Error(ErrorCategory::kPrecondition, "group size must be at least 2");
  if (guided == 0 || guided > n) throw Error(ErrorCategory::kPrecondition, "guided slots must lie in [1, n]");
  const OutcomeRollouts o = enumerate_outcomes(policy, q, reward_fn, guided);
  const std::size_t k = o.unguided.size();
  double expectation = 0.0;
  std::vector<std::size_t> pick(guided, 0);
  while (true) {
    double w_guided = 1.0;
    Group base;
    for (std::size_t j = 0; j < guided; ++j) {
      w_guided *= o.p_guided[j][pick[j]];
      base.rollouts.push_back(o.guided[j][pick[j]]);
    }
    auto add = [&](const std::vector<std::size_t>& counts, double w) {
      Group g = base;
      for (std::size_t c = 0; c < counts.size(); ++c) g.rollouts.insert(g.rollouts.end(), counts[c], o.unguided[c]);
      assign_advantages(&g);
      expectation += w * guided_objective(g, eps, 0.0, 0.0);
    };
    if (guided == n) {
      add(std::vector<std::size_t>(k, 0), w_guided);
    } else {
      for_each_multiset(k, n - guided, [&](const std::vector<std::size_t>& counts) {
        add(counts, w_guided * multinomial_weight(counts, o.p_unguided));
      });
    }
    std::size_t j = 0;
    while (j < guided && ++pick[j] == k) pick[j++] = 0;
    if (j == guided) break;
  }
  return expectation - beta * policy.kl(q);
}

}  // namespace recad::rl
