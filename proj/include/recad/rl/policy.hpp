#pragma once

// Policy abstraction for the harness and a seedable categorical mock policy
// over a finite set of solution texts.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "recad/cad_model.hpp"
#include "recad/rl/grpo.hpp"

namespace recad::rl {

enum class Modality { kText, kImage };

struct Question {
  std::string id;
  Modality modality = Modality::kText;
  std::string payload;
  CADModel gt;
  std::vector<std::string> guidance_codes;
  std::optional<bool> hard;  // cached hardness
};

enum class PolicyVersion { kCurrent, kOld, kReference };

/// Lines of the text (each keeping its newline) followed by kEndToken.
std::vector<std::string> tokenize_solution(std::string_view text);
inline constexpr std::string_view kEndToken = "<eos>";

class PolicyInterface {
 public:
  virtual ~PolicyInterface() = default;

  /// Per-token log-probabilities of `tokens` under `version`, conditioned on
  /// guidance code `guidance` of the question when set.
  virtual std::vector<double> logprob(const Question& q, const std::vector<std::string>& tokens,
                                      std::optional<std::size_t> guidance, PolicyVersion version) const = 0;

  /// Draws from the old policy in the given context. logp_den holds the
  /// sampling context's log-probabilities and logp_num the current policy's
  /// without guidance. The reward is left at 0.
  virtual Rollout sample(const Question& q, std::optional<std::size_t> guidance, std::uint64_t seed) const = 0;

  /// KL(current || reference) for the question.
  virtual double kl(const Question& q) const = 0;
};

enum class OutcomeKind {
  kGroundTruth,  // think block + hardcoded ground-truth script
  kNoThink,      // hardcoded ground-truth script without a think block
  kBroken,       // think block + script with a syntax error
  kScaled,       // think block + ground truth scaled about the origin
  kGuidance,     // think block + guidance code `index` (think block alone if absent)
  kLiteral,      // fixed text
};

struct MockOutcome {
  MockOutcome() = default;
  MockOutcome(OutcomeKind k, double s = 1.0, std::size_t i = 0, std::string t = {})
      : kind(k), scale(s), index(i), text(std::move(t)) {}

  OutcomeKind kind = OutcomeKind::kGroundTruth;
  double scale = 1.0;
  std::size_t index = 0;
  std::string text;
};

/// Logits per outcome for each policy version. Under guidance code j the old
/// policy adds guidance_bias to the logits of kGuidance outcomes with index j.
struct MockPolicyConfig {
  std::vector<MockOutcome> outcomes;
  std::vector<double> current;
  std::vector<double> old;
  std::vector<double> reference;
  double guidance_bias = 2.0;
};

/// Throws Error{kPrecondition} for empty outcomes, mismatched logit lengths,
/// non-finite logits or non-positive scales.
void check_config(const MockPolicyConfig& cfg);

/// Five outcomes (ground truth, no think, broken, scaled 1.5, guidance 0).
MockPolicyConfig default_mock_config();

/// Parses {"outcomes": [{"kind": ..., ...}], "current": [...], "old": [...],
/// "reference": [...], "guidance_bias": x}. "old" and "reference" default to
/// "current". Throws Error{kParse} on malformed input.
MockPolicyConfig mock_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const MockPolicyConfig& cfg);

/// Categorical over whole solution texts. Per-token probabilities are the
/// conditional masses of the token prefix tree, so a sequence's token
/// log-probabilities sum to the log of its total outcome mass.
class MockCategoricalPolicy : public PolicyInterface {
 public:
  explicit MockCategoricalPolicy(MockPolicyConfig cfg);

  std::vector<double> logprob(const Question& q, const std::vector<std::string>& tokens,
                              std::optional<std::size_t> guidance, PolicyVersion version) const override;
  Rollout sample(const Question& q, std::optional<std::size_t> guidance, std::uint64_t seed) const override;
  double kl(const Question& q) const override;

  /// Outcome texts for the question, one per configured outcome.
  std::vector<std::string> outcome_texts(const Question& q) const;

  /// Outcome probabilities for a version and context.
  std::vector<double> probabilities(std::optional<std::size_t> guidance, PolicyVersion version) const;

  const MockPolicyConfig& config() const { return cfg_; }

 private:
  MockPolicyConfig cfg_;
};

/// Uniform double in [0, 1) from a 64-bit seed (splitmix64 finalizer).
double unit_uniform(std::uint64_t seed);

/// Deterministic seed for item `a`, slot `b` of a run seeded with `base`.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b);

/// FNV-1a hash of a string.
std::uint64_t hash_text(std::string_view text);

}  // namespace recad::rl
