#include "recad/rl/policy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "recad/error.hpp"
#include "recad/geometry/mass.hpp"
#include "recad/script/emitter.hpp"

namespace recad::rl {

namespace {

constexpr std::string_view kThink = "<think>Sketch the profile, then extrude it.</think>\n";
constexpr std::string_view kBrokenScript = "cad_model = CADModel(\n";

std::string fenced(std::string_view script, bool think) {
  std::string out = think ? std::string(kThink) : std::string();
  out += "```python\n";
  out += script;
  out += "```\n";
  return out;
}

const std::map<std::string, OutcomeKind>& kind_names() {
  static const std::map<std::string, OutcomeKind> names = {
      {"ground_truth", OutcomeKind::kGroundTruth}, {"no_think", OutcomeKind::kNoThink},
      {"broken", OutcomeKind::kBroken},            {"scaled", OutcomeKind::kScaled},
      {"guidance", OutcomeKind::kGuidance},        {"literal", OutcomeKind::kLiteral},
  };
  return names;
}

std::vector<double> softmax(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> p;
  double sum = 0.0;
  for (double l : logits) {
    p.push_back(std::exp(l - top));
    sum += p.back();
  }
  for (double& v : p) v /= sum;
  return p;
}

std::vector<double> parse_logits(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw Error(ErrorCategory::kParse, std::string("policy field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j) {
    if (!v.is_number()) throw Error(ErrorCategory::kParse, std::string("policy field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize_solution(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::size_t end = nl == std::string_view::npos ? text.size() : nl + 1;
    tokens.emplace_back(text.substr(start, end - start));
    start = end;
  }
  tokens.emplace_back(kEndToken);
  return tokens;
}

void check_config(const MockPolicyConfig& cfg) {
  const std::size_t k = cfg.outcomes.size();
  if (k == 0) throw Error(ErrorCategory::kPrecondition, "mock policy has no outcomes");
  for (const auto* logits : {&cfg.current, &cfg.old, &cfg.reference}) {
    if (logits->size() != k) throw Error(ErrorCategory::kPrecondition, "logit count differs from outcome count");
    for (double l : *logits) {
      if (!std::isfinite(l)) throw Error(ErrorCategory::kPrecondition, "logits must be finite");
    }
  }
  if (!std::isfinite(cfg.guidance_bias)) throw Error(ErrorCategory::kPrecondition, "guidance bias must be finite");
  for (const MockOutcome& o : cfg.outcomes) {
    if (o.kind == OutcomeKind::kScaled && !(o.scale > 0.0 && std::isfinite(o.scale))) {
      throw Error(ErrorCategory::kPrecondition, "scaled outcome needs a positive scale");
    }
  }
}

MockPolicyConfig default_mock_config() {
  MockPolicyConfig cfg;
  cfg.outcomes = {{OutcomeKind::kGroundTruth},
                  {OutcomeKind::kNoThink},
                  {OutcomeKind::kBroken},
                  {OutcomeKind::kScaled, 1.5},
                  {OutcomeKind::kGuidance, 1.0, 0}};
  cfg.current = {0.0, 0.5, 1.0, 0.5, -0.5};
  cfg.old = {0.2, 0.4, 1.1, 0.3, -0.4};
  cfg.reference = {0.0, 0.0, 0.0, 0.0, 0.0};
  return cfg;
}

MockPolicyConfig mock_config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCategory::kParse, "policy config must be an object");
  if (!j.contains("outcomes") || !j["outcomes"].is_array()) {
    throw Error(ErrorCategory::kParse, "policy config needs an 'outcomes' array");
  }
  MockPolicyConfig cfg;
  for (const auto& o : j["outcomes"]) {
    if (!o.is_object() || !o.contains("kind") || !o["kind"].is_string()) {
      throw Error(ErrorCategory::kParse, "each outcome needs a string 'kind'");
    }
    const auto it = kind_names().find(o["kind"].get<std::string>());
    if (it == kind_names().end()) {
      throw Error(ErrorCategory::kParse, "unknown outcome kind '" + o["kind"].get<std::string>() + "'");
    }
    MockOutcome out;
    out.kind = it->second;
    if (o.contains("scale")) {
      if (!o["scale"].is_number()) throw Error(ErrorCategory::kParse, "outcome 'scale' must be a number");
      out.scale = o["scale"].get<double>();
    }
    if (o.contains("index")) {
      if (!o["index"].is_number_unsigned()) throw Error(ErrorCategory::kParse, "outcome 'index' must be unsigned");
      out.index = o["index"].get<std::size_t>();
    }
    if (o.contains("text")) {
      if (!o["text"].is_string()) throw Error(ErrorCategory::kParse, "outcome 'text' must be a string");
      out.text = o["text"].get<std::string>();
    }
    cfg.outcomes.push_back(std::move(out));
  }
  if (!j.contains("current")) throw Error(ErrorCategory::kParse, "policy config needs 'current' logits");
  cfg.current = parse_logits(j["current"], "current");
  cfg.old = j.contains("old") ? parse_logits(j["old"], "old") : cfg.current;
  cfg.reference = j.contains("reference") ? parse_logits(j["reference"], "reference") : cfg.current;
  if (j.contains("guidance_bias")) {
    if (!j["guidance_bias"].is_number()) throw Error(ErrorCategory::kParse, "'guidance_bias' must be a number");
    cfg.guidance_bias = j["guidance_bias"].get<double>();
  }
  try {
    check_config(cfg);
  } catch (const Error& e) {
    throw Error(ErrorCategory::kParse, e.what());
  }
  return cfg;
}

nlohmann::ordered_json to_json(const MockPolicyConfig& cfg) {
  nlohmann::ordered_json j;
  j["outcomes"] = nlohmann::ordered_json::array();
  for (const MockOutcome& o : cfg.outcomes) {
    nlohmann::ordered_json e;
    for (const auto& [name, kind] : kind_names()) {
      if (kind == o.kind) e["kind"] = name;
    }
    if (o.kind == OutcomeKind::kScaled) e["scale"] = o.scale;
    if (o.kind == OutcomeKind::kGuidance) e["index"] = o.index;
    if (o.kind == OutcomeKind::kLiteral) e["text"] = o.text;
    j["outcomes"].push_back(std::move(e));
  }
  j["current"] = cfg.current;
  j["old"] = cfg.old;
  j["reference"] = cfg.reference;
  j["guidance_bias"] = cfg.guidance_bias;
  return j;
}

MockCategoricalPolicy::MockCategoricalPolicy(MockPolicyConfig cfg) : cfg_(std::move(cfg)) { check_config(cfg_); }

std::vector<std::string> MockCategoricalPolicy::outcome_texts(const Question& q) const {
  std::vector<std::string> texts;
  texts.reserve(cfg_.outcomes.size());
  for (const MockOutcome& o : cfg_.outcomes) {
    switch (o.kind) {
      case OutcomeKind::kGroundTruth:
        texts.push_back(fenced(script::emit_model(q.gt), true));
        break;
      case OutcomeKind::kNoThink:
        texts.push_back(fenced(script::emit_model(q.gt), false));
        break;
      case OutcomeKind::kBroken:
        texts.push_back(fenced(kBrokenScript, true));
        break;
      case OutcomeKind::kScaled:
        texts.push_back(fenced(script::emit_model(geom::transform_model(q.gt, {{0, 0, 0}, o.scale})), true));
        break;
      case OutcomeKind::kGuidance:
        texts.push_back(o.index < q.guidance_codes.size() ? fenced(q.guidance_codes[o.index], true)
                                                          : std::string(kThink));
        break;
      case OutcomeKind::kLiteral:
        texts.push_back(o.text);
        break;
    }
  }
  return texts;
}

std::vector<double> MockCategoricalPolicy::probabilities(std::optional<std::size_t> guidance,
                                                         PolicyVersion version) const {
  std::vector<double> logits = version == PolicyVersion::kCurrent ? cfg_.current
                               : version == PolicyVersion::kOld   ? cfg_.old
                                                                  : cfg_.reference;
  if (guidance) {
    for (std::size_t k = 0; k < logits.size(); ++k) {
      const MockOutcome& o = cfg_.outcomes[k];
      if (o.kind == OutcomeKind::kGuidance && o.index == *guidance) logits[k] += cfg_.guidance_bias;
    }
  }
  return softmax(logits);
}

std::vector<double> MockCategoricalPolicy::logprob(const Question& q, const std::vector<std::string>& tokens,
                                                   std::optional<std::size_t> guidance,
                                                   PolicyVersion version) const {
  const std::vector<double> p = probabilities(guidance, version);
  const std::vector<std::string> texts = outcome_texts(q);
  std::vector<std::vector<std::string>> seqs;
  seqs.reserve(texts.size());
  for (const std::string& t : texts) seqs.push_back(tokenize_solution(t));

  std::vector<bool> alive(seqs.size(), true);
  double mass = 1.0;
  std::vector<double> out;
  out.reserve(tokens.size());
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    double next = 0.0;
    for (std::size_t k = 0; k < seqs.size(); ++k) {
      alive[k] = alive[k] && t < seqs[k].size() && seqs[k][t] == tokens[t];
      if (alive[k]) next += p[k];
    }
    out.push_back(next > 0.0 ? std::log(next / mass) : -std::numeric_limits<double>::infinity());
    if (next == 0.0) {
      out.resize(tokens.size(), -std::numeric_limits<double>::infinity());
      break;
    }
    mass = next;
  }
  return out;
}

Rollout MockCategoricalPolicy::sample(const Question& q, std::optional<std::size_t> guidance,
                                      std::uint64_t seed) const {
  const std::vector<double> p = probabilities(guidance, PolicyVersion::kOld);
  const double u = unit_uniform(seed);
  std::size_t pick = p.size() - 1;
  double acc = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    acc += p[k];
    if (u < acc) {
      pick = k;
      break;
    }
  }
  Rollout r;
  r.solution_text = outcome_texts(q)[pick];
  r.tokens = tokenize_solution(r.solution_text);
  r.guided = guidance.has_value();
  r.guidance_index = guidance;
  r.logp_num = logprob(q, r.tokens, std::nullopt, PolicyVersion::kCurrent);
  r.logp_den = logprob(q, r.tokens, guidance, PolicyVersion::kOld);
  return r;
}

double MockCategoricalPolicy::kl(const Question& q) const {
  const std::vector<double> p = probabilities(std::nullopt, PolicyVersion::kCurrent);
  const std::vector<double> r = probabilities(std::nullopt, PolicyVersion::kReference);
  std::map<std::string, std::pair<double, double>> mass;
  const std::vector<std::string> texts = outcome_texts(q);
  for (std::size_t k = 0; k < texts.size(); ++k) {
    mass[texts[k]].first += p[k];
    mass[texts[k]].second += r[k];
  }
  double sum = 0.0;
  for (const auto& [text, pr] : mass) {
    if (pr.first > 0.0) sum += pr.first * std::log(pr.first / pr.second);
  }
  return std::max(sum, 0.0);
}

double unit_uniform(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  z ^= z >> 31;
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint64_t v : {base, a, b}) {
    h ^= v;
    h *= 0x100000001b3ULL;
    h ^= h >> 29;
  }
  return h;
}

std::uint64_t hash_text(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace recad::rl
