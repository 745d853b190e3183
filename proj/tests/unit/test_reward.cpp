#include <doctest.h>

#include <cmath>

#include "../support/builders.hpp"
#include "recad/geometry/mass.hpp"
#include "recad/reward/reward.hpp"
#include "recad/script/emitter.hpp"

using namespace recad;
using namespace recad::reward;
using recad::metrics::OccupancyEncoder;
using namespace recad::testing;

namespace {

std::string solution(const std::string& script, bool think = true) {
  return (think ? "<think>plan the sketch</think>\n" : "") + std::string("```python\n") + script + "```\n";
}

RewardConfig small_config() {
  RewardConfig cfg;
  cfg.resolution = 32;
  return cfg;
}

}  // namespace

TEST_CASE("phi examples") {
  CHECK(phi(0.55, 0.55) == 0.0);
  CHECK(phi(1.0, 0.55) == 1.0);
  CHECK(phi(0.775, 0.55) == 0.5);
  CHECK(phi(0.2, 0.55) == 0.0);
  CHECK(phi(0.3, 0.0) == 0.3);
  double prev = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double v = phi(i / 100.0, 0.55);
    CHECK(v >= prev);
    CHECK(v <= 1.0);
    prev = v;
  }
}

TEST_CASE("format_reward") {
  CHECK(format_reward("<think>plan</think>\n```python\nx = 1\n```") == 1);
  CHECK(format_reward("  \n\t<think>a</think>x = 1") == 1);
  CHECK(format_reward("```python\nx = 1\n```") == 0);
  CHECK(format_reward("<think>never closed\n```python\nx = 1\n```") == 0);
  CHECK(format_reward("preamble <think>a</think>") == 0);
  CHECK(format_reward("<think>a\n```python\nx = 1\n```\n</think>") == 0);
  CHECK(format_reward("") == 0);
}

TEST_CASE("extract_script") {
  CHECK(extract_script("<think>a</think>\n```python\nx = 1\n```\n") == "x = 1\n");
  CHECK(extract_script("```\nfirst\n```\ntext\n```py\nsecond\n```") == "second\n");
  CHECK(extract_script("<think>a</think>\nx = 2\n") == "\nx = 2\n");
  CHECK(extract_script("x = 3") == "x = 3");
  CHECK(extract_script("<think>a</think>\n```python\nx = 4\n") == "x = 4\n");
  CHECK(extract_script("```python\nprint('``` inline')\n```") == "print('``` inline')\n");
  for (const char* empty : {"<think>only thoughts</think>", "<think>a</think>\n```python\n```", "", "  \n"}) {
    try {
      extract_script(empty);
      FAIL("expected an extraction error");
    } catch (const Error& e) {
      CHECK(e.category() == ErrorCategory::kExtraction);
    }
  }
}

TEST_CASE("compute_reward examples") {
  const CADModel gt = cube_minus_cylinder(1.0, 0.25);
  const OccupancyEncoder enc;
  const RewardConfig cfg;
  const std::string script = script::emit_hardcoded(gt);

  const RewardBreakdown perfect = compute_reward(solution(script), gt, cfg, enc);
  CHECK(perfect.geometric == 1.0);
  CHECK(perfect.format == 1);
  CHECK(perfect.total == 1.0);
  CHECK_FALSE(perfect.failure_category.has_value());

  const RewardBreakdown broken = compute_reward(solution("cad_model = CADModel(\n"), gt, cfg, enc);
  CHECK(broken.total == 0.9);
  CHECK(broken.geometric == 0.0);
  CHECK(broken.failure_category == ErrorCategory::kParse);

  const RewardBreakdown bare = compute_reward(solution(script, false), gt, cfg, enc);
  CHECK(bare.total == 0.1);
  CHECK(bare.format == 0);

  RewardConfig strict = cfg;
  strict.strict_zero_on_failure = true;
  CHECK(compute_reward(solution("cad_model = CADModel(\n"), gt, strict, enc).total == 0.0);
  CHECK(compute_reward(solution(script), gt, strict, enc).total == 1.0);
}

TEST_CASE("compute_reward records every failure category") {
  const CADModel gt = cube();
  const OccupancyEncoder enc;
  const RewardConfig cfg = small_config();
  struct Case {
    std::string text;
    ErrorCategory category;
  };
  const std::vector<Case> cases = {
      {"<think>a</think>", ErrorCategory::kExtraction},
      {solution("x = 1\n"), ErrorCategory::kContract},
      {solution("x = 1 / 0\n"), ErrorCategory::kEvaluation},
      {solution("import os\n"), ErrorCategory::kParse},
      {solution("for i in range(10**9):\n    x = i\n"), ErrorCategory::kResource},
  };
  for (const Case& c : cases) {
    const RewardBreakdown r = compute_reward(c.text, gt, cfg, enc);
    REQUIRE(r.failure_category.has_value());
    CHECK(*r.failure_category == c.category);
    CHECK(r.geometric == 0.0);
    CHECK(r.total == cfg.lambda2 * r.format);
  }

  CADModel gone = cube();
  gone.pairs.push_back(prism({Face{square_loop(-1, -1, 3), {}}}, 2.0, 1.0, BooleanOp::kCut));
  const RewardBreakdown empty = compute_reward(solution(script::emit_model(gone)), gt, cfg, enc);
  CHECK(empty.failure_category == ErrorCategory::kEmptySolid);
}

TEST_CASE("normalized geometric term is scale invariant") {
  const OccupancyEncoder enc;
  RewardConfig cfg;
  cfg.normalize_before = true;
  Generator gen(23);
  for (int trial = 0; trial < 4; ++trial) {
    const CADModel gt = gen.model();
    const double base = compute_reward(solution(script::emit_hardcoded(gt)), gt, cfg, enc).geometric;
    for (double s : {0.25, 0.5, 2.0, 3.7}) {
      const CADModel scaled = geom::transform_model(gt, geom::SimilarityTransform{{0.1, -0.2, 0.05}, s});
      const RewardBreakdown r = compute_reward(solution(script::emit_model(scaled)), gt, cfg, enc);
      REQUIRE_FALSE(r.failure_category.has_value());
      CHECK(std::abs(r.geometric - base) <= 0.02);
    }
  }
}

TEST_CASE("reward bounds, gate and determinism") {
  const OccupancyEncoder enc;
  const RewardConfig cfg = small_config();
  const CADModel gt = cube(1.0, {-0.5, -0.5, -0.5});
  std::vector<std::string> texts;
  for (double dx : {0.0, 0.1, 0.25, 0.5, 1.5}) {
    texts.push_back(solution(script::emit_model(cube(1.0, {-0.5 + dx, -0.5, -0.5}))));
    texts.push_back(solution(script::emit_model(cube(1.0, {-0.5 + dx, -0.5, -0.5})), false));
  }
  texts.push_back("garbage");
  const auto serial = compute_rewards(texts, gt, cfg, enc, 1);
  const auto parallel = compute_rewards(texts, gt, cfg, enc, 4);
  REQUIRE(serial.size() == texts.size());
  for (std::size_t i = 0; i < texts.size(); ++i) {
    const RewardBreakdown& r = serial[i];
    CHECK(r.total >= 0.0);
    CHECK(r.total <= cfg.lambda1 + cfg.lambda2);
    CHECK(to_json(r).dump() == to_json(parallel[i]).dump());
    CHECK(to_json(r).dump() == to_json(compute_reward(texts[i], gt, cfg, enc)).dump());
    if (r.iou_best) {
      CHECK(r.geometric == std::min(*r.iou_best, phi(*r.similarity, cfg.tau)));
      CHECK(r.geometric <= *r.iou_best);
    }
  }
  for (std::size_t i = 0; i + 2 < 10; i += 2) CHECK(serial[i].geometric >= serial[i + 2].geometric);

  const auto j = to_json(serial.back());
  CHECK(j["failure_category"] == "evaluation");
  CHECK(j["iou_best"].is_null());
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"total", "geometric", "format", "failure_category", "iou_best", "similarity"});
}

TEST_CASE("check_config") {
  RewardConfig cfg;
  CHECK_NOTHROW(check_config(cfg));
  cfg.tau = 1.0;
  CHECK_THROWS_AS(check_config(cfg), Error);
  cfg = {};
  cfg.lambda1 = -0.1;
  CHECK_THROWS_AS(check_config(cfg), Error);
  cfg = {};
  cfg.resolution = 1;
  CHECK_THROWS_AS(check_config(cfg), Error);
}
