// End-to-end checks of the recad binary: exit codes, outputs and determinism.

#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "../support/builders.hpp"
#include "recad/metrics/encoder.hpp"
#include "recad/metrics/metrics.hpp"
#include "recad/model_io.hpp"
#include "recad/rl/curriculum.hpp"
#include "recad/rl/harness.hpp"
#include "recad/script/emitter.hpp"

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace recad;
using namespace recad::testing;

struct Run {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p, std::ios::binary) << text;
}

class Sandbox {
 public:
  Sandbox() : root_(fs::temp_directory_path() / ("recad_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  ~Sandbox() { fs::remove_all(root_); }
  const fs::path& root() const { return root_; }
  fs::path operator/(const std::string& rel) const { return root_ / rel; }

  Run run(const std::string& args) const {
    const fs::path out = root_ / ".stdout", err = root_ / ".stderr";
    const std::string cmd = std::string("cd '") + root_.string() + "' && '" + RECAD_BIN + "' " + args + " >'" +
                            out.string() + "' 2>'" + err.string() + "'";
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(out), slurp(err)};
  }

 private:
  fs::path root_;
};

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    if (!line.empty()) out.push_back(json::parse(line));
  }
  return out;
}

std::string think_and_code(const std::string& code) {
  return "<think>Profile first.</think>\n```python\n" + code + "```\n";
}

std::string spline_variant(std::string external) {
  const std::size_t at = external.find("\"Line3D\"");
  REQUIRE(at != std::string::npos);
  return external.replace(at, 8, "\"NurbsCurve3D\"");
}

const std::string kFixtures = RECAD_FIXTURE_DIR;

}  // namespace

TEST_CASE("usage errors exit 1, data errors exit 2") {
  Sandbox box;
  CHECK(box.run("").code == 1);
  CHECK(box.run("--help").code == 0);
  CHECK(box.run("exec").code == 1);
  CHECK(box.run("exec a.rcad --no-such-flag").code == 1);
  CHECK(box.run("export a.rcad --format stl -o a.stl").code == 1);
  CHECK(box.run("harness-sim m.jsonl").code == 1);  // --beta has no default

  spit(box / "legacy.py", script::emit_model(cube()));
  CHECK(box.run("exec legacy.py").code == 0);

  const Run missing = box.run("exec missing.rcad");
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error: io:") == 0);
}

TEST_CASE("convert: external JSON to native, spline rejected, round trip through a script") {
  Sandbox box;
  const std::string external = slurp(kFixtures + "/external_plate.json");
  spit(box / "plate.json", external);
  spit(box / "spline.json", spline_variant(external));

  const Run native = box.run("convert plate.json -o plate.native.json");
  REQUIRE(native.code == 0);
  const CADModel reference = from_external_json(external);
  CHECK(model_from_string(slurp(box / "plate.native.json")) == reference);

  const Run spline = box.run("convert spline.json -o spline.native.json");
  CHECK(spline.code == 2);
  CHECK(spline.err.find("unsupported-feature") != std::string::npos);
  CHECK(spline.err.find("spline.json") != std::string::npos);
  CHECK_FALSE(fs::exists(box / "spline.native.json"));

  REQUIRE(box.run("convert plate.native.json -o plate.rcad").code == 0);
  REQUIRE(box.run("exec plate.rcad -o plate.exec.json").code == 0);
  const CADModel back = model_from_string(slurp(box / "plate.exec.json"));
  CHECK(metrics::iou_best(back, reference, 64).score >= 0.98);
  CHECK(slurp(box / "plate.json") == external);  // inputs untouched
}

TEST_CASE("eval: identical directories, one broken script, summary consistency") {
  Sandbox box;
  Generator gen(41);
  for (int i = 0; i < 8; ++i) {
    const std::string stem = "m" + std::to_string(i);
    const std::string code = script::emit_model(gen.model());
    spit(box / ("gt/" + stem + ".rcad"), code);
    spit(box / ("pred/" + stem + ".rcad"), i == 5 ? "cad_model = CADModel(\n" : code);
  }
  const std::string flags = " --resolution 32 --samples 300";

  const Run same = box.run("eval --pred gt --gt gt" + flags);
  REQUIRE(same.code == 0);
  const std::vector<json> lines = json_lines(same.out);
  REQUIRE(lines.size() == 9);
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(lines[i]["chamfer_x1e3"].get<double>() == 0.0);
    CHECK(lines[i]["iou_best"].get<double>() == doctest::Approx(1.0));
  }
  CHECK(lines[8]["summary"]["invalidity_ratio"].get<double>() == 0.0);

  const Run broken = box.run("eval --pred pred --gt gt -o report.jsonl" + flags);
  REQUIRE(broken.code == 0);
  const std::vector<json> report = json_lines(slurp(box / "report.jsonl"));
  REQUIRE(report.size() == 9);
  CHECK(report[5]["stem"] == "m5");
  CHECK(report[5]["failure_category"] == "parse");
  const json summary = report[8]["summary"];
  CHECK(summary["invalidity_ratio"].get<double>() == 0.125);

  std::vector<double> cds;
  for (std::size_t i = 0; i < 8; ++i) {
    if (report[i]["valid"].get<bool>()) cds.push_back(report[i]["chamfer_x1e3"].get<double>());
  }
  REQUIRE(cds.size() == 7);
  double mean = 0.0;
  for (double v : cds) mean += v;
  mean /= 7.0;
  std::sort(cds.begin(), cds.end());
  CHECK(summary["mean_chamfer_x1e3"].get<double>() == doctest::Approx(mean).epsilon(1e-12));
  CHECK(summary["median_chamfer_x1e3"].get<double>() == cds[3]);
}

TEST_CASE("eval: unpaired files are reported and counted invalid") {
  Sandbox box;
  spit(box / "gt/a.rcad", script::emit_model(cube()));
  spit(box / "pred/a.rcad", script::emit_model(cube()));
  spit(box / "pred/b.rcad", script::emit_model(cube()));
  const Run r = box.run("eval --pred pred --gt gt --resolution 16 --samples 50");
  REQUIRE(r.code == 0);
  const std::vector<json> lines = json_lines(r.out);
  REQUIRE(lines.size() == 3);
  CHECK(lines[1]["failure_category"] == "unpaired");
  CHECK(lines[2]["summary"]["invalidity_ratio"].get<double>() == 0.5);
}

TEST_CASE("reward: the three reference solutions end to end") {
  Sandbox box;
  const CADModel gt = cube_minus_cylinder(1.0, 0.25);
  const std::string code = script::emit_model(gt);
  spit(box / "gt.json", model_to_string(gt));
  spit(box / "perfect.txt", think_and_code(code));
  spit(box / "broken.txt", think_and_code("cad_model = CADModel(\n"));
  spit(box / "nothink.txt", "```python\n" + code + "```\n");

  const auto total = [&](const std::string& file) {
    const Run r = box.run("reward " + file + " --gt gt.json");
    REQUIRE(r.code == 0);
    return json::parse(r.out);
  };
  const json perfect = total("perfect.txt");
  CHECK(perfect["total"].get<double>() == 1.0);
  CHECK(perfect["geometric"].get<double>() == 1.0);
  const json broken = total("broken.txt");
  CHECK(broken["total"].get<double>() == 0.9);
  CHECK(broken["failure_category"] == "parse");
  CHECK(total("nothink.txt")["total"].get<double>() == 0.1);
}

TEST_CASE("curriculum: square model, curve-count order, duplicates, skipped inputs") {
  Sandbox box;
  spit(box / "square/sq.rcad", script::emit_model(cube()));
  const Run sq = box.run("curriculum square -o sq/manifest.jsonl");
  REQUIRE(sq.code == 0);
  const std::vector<json> entries = json_lines(slurp(box / "sq/manifest.jsonl"));
  REQUIRE(entries.size() == 4);
  const char* levels[] = {"L", "F", "S", "SE"};
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(entries[i]["level"] == levels[i]);
    CHECK(entries[i]["curve_count"] == 4);
    const std::string ref = entries[i]["guidance"][0];
    CHECK(fs::exists(box / ("sq/" + ref)));
  }
  CHECK(json::parse(sq.out)["levels"]["SE"] == 1);

  // Loops of 1, 3 and 8 curves on separate, well-separated models.
  const auto single = [](Loop loop) { return CADModel{{prism({Face{std::move(loop), {}}}, 0.5)}}; };
  spit(box / "counts/a.rcad", script::emit_model(single(polygon_loop(0, 0, 1.0, 8))));
  spit(box / "counts/b.rcad", script::emit_model(single(circle_loop(0, 0, 1.0))));
  spit(box / "counts/c.rcad", script::emit_model(single(polygon_loop(0, 0, 1.0, 3))));
  REQUIRE(box.run("curriculum counts -o counts.jsonl").code == 0);
  std::vector<int> l_counts;
  for (const json& e : json_lines(slurp(box / "counts.jsonl"))) {
    if (e["level"] == "L") l_counts.push_back(e["curve_count"]);
  }
  CHECK(l_counts == std::vector<int>{1, 3, 8});

  spit(box / "dups/x.rcad", script::emit_model(cube()));
  spit(box / "dups/y.rcad", script::emit_model(cube()));
  spit(box / "dups/z.rcad", "not a model\n");
  const Run dups = box.run("curriculum dups -o dups.jsonl");
  REQUIRE(dups.code == 0);
  CHECK(json_lines(slurp(box / "dups.jsonl")).size() == 4);
  const json summary = json::parse(dups.out);
  REQUIRE(summary["skipped"].size() == 1);
  CHECK(summary["skipped"][0]["file"] == "z.rcad");
}

TEST_CASE("harness-sim: guided rollouts on hard questions and objectives match the library") {
  Sandbox box;
  spit(box / "models/sq.rcad", script::emit_model(cube()));
  REQUIRE(box.run("curriculum models -o manifest.jsonl").code == 0);
  // Only think-less outputs: every question is hard at tau_h = 0.8.
  spit(box / "policy.json", R"({"outcomes": [{"kind": "no_think"}, {"kind": "guidance", "index": 0}],
                                "current": [0.0, -30.0], "old": [0.0, -30.0], "reference": [0.0, 0.0]})");
  const std::string args =
      "harness-sim manifest.jsonl --policy policy.json --beta 0.04 --steps 2 --group-size 4 "
      "--hardness-samples 8 --tau-h 0.8 --resolution 24 --seed 7";
  const Run a = box.run(args);
  REQUIRE(a.code == 0);
  CHECK(box.run(args).out == a.out);

  const std::vector<json> lines = json_lines(a.out);
  REQUIRE(lines.size() == 2 * (4 + 1));
  for (const json& l : lines) {
    if (l["type"] != "question") continue;
    CHECK(l["hard"] == true);
    CHECK(l["guided"] == 1);
  }

  // The same run through the library.
  std::vector<rl::Question> questions;
  for (const json& e : json_lines(slurp(box / "manifest.jsonl"))) {
    rl::ManifestQuestion mq = rl::question_from_json(e);
    for (const std::string& ref : mq.guidance_refs) mq.question.guidance_codes.push_back(slurp(box / ref));
    questions.push_back(std::move(mq.question));
  }
  rl::HarnessConfig cfg;
  cfg.group_size = 4;
  cfg.hardness_samples = 8;
  cfg.beta = 0.04;
  cfg.seed = 7;
  reward::RewardConfig rc;
  rc.resolution = 24;
  const metrics::OccupancyEncoder encoder;
  rl::RewardCache cache(rc, encoder);
  const rl::MockCategoricalPolicy policy(rl::mock_config_from_json(json::parse(slurp(box / "policy.json"))));
  for (std::size_t step = 0; step < 2; ++step) {
    const rl::TrainStepReport report = rl::mixed_loss(questions, policy, cache.fn(), cfg, step);
    CHECK(lines[step * 5 + 4]["objective"].get<double>() == report.objective);
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(lines[step * 5 + i]["objective"].get<double>() == report.questions[i].objective);
    }
  }
}

TEST_CASE("harness-sim: config errors come before any work") {
  Sandbox box;
  spit(box / "manifest.jsonl", "");
  const Run r = box.run("harness-sim manifest.jsonl --beta 0.1 --epsilon 1.5 -o out.jsonl");
  CHECK(r.code == 2);
  CHECK(r.err.find("precondition") != std::string::npos);
  CHECK_FALSE(fs::exists(box / "out.jsonl"));
  CHECK(box.run("harness-sim manifest.jsonl --beta -1").code == 2);
}

TEST_CASE("export: cube OBJ counts, empty model, repeatable bytes") {
  Sandbox box;
  spit(box / "cube.json", model_to_string(cube()));
  REQUIRE(box.run("export cube.json --format obj -o a.obj").code == 0);
  REQUIRE(box.run("export cube.json --format obj -o b.obj").code == 0);
  const std::string obj = slurp(box / "a.obj");
  CHECK(obj == slurp(box / "b.obj"));
  std::size_t v = 0, f = 0;
  std::istringstream in(obj);
  for (std::string line; std::getline(in, line);) {
    v += line.rfind("v ", 0) == 0;
    f += line.rfind("f ", 0) == 0;
  }
  CHECK(v == 8);
  CHECK(f == 12);

  REQUIRE(box.run("export cube.json --format voxel --resolution 16 -o a.rcvx").code == 0);
  REQUIRE(box.run("export cube.json --format voxel --resolution 16 -o b.rcvx").code == 0);
  CHECK(slurp(box / "a.rcvx") == slurp(box / "b.rcvx"));

  CADModel empty = cube();
  empty.pairs.push_back(prism({Face{square_loop(-1, -1, 3), {}}}, 2, 1, BooleanOp::kCut));
  spit(box / "empty.json", model_to_string(empty));
  const Run e = box.run("export empty.json --format obj -o e.obj");
  CHECK(e.code == 2);
  CHECK(e.err.find("empty-solid") != std::string::npos);
  CHECK(box.run("export empty.json --format voxel -o e.rcvx").code == 2);
}
