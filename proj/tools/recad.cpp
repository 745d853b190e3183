// recad: batch command line for conversion, evaluation, rewards, curricula,
// harness simulation, export and script execution.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "cli_io.hpp"
#include "recad/error.hpp"
#include "recad/geometry/export.hpp"
#include "recad/geometry/voxel.hpp"
#include "recad/metrics/encoder.hpp"
#include "recad/metrics/report.hpp"
#include "recad/model_io.hpp"
#include "recad/reward/reward.hpp"
#include "recad/rl/curriculum.hpp"
#include "recad/rl/harness.hpp"
#include "recad/rl/policy.hpp"
#include "recad/script/emitter.hpp"

namespace {

using namespace recad;
using namespace recad::cli;
using json = nlohmann::ordered_json;

constexpr int kExitData = 2;

struct RewardFlags {
  double tau = 0.55;
  double lambda1 = 0.1;
  double lambda2 = 0.9;
  bool strict = false;
};

void add_reward_flags(CLI::App* cmd, RewardFlags* f) {
  cmd->add_option("--tau", f->tau, "similarity gate")->capture_default_str();
  cmd->add_option("--lambda1", f->lambda1, "geometric weight")->capture_default_str();
  cmd->add_option("--lambda2", f->lambda2, "format weight")->capture_default_str();
  cmd->add_flag("--strict", f->strict, "failed execution also forfeits the format reward");
}

reward::RewardConfig reward_config(const RewardFlags& f, int resolution, const script::ExecLimits& limits) {
  reward::RewardConfig cfg;
  cfg.tau = f.tau;
  cfg.lambda1 = f.lambda1;
  cfg.lambda2 = f.lambda2;
  cfg.strict_zero_on_failure = f.strict;
  cfg.resolution = resolution;
  cfg.limits = limits;
  reward::check_config(cfg);
  return cfg;
}

std::string safe_name(const std::string& id) {
  std::string out;
  for (char c : id) out += c == '/' ? std::string("__") : std::string(1, c);
  return out;
}

// ---------------------------------------------------------------------------

struct ConvertArgs {
  std::string input;
  std::string output;
  std::string to;
};

int cmd_convert(const ConvertArgs& a) {
  require_exists(a.input);
  const std::string to = !a.to.empty() ? a.to : (is_script_path(a.output) ? "script" : "native");
  if (to != "script" && to != "native") throw Error(ErrorCategory::kPrecondition, "--to must be native or script");
  const CADModel model = load_model(a.input, {});
  write_file(a.output, to == "script" ? script::emit_model(model) : model_to_string(model));
  spdlog::info("converted {} -> {}", a.input, a.output);
  return 0;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
  std::string pred;
  std::string gt;
  std::string output;
  int resolution = 64;
  std::size_t samples = 2000;
  std::uint64_t seed = 0;
  bool normalize = false;
  std::string limits = "200000,10000,5000";
};

int cmd_eval(const EvalArgs& a) {
  require_exists(a.pred);
  require_exists(a.gt);
  const script::ExecLimits limits = parse_limits(a.limits);
  metrics::EvalOptions opts;
  opts.resolution = a.resolution;
  opts.samples = a.samples;
  opts.seed = a.seed;
  opts.normalize = a.normalize;
  if (opts.resolution < 2 || opts.samples < 1) {
    throw Error(ErrorCategory::kPrecondition, "--resolution must be >= 2 and --samples >= 1");
  }

  auto by_stem = [](const fs::path& p) {
    std::map<std::string, fs::path> out;
    const std::vector<fs::path> files = fs::is_directory(p) ? list_inputs(p) : std::vector<fs::path>{p};
    for (const fs::path& f : files) {
      if (!out.emplace(f.stem().string(), f).second) {
        throw Error(ErrorCategory::kPrecondition, "two inputs share the stem '" + f.stem().string() + "'");
      }
    }
    return out;
  };
  std::map<std::string, fs::path> preds = by_stem(a.pred);
  std::map<std::string, fs::path> gts = by_stem(a.gt);
  if (!fs::is_directory(a.pred) && !fs::is_directory(a.gt)) {
    gts = {{preds.begin()->first, gts.begin()->second}};
  }

  std::set<std::string> stems;
  for (const auto& [s, p] : preds) stems.insert(s);
  for (const auto& [s, p] : gts) stems.insert(s);

  LineSink sink(a.output);
  std::vector<metrics::MetricReport> reports;
  for (const std::string& stem : stems) {
    metrics::MetricReport r;
    const auto p = preds.find(stem);
    const auto g = gts.find(stem);
    if (p == preds.end() || g == gts.end()) {
      const std::string missing = p == preds.end() ? "prediction" : "ground truth";
      spdlog::warn("{}: no {}", stem, missing);
      r = metrics::failed_report(ErrorCategory::kUnpaired, "no " + missing + " for '" + stem + "'");
    } else {
      try {
        const CADModel gt = load_model(g->second, limits);
        r = metrics::evaluate_outcome(load_outcome(p->second, limits), gt, opts);
      } catch (const Error& e) {
        spdlog::warn("{}: ground truth unusable: {}", stem, e.what());
        r = metrics::failed_report(e.category(), std::string("ground truth: ") + e.what());
      }
    }
    json line;
    line["stem"] = stem;
    const json fields = metrics::to_json(r);
    for (const auto& [k, v] : fields.items()) line[k] = v;
    sink.write(line.dump());
    reports.push_back(std::move(r));
  }
  json summary;
  summary["summary"] = metrics::to_json(metrics::summarize(reports));
  sink.write(summary.dump());
  sink.finish();
  return 0;
}

// ---------------------------------------------------------------------------

struct RewardArgs {
  std::string solution;
  std::string gt;
  int resolution = 64;
  bool normalize = false;
  std::string limits = "200000,10000,5000";
  RewardFlags flags;
};

int cmd_reward(const RewardArgs& a) {
  require_exists(a.solution);
  require_exists(a.gt);
  reward::RewardConfig cfg = reward_config(a.flags, a.resolution, parse_limits(a.limits));
  cfg.normalize_before = a.normalize;
  const CADModel gt = load_model(a.gt, cfg.limits);
  const metrics::OccupancyEncoder encoder;
  const reward::RewardBreakdown b = reward::compute_reward(read_file(a.solution), gt, cfg, encoder);
  std::cout << reward::to_json(b).dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct CurriculumArgs {
  std::string models;
  std::string output;
  std::string guidance_dir;
  std::string candidates;
  double threshold = 0.95;
  double tau_s = 0.95;
  int resolution = 32;
  std::string limits = "200000,10000,5000";
};

int cmd_curriculum(const CurriculumArgs& a) {
  require_exists(a.models, true);
  if (!a.candidates.empty()) require_exists(a.candidates, true);
  const script::ExecLimits limits = parse_limits(a.limits);
  rl::DedupOptions dedup{a.threshold, a.resolution};
  rl::RewriteOptions rewrite;
  rewrite.tau_s = a.tau_s;
  rewrite.limits = limits;

  const fs::path manifest_dir = fs::absolute(a.output).parent_path();
  const fs::path guidance_dir = a.guidance_dir.empty() ? manifest_dir / "guidance" : fs::path(a.guidance_dir);
  std::error_code ec;
  fs::create_directories(guidance_dir, ec);
  if (ec) throw Error(ErrorCategory::kIo, "cannot create " + guidance_dir.string());

  std::vector<rl::SourceModel> models;
  json skipped = json::array();
  for (const fs::path& f : list_inputs(a.models)) {
    try {
      models.push_back({f.stem().string(), load_model(f, limits)});
    } catch (const Error& e) {
      spdlog::warn("skipping {}: {}", f.string(), e.what());
      skipped.push_back({{"file", f.filename().string()}, {"category", to_string(e.category())}, {"message", e.what()}});
    }
  }
  const metrics::OccupancyEncoder encoder;
  const std::vector<rl::ManifestEntry> entries = rl::build_curriculum(models, encoder, dedup);

  std::vector<std::string> candidate_files;
  if (!a.candidates.empty()) {
    for (const fs::path& f : list_inputs(a.candidates)) candidate_files.push_back(f.string());
  }

  LineSink sink(a.output);
  std::map<std::string, std::size_t> counts;
  for (const char* level : {"L", "F", "S", "SE", "MSE"}) counts[level] = 0;
  for (const rl::ManifestEntry& e : entries) {
    const std::string name = safe_name(e.id);
    std::vector<std::string> candidates;
    for (const std::string& f : candidate_files) {
      const std::string base = fs::path(f).filename().string();
      if (base.rfind(name + ".", 0) == 0 && is_script_path(f)) candidates.push_back(read_file(f));
    }
    const std::vector<std::string> codes =
        candidates.empty() ? std::vector<std::string>{script::emit_hardcoded(e.primitive)}
                           : rl::rewrite_filter(e.primitive, candidates, encoder, rewrite);
    std::vector<std::string> refs;
    for (std::size_t k = 0; k < codes.size(); ++k) {
      const fs::path file = guidance_dir / (name + "." + std::to_string(k) + ".rcad");
      write_file(file, codes[k]);
      refs.push_back(fs::relative(file, manifest_dir).generic_string());
    }
    sink.write(rl::to_json(e, refs).dump());
    ++counts[std::string(to_string(e.level))];
  }
  sink.finish();
  json summary;
  summary["models"] = models.size();
  summary["entries"] = entries.size();
  summary["levels"] = json::object();
  for (const char* level : {"L", "F", "S", "SE", "MSE"}) summary["levels"][level] = counts[level];
  summary["skipped"] = skipped;
  std::cout << summary.dump() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------

struct HarnessArgs {
  std::string manifest;
  std::string policy;
  std::string output;
  std::optional<double> beta;
  std::size_t steps = 1;
  std::size_t batch = 0;
  std::size_t group_size = 8;
  std::size_t hardness_samples = 8;
  double epsilon = 0.2;
  double tau_h = 0.8;
  std::uint64_t seed = 0;
  bool reevaluate = false;
  int resolution = 64;
  std::string limits = "200000,10000,5000";
  RewardFlags flags;
};

int cmd_harness_sim(const HarnessArgs& a) {
  require_exists(a.manifest);
  rl::HarnessConfig hc;
  hc.group_size = a.group_size;
  hc.hardness_samples = a.hardness_samples;
  hc.epsilon = a.epsilon;
  hc.tau_h = a.tau_h;
  hc.beta = a.beta;
  hc.seed = a.seed;
  hc.reevaluate_hardness = a.reevaluate;
  rl::check_config(hc);
  const reward::RewardConfig rc = reward_config(a.flags, a.resolution, parse_limits(a.limits));
  rl::MockPolicyConfig pc = rl::default_mock_config();
  if (!a.policy.empty()) {
    try {
      pc = rl::mock_config_from_json(nlohmann::json::parse(read_file(a.policy)));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCategory::kParse, a.policy + ": " + e.what());
    }
  }
  const rl::MockCategoricalPolicy policy(pc);

  const fs::path base = fs::absolute(a.manifest).parent_path();
  std::vector<rl::Question> questions;
  std::size_t line_no = 0;
  std::istringstream lines(read_file(a.manifest));
  for (std::string line; std::getline(lines, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      rl::ManifestQuestion mq = rl::question_from_json(nlohmann::json::parse(line));
      for (const std::string& ref : mq.guidance_refs) mq.question.guidance_codes.push_back(read_file(base / ref));
      questions.push_back(std::move(mq.question));
    } catch (const nlohmann::json::parse_error& e) {
      throw Error(ErrorCategory::kParse, a.manifest + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const Error& e) {
      throw Error(e.category(), a.manifest + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (questions.empty()) throw Error(ErrorCategory::kPrecondition, "manifest has no questions");
  if (a.steps == 0) throw Error(ErrorCategory::kPrecondition, "--steps must be positive");

  const metrics::OccupancyEncoder encoder;
  rl::RewardCache cache(rc, encoder);
  const rl::RewardFn reward_fn = cache.fn();
  const std::size_t batch = a.batch == 0 ? questions.size() : a.batch;

  // Hardness is evaluated once up front and cached on the questions.
  for (rl::Question& q : questions) {
    if (!q.hard || hc.reevaluate_hardness) {
      q.hard = rl::classify_hardness(q, policy, reward_fn, hc.hardness_samples, hc.tau_h,
                                     rl::derive_seed(hc.seed, rl::hash_text(q.id), 0));
    }
  }
  rl::HarnessConfig step_cfg = hc;
  step_cfg.reevaluate_hardness = false;

  LineSink sink(a.output);
  for (std::size_t step = 0; step < a.steps; ++step) {
    std::vector<rl::Question> chunk;
    for (std::size_t i = 0; i < batch; ++i) chunk.push_back(questions[(step * batch + i) % questions.size()]);
    const rl::TrainStepReport report = rl::mixed_loss(chunk, policy, reward_fn, step_cfg, step);
    for (const rl::QuestionReport& qr : report.questions) {
      if (qr.warning) spdlog::warn("{}: {}", qr.id, *qr.warning);
      json line;
      line["type"] = "question";
      line["step"] = step;
      const json fields = rl::to_json(qr);
      for (const auto& [k, v] : fields.items()) line[k] = v;
      sink.write(line.dump());
    }
    json summary;
    summary["type"] = "step";
    summary["step"] = step;
    summary["objective"] = report.objective;
    summary["hard"] = report.hard;
    summary["questions"] = report.questions.size();
    sink.write(summary.dump());
  }
  sink.finish();
  spdlog::info("reward cache holds {} entries", cache.size());
  return 0;
}

// ---------------------------------------------------------------------------

struct ExportArgs {
  std::string model;
  std::string format;
  std::string output;
  int resolution = 64;
  std::string limits = "200000,10000,5000";
};

int cmd_export(const ExportArgs& a) {
  require_exists(a.model);
  const CADModel model = load_model(a.model, parse_limits(a.limits));
  if (a.format == "obj") {
    const geom::TriMesh mesh = geom::boundary_mesh(model);
    if (mesh.triangles.empty()) throw Error(ErrorCategory::kEmptySolid, a.model + ": solid is empty");
    write_file(a.output, geom::write_obj(mesh));
  } else {
    if (a.resolution < 2) throw Error(ErrorCategory::kPrecondition, "--resolution must be at least 2");
    const geom::VoxelGrid grid = geom::voxelize(model, a.resolution);
    if (grid.empty()) throw Error(ErrorCategory::kEmptySolid, a.model + ": solid is empty");
    const std::vector<unsigned char> bytes = geom::write_voxels(grid);
    write_file(a.output, std::string(bytes.begin(), bytes.end()));
  }
  return 0;
}

// ---------------------------------------------------------------------------

struct ExecArgs {
  std::string script;
  std::string output;
  std::string limits = "200000,10000,5000";
};

int cmd_exec(const ExecArgs& a) {
  require_exists(a.script);
  const CADModel model = script::run_script(read_file(a.script), parse_limits(a.limits));
  if (a.output.empty()) {
    std::cout << model_to_string(model);
  } else {
    write_file(a.output, model_to_string(model));
  }
  return 0;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("recad");
  logger->set_pattern("%l: %v");
  spdlog::set_default_logger(logger);
  const char* env = std::getenv("RECAD_LOG");
  spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"recad: CAD script kernel, metrics, rewards and RL harness.\n"
               "Exit codes: 0 success, 1 usage error, 2 data error. RECAD_LOG sets log verbosity\n"
               "(trace, debug, info, warn, error, off; default warn)."};
  app.require_subcommand(1);

  ConvertArgs convert;
  auto* c = app.add_subcommand("convert", "convert a model (native or external JSON, script) to native JSON or a script");
  c->add_option("input", convert.input, "input model")->required();
  c->add_option("-o,--output", convert.output, "output file")->required();
  c->add_option("--to", convert.to, "native | script (default from the output extension)");

  EvalArgs eval;
  auto* e = app.add_subcommand("eval", "metrics of predictions against ground truth, paired by file stem");
  e->add_option("--pred", eval.pred, "prediction file or directory")->required();
  e->add_option("--gt", eval.gt, "ground-truth file or directory")->required();
  e->add_option("-o,--output", eval.output, "JSON-lines output (default stdout)");
  e->add_option("--resolution", eval.resolution, "voxel resolution")->capture_default_str();
  e->add_option("--samples", eval.samples, "surface samples per model for chamfer")->capture_default_str();
  e->add_option("--seed", eval.seed, "sampling seed")->capture_default_str();
  e->add_flag("--normalize", eval.normalize, "normalize both solids first");
  e->add_option("--limits", eval.limits, "script limits steps,loops,curves")->capture_default_str();

  RewardArgs rew;
  auto* r = app.add_subcommand("reward", "reward of one solution text against a ground-truth model");
  r->add_option("solution", rew.solution, "solution text file")->required();
  r->add_option("--gt", rew.gt, "ground-truth model")->required();
  r->add_option("--resolution", rew.resolution, "voxel resolution")->capture_default_str();
  r->add_flag("--normalize", rew.normalize, "normalize both solids (image tasks)");
  r->add_option("--limits", rew.limits, "script limits steps,loops,curves")->capture_default_str();
  add_reward_flags(r, &rew.flags);

  CurriculumArgs cur;
  auto* k = app.add_subcommand("curriculum", "ordered, deduplicated primitive manifest with guidance scripts");
  k->add_option("models", cur.models, "directory of models")->required();
  k->add_option("-o,--output", cur.output, "manifest JSON-lines file")->required();
  k->add_option("--guidance-dir", cur.guidance_dir, "guidance script directory (default <manifest dir>/guidance)");
  k->add_option("--candidates", cur.candidates, "rewritten candidates named <entry>.<k>.rcad");
  k->add_option("--threshold", cur.threshold, "dedup similarity threshold")->capture_default_str();
  k->add_option("--tau-s", cur.tau_s, "rewrite filter similarity threshold")->capture_default_str();
  k->add_option("--resolution", cur.resolution, "dedup voxel resolution")->capture_default_str();
  k->add_option("--limits", cur.limits, "script limits steps,loops,curves")->capture_default_str();

  HarnessArgs hs;
  auto* h = app.add_subcommand("harness-sim", "hardness gating and mixed objective over a mock policy");
  h->add_option("manifest", hs.manifest, "manifest JSON-lines file")->required();
  h->add_option("--policy", hs.policy, "mock policy JSON (default built-in)");
  h->add_option("-o,--output", hs.output, "JSON-lines output (default stdout)");
  h->add_option("--beta", hs.beta, "KL weight (required)")->required();
  h->add_option("--steps", hs.steps, "training steps")->capture_default_str();
  h->add_option("--batch", hs.batch, "questions per step (0 = all)")->capture_default_str();
  h->add_option("--group-size", hs.group_size, "rollouts per question")->capture_default_str();
  h->add_option("--hardness-samples", hs.hardness_samples, "samples for hardness")->capture_default_str();
  h->add_option("--epsilon", hs.epsilon, "clip range")->capture_default_str();
  h->add_option("--tau-h", hs.tau_h, "hardness threshold")->capture_default_str();
  h->add_option("--seed", hs.seed, "run seed")->capture_default_str();
  h->add_flag("--reevaluate-hardness", hs.reevaluate, "ignore hardness cached in the manifest");
  h->add_option("--resolution", hs.resolution, "reward voxel resolution")->capture_default_str();
  h->add_option("--limits", hs.limits, "script limits steps,loops,curves")->capture_default_str();
  add_reward_flags(h, &hs.flags);

  ExportArgs ex;
  auto* x = app.add_subcommand("export", "write a model as an OBJ mesh or an RCVX voxel file");
  x->add_option("model", ex.model, "input model")->required();
  x->add_option("--format", ex.format, "obj | voxel")->required()->check(CLI::IsMember({"obj", "voxel"}));
  x->add_option("-o,--output", ex.output, "output file")->required();
  x->add_option("--resolution", ex.resolution, "voxel resolution")->capture_default_str();
  x->add_option("--limits", ex.limits, "script limits steps,loops,curves")->capture_default_str();

  ExecArgs exe;
  auto* s = app.add_subcommand("exec", "run a script and print the model as native JSON");
  s->add_option("script", exe.script, "script file")->required();
  s->add_option("-o,--output", exe.output, "output file (default stdout)");
  s->add_option("--limits", exe.limits, "script limits steps,loops,curves")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*c) return cmd_convert(convert);
    if (*e) return cmd_eval(eval);
    if (*r) return cmd_reward(rew);
    if (*k) return cmd_curriculum(cur);
    if (*h) return cmd_harness_sim(hs);
    if (*x) return cmd_export(ex);
    if (*s) return cmd_exec(exe);
  } catch (const Error& err) {
    std::cerr << "error: " << to_string(err.category()) << ": " << err.what() << '\n';
    return kExitData;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitData;
  }
  return 1;
}
