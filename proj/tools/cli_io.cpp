#include "cli_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "recad/error.hpp"
#include "recad/model_io.hpp"
#include "recad/reward/reward.hpp"

namespace recad::cli {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCategory::kIo, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCategory::kIo, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCategory::kIo, "failed writing " + path.string());
}

void require_exists(const fs::path& path, bool dir) {
  std::error_code ec;
  const bool ok = dir ? fs::is_directory(path, ec) : fs::exists(path, ec);
  if (!ok) throw Error(ErrorCategory::kIo, (dir ? "no such directory: " : "no such file: ") + path.string());
}

script::ExecLimits parse_limits(const std::string& text) {
  std::int64_t v[3] = {0, 0, 0};
  std::size_t start = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t end = i < 2 ? text.find(',', start) : text.size();
    if (end == std::string::npos) throw Error(ErrorCategory::kPrecondition, "--limits expects steps,loops,curves");
    const auto res = std::from_chars(text.data() + start, text.data() + end, v[i]);
    if (res.ec != std::errc() || res.ptr != text.data() + end) {
      throw Error(ErrorCategory::kPrecondition, "--limits expects three integers");
    }
    start = end + 1;
  }
  script::ExecLimits limits{v[0], v[1], v[2]};
  script::check_limits(limits);
  return limits;
}

bool is_script_path(const fs::path& path) {
  const std::string ext = path.extension().string();
  return ext == ".rcad" || ext == ".py";
}

CADModel load_model(const fs::path& path, const script::ExecLimits& limits) {
  const std::string text = read_file(path);
  const std::string ext = path.extension().string();
  try {
    if (ext == ".json") {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCategory::kParse, e.what());
      }
      if (is_native_json(j)) {
        CADModel m = model_from_json(j);
        require_valid(m);
        return m;
      }
      return from_external_json(text);
    }
    if (is_script_path(path)) return script::run_script(text, limits);
    return script::run_script(reward::extract_script(text), limits);
  } catch (const Error& e) {
    throw Error(e.category(), path.string() + ": " + e.what());
  }
}

script::ExecutionOutcome load_outcome(const fs::path& path, const script::ExecLimits& limits) {
  script::ExecutionOutcome out;
  try {
    out.model = load_model(path, limits);
  } catch (const Error& e) {
    out.failure = e.category();
    out.message = e.what();
  }
  return out;
}

std::vector<fs::path> list_inputs(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const std::string ext = entry.path().extension().string();
    if (ext == ".json" || ext == ".txt" || ext == ".md" || is_script_path(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

LineSink::LineSink(const std::string& path) : path_(path) {}

void LineSink::finish() {
  if (!path_.empty()) write_file(path_, buffer_);
}

void LineSink::write(const std::string& line) {
  if (path_.empty()) {
    std::cout << line << '\n';
  } else {
    buffer_ += line;
    buffer_ += '\n';
  }
}

}  // namespace recad::cli
