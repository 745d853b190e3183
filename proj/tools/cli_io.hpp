#pragma once

// File helpers shared by the recad subcommands.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "recad/cad_model.hpp"
#include "recad/script/interpreter.hpp"

namespace recad::cli {

namespace fs = std::filesystem;

/// Throws Error{kIo} when the file cannot be read.
std::string read_file(const fs::path& path);

/// Writes the whole buffer, creating missing parent directories, or throws
/// Error{kIo}.
void write_file(const fs::path& path, const std::string& content);

/// Throws Error{kIo} unless `path` exists (and is a directory when `dir`).
void require_exists(const fs::path& path, bool dir = false);

/// "steps,loops,curves", e.g. "200000,10000,5000". Throws Error{kPrecondition}.
script::ExecLimits parse_limits(const std::string& text);

/// Scripts are .rcad files; .py is accepted as well.
bool is_script_path(const fs::path& path);

/// Model from a file by extension: .json is native or external sequence JSON,
/// .rcad or .py is a script, anything else is a solution text whose script is
/// extracted and run. Throws Error on any failure.
CADModel load_model(const fs::path& path, const script::ExecLimits& limits);

/// As load_model, recording the failure instead of throwing.
script::ExecutionOutcome load_outcome(const fs::path& path, const script::ExecLimits& limits);

/// Regular files with a model or solution extension, sorted by name.
std::vector<fs::path> list_inputs(const fs::path& dir);

/// Writes JSON lines to stdout, or buffers them for a file written by
/// finish().
class LineSink {
 public:
  explicit LineSink(const std::string& path);
  void write(const std::string& line);
  void finish();

 private:
  std::string path_;
  std::string buffer_;
};

}  // namespace recad::cli
