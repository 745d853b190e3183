#include "recad/script/emitter.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace recad::script {

namespace {

// Curve calls per statement; keeps every emitted chain well inside the
// parser's depth bound.
constexpr std::size_t kCallsPerStatement = 100;

std::string flag(bool b) { return b ? "True" : "False"; }

std::string vec(const Vec3& v) {
  return "[" + format_number(v.x) + ", " + format_number(v.y) + ", " + format_number(v.z) + "]";
}

std::string curve_call(const CurveCmd& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Line>) {
          return ".lineTo(" + format_number(v.end.x) + ", " + format_number(v.end.y) +
                 (v.relative ? ", relative=True)" : ")");
        } else if constexpr (std::is_same_v<T, Arc>) {
          return ".arcTo(" + format_number(v.end.x) + ", " + format_number(v.end.y) + ", " +
                 format_number(v.sweep_deg) + ", " + flag(v.clockwise) +
                 (v.relative ? ", relative=True)" : ")");
        } else {
          return ".circle(" + format_number(v.radius) + ")";
        }
      },
      c);
}

void emit_loop(std::ostringstream& out, const std::string& name, const Loop& loop) {
  out << name << " = Loop().moveTo(" << format_number(loop.start.x) << ", " << format_number(loop.start.y)
      << ")";
  for (std::size_t i = 0; i < loop.curves.size(); ++i) {
    if (i > 0 && i % kCallsPerStatement == 0) out << "\n" << name;
    out << curve_call(loop.curves[i]);
  }
  if (loop.closed) out << ".close()";
  out << "\n";
}

}  // namespace

std::string format_number(double value) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

std::string emit_model(const CADModel& model) {
  std::ostringstream out;
  out << "from CADLib import *\n\ncad_model = CADModel()\n";
  for (std::size_t i = 0; i < model.pairs.size(); ++i) {
    const SEPair& pair = model.pairs[i];
    const std::string se = std::to_string(i);
    out << "\n";
    std::vector<std::string> faces;
    for (std::size_t j = 0; j < pair.sketch.faces.size(); ++j) {
      const Face& face = pair.sketch.faces[j];
      const std::string fname = "face_" + se + "_" + std::to_string(j);
      std::vector<std::string> loops;
      for (std::size_t k = 0; k <= face.holes.size(); ++k) {
        const std::string lname = "loop_" + se + "_" + std::to_string(j) + "_" + std::to_string(k);
        emit_loop(out, lname, k == 0 ? face.outer : face.holes[k - 1]);
        loops.push_back(lname);
      }
      out << fname << " = Face()\n" << fname << ".addLoop(";
      for (std::size_t k = 0; k < loops.size(); ++k) out << (k ? ", " : "") << loops[k];
      out << ")\n";
      faces.push_back(fname);
    }
    const std::string sname = "sketch_" + se;
    out << sname << " = Sketch(origin=" << vec(pair.sketch.origin) << ", x_axis=" << vec(pair.sketch.x_axis)
        << ", normal=" << vec(pair.sketch.normal) << ")\n";
    if (!faces.empty()) {
      out << sname << ".addFace(";
      for (std::size_t j = 0; j < faces.size(); ++j) out << (j ? ", " : "") << faces[j];
      out << ")\n";
    }
    out << "cad_model.addSE(" << sname << ", Extrude(";
    if (pair.extrude.dist_neg == 0.0 && !std::signbit(pair.extrude.dist_neg) && pair.extrude.dist_pos >= 0.0) {
      out << format_number(pair.extrude.dist_pos);
    } else {
      out << "(" << format_number(pair.extrude.dist_pos) << ", " << format_number(pair.extrude.dist_neg) << ")";
    }
    out << "), \"" << to_string(pair.op) << "\")\n";
  }
  return out.str();
}

std::string emit_hardcoded(const Primitive& p) { return emit_model(canonical_model(p)); }

}  // namespace recad::script
