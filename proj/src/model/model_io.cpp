#include "recad/model_io.hpp"

#include "json_access.hpp"
#include "recad/error.hpp"

namespace recad {

namespace {

using json = nlohmann::json;
using View = detail::JsonView<json>;

json point_json(Point2 p) { return json::array({p.x, p.y}); }
json vec_json(Vec3 v) { return json::array({v.x, v.y, v.z}); }

json loop_json(const Loop& loop) {
  json curves = json::array();
  for (const CurveCmd& cmd : loop.curves) {
    curves.push_back(std::visit(
        [](const auto& c) -> json {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, Line>) {
            return {{"type", "line"}, {"end", point_json(c.end)}, {"relative", c.relative}};
          } else if constexpr (std::is_same_v<T, Arc>) {
            return {{"type", "arc"},
                    {"end", point_json(c.end)},
                    {"sweep", c.sweep_deg},
                    {"clockwise", c.clockwise},
                    {"relative", c.relative}};
          } else {
            return {{"type", "circle"}, {"radius", c.radius}};
          }
        },
        cmd));
  }
  return {{"start", point_json(loop.start)}, {"closed", loop.closed}, {"curves", curves}};
}

Point2 read_point(const View& v) {
  if (v.size() != 2) v.fail("expected [x, y]");
  return {v.at(0).number(), v.at(1).number()};
}

Vec3 read_vec(const View& v) {
  if (v.size() != 3) v.fail("expected [x, y, z]");
  return {v.at(0).number(), v.at(1).number(), v.at(2).number()};
}

bool optional_flag(const View& v, const std::string& key, bool fallback) {
  return v.has(key) ? v.at(key).boolean() : fallback;
}

Loop read_loop(const View& v) {
  Loop loop;
  loop.start = read_point(v.at("start"));
  loop.closed = optional_flag(v, "closed", true);
  const View curves = v.at("curves");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const View c = curves.at(i);
    const std::string type = c.at("type").string();
    if (type == "line") {
      loop.curves.push_back(Line{read_point(c.at("end")), optional_flag(c, "relative", false)});
    } else if (type == "arc") {
      loop.curves.push_back(Arc{read_point(c.at("end")), c.at("sweep").number(),
                                optional_flag(c, "clockwise", false),
                                optional_flag(c, "relative", false)});
    } else if (type == "circle") {
      loop.curves.push_back(Circle{c.at("radius").number()});
    } else {
      c.at("type").fail("unknown curve type \"" + type + "\"");
    }
  }
  return loop;
}

}  // namespace

json model_to_json(const CADModel& model) {
  json pairs = json::array();
  for (const SEPair& pair : model.pairs) {
    json faces = json::array();
    for (const Face& face : pair.sketch.faces) {
      json holes = json::array();
      for (const Loop& h : face.holes) holes.push_back(loop_json(h));
      faces.push_back({{"outer", loop_json(face.outer)}, {"holes", holes}});
    }
    pairs.push_back({{"sketch",
                      {{"origin", vec_json(pair.sketch.origin)},
                       {"x_axis", vec_json(pair.sketch.x_axis)},
                       {"normal", vec_json(pair.sketch.normal)},
                       {"faces", faces}}},
                     {"extrude",
                      {{"dist_pos", pair.extrude.dist_pos}, {"dist_neg", pair.extrude.dist_neg}}},
                     {"op", std::string(to_string(pair.op))}});
  }
  return {{"schema", std::string(kSchemaTag)}, {"pairs", pairs}};
}

std::string model_to_string(const CADModel& model) { return model_to_json(model).dump(2) + "\n"; }

bool is_native_json(const json& j) {
  return j.is_object() && j.contains("schema") && j["schema"].is_string() &&
         j["schema"].get<std::string>() == kSchemaTag;
}

CADModel model_from_json(const json& j) {
  const View root(j, "");
  const std::string schema = root.at("schema").string();
  if (schema != kSchemaTag) root.at("schema").fail("unsupported schema \"" + schema + "\"");
  CADModel model;
  const View pairs = root.at("pairs");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const View p = pairs.at(i);
    SEPair pair;
    const View s = p.at("sketch");
    pair.sketch.origin = read_vec(s.at("origin"));
    pair.sketch.x_axis = read_vec(s.at("x_axis"));
    pair.sketch.normal = read_vec(s.at("normal"));
    const View faces = s.at("faces");
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const View fv = faces.at(f);
      Face face;
      face.outer = read_loop(fv.at("outer"));
      if (fv.has("holes")) {
        const View holes = fv.at("holes");
        for (std::size_t h = 0; h < holes.size(); ++h) face.holes.push_back(read_loop(holes.at(h)));
      }
      pair.sketch.faces.push_back(std::move(face));
    }
    const View e = p.at("extrude");
    pair.extrude = {e.at("dist_pos").number(), e.at("dist_neg").number()};
    const std::string op = p.at("op").string();
    if (!parse_boolean_op(op, &pair.op)) p.at("op").fail("unknown boolean op \"" + op + "\"");
    model.pairs.push_back(std::move(pair));
  }
  return model;
}

CADModel model_from_string(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCategory::kParse, std::string("invalid JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace recad
