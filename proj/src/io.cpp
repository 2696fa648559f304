#include "planforge/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "planforge/error.hpp"

namespace planforge::io {

using nlohmann::json;

namespace {

json vec3_array(const std::vector<Vec3>& v) {
  json out = json::array();
  for (const auto& p : v) out.push_back({p.x(), p.y(), p.z()});
  return out;
}

std::vector<Vec3> parse_vec3_array(const json& j, const char* field) {
  if (!j.is_array()) throw SceneParseError(std::string(field) + " is not an array");
  std::vector<Vec3> out;
  out.reserve(j.size());
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 3) {
      throw SceneParseError(std::string(field) + " entry is not a 3-vector");
    }
    out.push_back(Vec3(e[0].get<double>(), e[1].get<double>(), e[2].get<double>()));
  }
  return out;
}

std::vector<int> parse_int_array(const json& j, const char* field) {
  if (!j.is_array()) throw SceneParseError(std::string(field) + " is not an array");
  std::vector<int> out;
  out.reserve(j.size());
  for (const auto& e : j) out.push_back(e.get<int>());
  return out;
}

json polygon_json(const geom::SimplePolygon& p) {
  json out = json::array();
  for (const auto& c : p.corners) out.push_back({c.x(), c.y()});
  return out;
}

geom::SimplePolygon parse_polygon(const json& j) {
  geom::SimplePolygon p;
  for (const auto& e : j) {
    p.corners.push_back(Vec2(e[0].get<double>(), e[1].get<double>()));
  }
  return p;
}

json parse_text(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw SceneParseError(std::string("invalid JSON in ") + what);
  return j;
}

}  // namespace

std::string scene_to_json(const Scene& scene) {
  json j;
  j["points"] = vec3_array(scene.cloud.points);
  j["room_label_0"] = scene.cloud.room_label_0;
  j["room_label_1"] = scene.cloud.room_label_1;
  j["wall_label"] = scene.cloud.wall_label;
  json rooms = json::array();
  for (const auto& [label, poly] : scene.gt.rooms) {
    rooms.push_back({{"label", label}, {"polygon", polygon_json(poly)}});
  }
  j["gt_rooms"] = rooms;
  return j.dump();
}

Scene scene_from_json(const std::string& text) {
  json j = parse_text(text, "scene");
  try {
    Scene s;
    s.cloud.points = parse_vec3_array(j.at("points"), "points");
    s.cloud.room_label_0 = parse_int_array(j.at("room_label_0"), "room_label_0");
    s.cloud.room_label_1 = parse_int_array(j.at("room_label_1"), "room_label_1");
    s.cloud.wall_label = parse_int_array(j.at("wall_label"), "wall_label");
    const std::size_t n = s.cloud.points.size();
    if (s.cloud.room_label_0.size() != n || s.cloud.room_label_1.size() != n ||
        s.cloud.wall_label.size() != n) {
      throw SceneParseError("label array length does not match point count");
    }
    for (const auto& r : j.value("gt_rooms", json::array())) {
      s.gt.rooms.push_back({r.at("label").get<int>(), parse_polygon(r.at("polygon"))});
    }
    return s;
  } catch (const json::exception& e) {
    throw SceneParseError(e.what());
  }
}

std::string votes_to_json(const votes::VoteSet& v) {
  json j;
  j["seed_indices"] = v.seeds.indices;
  j["seed_positions"] = vec3_array(v.seeds.positions);
  j["room_vote_0"] = vec3_array(v.room_vote_0);
  j["room_vote_1"] = vec3_array(v.room_vote_1);
  j["wall_vote"] = vec3_array(v.wall_vote);
  return j.dump();
}

votes::VoteSet votes_from_json(const std::string& text) {
  json j = parse_text(text, "votes");
  try {
    votes::VoteSet v;
    v.seeds.indices = parse_int_array(j.at("seed_indices"), "seed_indices");
    v.seeds.positions = parse_vec3_array(j.at("seed_positions"), "seed_positions");
    v.room_vote_0 = parse_vec3_array(j.at("room_vote_0"), "room_vote_0");
    v.room_vote_1 = parse_vec3_array(j.at("room_vote_1"), "room_vote_1");
    v.wall_vote = parse_vec3_array(j.at("wall_vote"), "wall_vote");
    const std::size_t m = v.seeds.positions.size();
    if (v.seeds.indices.size() != m || v.room_vote_0.size() != m ||
        v.room_vote_1.size() != m || v.wall_vote.size() != m) {
      throw VoteMismatch("vote arrays have inconsistent lengths");
    }
    return v;
  } catch (const json::exception& e) {
    throw SceneParseError(e.what());
  }
}

std::string floorplan_to_json(const assembly::Floorplan& plan) {
  json rooms = json::array();
  for (const auto& room : plan.rooms) {
    rooms.push_back({{"id", room.id}, {"polygon", polygon_json(room.polygon)}});
  }
  json j;
  j["rooms"] = rooms;
  j["units"] = "meters";
  return j.dump();
}

assembly::Floorplan floorplan_from_json(const std::string& text) {
  json j = parse_text(text, "floorplan");
  try {
    assembly::Floorplan plan;
    for (const auto& r : j.at("rooms")) {
      plan.rooms.push_back({r.at("id").get<int>(), parse_polygon(r.at("polygon"))});
    }
    return plan;
  } catch (const json::exception& e) {
    throw SceneParseError(e.what());
  }
}

assembly::Floorplan plan_from_ground_truth(const synthgen::GroundTruthPlan& gt) {
  assembly::Floorplan plan;
  for (const auto& [label, poly] : gt.rooms) plan.rooms.push_back({label, poly});
  return plan;
}

std::string report_to_json(const metrics::MetricsReport& r) {
  json j;
  j["corner_precision"] = r.corner_precision;
  j["corner_recall"] = r.corner_recall;
  j["edge_precision"] = r.edge_precision;
  j["edge_recall"] = r.edge_recall;
  j["room_precision"] = r.room_precision;
  j["room_recall"] = r.room_recall;
  j["counts"] = {
      {"corners", {{"tp", r.corners.tp}, {"fp", r.corners.fp}, {"fn", r.corners.fn}}},
      {"edges", {{"tp", r.edges.tp}, {"fp", r.edges.fp}, {"fn", r.edges.fn}}},
      {"rooms", {{"tp", r.rooms.tp}, {"fp", r.rooms.fp}, {"fn", r.rooms.fn}}},
  };
  return j.dump(2);
}

std::string render_svg(const assembly::Floorplan& plan) {
  // Fixed palette keyed by room id keeps renders byte-identical.
  static const char* kPalette[] = {"#4e79a7", "#f28e2b", "#e15759", "#76b7b2",
                                   "#59a14f", "#edc948", "#b07aa1", "#ff9da7",
                                   "#9c755f", "#bab0ac"};
  constexpr int kPaletteSize = 10;

  double xmin = 0.0, ymin = 0.0, xmax = 1.0, ymax = 1.0;
  bool first = true;
  for (const auto& room : plan.rooms) {
    for (const auto& c : room.polygon.corners) {
      if (first) {
        xmin = xmax = c.x();
        ymin = ymax = c.y();
        first = false;
      }
      xmin = std::min(xmin, c.x());
      xmax = std::max(xmax, c.x());
      ymin = std::min(ymin, c.y());
      ymax = std::max(ymax, c.y());
    }
  }
  const double w = std::max(xmax - xmin, 1e-6);
  const double h = std::max(ymax - ymin, 1e-6);
  const double margin = 0.05 * std::max(w, h);

  char buf[256];
  std::ostringstream svg;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6g %.6g %.6g %.6g\">\n",
                xmin - margin, ymin - margin, w + 2 * margin, h + 2 * margin);
  svg << buf;
  // Flip y so the plan reads with +y up.
  std::snprintf(buf, sizeof(buf), "<g transform=\"translate(0,%.6g) scale(1,-1)\">\n",
                ymin + ymax);
  svg << buf;
  for (const auto& room : plan.rooms) {
    svg << "<path d=\"";
    for (std::size_t i = 0; i < room.polygon.corners.size(); ++i) {
      const Vec2& c = room.polygon.corners[i];
      std::snprintf(buf, sizeof(buf), "%c%.6g %.6g", i == 0 ? 'M' : 'L', c.x(), c.y());
      svg << buf;
    }
    std::snprintf(buf, sizeof(buf),
                  "Z\" fill=\"%s\" fill-opacity=\"0.6\" stroke=\"#333\" stroke-width=\"%.6g\"/>\n",
                  kPalette[((room.id % kPaletteSize) + kPaletteSize) % kPaletteSize],
                  0.005 * std::max(w, h));
    svg << buf;
    Vec2 c = geom::polygon_centroid(room.polygon);
    std::snprintf(buf, sizeof(buf),
                  "<text x=\"%.6g\" y=\"%.6g\" font-size=\"%.6g\" text-anchor=\"middle\" "
                  "transform=\"translate(0,%.6g) scale(1,-1)\">%d</text>\n",
                  c.x(), -c.y(), 0.05 * std::max(w, h), 0.0, room.id);
    svg << buf;
  }
  svg << "</g>\n</svg>\n";
  return svg.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << content;
  if (!out) throw IoError("write failed for " + path);
}

void write_scene(const std::string& path, const Scene& scene) {
  write_file(path, scene_to_json(scene));
}
Scene read_scene(const std::string& path) { return scene_from_json(read_file(path)); }

void write_votes(const std::string& path, const votes::VoteSet& v) {
  write_file(path, votes_to_json(v));
}
votes::VoteSet read_votes(const std::string& path) { return votes_from_json(read_file(path)); }

void write_floorplan(const std::string& path, const assembly::Floorplan& plan) {
  write_file(path, floorplan_to_json(plan));
}
assembly::Floorplan read_floorplan(const std::string& path) {
  return floorplan_from_json(read_file(path));
}

void write_report(const std::string& path, const metrics::MetricsReport& report) {
  write_file(path, report_to_json(report));
}

}  // namespace planforge::io
