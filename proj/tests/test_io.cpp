#include <doctest.h>

#include "planforge/io.hpp"
#include "planforge/synthgen.hpp"
#include "planforge/votes.hpp"

using namespace planforge;

TEST_CASE("scene json round trip is byte stable") {
  synthgen::SceneSpec spec;
  spec.rng_seed = 21;
  const auto [cloud, gt] = synthgen::generate_scene(spec);
  const io::Scene scene{cloud, gt};
  const std::string a = io::scene_to_json(scene);
  const io::Scene parsed = io::scene_from_json(a);
  CHECK(parsed.cloud.size() == cloud.size());
  CHECK(parsed.gt.rooms.size() == gt.rooms.size());
  CHECK(io::scene_to_json(parsed) == a);
}

TEST_CASE("votes json round trip is byte stable") {
  synthgen::SceneSpec spec;
  spec.rng_seed = 21;
  const auto [cloud, gt] = synthgen::generate_scene(spec);
  const auto seeds = votes::subsample_seeds(cloud, 64, 0);
  const auto v = votes::oracle_votes(cloud, seeds, {0.01, 0.02, 3});
  const std::string a = io::votes_to_json(v);
  const auto parsed = io::votes_from_json(a);
  CHECK(io::votes_to_json(parsed) == a);
  CHECK(parsed.seeds.indices == v.seeds.indices);
}

TEST_CASE("floorplan json round trip is byte stable") {
  assembly::Floorplan plan = assembly::assemble(
      {{0, {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}}, {2, {{{1, 0}, {2, 0}, {2, 1}, {1, 1}}}}});
  const std::string a = io::floorplan_to_json(plan);
  const auto parsed = io::floorplan_from_json(a);
  CHECK(io::floorplan_to_json(parsed) == a);
  CHECK(parsed.rooms[1].id == 2);
}

TEST_CASE("malformed inputs raise parse errors") {
  CHECK_THROWS_AS(io::scene_from_json("{not json"), SceneParseError);
  CHECK_THROWS_AS(io::scene_from_json("{}"), SceneParseError);
  CHECK_THROWS_AS(io::scene_from_json(R"({"points": [[0,0,0]], "room_label_0": [],
    "room_label_1": [], "wall_label": []})"),
                  SceneParseError);
  CHECK_THROWS_AS(io::floorplan_from_json("[1,2,3]"), SceneParseError);
  CHECK_THROWS_AS(
      io::votes_from_json(R"({"seed_indices": [0, 1], "seed_positions": [[0,0,0]],
        "room_vote_0": [[0,0,0]], "room_vote_1": [[0,0,0]], "wall_vote": [[0,0,0]]})"),
      VoteMismatch);
}

TEST_CASE("missing files raise io errors") {
  CHECK_THROWS_AS(io::read_file("/nonexistent/path.json"), IoError);
}

TEST_CASE("svg rendering is deterministic and structurally sound") {
  assembly::Floorplan plan = assembly::assemble(
      {{0, {{{0, 0}, {2, 0}, {2, 1}, {0, 1}}}}, {1, {{{0, 1}, {2, 1}, {2, 2}, {0, 2}}}}});
  const std::string a = io::render_svg(plan);
  const std::string b = io::render_svg(plan);
  CHECK(a == b);
  CHECK(a.find("<svg") != std::string::npos);
  CHECK(a.find("</svg>") != std::string::npos);
  // One path per room.
  std::size_t paths = 0, pos = 0;
  while ((pos = a.find("<path", pos)) != std::string::npos) {
    ++paths;
    ++pos;
  }
  CHECK(paths == 2);
}

TEST_CASE("report serialization carries all six rates") {
  metrics::MetricsReport r;
  r.corner_precision = 0.5;
  r.edges.tp = 3;
  const std::string text = io::report_to_json(r);
  CHECK(text.find("corner_precision") != std::string::npos);
  CHECK(text.find("room_recall") != std::string::npos);
  CHECK(text.find("\"tp\": 3") != std::string::npos);
}
