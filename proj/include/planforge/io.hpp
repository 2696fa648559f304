#pragma once

/// JSON/SVG serialization for scenes, vote files, floorplans and reports.

#include <string>

#include "planforge/assembly.hpp"
#include "planforge/metrics.hpp"
#include "planforge/synthgen.hpp"
#include "planforge/votes.hpp"

namespace planforge::io {

struct Scene {
  synthgen::LabeledPointCloud cloud;
  synthgen::GroundTruthPlan gt;
};

std::string scene_to_json(const Scene& scene);
Scene scene_from_json(const std::string& text);
void write_scene(const std::string& path, const Scene& scene);
Scene read_scene(const std::string& path);

std::string votes_to_json(const votes::VoteSet& v);
votes::VoteSet votes_from_json(const std::string& text);
void write_votes(const std::string& path, const votes::VoteSet& v);
votes::VoteSet read_votes(const std::string& path);

std::string floorplan_to_json(const assembly::Floorplan& plan);
assembly::Floorplan floorplan_from_json(const std::string& text);
void write_floorplan(const std::string& path, const assembly::Floorplan& plan);
assembly::Floorplan read_floorplan(const std::string& path);

/// Ground-truth rooms as a floorplan, for evaluation against predictions.
assembly::Floorplan plan_from_ground_truth(const synthgen::GroundTruthPlan& gt);

std::string report_to_json(const metrics::MetricsReport& report);
void write_report(const std::string& path, const metrics::MetricsReport& report);

/// Deterministic SVG rendering: one filled path per room, color keyed by id.
std::string render_svg(const assembly::Floorplan& plan);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace planforge::io
