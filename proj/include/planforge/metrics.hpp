#pragma once

/// Floorplan evaluation: corner and edge precision/recall via Hungarian
/// matching, room precision/recall via mask IOU, all on a jointly projected
/// pixel grid.

#include <utility>
#include <vector>

#include "planforge/assembly.hpp"
#include "planforge/geom.hpp"
#include "planforge/types.hpp"

namespace planforge::metrics {

struct EvalConfig {
  int grid = 256;
  double corner_tol_px = 10.0;
  double room_iou_thresh = 0.7;
  int margin_px = 8;
};

struct MatchCounts {
  int tp = 0;
  int fp = 0;
  int fn = 0;
};

struct MetricsReport {
  double corner_precision = 1.0;
  double corner_recall = 1.0;
  double edge_precision = 1.0;
  double edge_recall = 1.0;
  double room_precision = 1.0;
  double room_recall = 1.0;
  MatchCounts corners;
  MatchCounts edges;
  MatchCounts rooms;
};

/// Corners of one plan in pixel coordinates, concatenated across rooms
/// without cross-room deduplication, plus the room-level edge list as pairs
/// of global corner indices.
struct PlanPixels {
  std::vector<Vec2> corners;
  std::vector<std::pair<int, int>> edges;
  std::vector<geom::SimplePolygon> rooms_px;  // polygons in pixel coordinates
};

struct JointProjection {
  PlanPixels gt;
  PlanPixels pred;
  geom::GridTransform transform;
};

JointProjection joint_project(const assembly::Floorplan& gt, const assembly::Floorplan& pred,
                              const EvalConfig& cfg);

struct CornerMatch {
  MatchCounts counts;
  std::vector<int> pred_to_gt;  // -1 when unmatched; tolerance not applied
};

CornerMatch match_corners(const PlanPixels& gt, const PlanPixels& pred, const EvalConfig& cfg);

MatchCounts match_edges(const PlanPixels& gt, const PlanPixels& pred,
                        const CornerMatch& corner_match, const EvalConfig& cfg);

MatchCounts match_rooms(const PlanPixels& gt, const PlanPixels& pred, const EvalConfig& cfg);

MetricsReport evaluate(const assembly::Floorplan& gt, const assembly::Floorplan& pred,
                       const EvalConfig& cfg = {});

/// precision/recall with the 0/0 case defined as 1.
double precision(const MatchCounts& c);
double recall(const MatchCounts& c);

}  // namespace planforge::metrics
