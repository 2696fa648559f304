#include "planforge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "planforge/error.hpp"
#include "planforge/hungarian.hpp"

namespace planforge::metrics {

namespace {

PlanPixels project_plan(const assembly::Floorplan& plan, const geom::GridTransform& tf) {
  PlanPixels out;
  for (const auto& room : plan.rooms) {
    const int base = static_cast<int>(out.corners.size());
    const int n = static_cast<int>(room.polygon.corners.size());
    geom::SimplePolygon px;
    for (const Vec2& c : room.polygon.corners) {
      Vec2 g = tf.to_grid(c);
      out.corners.push_back(g);
      px.corners.push_back(g);
    }
    for (int i = 0; i < n; ++i) {
      out.edges.push_back({base + i, base + (i + 1) % n});
    }
    out.rooms_px.push_back(std::move(px));
  }
  return out;
}

}  // namespace

double precision(const MatchCounts& c) {
  if (c.tp + c.fp == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

double recall(const MatchCounts& c) {
  if (c.tp + c.fn == 0) return 1.0;
  return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

JointProjection joint_project(const assembly::Floorplan& gt, const assembly::Floorplan& pred,
                              const EvalConfig& cfg) {
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  bool any = false;
  for (const auto* plan : {&gt, &pred}) {
    for (const auto& room : plan->rooms) {
      for (const Vec2& c : room.polygon.corners) {
        lo = lo.cwiseMin(c);
        hi = hi.cwiseMax(c);
        any = true;
      }
    }
  }
  if (!any) throw BothEmpty();

  const double extent = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  geom::GridTransform tf;
  tf.scale = extent > 0.0 ? (cfg.grid - 2.0 * cfg.margin_px) / extent : 1.0;
  tf.offset = Vec2(cfg.margin_px, cfg.margin_px) - tf.scale * lo;

  JointProjection jp;
  jp.transform = tf;
  jp.gt = project_plan(gt, tf);
  jp.pred = project_plan(pred, tf);
  return jp;
}

CornerMatch match_corners(const PlanPixels& gt, const PlanPixels& pred, const EvalConfig& cfg) {
  const int ng = static_cast<int>(gt.corners.size());
  const int np = static_cast<int>(pred.corners.size());

  CornerMatch out;
  out.pred_to_gt.assign(np, -1);
  if (ng == 0 || np == 0) {
    out.counts = {0, np, ng};
    return out;
  }

  // Corners are listed per room without cross-room deduplication, so rooms
  // that touch produce coincident corners and many assignments tie on pixel
  // distance alone. A sub-pixel term on the owning rooms' centroid distance
  // picks the tie that pairs corners of corresponding rooms, which keeps the
  // downstream edge adjacency test meaningful.
  auto room_centroids = [](const PlanPixels& plan) {
    std::vector<Vec2> per_corner;
    for (const auto& room : plan.rooms_px) {
      Vec2 c = Vec2::Zero();
      for (const Vec2& p : room.corners) c += p;
      if (!room.corners.empty()) c /= static_cast<double>(room.corners.size());
      per_corner.insert(per_corner.end(), room.corners.size(), c);
    }
    return per_corner;
  };
  const std::vector<Vec2> gt_room = room_centroids(gt);
  const std::vector<Vec2> pred_room = room_centroids(pred);
  constexpr double kRoomTieBreak = 1e-4;

  std::vector<double> cost(static_cast<std::size_t>(ng) * np);
  for (int i = 0; i < ng; ++i) {
    for (int j = 0; j < np; ++j) {
      cost[static_cast<std::size_t>(i) * np + j] =
          (gt.corners[i] - pred.corners[j]).norm() +
          kRoomTieBreak * (gt_room[i] - pred_room[j]).norm();
    }
  }
  std::vector<int> gt_to_pred = hungarian_assign(cost, ng, np);

  int tp = 0;
  for (int i = 0; i < ng; ++i) {
    int j = gt_to_pred[i];
    if (j < 0) continue;
    out.pred_to_gt[j] = i;
    if ((gt.corners[i] - pred.corners[j]).norm() <= cfg.corner_tol_px) ++tp;
  }
  out.counts = {tp, np - tp, ng - tp};
  return out;
}

MatchCounts match_edges(const PlanPixels& gt, const PlanPixels& pred,
                        const CornerMatch& corner_match, const EvalConfig& cfg) {
  auto corner_tp = [&](int pred_idx) {
    int g = corner_match.pred_to_gt[pred_idx];
    return g >= 0 &&
           (gt.corners[g] - pred.corners[pred_idx]).norm() <= cfg.corner_tol_px;
  };

  std::set<std::pair<int, int>> gt_edges;
  for (auto [a, b] : gt.edges) gt_edges.insert({std::min(a, b), std::max(a, b)});

  int tp = 0;
  for (auto [u, v] : pred.edges) {
    if (!corner_tp(u) || !corner_tp(v)) continue;
    int gu = corner_match.pred_to_gt[u];
    int gv = corner_match.pred_to_gt[v];
    if (gt_edges.count({std::min(gu, gv), std::max(gu, gv)})) ++tp;
  }
  return {tp, static_cast<int>(pred.edges.size()) - tp,
          static_cast<int>(gt.edges.size()) - tp};
}

MatchCounts match_rooms(const PlanPixels& gt, const PlanPixels& pred, const EvalConfig& cfg) {
  const int ng = static_cast<int>(gt.rooms_px.size());
  const int np = static_cast<int>(pred.rooms_px.size());
  if (ng == 0 || np == 0) return {0, np, ng};

  geom::GridTransform identity;  // polygons are already in pixel coordinates
  std::vector<geom::RasterMask> gt_masks, pred_masks;
  for (const auto& p : gt.rooms_px) {
    gt_masks.push_back(geom::rasterize(p, cfg.grid, cfg.grid, identity));
  }
  for (const auto& p : pred.rooms_px) {
    pred_masks.push_back(geom::rasterize(p, cfg.grid, cfg.grid, identity));
  }

  struct Pair {
    double iou;
    int pred;
    int gt;
  };
  std::vector<Pair> pairs;
  for (int j = 0; j < np; ++j) {
    for (int i = 0; i < ng; ++i) {
      double iou = geom::mask_iou(pred_masks[j], gt_masks[i]);
      if (iou > cfg.room_iou_thresh) pairs.push_back({iou, j, i});
    }
  }
  std::sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.pred != b.pred) return a.pred < b.pred;
    return a.gt < b.gt;
  });

  std::vector<bool> gt_used(ng, false), pred_used(np, false);
  int tp = 0;
  for (const Pair& p : pairs) {
    if (gt_used[p.gt] || pred_used[p.pred]) continue;
    gt_used[p.gt] = true;
    pred_used[p.pred] = true;
    ++tp;
  }
  return {tp, np - tp, ng - tp};
}

MetricsReport evaluate(const assembly::Floorplan& gt, const assembly::Floorplan& pred,
                       const EvalConfig& cfg) {
  JointProjection jp = joint_project(gt, pred, cfg);

  MetricsReport r;
  CornerMatch cm = match_corners(jp.gt, jp.pred, cfg);
  r.corners = cm.counts;
  r.edges = match_edges(jp.gt, jp.pred, cm, cfg);
  r.rooms = match_rooms(jp.gt, jp.pred, cfg);
  r.corner_precision = precision(r.corners);
  r.corner_recall = recall(r.corners);
  r.edge_precision = precision(r.edges);
  r.edge_recall = recall(r.edges);
  r.room_precision = precision(r.rooms);
  r.room_recall = recall(r.rooms);
  return r;
}

}  // namespace planforge::metrics
