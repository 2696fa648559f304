#pragma once

/// Per-room perimeter estimation: RANSAC wall segments, duplicate removal,
/// axis snapping, tour ordering with zero-cost endpoint pairs, and corner
/// extrusion into a simple polygon.

#include <cstdint>
#include <vector>

#include "planforge/geom.hpp"
#include "planforge/types.hpp"

namespace planforge::perimeter {

struct RansacConfig {
  double inlier_tol = 0.02;  // meters in the normalized frame
  int iterations = 500;
  std::uint64_t rng_seed = 0;
};

struct PerimeterConfig {
  double theta_min_deg = 15.0;   // duplicate test: max angle between lines
  double beta_min = 0.15;        // duplicate test: max offset distance, meters
  double theta_orth_deg = 15.0;  // snap-to-axis threshold
  double parallel_corner_angle_deg = 10.0;
  RansacConfig ransac;
};

struct WallSegment {
  geom::Segment2 segment;
  geom::Line2 line;
  int source_wall = -1;  // dense wall index within the room
  int inlier_count = 0;
};

/// Cyclic order over the 2n segment endpoints; node 2k and 2k+1 are the
/// endpoints of segment k.
struct PerimeterPath {
  std::vector<int> order;
  bool pair_adjacent = false;
};

std::vector<WallSegment> fit_wall_segments(
    const std::vector<std::vector<Vec2>>& room_points_by_wall, const PerimeterConfig& cfg);

std::vector<WallSegment> dedup_segments(const std::vector<WallSegment>& segments,
                                        const PerimeterConfig& cfg);

std::vector<WallSegment> snap_to_axes(const std::vector<WallSegment>& segments,
                                      const PerimeterConfig& cfg);

PerimeterPath order_segments_2opt(const std::vector<WallSegment>& segments);

/// Tour cost: sum of gaps between consecutive segments (edges inside an
/// endpoint pair cost zero).
double tour_cost(const PerimeterPath& path, const std::vector<WallSegment>& segments);

geom::SimplePolygon extrude_polygon(const PerimeterPath& path,
                                    const std::vector<WallSegment>& segments,
                                    const PerimeterConfig& cfg);

geom::SimplePolygon estimate_room_perimeter(
    const std::vector<std::vector<Vec2>>& room_walls, const PerimeterConfig& cfg);

}  // namespace planforge::perimeter
