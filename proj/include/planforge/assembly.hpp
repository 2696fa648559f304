#pragma once

/// Global floorplan assembly and raster-level overlap resolution.

#include <vector>

#include "planforge/geom.hpp"
#include "planforge/types.hpp"

namespace planforge::assembly {

/// Similarity transform from the normalized processing frame back to input
/// coordinates: p_out = scale * p + offset.
struct FrameTransform {
  double scale = 1.0;
  Vec2 offset{0.0, 0.0};

  Vec2 apply(const Vec2& p) const { return scale * p + offset; }
};

struct Room {
  int id = 0;
  geom::SimplePolygon polygon;
};

struct Floorplan {
  std::vector<Room> rooms;
  FrameTransform frame;

  bool empty() const { return rooms.empty(); }
};

/// Collects per-room polygons with stable ids and maps them through `frame`.
Floorplan assemble(const std::vector<std::pair<int, geom::SimplePolygon>>& room_polygons,
                   const FrameTransform& frame = {});

/// Rasterizes all rooms jointly at `resolution` cells per side, hands each
/// contested cell to the smallest-area claiming room (ties to the lowest id),
/// and re-vectorizes affected rooms from their masks. Returns the input
/// unchanged when no cell is contested.
Floorplan resolve_overlaps(const Floorplan& plan, int resolution = 256);

}  // namespace planforge::assembly
