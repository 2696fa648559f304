#include "planforge/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace planforge::assembly {

namespace {

// Drops vertices that deviate from the chord of their neighbors by less than
// tol. Mask re-vectorization leaves one-cell staircases along trimmed edges;
// a true corner has a chord deviation on the order of its leg lengths, so a
// small tolerance removes only quantization artifacts.
std::vector<Vec2> prune_jitter(std::vector<Vec2> loop, double tol) {
  bool removed = true;
  while (removed && loop.size() > 3) {
    removed = false;
    for (std::size_t i = 0; i < loop.size() && loop.size() > 3; ++i) {
      const Vec2& prev = loop[(i + loop.size() - 1) % loop.size()];
      const Vec2& next = loop[(i + 1) % loop.size()];
      const Vec2 chord = next - prev;
      const double len = chord.norm();
      double dev;
      if (len < 1e-12) {
        dev = (loop[i] - prev).norm();
      } else {
        const Vec2 d = loop[i] - prev;
        dev = std::abs(chord.x() * d.y() - chord.y() * d.x()) / len;
      }
      if (dev < tol) {
        loop.erase(loop.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        --i;
      }
    }
  }
  return loop;
}

}  // namespace

Floorplan assemble(const std::vector<std::pair<int, geom::SimplePolygon>>& room_polygons,
                   const FrameTransform& frame) {
  Floorplan plan;
  plan.frame = frame;
  for (const auto& [id, poly] : room_polygons) {
    Room room;
    room.id = id;
    room.polygon.corners.reserve(poly.corners.size());
    for (const Vec2& c : poly.corners) room.polygon.corners.push_back(frame.apply(c));
    plan.rooms.push_back(std::move(room));
  }
  return plan;
}

Floorplan resolve_overlaps(const Floorplan& plan, int resolution) {
  if (plan.rooms.size() < 2) return plan;

  // Joint grid over the bounding box of all rooms, with a one-cell margin.
  Vec2 lo = Vec2::Constant(std::numeric_limits<double>::infinity());
  Vec2 hi = -lo;
  for (const auto& room : plan.rooms) {
    for (const Vec2& c : room.polygon.corners) {
      lo = lo.cwiseMin(c);
      hi = hi.cwiseMax(c);
    }
  }
  const double extent = std::max(hi.x() - lo.x(), hi.y() - lo.y());
  if (extent <= 0.0) return plan;
  geom::GridTransform tf;
  tf.scale = (resolution - 2.0) / extent;
  tf.offset = Vec2(1.0, 1.0) - tf.scale * lo;

  std::vector<geom::RasterMask> masks;
  masks.reserve(plan.rooms.size());
  for (const auto& room : plan.rooms) {
    masks.push_back(geom::rasterize(room.polygon, resolution, resolution, tf));
  }

  const std::size_t ncells = static_cast<std::size_t>(resolution) * resolution;
  std::vector<int> claims(ncells, 0);
  for (const auto& m : masks) {
    for (std::size_t i = 0; i < ncells; ++i) claims[i] += m.cells[i];
  }
  bool contested = std::any_of(claims.begin(), claims.end(), [](int c) { return c > 1; });
  if (!contested) return plan;

  std::vector<double> areas;
  for (const auto& room : plan.rooms) areas.push_back(geom::polygon_area(room.polygon));

  // Contested cells go to the smallest-area claimant; ties to the lowest id.
  std::vector<bool> modified(masks.size(), false);
  for (std::size_t i = 0; i < ncells; ++i) {
    if (claims[i] < 2) continue;
    std::size_t winner = masks.size();
    for (std::size_t r = 0; r < masks.size(); ++r) {
      if (!masks[r].cells[i]) continue;
      if (winner == masks.size() || areas[r] < areas[winner] ||
          (areas[r] == areas[winner] && plan.rooms[r].id < plan.rooms[winner].id)) {
        winner = r;
      }
    }
    for (std::size_t r = 0; r < masks.size(); ++r) {
      if (r != winner && masks[r].cells[i]) {
        masks[r].cells[i] = 0;
        modified[r] = true;
      }
    }
  }

  Floorplan out;
  out.frame = plan.frame;
  for (std::size_t r = 0; r < masks.size(); ++r) {
    if (!modified[r]) {
      // Untrimmed rooms keep their exact polygons.
      out.rooms.push_back(plan.rooms[r]);
      continue;
    }
    auto comp = geom::largest_component(resolution, resolution, masks[r].cells);
    auto loops = geom::trace_boundary_loops(resolution, resolution, comp);
    if (loops.empty()) continue;  // room lost entirely
    std::size_t best = 0;
    for (std::size_t i = 1; i < loops.size(); ++i) {
      if (std::abs(geom::signed_area(loops[i])) > std::abs(geom::signed_area(loops[best]))) {
        best = i;
      }
    }
    geom::SimplePolygon poly;
    for (const Vec2& v : prune_jitter(loops[best], 1.5)) {
      poly.corners.push_back(tf.to_world(v));
    }
    if (poly.corners.size() < 3) continue;
    if (geom::signed_area(poly.corners) < 0.0) {
      std::reverse(poly.corners.begin(), poly.corners.end());
    }
    out.rooms.push_back(Room{plan.rooms[r].id, std::move(poly)});
  }
  return out;
}

}  // namespace planforge::assembly
