#pragma once

/// 2D geometry primitives shared across the reconstruction pipeline:
/// robust line fitting, segments, simple polygons and raster masks.

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "planforge/error.hpp"
#include "planforge/types.hpp"

namespace planforge::geom {

/// Line in signed-distance form: normal . p == offset, with |normal| == 1.
/// Canonical orientation: normal.y > 0, or normal.y == 0 and normal.x > 0.
struct Line2 {
  Vec2 normal{0.0, 1.0};
  double offset = 0.0;

  double signed_distance(const Vec2& p) const { return normal.dot(p) - offset; }
  /// Tangent direction, normal rotated by -90 degrees.
  Vec2 tangent() const { return Vec2(normal.y(), -normal.x()); }
  Vec2 project(const Vec2& p) const { return p - signed_distance(p) * normal; }

  static Line2 through(const Vec2& a, const Vec2& b);
  void canonicalize();
};

struct Segment2 {
  Vec2 a{0.0, 0.0};
  Vec2 b{0.0, 0.0};

  double length() const { return (b - a).norm(); }
  Vec2 midpoint() const { return 0.5 * (a + b); }
  Vec2 direction() const { return (b - a).normalized(); }
};

/// Counter-clockwise simple polygon. Use is_simple() to validate.
struct SimplePolygon {
  std::vector<Vec2> corners;
};

/// Uniform-scale affine world->grid transform: grid = scale * world + offset.
struct GridTransform {
  double scale = 1.0;
  Vec2 offset{0.0, 0.0};

  Vec2 to_grid(const Vec2& p) const { return scale * p + offset; }
  Vec2 to_world(const Vec2& g) const { return (g - offset) / scale; }
  bool operator==(const GridTransform&) const = default;
};

struct RasterMask {
  int width = 0;
  int height = 0;
  GridTransform transform;
  std::vector<std::uint8_t> cells;  // row-major, height * width

  bool at(int x, int y) const { return cells[static_cast<std::size_t>(y) * width + x] != 0; }
  void set(int x, int y, bool v) {
    cells[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t count() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

struct RansacResult {
  Line2 line;
  std::vector<int> inliers;  // sorted indices into the input
};

/// RANSAC over random 2-point hypotheses, refined by total least squares over
/// the surviving inliers. Deterministic for a fixed seed.
RansacResult fit_line_ransac(const std::vector<Vec2>& points, double inlier_tol,
                             int iterations, std::uint64_t rng_seed);

/// Total-least-squares (orthogonal regression) line through a point set.
Line2 fit_line_tls(const std::vector<Vec2>& points);

/// Segment on `line` spanning the extreme orthogonal projections of `points`.
Segment2 project_segment(const Line2& line, const std::vector<Vec2>& points);

/// Intersection point, or nullopt when the lines are numerically parallel
/// (|sin of the angle between normals| < 1e-6).
std::optional<Vec2> line_intersection(const Line2& l1, const Line2& l2);

double signed_area(const std::vector<Vec2>& corners);
double polygon_area(const SimplePolygon& p);
Vec2 polygon_centroid(const SimplePolygon& p);

/// Full validity check: >= 3 corners, consecutive corners distinct, positive
/// signed area, no intersection between non-adjacent edges.
bool is_simple(const SimplePolygon& p);

/// Even-odd containment test against the corner loop.
bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& corners);

/// Scanline rasterization; a cell is set iff its center is inside the polygon
/// under the even-odd rule.
RasterMask rasterize(const SimplePolygon& p, int width, int height,
                     const GridTransform& transform);

double mask_iou(const RasterMask& a, const RasterMask& b);

/// Extracts the boundary loops of `inside` cells of a width x height grid.
/// Loop vertices are lattice corner coordinates (x right, y up), oriented
/// counter-clockwise around the region, with collinear runs merged.
/// Regions are treated as 4-connected; at pinch vertices the walk stays on
/// the current lobe, so each lobe yields its own loop.
std::vector<std::vector<Vec2>> trace_boundary_loops(
    int width, int height, const std::vector<std::uint8_t>& inside);

/// Largest 4-connected component of a boolean grid (by cell count; ties break
/// toward the component containing the lowest row-major index).
std::vector<std::uint8_t> largest_component(int width, int height,
                                            const std::vector<std::uint8_t>& inside);

/// Drops corners that are collinear with their neighbors (tolerance on the
/// cross product) and merges near-duplicate consecutive corners.
std::vector<Vec2> simplify_loop(const std::vector<Vec2>& loop, double eps = 1e-9);

}  // namespace planforge::geom
