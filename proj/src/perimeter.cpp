#include "planforge/perimeter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "planforge/error.hpp"

namespace planforge::perimeter {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

double line_angle(const geom::Line2& a, const geom::Line2& b) {
  double cross = a.normal.x() * b.normal.y() - a.normal.y() * b.normal.x();
  double dot = a.normal.dot(b.normal);
  return std::atan2(std::abs(cross), std::abs(dot));  // [0, pi/2]
}

double offset_distance(const geom::Line2& a, const geom::Line2& b) {
  // Orient b's normal to match a before comparing offsets.
  double off_b = a.normal.dot(b.normal) >= 0.0 ? b.offset : -b.offset;
  return std::abs(a.offset - off_b);
}

// Gap between the two segments' extents along a's direction; negative when
// they overlap. A room whose boundary returns to the same line leaves two
// well-separated collinear segments, and those are distinct walls, not
// duplicates.
double along_line_gap(const WallSegment& a, const WallSegment& b) {
  const Vec2 dir(-a.line.normal.y(), a.line.normal.x());
  const double a0 = dir.dot(a.segment.a), a1 = dir.dot(a.segment.b);
  const double b0 = dir.dot(b.segment.a), b1 = dir.dot(b.segment.b);
  const double alo = std::min(a0, a1), ahi = std::max(a0, a1);
  const double blo = std::min(b0, b1), bhi = std::max(b0, b1);
  return std::max(alo - bhi, blo - ahi);
}

Vec2 node_point(const std::vector<WallSegment>& segments, int node) {
  const geom::Segment2& s = segments[node / 2].segment;
  return node % 2 == 0 ? s.a : s.b;
}

// Tour state: permutation of segments plus a traversal direction per segment.
struct Tour {
  std::vector<int> perm;
  std::vector<bool> flip;

  Vec2 entry(const std::vector<WallSegment>& segs, std::size_t pos) const {
    const geom::Segment2& s = segs[perm[pos]].segment;
    return flip[pos] ? s.b : s.a;
  }
  Vec2 exit(const std::vector<WallSegment>& segs, std::size_t pos) const {
    const geom::Segment2& s = segs[perm[pos]].segment;
    return flip[pos] ? s.a : s.b;
  }
  double cost(const std::vector<WallSegment>& segs) const {
    double c = 0.0;
    const std::size_t n = perm.size();
    for (std::size_t i = 0; i < n; ++i) {
      c += (exit(segs, i) - entry(segs, (i + 1) % n)).norm();
    }
    return c;
  }
};

}  // namespace

std::vector<WallSegment> fit_wall_segments(
    const std::vector<std::vector<Vec2>>& room_points_by_wall, const PerimeterConfig& cfg) {
  std::vector<WallSegment> out;
  for (std::size_t w = 0; w < room_points_by_wall.size(); ++w) {
    const auto& pts = room_points_by_wall[w];
    if (pts.size() < 2) continue;
    try {
      geom::RansacResult fit = geom::fit_line_ransac(
          pts, cfg.ransac.inlier_tol, cfg.ransac.iterations, cfg.ransac.rng_seed + w);
      std::vector<Vec2> inliers;
      inliers.reserve(fit.inliers.size());
      for (int i : fit.inliers) inliers.push_back(pts[i]);
      geom::Segment2 seg = geom::project_segment(fit.line, inliers);
      out.push_back(WallSegment{seg, fit.line, static_cast<int>(w),
                                static_cast<int>(fit.inliers.size())});
    } catch (const DegenerateInput&) {
      continue;  // under-determined wall, skipped
    } catch (const FewerThanTwoPoints&) {
      continue;
    }
  }
  return out;
}

std::vector<WallSegment> dedup_segments(const std::vector<WallSegment>& segments,
                                        const PerimeterConfig& cfg) {
  const double theta_min = cfg.theta_min_deg * kDegToRad;

  // Repeatedly fold each duplicate pair into the stronger member, extending
  // its segment over the pair's combined extent. Merging to a fixpoint keeps
  // chains of touching collinear pieces transitive: dropping a middle piece
  // instead would leave its neighbors looking disjoint.
  std::vector<WallSegment> kept = segments;
  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < kept.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < kept.size() && !merged; ++j) {
        if (line_angle(kept[i].line, kept[j].line) > theta_min + 1e-12 ||
            offset_distance(kept[i].line, kept[j].line) > cfg.beta_min + 1e-12 ||
            along_line_gap(kept[i], kept[j]) > cfg.beta_min + 1e-12) {
          continue;
        }
        const std::size_t base = kept[j].inlier_count > kept[i].inlier_count ? j : i;
        const std::size_t other = base == i ? j : i;
        const geom::Line2& line = kept[base].line;
        const Vec2 dir(-line.normal.y(), line.normal.x());
        auto onto_line = [&](const Vec2& p) {
          return Vec2(p - (line.normal.dot(p) - line.offset) * line.normal);
        };
        const Vec2 ends[4] = {kept[base].segment.a, kept[base].segment.b,
                              onto_line(kept[other].segment.a),
                              onto_line(kept[other].segment.b)};
        Vec2 lo = ends[0], hi = ends[0];
        for (const Vec2& p : ends) {
          if (dir.dot(p) < dir.dot(lo)) lo = p;
          if (dir.dot(p) > dir.dot(hi)) hi = p;
        }
        kept[base].segment.a = lo;
        kept[base].segment.b = hi;
        kept[base].inlier_count += kept[other].inlier_count;
        kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(other));
        merged = true;
      }
    }
  }
  return kept;
}

std::vector<WallSegment> snap_to_axes(const std::vector<WallSegment>& segments,
                                      const PerimeterConfig& cfg) {
  const double theta_orth = cfg.theta_orth_deg * kDegToRad;
  std::vector<WallSegment> out = segments;
  for (WallSegment& s : out) {
    Vec2 dir = s.segment.direction();
    double ang_x = std::atan2(std::abs(dir.y()), std::abs(dir.x()));  // to x axis
    double ang_y = M_PI / 2.0 - ang_x;                                // to y axis
    Vec2 axis;
    if (ang_x <= theta_orth + 1e-12 && ang_x <= ang_y) {
      axis = Vec2(dir.x() >= 0.0 ? 1.0 : -1.0, 0.0);
    } else if (ang_y <= theta_orth + 1e-12) {
      axis = Vec2(0.0, dir.y() >= 0.0 ? 1.0 : -1.0);
    } else {
      continue;
    }
    const Vec2 mid = s.segment.midpoint();
    const double half = 0.5 * s.segment.length();
    s.segment.a = mid - half * axis;
    s.segment.b = mid + half * axis;
    s.line.normal = Vec2(-axis.y(), axis.x());
    s.line.offset = s.line.normal.dot(mid);
    s.line.canonicalize();
  }
  return out;
}

namespace {

// Exact optimum for small rooms: fix the first segment (tours are rotation
// invariant) and enumerate the remaining permutations times all orientations.
Tour exhaustive_tour(const std::vector<WallSegment>& segments) {
  const std::size_t n = segments.size();
  std::vector<int> rest(n - 1);
  std::iota(rest.begin(), rest.end(), 1);

  Tour best_tour;
  double best = std::numeric_limits<double>::infinity();
  Tour cand;
  cand.perm.resize(n);
  cand.flip.resize(n);
  do {
    cand.perm[0] = 0;
    std::copy(rest.begin(), rest.end(), cand.perm.begin() + 1);
    for (std::uint32_t flips = 0; flips < (1u << n); ++flips) {
      for (std::size_t i = 0; i < n; ++i) cand.flip[i] = (flips >> i) & 1;
      const double c = cand.cost(segments);
      if (c < best) {
        best = c;
        best_tour = cand;
      }
    }
  } while (std::next_permutation(rest.begin(), rest.end()));
  return best_tour;
}

}  // namespace

PerimeterPath order_segments_2opt(const std::vector<WallSegment>& segments) {
  const std::size_t n = segments.size();
  if (n < 2) throw TooFewSegments();

  if (n <= 7) {
    const Tour tour = exhaustive_tour(segments);
    PerimeterPath path;
    path.order.reserve(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      int s = tour.perm[i];
      if (tour.flip[i]) {
        path.order.push_back(2 * s + 1);
        path.order.push_back(2 * s);
      } else {
        path.order.push_back(2 * s);
        path.order.push_back(2 * s + 1);
      }
    }
    path.pair_adjacent = true;
    return path;
  }

  // Initial tour: segments in angular order of their midpoints about the
  // common centroid, each traversed in its stored direction.
  Vec2 centroid = Vec2::Zero();
  for (const auto& s : segments) centroid += s.segment.midpoint();
  centroid /= static_cast<double>(n);

  Tour tour;
  tour.perm.resize(n);
  std::iota(tour.perm.begin(), tour.perm.end(), 0);
  std::stable_sort(tour.perm.begin(), tour.perm.end(), [&](int a, int b) {
    Vec2 da = segments[a].segment.midpoint() - centroid;
    Vec2 db = segments[b].segment.midpoint() - centroid;
    return std::atan2(da.y(), da.x()) < std::atan2(db.y(), db.x());
  });
  tour.flip.assign(n, false);

  // Greedy orientation pass.
  for (std::size_t i = 1; i < n; ++i) {
    Vec2 prev = tour.exit(segments, i - 1);
    const geom::Segment2& s = segments[tour.perm[i]].segment;
    tour.flip[i] = (s.b - prev).norm() < (s.a - prev).norm();
  }

  // 2-opt over segment blocks (endpoint pairs stay adjacent by construction)
  // plus single-segment orientation flips, until no improving move.
  double best = tour.cost(segments);
  bool improved = true;
  int guard = 0;
  while (improved && guard++ < 10000) {
    improved = false;
    for (std::size_t i = 0; i < n && !improved; ++i) {
      for (std::size_t j = i; j < n && !improved; ++j) {
        Tour cand = tour;
        std::reverse(cand.perm.begin() + i, cand.perm.begin() + j + 1);
        std::reverse(cand.flip.begin() + i, cand.flip.begin() + j + 1);
        for (std::size_t k = i; k <= j; ++k) cand.flip[k] = !cand.flip[k];
        double c = cand.cost(segments);
        if (c < best - 1e-12) {
          tour = std::move(cand);
          best = c;
          improved = true;
        }
      }
    }
    for (std::size_t i = 0; i < n && !improved; ++i) {
      Tour cand = tour;
      cand.flip[i] = !cand.flip[i];
      double c = cand.cost(segments);
      if (c < best - 1e-12) {
        tour = std::move(cand);
        best = c;
        improved = true;
      }
    }
  }

  PerimeterPath path;
  path.order.reserve(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    int s = tour.perm[i];
    if (tour.flip[i]) {
      path.order.push_back(2 * s + 1);
      path.order.push_back(2 * s);
    } else {
      path.order.push_back(2 * s);
      path.order.push_back(2 * s + 1);
    }
  }
  path.pair_adjacent = true;
  return path;
}

double tour_cost(const PerimeterPath& path, const std::vector<WallSegment>& segments) {
  double c = 0.0;
  const std::size_t n = path.order.size();
  for (std::size_t i = 0; i < n; ++i) {
    int u = path.order[i];
    int v = path.order[(i + 1) % n];
    if (u / 2 == v / 2) continue;  // zero-cost edge inside an endpoint pair
    c += (node_point(segments, u) - node_point(segments, v)).norm();
  }
  return c;
}

geom::SimplePolygon extrude_polygon(const PerimeterPath& path,
                                    const std::vector<WallSegment>& segments,
                                    const PerimeterConfig& cfg) {
  if (!path.pair_adjacent || path.order.size() < 4 || path.order.size() % 2 != 0) {
    throw SelfIntersecting("path is not a pair-adjacent cycle");
  }
  const std::size_t n = path.order.size() / 2;
  const double parallel_limit = cfg.parallel_corner_angle_deg * kDegToRad;

  std::vector<Vec2> corners;
  for (std::size_t t = 0; t < n; ++t) {
    int exit_node = path.order[2 * t + 1];
    int entry_node = path.order[(2 * t + 2) % path.order.size()];
    const geom::Line2& l1 = segments[exit_node / 2].line;
    const geom::Line2& l2 = segments[entry_node / 2].line;
    const Vec2 e = node_point(segments, exit_node);
    const Vec2 f = node_point(segments, entry_node);
    const double gap = (e - f).norm();
    const Vec2 fallback = 0.5 * (e + f);

    Vec2 corner = fallback;
    if (line_angle(l1, l2) > parallel_limit) {
      if (auto x = geom::line_intersection(l1, l2)) {
        const double limit = std::max(2.0 * gap, 0.5);
        if ((*x - e).norm() <= limit && (*x - f).norm() <= limit) corner = *x;
      }
    }
    corners.push_back(corner);
  }

  // Merge consecutive near-duplicates (including the wrap-around pair).
  std::vector<Vec2> cleaned;
  for (const Vec2& c : corners) {
    if (cleaned.empty() || (c - cleaned.back()).norm() > 1e-4) cleaned.push_back(c);
  }
  while (cleaned.size() > 1 && (cleaned.front() - cleaned.back()).norm() <= 1e-4) {
    cleaned.pop_back();
  }
  if (cleaned.size() < 3) throw SelfIntersecting("fewer than three distinct corners");

  if (geom::signed_area(cleaned) < 0.0) std::reverse(cleaned.begin(), cleaned.end());
  geom::SimplePolygon poly{std::move(cleaned)};
  if (!geom::is_simple(poly)) throw SelfIntersecting();
  return poly;
}

geom::SimplePolygon estimate_room_perimeter(
    const std::vector<std::vector<Vec2>>& room_walls, const PerimeterConfig& cfg) {
  std::vector<WallSegment> segs = fit_wall_segments(room_walls, cfg);
  if (segs.size() < 2) throw TooFewSegments();
  segs = dedup_segments(segs, cfg);
  segs = snap_to_axes(segs, cfg);
  if (segs.size() < 2) throw TooFewSegments();
  PerimeterPath path = order_segments_2opt(segs);
  return extrude_polygon(path, segs, cfg);
}

}  // namespace planforge::perimeter
