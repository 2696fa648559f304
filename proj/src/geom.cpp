#include "planforge/geom.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <unordered_map>

namespace planforge::geom {

namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

int orientation_sign(const Vec2& a, const Vec2& b, const Vec2& c) {
  double v = cross2(b - a, c - a);
  constexpr double kEps = 1e-12;
  if (v > kEps) return 1;
  if (v < -kEps) return -1;
  return 0;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) - 1e-12 <= p.x() && p.x() <= std::max(a.x(), b.x()) + 1e-12 &&
         std::min(a.y(), b.y()) - 1e-12 <= p.y() && p.y() <= std::max(a.y(), b.y()) + 1e-12;
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  int o1 = orientation_sign(p1, p2, q1);
  int o2 = orientation_sign(p1, p2, q2);
  int o3 = orientation_sign(q1, q2, p1);
  int o4 = orientation_sign(q1, q2, p2);
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(p1, p2, q1)) return true;
  if (o2 == 0 && on_segment(p1, p2, q2)) return true;
  if (o3 == 0 && on_segment(q1, q2, p1)) return true;
  if (o4 == 0 && on_segment(q1, q2, p2)) return true;
  return false;
}

}  // namespace

void Line2::canonicalize() {
  if (normal.y() < 0.0 || (normal.y() == 0.0 && normal.x() < 0.0)) {
    normal = -normal;
    offset = -offset;
  }
}

Line2 Line2::through(const Vec2& a, const Vec2& b) {
  Vec2 dir = b - a;
  double len = dir.norm();
  if (len < 1e-12) throw DegenerateInput("line through coincident points");
  dir /= len;
  Line2 l;
  l.normal = Vec2(-dir.y(), dir.x());
  l.offset = l.normal.dot(a);
  l.canonicalize();
  return l;
}

std::size_t RasterMask::count() const {
  std::size_t n = 0;
  for (auto c : cells) n += c;
  return n;
}

Line2 fit_line_tls(const std::vector<Vec2>& points) {
  if (points.size() < 2) throw FewerThanTwoPoints();
  Vec2 mean = Vec2::Zero();
  for (const auto& p : points) mean += p;
  mean /= static_cast<double>(points.size());

  Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
  for (const auto& p : points) {
    Vec2 d = p - mean;
    cov += d * d.transpose();
  }
  if (cov.trace() < 1e-18) throw DegenerateInput("all points coincident");

  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
  Line2 l;
  l.normal = es.eigenvectors().col(0);  // smallest eigenvalue
  l.normal.normalize();
  l.offset = l.normal.dot(mean);
  l.canonicalize();
  return l;
}

RansacResult fit_line_ransac(const std::vector<Vec2>& points, double inlier_tol,
                             int iterations, std::uint64_t rng_seed) {
  const int n = static_cast<int>(points.size());
  if (n < 2) throw FewerThanTwoPoints();

  auto collect_inliers = [&](const Line2& l) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) {
      if (std::abs(l.signed_distance(points[i])) <= inlier_tol) idx.push_back(i);
    }
    return idx;
  };

  // Deterministic fallback hypothesis from the first distinct pair.
  Line2 best;
  bool have_hypothesis = false;
  for (int j = 1; j < n && !have_hypothesis; ++j) {
    if ((points[j] - points[0]).norm() > 1e-12) {
      best = Line2::through(points[0], points[j]);
      have_hypothesis = true;
    }
  }
  if (!have_hypothesis) throw DegenerateInput("all points coincident");

  std::vector<int> best_inliers = collect_inliers(best);

  std::mt19937_64 rng(rng_seed);
  std::uniform_int_distribution<int> pick(0, n - 1);
  for (int it = 0; it < iterations; ++it) {
    int i = pick(rng);
    int j = pick(rng);
    if (i == j || (points[i] - points[j]).norm() < 1e-12) continue;
    Line2 cand = Line2::through(points[i], points[j]);
    std::vector<int> inl = collect_inliers(cand);
    if (inl.size() > best_inliers.size()) {
      best = cand;
      best_inliers = std::move(inl);
    }
  }

  // TLS refinement, then re-select inliers against the refined line so the
  // distance bound holds for the line actually returned.
  for (int pass = 0; pass < 2; ++pass) {
    if (best_inliers.size() < 2) break;
    std::vector<Vec2> sel;
    sel.reserve(best_inliers.size());
    for (int i : best_inliers) sel.push_back(points[i]);
    Line2 refined;
    try {
      refined = fit_line_tls(sel);
    } catch (const DegenerateInput&) {
      break;
    }
    std::vector<int> inl = collect_inliers(refined);
    if (inl.size() < 2) break;
    best = refined;
    best_inliers = std::move(inl);
  }

  return RansacResult{best, std::move(best_inliers)};
}

Segment2 project_segment(const Line2& line, const std::vector<Vec2>& points) {
  if (points.size() < 2) throw FewerThanTwoPoints();
  Vec2 t = line.tangent();
  double smin = std::numeric_limits<double>::infinity();
  double smax = -std::numeric_limits<double>::infinity();
  for (const auto& p : points) {
    double s = t.dot(p);
    smin = std::min(smin, s);
    smax = std::max(smax, s);
  }
  if (smax - smin < 1e-6) throw DegenerateInput("projection span below threshold");
  Vec2 base = line.offset * line.normal;
  return Segment2{base + smin * t, base + smax * t};
}

std::optional<Vec2> line_intersection(const Line2& l1, const Line2& l2) {
  double det = cross2(l1.normal, l2.normal);
  if (std::abs(det) < 1e-6) return std::nullopt;
  // [n1; n2] x = [o1; o2]
  double x = (l1.offset * l2.normal.y() - l2.offset * l1.normal.y()) / det;
  double y = (l1.normal.x() * l2.offset - l2.normal.x() * l1.offset) / det;
  return Vec2(x, y);
}

double signed_area(const std::vector<Vec2>& corners) {
  double acc = 0.0;
  const std::size_t n = corners.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = corners[i];
    const Vec2& b = corners[(i + 1) % n];
    acc += cross2(a, b);
  }
  return 0.5 * acc;
}

double polygon_area(const SimplePolygon& p) { return signed_area(p.corners); }

Vec2 polygon_centroid(const SimplePolygon& p) {
  const std::size_t n = p.corners.size();
  double a = 0.0;
  Vec2 c = Vec2::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& u = p.corners[i];
    const Vec2& v = p.corners[(i + 1) % n];
    double w = cross2(u, v);
    a += w;
    c += w * (u + v);
  }
  if (std::abs(a) < 1e-15) return p.corners.empty() ? Vec2::Zero() : p.corners[0];
  return c / (3.0 * a);
}

bool is_simple(const SimplePolygon& p) {
  const std::size_t n = p.corners.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    if ((p.corners[i] - p.corners[(i + 1) % n]).norm() < 1e-9) return false;
  }
  if (signed_area(p.corners) <= 0.0) return false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      // Skip adjacent edges (they share a vertex).
      if (j == i + 1 || (i == 0 && j == n - 1)) continue;
      if (segments_intersect(p.corners[i], p.corners[(i + 1) % n],
                             p.corners[j], p.corners[(j + 1) % n])) {
        return false;
      }
    }
  }
  return true;
}

bool point_in_polygon(const Vec2& p, const std::vector<Vec2>& corners) {
  bool inside = false;
  const std::size_t n = corners.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = corners[i];
    const Vec2& b = corners[(i + 1) % n];
    if ((a.y() <= p.y()) != (b.y() <= p.y())) {
      double x = a.x() + (p.y() - a.y()) / (b.y() - a.y()) * (b.x() - a.x());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

RasterMask rasterize(const SimplePolygon& p, int width, int height,
                     const GridTransform& transform) {
  RasterMask m;
  m.width = width;
  m.height = height;
  m.transform = transform;
  m.cells.assign(static_cast<std::size_t>(width) * height, 0);

  std::vector<Vec2> g;
  g.reserve(p.corners.size());
  for (const auto& c : p.corners) {
    Vec2 q = transform.to_grid(c);
    if (q.x() < -1e-9 || q.y() < -1e-9 || q.x() > width + 1e-9 || q.y() > height + 1e-9) {
      throw OutOfBounds();
    }
    g.push_back(q);
  }

  std::vector<double> xs;
  for (int row = 0; row < height; ++row) {
    double yc = row + 0.5;
    xs.clear();
    const std::size_t n = g.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& a = g[i];
      const Vec2& b = g[(i + 1) % n];
      if ((a.y() <= yc) != (b.y() <= yc)) {
        xs.push_back(a.x() + (yc - a.y()) / (b.y() - a.y()) * (b.x() - a.x()));
      }
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // Cell centers strictly between the two crossings.
      int lo = static_cast<int>(std::ceil(xs[k] - 0.5));
      int hi = static_cast<int>(std::floor(xs[k + 1] - 0.5));
      if (lo + 0.5 <= xs[k]) ++lo;
      if (hi + 0.5 >= xs[k + 1]) --hi;
      lo = std::max(lo, 0);
      hi = std::min(hi, width - 1);
      for (int x = lo; x <= hi; ++x) m.set(x, row, true);
    }
  }
  return m;
}

double mask_iou(const RasterMask& a, const RasterMask& b) {
  if (a.width != b.width || a.height != b.height || !(a.transform == b.transform)) {
    throw DimMismatch();
  }
  std::size_t inter = 0, uni = 0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    bool x = a.cells[i] != 0;
    bool y = b.cells[i] != 0;
    inter += (x && y);
    uni += (x || y);
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<std::uint8_t> largest_component(int width, int height,
                                            const std::vector<std::uint8_t>& inside) {
  std::vector<int> comp(inside.size(), -1);
  int n_comp = 0;
  std::vector<std::size_t> sizes;
  std::deque<int> queue;
  for (std::size_t s = 0; s < inside.size(); ++s) {
    if (!inside[s] || comp[s] >= 0) continue;
    int id = n_comp++;
    sizes.push_back(0);
    comp[s] = id;
    queue.push_back(static_cast<int>(s));
    while (!queue.empty()) {
      int cur = queue.front();
      queue.pop_front();
      ++sizes[id];
      int x = cur % width;
      int y = cur / width;
      const int nx[4] = {x - 1, x + 1, x, x};
      const int ny[4] = {y, y, y - 1, y + 1};
      for (int k = 0; k < 4; ++k) {
        if (nx[k] < 0 || nx[k] >= width || ny[k] < 0 || ny[k] >= height) continue;
        int idx = ny[k] * width + nx[k];
        if (inside[idx] && comp[idx] < 0) {
          comp[idx] = id;
          queue.push_back(idx);
        }
      }
    }
  }
  std::vector<std::uint8_t> out(inside.size(), 0);
  if (n_comp == 0) return out;
  int best = 0;
  for (int id = 1; id < n_comp; ++id) {
    if (sizes[id] > sizes[best]) best = id;
  }
  for (std::size_t i = 0; i < inside.size(); ++i) out[i] = (comp[i] == best) ? 1 : 0;
  return out;
}

std::vector<std::vector<Vec2>> trace_boundary_loops(
    int width, int height, const std::vector<std::uint8_t>& inside) {
  struct Edge {
    int from;  // vertex index in (width+1) x (height+1) lattice
    int to;
    Vec2 dir;
  };
  auto vid = [&](int x, int y) { return y * (width + 1) + x; };
  auto cell = [&](int x, int y) {
    if (x < 0 || x >= width || y < 0 || y >= height) return false;
    return inside[static_cast<std::size_t>(y) * width + x] != 0;
  };

  std::vector<Edge> edges;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!cell(x, y)) continue;
      // Interior stays on the left of every directed edge.
      if (!cell(x, y - 1)) edges.push_back({vid(x, y), vid(x + 1, y), Vec2(1, 0)});
      if (!cell(x + 1, y)) edges.push_back({vid(x + 1, y), vid(x + 1, y + 1), Vec2(0, 1)});
      if (!cell(x, y + 1)) edges.push_back({vid(x + 1, y + 1), vid(x, y + 1), Vec2(-1, 0)});
      if (!cell(x - 1, y)) edges.push_back({vid(x, y + 1), vid(x, y), Vec2(0, -1)});
    }
  }

  std::unordered_map<int, std::vector<int>> outgoing;
  for (std::size_t i = 0; i < edges.size(); ++i) outgoing[edges[i].from].push_back(static_cast<int>(i));

  std::vector<bool> used(edges.size(), false);
  std::vector<std::vector<Vec2>> loops;
  for (std::size_t start = 0; start < edges.size(); ++start) {
    if (used[start]) continue;
    std::vector<Vec2> loop;
    int cur = static_cast<int>(start);
    while (!used[cur]) {
      used[cur] = true;
      const Edge& e = edges[cur];
      loop.push_back(Vec2(e.from % (width + 1), e.from / (width + 1)));
      const auto& outs = outgoing[e.to];
      int next = -1;
      double best_turn = -2.0;
      for (int cand : outs) {
        if (used[cand] && static_cast<std::size_t>(cand) != start) continue;
        // Prefer the left-most turn so the walk hugs the current lobe at
        // pinch vertices.
        double turn = e.dir.x() * edges[cand].dir.y() - e.dir.y() * edges[cand].dir.x();
        if (next < 0 || turn > best_turn) {
          next = cand;
          best_turn = turn;
        }
      }
      if (next < 0 || static_cast<std::size_t>(next) == start) break;
      cur = next;
    }
    if (loop.size() >= 4) loops.push_back(simplify_loop(loop));
  }
  return loops;
}

std::vector<Vec2> simplify_loop(const std::vector<Vec2>& loop, double eps) {
  std::vector<Vec2> out = loop;
  bool changed = true;
  while (changed && out.size() > 3) {
    changed = false;
    std::vector<Vec2> next;
    const std::size_t n = out.size();
    for (std::size_t i = 0; i < n; ++i) {
      const Vec2& prev = out[(i + n - 1) % n];
      const Vec2& cur = out[i];
      const Vec2& nxt = out[(i + 1) % n];
      if ((cur - prev).norm() < eps) {
        changed = true;
        continue;
      }
      if (std::abs(cross2(cur - prev, nxt - cur)) < eps && (nxt - cur).dot(cur - prev) > 0.0) {
        changed = true;
        continue;
      }
      next.push_back(cur);
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace planforge::geom
