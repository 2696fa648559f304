#include "planforge/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

namespace planforge::synthgen {

namespace {

bool kernel_connected(std::uint16_t bits) {
  int first = -1;
  for (int i = 0; i < 9; ++i) {
    if ((bits >> i) & 1) {
      first = i;
      break;
    }
  }
  if (first < 0) return false;
  std::uint16_t seen = 0;
  std::deque<int> q{first};
  seen |= 1u << first;
  while (!q.empty()) {
    int cur = q.front();
    q.pop_front();
    int r = cur / 3, c = cur % 3;
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      int nr = r + dr[k], nc = c + dc[k];
      if (nr < 0 || nr > 2 || nc < 0 || nc > 2) continue;
      int idx = nr * 3 + nc;
      if (((bits >> idx) & 1) && !((seen >> idx) & 1)) {
        seen |= 1u << idx;
        q.push_back(idx);
      }
    }
  }
  int total = 0;
  for (int i = 0; i < 9; ++i) total += (bits >> i) & 1;
  int reached = 0;
  for (int i = 0; i < 9; ++i) reached += (seen >> i) & 1;
  return reached == total;
}

// Empty cells must all reach the outside: rejects ring shapes whose polygon
// would need a hole.
bool kernel_hole_free(std::uint16_t bits) {
  auto filled = [&](int r, int c) {
    if (r < 0 || r > 2 || c < 0 || c > 2) return false;
    return ((bits >> (r * 3 + c)) & 1) != 0;
  };
  // Flood empty cells on a padded 5x5 grid starting outside.
  std::array<std::array<bool, 5>, 5> seen{};
  std::deque<std::pair<int, int>> q{{-1, -1}};
  seen[0][0] = true;
  while (!q.empty()) {
    auto [r, c] = q.front();
    q.pop_front();
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      int nr = r + dr[k], nc = c + dc[k];
      if (nr < -1 || nr > 3 || nc < -1 || nc > 3) continue;
      if (filled(nr, nc) || seen[nr + 1][nc + 1]) continue;
      seen[nr + 1][nc + 1] = true;
      q.push_back({nr, nc});
    }
  }
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) {
      if (!filled(r, c) && !seen[r + 1][c + 1]) return false;
    }
  }
  return true;
}

// Two set cells meeting only diagonally would make the traced boundary touch
// itself, so such kernels are excluded from the library.
bool kernel_pinch_free(std::uint16_t bits) {
  auto filled = [&](int r, int c) { return ((bits >> (r * 3 + c)) & 1) != 0; };
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      bool a = filled(r, c), b = filled(r, c + 1);
      bool d = filled(r + 1, c), e = filled(r + 1, c + 1);
      if (a && e && !b && !d) return false;
      if (b && d && !a && !e) return false;
    }
  }
  return true;
}

struct WallRun {
  bool vertical;    // plane of constant x (boundary between columns)
  double fixed;     // x for vertical, y for horizontal
  double lo, hi;    // extent along the run
  int line;         // boundary line index (column/row boundary)
  int cell_lo;      // first cell index along the run
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + salt + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

int ShapeKernel::cell_count() const {
  int n = 0;
  for (int i = 0; i < 9; ++i) n += (bits >> i) & 1;
  return n;
}

int OccupancyGrid::num_rooms() const {
  int max_label = -1;
  for (const auto& row : labels) {
    for (int v : row) max_label = std::max(max_label, v);
  }
  return max_label + 1;
}

bool LabeledPointCloud::has_labels() const {
  if (points.empty()) return false;
  if (room_label_0.size() != points.size() || room_label_1.size() != points.size() ||
      wall_label.size() != points.size()) {
    return false;
  }
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (room_label_0[i] < 0 || room_label_1[i] < 0 || wall_label[i] < 0) return false;
  }
  return true;
}

std::vector<ShapeKernel> build_shape_library() {
  std::vector<ShapeKernel> lib;
  for (std::uint16_t bits = 1; bits < 512; ++bits) {
    if (kernel_connected(bits) && kernel_hole_free(bits) && kernel_pinch_free(bits)) {
      lib.push_back(ShapeKernel{bits});
    }
  }
  return lib;
}

namespace {

// Validity of one label's region after a super-room merge: no diagonal pinch
// and nothing (empty or another room) enclosed by it.
bool label_region_valid(const OccupancyGrid& g, int label) {
  for (int r = -1; r < kGridSize; ++r) {
    for (int c = -1; c < kGridSize; ++c) {
      bool a = g.at(r, c) == label, b = g.at(r, c + 1) == label;
      bool d = g.at(r + 1, c) == label, e = g.at(r + 1, c + 1) == label;
      if (a && e && !b && !d) return false;
      if (b && d && !a && !e) return false;
    }
  }
  // Flood non-label cells from outside the grid.
  std::vector<std::uint8_t> seen((kGridSize + 2) * (kGridSize + 2), 0);
  auto idx = [&](int r, int c) { return (r + 1) * (kGridSize + 2) + (c + 1); };
  std::deque<std::pair<int, int>> q{{-1, -1}};
  seen[idx(-1, -1)] = 1;
  while (!q.empty()) {
    auto [r, c] = q.front();
    q.pop_front();
    const int dr[4] = {-1, 1, 0, 0};
    const int dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
      int nr = r + dr[k], nc = c + dc[k];
      if (nr < -1 || nr > kGridSize || nc < -1 || nc > kGridSize) continue;
      if (g.at(nr, nc) == label || seen[idx(nr, nc)]) continue;
      seen[idx(nr, nc)] = 1;
      q.push_back({nr, nc});
    }
  }
  for (int r = 0; r < kGridSize; ++r) {
    for (int c = 0; c < kGridSize; ++c) {
      if (g.at(r, c) != label && !seen[idx(r, c)]) return false;
    }
  }
  return true;
}

}  // namespace

OccupancyGrid generate_layout(const SceneSpec& spec) {
  static const std::vector<ShapeKernel> library = build_shape_library();
  std::mt19937_64 rng(spec.rng_seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  OccupancyGrid grid;
  const int target =
      std::uniform_int_distribution<int>(1, std::max(1, spec.n_rooms_max))(rng);

  // Sample only reasonably large shapes: single-cell or domino rooms turn
  // into slivers after normalization, with too little wall to reconstruct.
  std::vector<const ShapeKernel*> pool;
  for (const ShapeKernel& k : library) {
    if (k.cell_count() >= spec.kernel_min_cells) pool.push_back(&k);
  }
  if (pool.empty()) {
    for (const ShapeKernel& k : library) pool.push_back(&k);
  }
  auto pick_kernel = [&]() -> const ShapeKernel& {
    return *pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  };

  // Kernels occupy 3x3 blocks of a coarse lattice confined to a compact
  // window. Lattice alignment keeps every wall run and every parallel-wall
  // offset at least three cells long, so after normalization no feature falls
  // under the duplicate-wall threshold or carries too few points to cluster.
  constexpr int kBlock = 3;
  constexpr int kBlockLo = 2, kBlockHi = 8;  // block window, cells 6..26
  auto block_occupied = [&](int br, int bc) {
    for (int r = 0; r < kBlock; ++r) {
      for (int c = 0; c < kBlock; ++c) {
        if (grid.at(kBlock * br + r, kBlock * bc + c) >= 0) return true;
      }
    }
    return false;
  };

  // First shape goes at the center block with label 0.
  {
    const ShapeKernel& k = pick_kernel();
    const int base = kBlock * ((kBlockLo + kBlockHi) / 2);
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (k.at(r, c)) grid.labels[base + r][base + c] = 0;
      }
    }
  }
  int n_labels = 1;

  int attempts = 0;
  const int max_attempts = 400;
  while (n_labels < target && attempts < max_attempts) {
    ++attempts;

    // Frontier: empty blocks 4-adjacent to an occupied block.
    std::vector<std::pair<int, int>> frontier;
    for (int br = kBlockLo; br <= kBlockHi; ++br) {
      for (int bc = kBlockLo; bc <= kBlockHi; ++bc) {
        if (block_occupied(br, bc)) continue;
        if ((br > kBlockLo && block_occupied(br - 1, bc)) ||
            (br < kBlockHi && block_occupied(br + 1, bc)) ||
            (bc > kBlockLo && block_occupied(br, bc - 1)) ||
            (bc < kBlockHi && block_occupied(br, bc + 1))) {
          frontier.push_back({br, bc});
        }
      }
    }
    if (frontier.empty()) break;

    auto [fr, fc] =
        frontier[std::uniform_int_distribution<std::size_t>(0, frontier.size() - 1)(rng)];
    const ShapeKernel& kernel = pick_kernel();
    const int base_r = kBlock * fr;
    const int base_c = kBlock * fc;

    std::vector<std::pair<int, int>> set_cells;
    for (int r = 0; r < 3; ++r) {
      for (int c = 0; c < 3; ++c) {
        if (kernel.at(r, c)) set_cells.push_back({r, c});
      }
    }

    // Super-room: reuse an adjacent label instead of adding a new room.
    int label = n_labels;
    bool merge = coin(rng) < spec.super_room_prob;
    if (merge) {
      std::vector<int> adjacent;
      for (auto [r, c] : set_cells) {
        int gr = base_r + r, gc = base_c + c;
        for (int v : {grid.at(gr - 1, gc), grid.at(gr + 1, gc), grid.at(gr, gc - 1),
                      grid.at(gr, gc + 1)}) {
          if (v >= 0 && std::find(adjacent.begin(), adjacent.end(), v) == adjacent.end()) {
            adjacent.push_back(v);
          }
        }
      }
      if (adjacent.empty()) {
        merge = false;
      } else {
        label =
            adjacent[std::uniform_int_distribution<std::size_t>(0, adjacent.size() - 1)(rng)];
      }
    }

    for (auto [r, c] : set_cells) grid.labels[base_r + r][base_c + c] = label;
    if (!label_region_valid(grid, label)) {
      for (auto [r, c] : set_cells) grid.labels[base_r + r][base_c + c] = -1;
      continue;
    }
    if (!merge) ++n_labels;
  }

  return grid;
}

std::pair<LabeledPointCloud, GroundTruthPlan> grid_to_scene(const OccupancyGrid& grid,
                                                            const SceneSpec& spec) {
  std::mt19937_64 rng(mix_seed(spec.rng_seed, 0x5ce7eULL));
  std::uniform_real_distribution<double> cell_scale(spec.cell_scale_min, spec.cell_scale_max);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Randomly scaled row/column sizes -> coordinate breakpoints.
  std::array<double, kGridSize + 1> X{}, Y{};
  for (int i = 0; i < kGridSize; ++i) X[i + 1] = X[i] + cell_scale(rng);
  for (int i = 0; i < kGridSize; ++i) Y[i + 1] = Y[i] + cell_scale(rng);

  const double height = spec.wall_height;

  // Wall instances are maximal collinear runs of boundary edges with constant
  // room adjacency. Splitting where the adjacent pair changes keeps walls
  // meeting only in T or L junctions, so no two wall centroids can coincide
  // the way a crossing pair's would, and clustering on centroid votes stays
  // well posed.
  std::vector<WallRun> walls;
  for (int c = 0; c <= kGridSize; ++c) {  // vertical boundaries between columns c-1, c
    int run_start = -1;
    std::pair<int, int> run_pair{-1, -1};
    for (int r = 0; r <= kGridSize; ++r) {
      const std::pair<int, int> pair{grid.at(r, c - 1), grid.at(r, c)};
      bool boundary = r < kGridSize && pair.first != pair.second &&
                      (pair.first >= 0 || pair.second >= 0);
      if (run_start >= 0 && (!boundary || pair != run_pair)) {
        walls.push_back({true, X[c], Y[run_start], Y[r], c, run_start});
        run_start = -1;
      }
      if (boundary && run_start < 0) {
        run_start = r;
        run_pair = pair;
      }
    }
  }
  for (int r = 0; r <= kGridSize; ++r) {  // horizontal boundaries between rows r-1, r
    int run_start = -1;
    std::pair<int, int> run_pair{-1, -1};
    for (int c = 0; c <= kGridSize; ++c) {
      const std::pair<int, int> pair{grid.at(r - 1, c), grid.at(r, c)};
      bool boundary = c < kGridSize && pair.first != pair.second &&
                      (pair.first >= 0 || pair.second >= 0);
      if (run_start >= 0 && (!boundary || pair != run_pair)) {
        walls.push_back({false, Y[r], X[run_start], X[c], r, run_start});
        run_start = -1;
      }
      if (boundary && run_start < 0) {
        run_start = c;
        run_pair = pair;
      }
    }
  }

  LabeledPointCloud cloud;
  for (std::size_t w = 0; w < walls.size(); ++w) {
    const WallRun& wall = walls[w];
    const double len = wall.hi - wall.lo;
    const long n = std::max(1L, std::lround(spec.points_per_wall_density * len * height));
    for (long i = 0; i < n; ++i) {
      double t = wall.lo + unit(rng) * len;
      double z = unit(rng) * height;
      int a, b;
      if (wall.vertical) {
        int r = wall.cell_lo;
        while (r + 1 < kGridSize && Y[r + 1] <= t) ++r;
        a = grid.at(r, wall.line - 1);
        b = grid.at(r, wall.line);
        cloud.points.push_back(Vec3(wall.fixed, t, z));
      } else {
        int c = wall.cell_lo;
        while (c + 1 < kGridSize && X[c + 1] <= t) ++c;
        a = grid.at(wall.line - 1, c);
        b = grid.at(wall.line, c);
        cloud.points.push_back(Vec3(t, wall.fixed, z));
      }
      int lo = (a >= 0 && b >= 0) ? std::min(a, b) : std::max(a, b);
      int hi = (a >= 0 && b >= 0) ? std::max(a, b) : std::max(a, b);
      cloud.room_label_0.push_back(lo);
      cloud.room_label_1.push_back(hi);
      cloud.wall_label.push_back(static_cast<int>(w));
    }
  }

  // Rectangular cutouts stand in for doors and windows.
  const int n_cutouts = std::uniform_int_distribution<int>(spec.cutout_count_min,
                                                          spec.cutout_count_max)(rng);
  for (int k = 0; k < n_cutouts && !walls.empty(); ++k) {
    const int w =
        std::uniform_int_distribution<int>(0, static_cast<int>(walls.size()) - 1)(rng);
    const WallRun& wall = walls[w];
    const double len = wall.hi - wall.lo;
    std::uniform_real_distribution<double> frac(spec.cutout_size_min, spec.cutout_size_max);
    const double ft = frac(rng), fz = frac(rng);
    const double t0 = wall.lo + unit(rng) * (1.0 - ft) * len;
    const double z0 = unit(rng) * (1.0 - fz) * height;
    const double t1 = t0 + ft * len, z1 = z0 + fz * height;

    LabeledPointCloud kept;
    for (std::size_t i = 0; i < cloud.points.size(); ++i) {
      bool cut = false;
      if (cloud.wall_label[i] == w) {
        const Vec3& p = cloud.points[i];
        double t = wall.vertical ? p.y() : p.x();
        cut = t >= t0 && t <= t1 && p.z() >= z0 && p.z() <= z1;
      }
      if (!cut) {
        kept.points.push_back(cloud.points[i]);
        kept.room_label_0.push_back(cloud.room_label_0[i]);
        kept.room_label_1.push_back(cloud.room_label_1[i]);
        kept.wall_label.push_back(cloud.wall_label[i]);
      }
    }
    cloud = std::move(kept);
  }

  GroundTruthPlan plan;
  const int n_rooms = grid.num_rooms();
  for (int label = 0; label < n_rooms; ++label) {
    std::vector<std::uint8_t> mask(kGridSize * kGridSize, 0);
    for (int r = 0; r < kGridSize; ++r) {
      for (int c = 0; c < kGridSize; ++c) {
        if (grid.at(r, c) == label) mask[r * kGridSize + c] = 1;
      }
    }
    auto loops = geom::trace_boundary_loops(kGridSize, kGridSize, mask);
    if (loops.empty()) continue;
    std::size_t best = 0;
    for (std::size_t i = 1; i < loops.size(); ++i) {
      if (std::abs(geom::signed_area(loops[i])) > std::abs(geom::signed_area(loops[best]))) {
        best = i;
      }
    }
    geom::SimplePolygon poly;
    for (const Vec2& v : loops[best]) {
      poly.corners.push_back(Vec2(X[static_cast<int>(v.x())], Y[static_cast<int>(v.y())]));
    }
    plan.rooms.push_back({label, std::move(poly)});
  }

  return {std::move(cloud), std::move(plan)};
}

std::pair<LabeledPointCloud, GroundTruthPlan> augment_and_normalize(
    const LabeledPointCloud& cloud, const GroundTruthPlan& plan, const SceneSpec& spec) {
  std::mt19937_64 rng(mix_seed(spec.rng_seed, 0xa06ULL));
  std::uniform_real_distribution<double> scale(spec.axis_scale_min, spec.axis_scale_max);
  const double sx = scale(rng), sy = scale(rng), sz = scale(rng);
  const double rot_range = spec.rotation_range_deg * M_PI / 180.0;
  const double theta =
      rot_range > 0.0
          ? std::uniform_real_distribution<double>(-rot_range, rot_range)(rng)
          : 0.0;
  const double ct = std::cos(theta), st = std::sin(theta);

  LabeledPointCloud out = cloud;
  for (auto& p : out.points) {
    double x = p.x() * sx, y = p.y() * sy, z = p.z() * sz;
    p = Vec3(ct * x - st * y, st * x + ct * y, z);
  }
  GroundTruthPlan gt = plan;
  for (auto& [label, poly] : gt.rooms) {
    for (auto& c : poly.corners) {
      double x = c.x() * sx, y = c.y() * sy;
      c = Vec2(ct * x - st * y, st * x + ct * y);
    }
  }

  // Fit the XY bounding box (cloud and plan jointly) into [0,2]^2.
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin, zmin = xmin;
  for (const auto& p : out.points) {
    xmin = std::min(xmin, p.x());
    xmax = std::max(xmax, p.x());
    ymin = std::min(ymin, p.y());
    ymax = std::max(ymax, p.y());
    zmin = std::min(zmin, p.z());
  }
  for (const auto& [label, poly] : gt.rooms) {
    for (const auto& c : poly.corners) {
      xmin = std::min(xmin, c.x());
      xmax = std::max(xmax, c.x());
      ymin = std::min(ymin, c.y());
      ymax = std::max(ymax, c.y());
    }
  }
  const double extent = std::max(xmax - xmin, ymax - ymin);
  const double s = extent > 0.0 ? 2.0 / extent : 1.0;
  for (auto& p : out.points) {
    p = Vec3((p.x() - xmin) * s, (p.y() - ymin) * s, (p.z() - zmin) * s);
  }
  for (auto& [label, poly] : gt.rooms) {
    for (auto& c : poly.corners) c = Vec2((c.x() - xmin) * s, (c.y() - ymin) * s);
  }
  return {std::move(out), std::move(gt)};
}

std::pair<LabeledPointCloud, GroundTruthPlan> generate_scene(const SceneSpec& spec) {
  OccupancyGrid grid = generate_layout(spec);
  auto [cloud, plan] = grid_to_scene(grid, spec);
  return augment_and_normalize(cloud, plan, spec);
}

}  // namespace planforge::synthgen
