#include "planforge/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

#include "planforge/error.hpp"
#include "planforge/parallel.hpp"

namespace planforge::cluster {

ClusterAssignment dbscan(const std::vector<Vec3>& points, const DbscanParams& params,
                         int threads) {
  const std::size_t n = points.size();
  ClusterAssignment out;
  out.labels.assign(n, kNoise);
  if (n == 0) return out;

  // Spatial hash on an eps-sized grid keeps neighbor queries near-linear.
  const double cell = params.eps;
  auto key = [&](const Vec3& p) {
    auto q = [&](double v) { return static_cast<long long>(std::floor(v / cell)); };
    return std::array<long long, 3>{q(p.x()), q(p.y()), q(p.z())};
  };
  std::map<std::array<long long, 3>, std::vector<int>> grid;
  for (std::size_t i = 0; i < n; ++i) grid[key(points[i])].push_back(static_cast<int>(i));

  // Neighborhoods are scanned on demand instead of materialized: dense vote
  // clusters would otherwise allocate quadratically many adjacency entries.
  // Labels depend only on the core graph's connected components and on index
  // order, so visit order inside a scan cannot change the result.
  const double eps2 = params.eps * params.eps;
  auto for_neighbors = [&](std::size_t i, auto&& visit) {
    auto k = key(points[i]);
    for (long long dx = -1; dx <= 1; ++dx) {
      for (long long dy = -1; dy <= 1; ++dy) {
        for (long long dz = -1; dz <= 1; ++dz) {
          auto it = grid.find({k[0] + dx, k[1] + dy, k[2] + dz});
          if (it == grid.end()) continue;
          for (int j : it->second) {
            if ((points[i] - points[j]).squaredNorm() <= eps2) visit(j);
          }
        }
      }
    }
  };

  std::vector<std::uint8_t> core(n, 0);
  parallel_chunks(n, threads, [&](int, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      int count = 0;
      for_neighbors(i, [&](int) { ++count; });
      core[i] = count >= params.min_pts;
    }
  });

  // Clusters: connected components of the core eps-graph, ids assigned in
  // index order so the result is deterministic.
  int next = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!core[i] || out.labels[i] != kNoise) continue;
    int id = next++;
    std::deque<int> q{static_cast<int>(i)};
    out.labels[i] = id;
    while (!q.empty()) {
      int cur = q.front();
      q.pop_front();
      for_neighbors(cur, [&](int j) {
        if (core[j] && out.labels[j] == kNoise) {
          out.labels[j] = id;
          q.push_back(j);
        }
      });
    }
  }

  // Border points join the lowest adjacent core cluster.
  parallel_chunks(n, threads, [&](int, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      if (core[i]) continue;
      int best = kNoise;
      for_neighbors(i, [&](int j) {
        if (core[j] && (best == kNoise || out.labels[j] < best)) best = out.labels[j];
      });
      out.labels[i] = best;
    }
  });

  out.num_clusters = next;
  return out;
}

SeedLabels backtrack_labels(const votes::VoteSet& v, const ClusterAssignment& room_assign,
                            const ClusterAssignment& wall_assign) {
  const std::size_t m = v.size();
  if (room_assign.labels.size() != 2 * m || wall_assign.labels.size() != m) {
    throw LengthMismatch("cluster assignments do not match vote count");
  }
  SeedLabels out;
  out.room.resize(m);
  out.wall.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.room[i] = {room_assign.labels[i], room_assign.labels[m + i]};
    out.wall[i] = wall_assign.labels[i];
  }
  out.num_rooms = room_assign.num_clusters;
  out.num_walls = wall_assign.num_clusters;
  return out;
}

SeedLabels prune_spurious(const SeedLabels& labels, double room_threshold_fraction,
                          double wall_threshold_fraction) {
  const std::size_t m = labels.size();
  const double room_min = room_threshold_fraction * static_cast<double>(m);
  const double wall_min = wall_threshold_fraction * static_cast<double>(m);

  // Member strength counts distinct seeds, not votes.
  std::vector<std::size_t> room_count(labels.num_rooms, 0);
  std::vector<std::size_t> wall_count(labels.num_walls, 0);
  for (std::size_t i = 0; i < m; ++i) {
    auto [a, b] = labels.room[i];
    if (a >= 0) ++room_count[a];
    if (b >= 0 && b != a) ++room_count[b];
    if (labels.wall[i] >= 0) ++wall_count[labels.wall[i]];
  }

  std::vector<int> room_map(labels.num_rooms, kNoise);
  std::vector<int> wall_map(labels.num_walls, kNoise);
  int nr = 0, nw = 0;
  for (int k = 0; k < labels.num_rooms; ++k) {
    if (static_cast<double>(room_count[k]) >= room_min) room_map[k] = nr++;
  }
  for (int k = 0; k < labels.num_walls; ++k) {
    if (static_cast<double>(wall_count[k]) >= wall_min) wall_map[k] = nw++;
  }

  SeedLabels out;
  out.room.resize(m);
  out.wall.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    auto remap = [&](int v, const std::vector<int>& map) {
      return v >= 0 ? map[v] : kNoise;
    };
    out.room[i] = {remap(labels.room[i][0], room_map), remap(labels.room[i][1], room_map)};
    out.wall[i] = remap(labels.wall[i], wall_map);
  }
  out.num_rooms = nr;
  out.num_walls = nw;
  return out;
}

RoomWallSets intersect_rooms_walls(const SeedLabels& labels) {
  const std::size_t m = labels.size();

  std::map<int, std::vector<int>> rooms;
  std::map<int, std::vector<int>> wall_sets;
  for (std::size_t i = 0; i < m; ++i) {
    std::set<int> memberships;
    for (int r : labels.room[i]) {
      if (r >= 0) memberships.insert(r);
    }
    for (int r : memberships) rooms[r].push_back(static_cast<int>(i));
    if (labels.wall[i] >= 0) wall_sets[labels.wall[i]].push_back(static_cast<int>(i));
  }

  RoomWallSets out;
  out.rooms = rooms;
  for (const auto& [k, room_seeds] : rooms) {
    for (const auto& [w, wall_seeds] : wall_sets) {
      std::vector<int> inter;
      std::set_intersection(room_seeds.begin(), room_seeds.end(), wall_seeds.begin(),
                            wall_seeds.end(), std::back_inserter(inter));
      if (!inter.empty()) {
        out.walls_per_room[k].push_back(std::move(inter));
        out.wall_source[k].push_back(w);
      }
    }
  }
  return out;
}

}  // namespace planforge::cluster
