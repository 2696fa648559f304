#pragma once

/// DBSCAN over vote points, label backtracking to seeds, spurious-cluster
/// pruning and the room/wall set intersection.

#include <array>
#include <map>
#include <vector>

#include "planforge/types.hpp"
#include "planforge/votes.hpp"

namespace planforge::cluster {

struct DbscanParams {
  double eps = 0.05;  // meters in the normalized frame
  int min_pts = 8;    // eps-neighborhood size including the point itself
};

inline constexpr int kNoise = -1;

struct ClusterAssignment {
  std::vector<int> labels;  // kNoise or 0..num_clusters-1
  int num_clusters = 0;
};

/// Per-seed labels after backtracking: two room memberships (possibly equal,
/// possibly kNoise) and one wall membership.
struct SeedLabels {
  std::vector<std::array<int, 2>> room;
  std::vector<int> wall;
  int num_rooms = 0;
  int num_walls = 0;

  std::size_t size() const { return room.size(); }
};

struct RoomWallSets {
  // room label k -> sorted seed indices r^k
  std::map<int, std::vector<int>> rooms;
  // room label k -> dense list of per-wall seed index sets (null sets dropped)
  std::map<int, std::vector<std::vector<int>>> walls_per_room;
  // room label k -> originating wall cluster id for each dense wall entry
  std::map<int, std::vector<int>> wall_source;
};

/// Core points have >= min_pts neighbors within eps; clusters are the
/// connected components of core points under the eps graph, with border
/// points joining the lowest adjacent cluster id.
ClusterAssignment dbscan(const std::vector<Vec3>& points, const DbscanParams& params,
                         int threads = 1);

/// room_assign covers the 2M concatenated room votes (vote_0 then vote_1),
/// wall_assign the M wall votes.
SeedLabels backtrack_labels(const votes::VoteSet& v, const ClusterAssignment& room_assign,
                            const ClusterAssignment& wall_assign);

/// Removes room clusters with fewer than room_threshold_fraction * M distinct
/// member seeds and wall clusters below wall_threshold_fraction * M, then
/// compacts surviving labels preserving relative order.
SeedLabels prune_spurious(const SeedLabels& labels, double room_threshold_fraction = 0.05,
                          double wall_threshold_fraction = 0.01);

RoomWallSets intersect_rooms_walls(const SeedLabels& labels);

}  // namespace planforge::cluster
