#include "planforge/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <random>
#include <thread>

#include "planforge/error.hpp"
#include "planforge/log.hpp"
#include "planforge/parallel.hpp"

namespace planforge::pipeline {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

synthgen::LabeledPointCloud subsample_cloud(const synthgen::LabeledPointCloud& cloud,
                                            int max_points, std::uint64_t seed) {
  const std::size_t n = cloud.points.size();
  if (n <= static_cast<std::size_t>(max_points)) return cloud;

  // Partial Fisher-Yates over an index array; stable across platforms since
  // only uniform_int draws are involved.
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < max_points; ++k) {
    std::uniform_int_distribution<std::size_t> pick(k, n - 1);
    std::swap(idx[k], idx[pick(rng)]);
  }
  idx.resize(max_points);
  std::sort(idx.begin(), idx.end());

  synthgen::LabeledPointCloud out;
  out.points.reserve(idx.size());
  for (std::size_t i : idx) {
    out.points.push_back(cloud.points[i]);
    out.room_label_0.push_back(cloud.room_label_0[i]);
    out.room_label_1.push_back(cloud.room_label_1[i]);
    out.wall_label.push_back(cloud.wall_label[i]);
  }
  return out;
}

}  // namespace

ReconstructionResult reconstruct(const synthgen::LabeledPointCloud& cloud,
                                 const std::optional<votes::VoteSet>& external_votes,
                                 const PipelineConfig& cfg) {
  ReconstructionResult result;
  const auto t_start = Clock::now();

  votes::VoteSet vote_set;
  if (external_votes) {
    vote_set = *external_votes;
    for (int i : vote_set.seeds.indices) {
      if (i < 0 || static_cast<std::size_t>(i) >= cloud.points.size()) {
        throw VoteMismatch("vote seed index outside the point cloud");
      }
    }
  } else {
    auto t0 = Clock::now();
    synthgen::LabeledPointCloud sub =
        subsample_cloud(cloud, cfg.max_points, cfg.subsample_seed);
    result.timings.subsample_s = seconds_since(t0);

    t0 = Clock::now();
    const int m = std::min<int>(cfg.num_seeds, static_cast<int>(sub.points.size()));
    votes::SeedSet seeds = votes::subsample_seeds(sub, m, 0, cfg.threads);
    result.timings.seeds_s = seconds_since(t0);

    t0 = Clock::now();
    vote_set = votes::oracle_votes(sub, seeds, cfg.noise, cfg.threads);
    result.timings.votes_s = seconds_since(t0);
  }

  auto t0 = Clock::now();
  const std::size_t m = vote_set.size();
  std::vector<Vec3> room_votes;
  room_votes.reserve(2 * m);
  room_votes.insert(room_votes.end(), vote_set.room_vote_0.begin(), vote_set.room_vote_0.end());
  room_votes.insert(room_votes.end(), vote_set.room_vote_1.begin(), vote_set.room_vote_1.end());

  // Every room or wall center sits at the same height (half the wall), so a
  // vote's z carries only noise. Clustering on the floor projection keeps the
  // density estimate sharp under noisy votes without changing eps.
  auto flatten = [](std::vector<Vec3> v) {
    for (auto& p : v) p.z() = 0.0;
    return v;
  };
  cluster::ClusterAssignment room_assign =
      cluster::dbscan(flatten(std::move(room_votes)), cfg.room_dbscan, cfg.threads);
  cluster::ClusterAssignment wall_assign =
      cluster::dbscan(flatten(vote_set.wall_vote), cfg.wall_dbscan, cfg.threads);

  cluster::SeedLabels labels = cluster::backtrack_labels(vote_set, room_assign, wall_assign);
  labels = cluster::prune_spurious(labels, cfg.room_prune_fraction, cfg.wall_prune_fraction);
  cluster::RoomWallSets sets = cluster::intersect_rooms_walls(labels);
  result.timings.cluster_s = seconds_since(t0);

  // Per-room perimeter estimation; rooms are independent pure tasks, and
  // results are collected by room id so thread count cannot affect output.
  t0 = Clock::now();
  struct RoomJob {
    int id;
    std::vector<std::vector<Vec2>> wall_points;
  };
  std::vector<RoomJob> jobs;
  for (const auto& [k, seeds_in_room] : sets.rooms) {
    auto it = sets.walls_per_room.find(k);
    if (it == sets.walls_per_room.end()) continue;
    RoomJob job;
    job.id = k;
    for (const auto& wall : it->second) {
      std::vector<Vec2> pts;
      pts.reserve(wall.size());
      for (int seed : wall) pts.push_back(vote_set.seeds.positions[seed].head<2>());
      job.wall_points.push_back(std::move(pts));
    }
    jobs.push_back(std::move(job));
  }

  std::vector<std::optional<geom::SimplePolygon>> polygons(jobs.size());
  std::atomic<int> dropped{0};
  std::atomic<std::size_t> cursor{0};

  auto worker = [&]() {
    while (true) {
      std::size_t j = cursor.fetch_add(1);
      if (j >= jobs.size()) return;
      perimeter::PerimeterConfig room_cfg = cfg.perim;
      room_cfg.ransac.rng_seed = cfg.perim.ransac.rng_seed + 7919ULL * (jobs[j].id + 1);
      try {
        polygons[j] = perimeter::estimate_room_perimeter(jobs[j].wall_points, room_cfg);
      } catch (const Error& e) {
        PLANFORGE_INFO("room %d dropped: %s", jobs[j].id, e.what());
        dropped.fetch_add(1);
      }
    }
  };

  const int workers = effective_workers(jobs.size(), cfg.threads);
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  result.timings.perimeter_s = seconds_since(t0);

  t0 = Clock::now();
  std::vector<std::pair<int, geom::SimplePolygon>> rooms;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (polygons[i]) rooms.push_back({jobs[i].id, std::move(*polygons[i])});
  }
  assembly::Floorplan plan = assembly::assemble(rooms);
  result.plan = assembly::resolve_overlaps(plan, cfg.overlap_resolution);
  result.timings.assembly_s = seconds_since(t0);

  result.rooms_found = static_cast<int>(result.plan.rooms.size());
  result.rooms_dropped = dropped.load();
  result.timings.total_s = seconds_since(t_start);
  return result;
}

}  // namespace planforge::pipeline
