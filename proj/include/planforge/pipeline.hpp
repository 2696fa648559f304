#pragma once

/// End-to-end reconstruction: subsample, seed, vote, cluster, per-room
/// perimeter estimation on a work pool, assembly and overlap resolution.

#include <cstdint>
#include <optional>

#include "planforge/assembly.hpp"
#include "planforge/cluster.hpp"
#include "planforge/perimeter.hpp"
#include "planforge/synthgen.hpp"
#include "planforge/votes.hpp"

namespace planforge::pipeline {

struct PipelineConfig {
  int max_points = 16384;  // input subsampled down to this size
  int num_seeds = 1024;
  std::uint64_t subsample_seed = 0;
  votes::NoiseSpec noise;  // oracle vote noise
  cluster::DbscanParams room_dbscan{0.05, 8};
  cluster::DbscanParams wall_dbscan{0.025, 8};
  double room_prune_fraction = 0.05;
  double wall_prune_fraction = 0.01;
  perimeter::PerimeterConfig perim;
  int overlap_resolution = 256;
  int threads = 1;
};

struct StageTimings {
  double subsample_s = 0.0;
  double seeds_s = 0.0;
  double votes_s = 0.0;
  double cluster_s = 0.0;
  double perimeter_s = 0.0;
  double assembly_s = 0.0;
  double total_s = 0.0;
};

struct ReconstructionResult {
  assembly::Floorplan plan;
  StageTimings timings;
  int rooms_found = 0;
  int rooms_dropped = 0;
};

/// Reconstructs a floorplan from a labeled cloud with oracle votes, or from
/// an externally supplied vote set (cloud labels unused in that case).
ReconstructionResult reconstruct(const synthgen::LabeledPointCloud& cloud,
                                 const std::optional<votes::VoteSet>& external_votes,
                                 const PipelineConfig& cfg);

}  // namespace planforge::pipeline
