#pragma once

/// Seed subsampling, oracle room/wall center votes, and the vote-offset
/// regression loss (room term over unordered vote pairs, wall term, smooth-L1).

#include <cstdint>
#include <tuple>
#include <vector>

#include "planforge/synthgen.hpp"
#include "planforge/types.hpp"

namespace planforge::votes {

struct SeedSet {
  std::vector<int> indices;     // into the parent cloud
  std::vector<Vec3> positions;  // length M

  std::size_t size() const { return positions.size(); }
};

struct VoteSet {
  SeedSet seeds;
  std::vector<Vec3> room_vote_0;
  std::vector<Vec3> room_vote_1;
  std::vector<Vec3> wall_vote;

  std::size_t size() const { return seeds.size(); }
};

struct VoteOffsets {
  std::vector<Vec3> room_offset_0;
  std::vector<Vec3> room_offset_1;
  std::vector<Vec3> wall_offset;

  std::size_t size() const { return room_offset_0.size(); }
};

struct NoiseSpec {
  double sigma = 0.0;           // Gaussian std per coordinate, meters
  double outlier_fraction = 0.0;
  std::uint64_t rng_seed = 0;
};

struct VoteLoss {
  double total = 0.0;
  double room = 0.0;
  double wall = 0.0;
};

/// Farthest-point sampling, starting from the point nearest the cloud
/// centroid. Deterministic; `threads` only changes wall-clock time.
SeedSet subsample_seeds(const synthgen::LabeledPointCloud& cloud, int m,
                        std::uint64_t rng_seed, int threads = 1);

/// Ground-truth-based votes: each seed votes for the centroids of its room
/// label sets and its wall label set, with optional Gaussian noise and a
/// fraction of seeds voting uniformly inside the scene bounding box.
VoteSet oracle_votes(const synthgen::LabeledPointCloud& cloud, const SeedSet& seeds,
                     const NoiseSpec& noise, int threads = 1);

double smooth_l1(double a);

/// total = room + alpha * wall; the room term takes the lower-error pairing
/// of the two unordered room offsets per seed.
VoteLoss compute_vote_loss(const VoteOffsets& pred, const VoteOffsets& gt, double alpha);

/// Analytic gradient of the total loss with respect to the predicted offsets.
VoteOffsets vote_loss_gradient(const VoteOffsets& pred, const VoteOffsets& gt, double alpha);

/// Offsets x = v - s for a vote set.
VoteOffsets offsets_from_votes(const VoteSet& v);

/// Noise-free ground-truth offsets for the given seeds.
VoteOffsets ground_truth_offsets(const synthgen::LabeledPointCloud& cloud,
                                 const SeedSet& seeds);

}  // namespace planforge::votes
