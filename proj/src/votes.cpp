#include "planforge/votes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>

#include "planforge/error.hpp"
#include "planforge/parallel.hpp"

namespace planforge::votes {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct Centroids {
  std::map<int, Vec3> room;
  std::map<int, Vec3> wall;
};

Centroids label_centroids(const synthgen::LabeledPointCloud& cloud) {
  std::map<int, std::pair<Vec3, std::size_t>> room_acc, wall_acc;
  // Eigen vectors default-construct uninitialized; start every accumulator
  // from an explicit zero.
  auto slot = [](std::map<int, std::pair<Vec3, std::size_t>>& acc, int key)
      -> std::pair<Vec3, std::size_t>& {
    return acc.try_emplace(key, Vec3::Zero(), 0).first->second;
  };
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const Vec3& p = cloud.points[i];
    int r0 = cloud.room_label_0[i];
    int r1 = cloud.room_label_1[i];
    auto& a = slot(room_acc, r0);
    a.first += p;
    ++a.second;
    if (r1 != r0) {
      auto& b = slot(room_acc, r1);
      b.first += p;
      ++b.second;
    }
    auto& w = slot(wall_acc, cloud.wall_label[i]);
    w.first += p;
    ++w.second;
  }
  Centroids c;
  for (const auto& [k, acc] : room_acc) c.room[k] = acc.first / static_cast<double>(acc.second);
  for (const auto& [k, acc] : wall_acc) c.wall[k] = acc.first / static_cast<double>(acc.second);
  return c;
}

}  // namespace

SeedSet subsample_seeds(const synthgen::LabeledPointCloud& cloud, int m,
                        std::uint64_t /*rng_seed*/, int threads) {
  const std::size_t n = cloud.points.size();
  if (m < 1 || static_cast<std::size_t>(m) > n) throw TooFewPoints("m out of range");

  Vec3 centroid = Vec3::Zero();
  for (const auto& p : cloud.points) centroid += p;
  centroid /= static_cast<double>(n);

  std::size_t start = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    double d = (cloud.points[i] - centroid).squaredNorm();
    if (d < best) {
      best = d;
      start = i;
    }
  }

  SeedSet out;
  out.indices.reserve(m);
  out.positions.reserve(m);
  std::vector<double> min_dist(n, std::numeric_limits<double>::infinity());
  std::size_t current = start;

  struct Far {
    double dist;
    std::size_t idx;
  };
  // One farthest-point scan per seed; a persistent pool keeps the per-seed
  // synchronization down to two barrier waits instead of a thread spawn.
  WorkerPool pool(n, threads);
  const int workers = pool.workers();
  std::vector<Far> partial(workers);

  for (int k = 0; k < m; ++k) {
    out.indices.push_back(static_cast<int>(current));
    out.positions.push_back(cloud.points[current]);
    if (k + 1 == m) break;

    const Vec3 cur = cloud.points[current];
    std::fill(partial.begin(), partial.end(), Far{-1.0, 0});
    pool.run([&](int w, std::size_t lo, std::size_t hi) {
      Far far{-1.0, lo};
      for (std::size_t i = lo; i < hi; ++i) {
        double d = (cloud.points[i] - cur).squaredNorm();
        if (d < min_dist[i]) min_dist[i] = d;
        if (min_dist[i] > far.dist) {
          far.dist = min_dist[i];
          far.idx = i;
        }
      }
      partial[w] = far;
    });
    Far best_far{-1.0, 0};
    for (int w = 0; w < workers; ++w) {
      if (partial[w].dist > best_far.dist) best_far = partial[w];
    }
    current = best_far.idx;
  }

  return out;
}

VoteSet oracle_votes(const synthgen::LabeledPointCloud& cloud, const SeedSet& seeds,
                     const NoiseSpec& noise, int threads) {
  if (!cloud.has_labels()) throw MissingLabels();

  const Centroids cent = label_centroids(cloud);

  Vec3 bb_min = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 bb_max = -bb_min;
  for (const auto& p : cloud.points) {
    bb_min = bb_min.cwiseMin(p);
    bb_max = bb_max.cwiseMax(p);
  }

  const std::size_t m = seeds.size();
  VoteSet v;
  v.seeds = seeds;
  v.room_vote_0.resize(m);
  v.room_vote_1.resize(m);
  v.wall_vote.resize(m);

  parallel_chunks(m, threads, [&](int, std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      const int idx = seeds.indices[i];
      const int r0 = cloud.room_label_0[idx];
      const int r1 = cloud.room_label_1[idx];
      const int wl = cloud.wall_label[idx];

      // Per-seed generator keeps the output independent of thread count.
      std::mt19937_64 rng(mix_seed(noise.rng_seed, i));
      std::uniform_real_distribution<double> unit(0.0, 1.0);

      if (noise.outlier_fraction > 0.0 && unit(rng) < noise.outlier_fraction) {
        auto uniform_in_box = [&]() {
          return Vec3(bb_min.x() + unit(rng) * (bb_max.x() - bb_min.x()),
                      bb_min.y() + unit(rng) * (bb_max.y() - bb_min.y()),
                      bb_min.z() + unit(rng) * (bb_max.z() - bb_min.z()));
        };
        v.room_vote_0[i] = uniform_in_box();
        v.room_vote_1[i] = uniform_in_box();
        v.wall_vote[i] = uniform_in_box();
        continue;
      }

      Vec3 v0 = cent.room.at(r0);
      Vec3 v1 = cent.room.at(r1);
      Vec3 vw = cent.wall.at(wl);
      if (noise.sigma > 0.0) {
        std::normal_distribution<double> gauss(0.0, noise.sigma);
        for (Vec3* t : {&v0, &v1, &vw}) {
          *t += Vec3(gauss(rng), gauss(rng), gauss(rng));
        }
      }
      v.room_vote_0[i] = v0;
      v.room_vote_1[i] = v1;
      v.wall_vote[i] = vw;
    }
  });

  return v;
}

double smooth_l1(double a) {
  double x = std::abs(a);
  return x < 1.0 ? 0.5 * x * x : x - 0.5;
}

VoteLoss compute_vote_loss(const VoteOffsets& pred, const VoteOffsets& gt, double alpha) {
  const std::size_t m = pred.size();
  if (gt.size() != m || pred.room_offset_1.size() != m || pred.wall_offset.size() != m ||
      gt.room_offset_1.size() != m || gt.wall_offset.size() != m) {
    throw LengthMismatch("pred/gt offset lengths differ");
  }
  if (m == 0) return {};

  double room = 0.0, wall = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double direct = (gt.room_offset_0[i] - pred.room_offset_0[i]).norm() +
                          (gt.room_offset_1[i] - pred.room_offset_1[i]).norm();
    const double swapped = (gt.room_offset_0[i] - pred.room_offset_1[i]).norm() +
                           (gt.room_offset_1[i] - pred.room_offset_0[i]).norm();
    room += smooth_l1(std::min(direct, swapped));
    wall += smooth_l1((gt.wall_offset[i] - pred.wall_offset[i]).norm());
  }
  room /= static_cast<double>(m);
  wall /= static_cast<double>(m);
  return {room + alpha * wall, room, wall};
}

VoteOffsets vote_loss_gradient(const VoteOffsets& pred, const VoteOffsets& gt, double alpha) {
  const std::size_t m = pred.size();
  if (gt.size() != m) throw LengthMismatch("pred/gt offset lengths differ");

  auto dnorm = [](const Vec3& g, const Vec3& x) -> Vec3 {
    // d/dx ||g - x||
    double n = (g - x).norm();
    if (n < 1e-15) return Vec3::Zero();
    return (x - g) / n;
  };
  auto dsmooth = [](double a) { return std::abs(a) < 1.0 ? a : (a > 0.0 ? 1.0 : -1.0); };

  VoteOffsets grad;
  grad.room_offset_0.assign(m, Vec3::Zero());
  grad.room_offset_1.assign(m, Vec3::Zero());
  grad.wall_offset.assign(m, Vec3::Zero());

  const double inv_m = m > 0 ? 1.0 / static_cast<double>(m) : 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double direct = (gt.room_offset_0[i] - pred.room_offset_0[i]).norm() +
                          (gt.room_offset_1[i] - pred.room_offset_1[i]).norm();
    const double swapped = (gt.room_offset_0[i] - pred.room_offset_1[i]).norm() +
                           (gt.room_offset_1[i] - pred.room_offset_0[i]).norm();
    if (direct <= swapped) {
      double w = dsmooth(direct) * inv_m;
      grad.room_offset_0[i] = w * dnorm(gt.room_offset_0[i], pred.room_offset_0[i]);
      grad.room_offset_1[i] = w * dnorm(gt.room_offset_1[i], pred.room_offset_1[i]);
    } else {
      double w = dsmooth(swapped) * inv_m;
      grad.room_offset_1[i] = w * dnorm(gt.room_offset_0[i], pred.room_offset_1[i]);
      grad.room_offset_0[i] = w * dnorm(gt.room_offset_1[i], pred.room_offset_0[i]);
    }
    double ew = (gt.wall_offset[i] - pred.wall_offset[i]).norm();
    grad.wall_offset[i] =
        alpha * dsmooth(ew) * inv_m * dnorm(gt.wall_offset[i], pred.wall_offset[i]);
  }
  return grad;
}

VoteOffsets offsets_from_votes(const VoteSet& v) {
  const std::size_t m = v.size();
  VoteOffsets x;
  x.room_offset_0.resize(m);
  x.room_offset_1.resize(m);
  x.wall_offset.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3& s = v.seeds.positions[i];
    x.room_offset_0[i] = v.room_vote_0[i] - s;
    x.room_offset_1[i] = v.room_vote_1[i] - s;
    x.wall_offset[i] = v.wall_vote[i] - s;
  }
  return x;
}

VoteOffsets ground_truth_offsets(const synthgen::LabeledPointCloud& cloud,
                                 const SeedSet& seeds) {
  NoiseSpec clean;
  return offsets_from_votes(oracle_votes(cloud, seeds, clean));
}

}  // namespace planforge::votes
