#pragma once

/// Procedural generation of labeled synthetic indoor scenes: occupancy-grid
/// layouts built from a 3x3 shape library, wall point sampling, cutouts,
/// augmentation and normalization to a 2m x 2m box.

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "planforge/geom.hpp"
#include "planforge/types.hpp"

namespace planforge::synthgen {

inline constexpr int kGridSize = 32;

/// 3x3 binary kernel; set bits form a 4-connected, hole-free region with no
/// diagonal pinch (two diagonal cells meeting only at a corner).
struct ShapeKernel {
  std::uint16_t bits = 0;  // bit (row * 3 + col)

  bool at(int row, int col) const { return (bits >> (row * 3 + col)) & 1; }
  int cell_count() const;
};

/// 32x32 room-label grid; -1 marks empty cells.
struct OccupancyGrid {
  std::array<std::array<int, kGridSize>, kGridSize> labels{};

  OccupancyGrid() {
    for (auto& row : labels) row.fill(-1);
  }
  int at(int row, int col) const {
    if (row < 0 || row >= kGridSize || col < 0 || col >= kGridSize) return -1;
    return labels[row][col];
  }
  int num_rooms() const;
};

struct SceneSpec {
  int n_rooms_max = 10;
  int kernel_min_cells = 9;  // layout sampling skips smaller shapes
  double super_room_prob = 0.2;
  double points_per_wall_density = 250.0;  // points per unit^2 of wall plane
  int cutout_count_min = 0;
  int cutout_count_max = 3;
  double cutout_size_min = 0.1;  // fraction of wall extent
  double cutout_size_max = 0.4;
  double wall_height = 1.0;        // grid units, pre-normalization
  double rotation_range_deg = 0.0;  // rotation about Z, +/- this value
  double axis_scale_min = 0.8;
  double axis_scale_max = 1.2;
  double cell_scale_min = 0.75;  // per-row/column size jitter
  double cell_scale_max = 1.25;
  std::uint64_t rng_seed = 0;
};

struct LabeledPointCloud {
  std::vector<Vec3> points;
  std::vector<int> room_label_0;
  std::vector<int> room_label_1;
  std::vector<int> wall_label;

  std::size_t size() const { return points.size(); }
  bool has_labels() const;
};

struct GroundTruthPlan {
  std::vector<std::pair<int, geom::SimplePolygon>> rooms;  // (room label, polygon)
};

std::vector<ShapeKernel> build_shape_library();

OccupancyGrid generate_layout(const SceneSpec& spec);

std::pair<LabeledPointCloud, GroundTruthPlan> grid_to_scene(const OccupancyGrid& grid,
                                                            const SceneSpec& spec);

/// Random Z-rotation plus per-axis scaling, then normalization of the XY
/// bounding box into [0,2]^2 (aspect preserved, Z shifted to start at 0).
std::pair<LabeledPointCloud, GroundTruthPlan> augment_and_normalize(
    const LabeledPointCloud& cloud, const GroundTruthPlan& plan, const SceneSpec& spec);

/// Full generation: layout -> scene -> augment/normalize.
std::pair<LabeledPointCloud, GroundTruthPlan> generate_scene(const SceneSpec& spec);

}  // namespace planforge::synthgen
