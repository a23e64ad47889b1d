// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_TRANSFORM_HPP
#define VOXMAP_TRANSFORM_HPP

#include "voxmap/coord.hpp"

namespace voxmap {

/// Uniform world <-> index mapping. Index (0,0,0) has its minimum corner at `origin`.
struct Transform {
  double voxel_size = 0.1;
  Vec3d origin{};

  constexpr bool operator==(const Transform&) const = default;

  /// Continuous index-space position (voxel units) of a world point, no range checks.
  Vec3d to_index_space(const Vec3d& p) const { return (p - origin) / voxel_size; }

  /// floor((p - origin) / voxel_size) per axis.
  /// Throws IndexOverflowError for non-finite input or results outside int32.
  Coord world_to_index(const Vec3d& p) const;

  /// Center of voxel `c` in world coordinates.
  Vec3d index_to_world(const Coord& c) const;

  /// Same origin, voxel size divided by `scale`. Throws ConfigError if scale == 0.
  Transform refined(unsigned scale) const;
};

/// Floors a continuous index-space value into the int32 lattice.
std::int32_t floor_to_index(double v);

/// Per-level log2 extents and the world transform of a tree.
struct TreeConfig {
  int log2_upper = 5;
  int log2_lower = 4;
  int log2_leaf = 3;
  Transform transform{};

  constexpr bool operator==(const TreeConfig&) const = default;

  double voxel_size() const { return transform.voxel_size; }

  /// Throws ConfigError when a log2 extent is outside [1, 7] or voxel_size <= 0.
  void validate() const;
};

}  // namespace voxmap

#endif  // VOXMAP_TRANSFORM_HPP
