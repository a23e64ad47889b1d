// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxmap/transform.hpp"

#include <limits>

namespace voxmap {

std::int32_t floor_to_index(double v) {
  const double f = std::floor(v);
  if (!std::isfinite(f) || f < static_cast<double>(std::numeric_limits<std::int32_t>::min()) ||
      f > static_cast<double>(std::numeric_limits<std::int32_t>::max())) {
    throw IndexOverflowError("index-space value " + std::to_string(v) + " outside the signed 32-bit range");
  }
  return static_cast<std::int32_t>(f);
}

Coord Transform::world_to_index(const Vec3d& p) const {
  const Vec3d u = to_index_space(p);
  return {floor_to_index(u.x), floor_to_index(u.y), floor_to_index(u.z)};
}

Vec3d Transform::index_to_world(const Coord& c) const {
  return {origin.x + (static_cast<double>(c.x) + 0.5) * voxel_size,
          origin.y + (static_cast<double>(c.y) + 0.5) * voxel_size,
          origin.z + (static_cast<double>(c.z) + 0.5) * voxel_size};
}

Transform Transform::refined(unsigned scale) const {
  if (scale == 0) {
    throw ConfigError("coalign scale must be >= 1");
  }
  return {voxel_size / static_cast<double>(scale), origin};
}

void TreeConfig::validate() const {
  for (int l : {log2_upper, log2_lower, log2_leaf}) {
    if (l < 1 || l > 7) {
      throw ConfigError("tree log2 extents must lie in [1, 7], got " + std::to_string(l));
    }
  }
  if (!(transform.voxel_size > 0.0) || !std::isfinite(transform.voxel_size)) {
    throw ConfigError("voxel size must be strictly positive");
  }
  if (!transform.origin.finite()) {
    throw ConfigError("grid origin must be finite");
  }
}

}  // namespace voxmap
