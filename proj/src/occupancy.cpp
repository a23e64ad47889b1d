// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxmap/occupancy.hpp"

#include <cmath>

namespace voxmap {

double logodds(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ConfigError("probability must lie in (0, 1), got " + std::to_string(p));
  return std::log(p / (1.0 - p));
}

double prob(double l) { return 1.0 / (1.0 + std::exp(-l)); }

void OccupancyParams::validate() const {
  if (!(l_hit > 0.0)) throw ConfigError("l_hit must be positive");
  if (!(l_miss < 0.0)) throw ConfigError("l_miss must be negative");
  if (!(l_min < 0.0 && l_max > 0.0)) throw ConfigError("clamp bounds must satisfy l_min < 0 < l_max");
  if (!(phi_free > 0.0 && phi_free < phi_occ && phi_occ < 1.0)) {
    throw ConfigError("thresholds must satisfy 0 < phi_free < phi_occ < 1");
  }
}

Occupancy classify(OccValue v, bool observed, const OccupancyParams& params) {
  if (!observed) return Occupancy::Unknown;
  const double p = prob(v);
  if (p > params.phi_occ) return Occupancy::Occupied;
  if (p < params.phi_free) return Occupancy::Free;
  return Occupancy::Unknown;
}

std::string_view to_string(Occupancy o) {
  switch (o) {
    case Occupancy::Occupied:
      return "occupied";
    case Occupancy::Free:
      return "free";
    case Occupancy::Unknown:
      break;
  }
  return "unknown";
}

OccupancyMap make_occupancy_map(const TreeConfig& config) { return OccupancyMap(config, 0.0); }

std::size_t count_occupied(const OccupancyMap& map, const OccupancyParams& params) {
  std::size_t n = 0;
  map.for_each_active([&](const Coord&, OccValue v) {
    if (classify(v, true, params) == Occupancy::Occupied) ++n;
  });
  return n;
}

}  // namespace voxmap
