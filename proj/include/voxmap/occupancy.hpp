// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_OCCUPANCY_HPP
#define VOXMAP_OCCUPANCY_HPP

#include <algorithm>
#include <string_view>

#include "voxmap/grid.hpp"

namespace voxmap {

/// ln(p / (1 - p)). Throws ConfigError unless 0 < p < 1.
double logodds(double p);

/// Inverse of logodds.
double prob(double l);

/// Log-odds sensor model with clamping and probability-space classification thresholds.
struct OccupancyParams {
  double l_hit = 0.8472978603872037;    // logodds(0.7)
  double l_miss = -0.4054651081081643;  // logodds(0.4)
  double l_min = -2.0;
  double l_max = 3.5;
  double phi_occ = 0.5 + 1e-6;
  double phi_free = 0.5 - 1e-6;

  /// Throws ConfigError unless l_hit > 0 > l_miss, l_min < 0 < l_max and
  /// 0 < phi_free < phi_occ < 1.
  void validate() const;
};

/// Cell payload of the global map: log-odds occupancy. Inactive cells are unobserved.
using OccValue = double;
using OccupancyMap = Grid<OccValue>;

inline OccValue update_hit(OccValue v, const OccupancyParams& p) { return std::min(v + p.l_hit, p.l_max); }
inline OccValue update_miss(OccValue v, const OccupancyParams& p) { return std::max(v + p.l_miss, p.l_min); }

enum class Occupancy { Unknown, Free, Occupied };

Occupancy classify(OccValue v, bool observed, const OccupancyParams& params);

std::string_view to_string(Occupancy o);

/// Fresh occupancy map (background 0, i.e. p = 0.5).
OccupancyMap make_occupancy_map(const TreeConfig& config);

/// Number of observed voxels classified Occupied.
std::size_t count_occupied(const OccupancyMap& map, const OccupancyParams& params);

}  // namespace voxmap

#endif  // VOXMAP_OCCUPANCY_HPP
