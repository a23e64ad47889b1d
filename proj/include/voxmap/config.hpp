// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_CONFIG_HPP
#define VOXMAP_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "voxmap/integrator.hpp"
#include "voxmap/occupancy.hpp"
#include "voxmap/transform.hpp"

namespace voxmap {

/// Everything the tools need, as a flat key=value file.
///
///   resolution=0.1          voxel edge, meters
///   log2_upper=5 log2_lower=4 log2_leaf=3
///   l_hit l_miss l_min l_max phi_occ phi_free
///   chunks=1 max_range=60 enable_sub=false sub_factor=4 enable_bundle=false
///   bundle_threshold=1 bundle_compare=inclusive maxray_as_free=true flush_bundles=false
///   seed=0
struct Config {
  TreeConfig tree;
  OccupancyParams occupancy;
  IntegrationOptions integration;
  std::uint64_t seed = 0;
  std::vector<std::string> assigned;  ///< keys set explicitly, in order

  /// Throws ConfigError for an unknown key or an unparsable value.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;

  /// Applies `key=value` lines on top of the current values; `#` starts a comment.
  void merge_text(const std::string& text);
  void merge_file(const std::filesystem::path& path);

  /// Every key in a fixed order, one per line.
  std::string serialize() const;

  void validate() const;

  bool was_assigned(const std::string& key) const;

  static const std::vector<std::string>& keys();
};

}  // namespace voxmap

#endif  // VOXMAP_CONFIG_HPP
