// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_VOXLIST_HPP
#define VOXMAP_VOXLIST_HPP

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "voxmap/frame_io.hpp"
#include "voxmap/grid.hpp"
#include "voxmap/occupancy.hpp"

namespace voxmap {

struct VoxelRecord {
  Coord coord;
  float value = 0.0F;

  bool operator==(const VoxelRecord&) const = default;
};

/// Voxel list in canonical grid order.
using VoxList = std::vector<VoxelRecord>;

enum class VoxlistFormat { Text, Binary };

VoxlistFormat parse_voxlist_format(const std::string& s);

/// Occupied voxels of `map` with their occupancy probability, canonical order.
VoxList occupied_voxels(const OccupancyMap& map, const OccupancyParams& params);

/// Every active voxel of a value grid, canonical order.
VoxList grid_voxels(const Grid<float>& grid);

/// Builds a float grid holding the records. Throws DecodeError on duplicate coordinates.
Grid<float> voxlist_to_grid(const VoxList& list, const TreeConfig& config);

/// Text: "# voxlist v1" header line, then `x y z value` per voxel, LF endings. The value is
/// written in the shortest form that round-trips the f32.
std::string encode_voxlist_text(const VoxList& list);

/// Binary: "VXL1", u64 LE count, count x (3 x i32 LE, f32 LE).
std::vector<std::uint8_t> encode_voxlist_binary(const VoxList& list);

std::vector<std::uint8_t> encode_voxlist(const VoxList& list, VoxlistFormat format);

/// Accepts both encodings (binary is recognised by its magic). Throws DecodeError.
VoxList decode_voxlist(std::span<const std::uint8_t> bytes);

void export_map(const OccupancyMap& map, const OccupancyParams& params, const std::filesystem::path& path,
                VoxlistFormat format);

VoxList read_voxlist(const std::filesystem::path& path);

/// Deterministic human-readable summary: voxel count, index bounds, node counts per level
/// (for `config`) and the value range.
std::string inspect_report(const VoxList& list, const TreeConfig& config);

}  // namespace voxmap

#endif  // VOXMAP_VOXLIST_HPP
