// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_REPLAY_HPP
#define VOXMAP_REPLAY_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "voxmap/frame_io.hpp"
#include "voxmap/integrator.hpp"

namespace voxmap {

/// Text manifest: one frame file per line (relative paths resolve against the manifest's
/// directory), blank lines and `#` comments ignored. A comment of the form
/// `# resolution=<meters>` sets the resolution hint. A file may hold several
/// concatenated OCCF frames.
struct DatasetManifest {
  std::vector<std::filesystem::path> files;
  std::optional<double> resolution_hint;

  static DatasetManifest load(const std::filesystem::path& path);
  static DatasetManifest parse(const std::string& text, const std::filesystem::path& base_dir);
};

/// A frame failed to decode or violated dataset invariants.
class FrameError : public Error {
public:
  FrameError(std::size_t frame_index, const std::string& what)
      : Error("frame " + std::to_string(frame_index) + ": " + what), frame_index_(frame_index) {}
  std::size_t frame_index() const { return frame_index_; }

private:
  std::size_t frame_index_;
};

struct ReplaySummary {
  std::size_t frames = 0;
  std::size_t total_points = 0;     ///< points accepted over all frames
  std::size_t occupied_voxels = 0;  ///< final map, classified Occupied
  double mean_ms_per_frame = 0.0;
  UpdateStats totals;
};

struct ReplayResult {
  std::vector<UpdateStats> frames;
  ReplaySummary summary;
};

/// Integrates one frame (sensor-frame points are moved to world space first). Frames
/// without points leave the map untouched and report zero stats.
UpdateStats integrate_frame(OccupancyMap& map, const ScanFrame& frame, const IntegrationOptions& opts,
                            const OccupancyParams& params);

using FrameCallback = std::function<void(std::size_t frame_index, const UpdateStats&)>;

/// Replays all frames in manifest order. Throws FrameError naming the failing frame index
/// (decode error or decreasing timestamp).
ReplayResult replay(const DatasetManifest& manifest, OccupancyMap& map, const IntegrationOptions& opts,
                    const OccupancyParams& params, const FrameCallback& on_frame = {});

/// Synthetic box-shaped corridor seen by a forward-looking depth sensor moving along +x.
/// Points are emitted in the sensor frame; the pose yaws slightly from frame to frame.
struct CorridorSpec {
  std::size_t frames = 2;
  std::size_t points_per_frame = 5000;
  double length = 12.0;
  double width = 3.0;
  double height = 2.5;
  double step = 0.5;         ///< sensor advance per frame along x, meters
  double noise = 0.0;        ///< uniform range noise amplitude, meters
  double h_fov_deg = 58.0;
  double v_fov_deg = 45.0;
  std::uint64_t seed = 1;
};

std::vector<ScanFrame> synth_corridor(const CorridorSpec& spec);

/// Writes frame_NNNN.occf files plus manifest.txt into `dir`; returns the manifest path.
std::filesystem::path write_dataset(const std::filesystem::path& dir, const std::vector<ScanFrame>& frames,
                                    std::optional<double> resolution_hint = std::nullopt);

}  // namespace voxmap

#endif  // VOXMAP_REPLAY_HPP
