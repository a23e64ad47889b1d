// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxmap/replay.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "voxmap/scenario.hpp"

namespace voxmap {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

DatasetManifest DatasetManifest::parse(const std::string& text, const std::filesystem::path& base_dir) {
  DatasetManifest m;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string body = trim(line.substr(1));
      constexpr std::string_view key = "resolution=";
      if (body.starts_with(key)) {
        try {
          m.resolution_hint = std::stod(body.substr(key.size()));
        } catch (const std::exception&) {
          throw ConfigError("manifest: bad resolution hint '" + body + "'");
        }
      }
      continue;
    }
    const std::filesystem::path p(line);
    m.files.push_back(p.is_absolute() ? p : base_dir / p);
  }
  return m;
}

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open manifest " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path.parent_path());
}

UpdateStats integrate_frame(OccupancyMap& map, const ScanFrame& frame, const IntegrationOptions& opts,
                            const OccupancyParams& params) {
  if (frame.points.empty()) return {};
  const std::vector<Vec3d> points = frame.world_points();
  return integrate_scan(map, frame.origin, points, opts, params);
}

ReplayResult replay(const DatasetManifest& manifest, OccupancyMap& map, const IntegrationOptions& opts,
                    const OccupancyParams& params, const FrameCallback& on_frame) {
  ReplayResult result;
  std::size_t index = 0;
  double last_timestamp = -std::numeric_limits<double>::infinity();
  for (const auto& file : manifest.files) {
    std::vector<ScanFrame> frames;
    try {
      frames = decode_frames(read_file(file));
    } catch (const Error& e) {
      throw FrameError(index, file.string() + ": " + e.what());
    }
    for (const ScanFrame& frame : frames) {
      if (frame.timestamp < last_timestamp) throw FrameError(index, "timestamp decreases");
      last_timestamp = frame.timestamp;
      const UpdateStats s = integrate_frame(map, frame, opts, params);
      result.frames.push_back(s);
      result.summary.totals += s;
      if (on_frame) on_frame(index, s);
      ++index;
    }
  }
  ReplaySummary& sum = result.summary;
  sum.frames = result.frames.size();
  sum.total_points = sum.totals.points_in;
  sum.occupied_voxels = count_occupied(map, params);
  sum.mean_ms_per_frame = sum.frames == 0 ? 0.0 : sum.totals.t_total_ms() / static_cast<double>(sum.frames);
  return result;
}

std::vector<ScanFrame> synth_corridor(const CorridorSpec& spec) {
  UniformSource rng(spec.seed);
  const double ta = std::tan(spec.h_fov_deg * std::numbers::pi / 360.0);
  const double tb = std::tan(spec.v_fov_deg * std::numbers::pi / 360.0);
  const Vec3d lo{0.0, -spec.width / 2.0, 0.0};
  const Vec3d hi{spec.length, spec.width / 2.0, spec.height};

  std::vector<ScanFrame> frames;
  frames.reserve(spec.frames);
  for (std::size_t k = 0; k < spec.frames; ++k) {
    ScanFrame f;
    f.timestamp = 0.1 * static_cast<double>(k);
    f.origin = {1.0 + spec.step * static_cast<double>(k), 0.0, 1.2};
    f.orientation = Quat::from_yaw(0.25 * std::sin(0.7 * static_cast<double>(k)));
    f.world_space = false;
    f.points.reserve(spec.points_per_frame);
    for (std::size_t i = 0; i < spec.points_per_frame; ++i) {
      // pinhole-like pixel grid: uniform in the image plane, not in angle
      const double a = ta * (2.0 * rng.next() - 1.0);
      const double b = tb * (2.0 * rng.next() - 1.0);
      const double jitter = spec.noise * (2.0 * rng.next() - 1.0);
      const Vec3d local_dir = Vec3d{1.0, a, b} / Vec3d{1.0, a, b}.norm();
      const Vec3d d = f.orientation.rotate(local_dir);
      double t = std::numeric_limits<double>::infinity();
      for (int axis = 0; axis < 3; ++axis) {
        if (d[axis] > 0.0) t = std::min(t, (hi[axis] - f.origin[axis]) / d[axis]);
        if (d[axis] < 0.0) t = std::min(t, (lo[axis] - f.origin[axis]) / d[axis]);
      }
      const Vec3d local = local_dir * (t + jitter);
      f.points.push_back({static_cast<float>(local.x), static_cast<float>(local.y), static_cast<float>(local.z)});
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::filesystem::path write_dataset(const std::filesystem::path& dir, const std::vector<ScanFrame>& frames,
                                    std::optional<double> resolution_hint) {
  std::filesystem::create_directories(dir);
  std::ostringstream manifest;
  manifest << "# synthetic corridor dataset, OCCF v1 frames\n";
  if (resolution_hint) manifest << "# resolution=" << *resolution_hint << '\n';
  for (std::size_t i = 0; i < frames.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%04zu.occf", i);
    write_file(dir / name, encode_frame(frames[i]));
    manifest << name << '\n';
  }
  const std::filesystem::path path = dir / "manifest.txt";
  const std::string text = manifest.str();
  write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  return path;
}

}  // namespace voxmap
