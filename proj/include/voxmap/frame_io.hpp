// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_FRAME_IO_HPP
#define VOXMAP_FRAME_IO_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "voxmap/coord.hpp"

namespace voxmap {

/// Malformed input data; `offset` is the byte position the problem was detected at.
class DecodeError : public Error {
public:
  DecodeError(std::size_t offset, const std::string& detail)
      : Error("offset " + std::to_string(offset) + ": " + detail), offset_(offset), detail_(detail) {}
  std::size_t offset() const { return offset_; }
  const std::string& detail() const { return detail_; }

private:
  std::size_t offset_;
  std::string detail_;
};

struct Quat {
  double w = 1.0;
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  bool operator==(const Quat&) const = default;
  double norm() const;
  Vec3d rotate(const Vec3d& v) const;
  static Quat from_yaw(double yaw);
};

/// One sensor sweep: pose plus points, either already in world space or in the sensor frame.
struct ScanFrame {
  double timestamp = 0.0;
  Vec3d origin{};
  Quat orientation{};
  bool world_space = true;
  std::vector<Vec3f> points;

  bool operator==(const ScanFrame&) const = default;

  /// Points in world coordinates (sensor-frame points rotated and translated by the pose).
  std::vector<Vec3d> world_points() const;
};

/// OCCF v1, little-endian:
///   "OCCF" | u16 version=1 | u16 flags (bit0: world space) | f64 timestamp |
///   3 x f64 origin | 4 x f64 quaternion (w,x,y,z) | u32 count | count x 3 x f32
inline constexpr std::size_t kOccfHeaderBytes = 76;
inline constexpr double kQuatNormTolerance = 1e-6;

std::vector<std::uint8_t> encode_frame(const ScanFrame& frame);

/// Decodes one frame from the front of `bytes`; `consumed` receives its encoded size.
/// Throws DecodeError for bad magic or version, truncation, a non-finite pose or timestamp,
/// or a quaternion whose norm is off by more than kQuatNormTolerance. Non-finite points are
/// kept (they are dropped and counted at integration).
ScanFrame decode_frame(std::span<const std::uint8_t> bytes, std::size_t* consumed = nullptr);

/// Decodes a buffer holding one or more concatenated frames.
std::vector<ScanFrame> decode_frames(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

}  // namespace voxmap

#endif  // VOXMAP_FRAME_IO_HPP
