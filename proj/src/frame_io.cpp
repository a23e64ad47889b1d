// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxmap/frame_io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>

#include "byte_io.hpp"

namespace voxmap {

double Quat::norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

Vec3d Quat::rotate(const Vec3d& v) const {
  // v' = v + 2w (q x v) + 2 q x (q x v)
  const Vec3d q{x, y, z};
  auto cross = [](const Vec3d& a, const Vec3d& b) {
    return Vec3d{a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
  };
  const Vec3d t = cross(q, v) * 2.0;
  return v + t * w + cross(q, t);
}

Quat Quat::from_yaw(double yaw) { return {std::cos(yaw / 2.0), 0.0, 0.0, std::sin(yaw / 2.0)}; }

std::vector<Vec3d> ScanFrame::world_points() const {
  std::vector<Vec3d> out;
  out.reserve(points.size());
  for (const Vec3f& p : points) {
    const Vec3d d{p.x, p.y, p.z};
    out.push_back(world_space ? d : origin + orientation.rotate(d));
  }
  return out;
}

std::vector<std::uint8_t> encode_frame(const ScanFrame& frame) {
  detail::ByteWriter w;
  w.bytes("OCCF", 4);
  w.u16(1);
  w.u16(frame.world_space ? 1 : 0);
  w.f64(frame.timestamp);
  w.f64(frame.origin.x);
  w.f64(frame.origin.y);
  w.f64(frame.origin.z);
  w.f64(frame.orientation.w);
  w.f64(frame.orientation.x);
  w.f64(frame.orientation.y);
  w.f64(frame.orientation.z);
  w.u32(static_cast<std::uint32_t>(frame.points.size()));
  for (const Vec3f& p : frame.points) {
    w.f32(p.x);
    w.f32(p.y);
    w.f32(p.z);
  }
  return w.take();
}

ScanFrame decode_frame(std::span<const std::uint8_t> bytes, std::size_t* consumed) {
  detail::ByteReader r(bytes);
  if (r.remaining() < 4 || std::memcmp(bytes.data(), "OCCF", 4) != 0) throw DecodeError(0, "bad magic, expected OCCF");
  r.skip(4);
  const std::uint16_t version = r.u16();
  if (version != 1) throw DecodeError(4, "unsupported OCCF version " + std::to_string(version));
  const std::uint16_t flags = r.u16();
  ScanFrame f;
  f.world_space = (flags & 1U) != 0;
  f.timestamp = r.f64();
  f.origin = {r.f64(), r.f64(), r.f64()};
  f.orientation.w = r.f64();
  f.orientation.x = r.f64();
  f.orientation.y = r.f64();
  f.orientation.z = r.f64();
  if (!std::isfinite(f.timestamp)) throw DecodeError(8, "non-finite timestamp");
  if (!f.origin.finite()) throw DecodeError(16, "non-finite origin");
  const double qn = f.orientation.norm();
  if (!std::isfinite(qn)) throw DecodeError(40, "non-finite orientation");
  if (std::abs(qn - 1.0) > kQuatNormTolerance) {
    throw DecodeError(40, "orientation quaternion is not unit (norm " + std::to_string(qn) + ")");
  }
  const std::uint32_t count = r.u32();
  const std::size_t payload_at = r.offset();
  if (r.remaining() / 12 < count) {
    throw DecodeError(payload_at + (r.remaining() / 12) * 12,
                      "truncated point payload: header announces " + std::to_string(count) + " points, " +
                          std::to_string(r.remaining() / 12) + " present");
  }
  f.points.resize(count);
  for (auto& p : f.points) p = {r.f32(), r.f32(), r.f32()};
  if (consumed != nullptr) *consumed = r.offset();
  return f;
}

std::vector<ScanFrame> decode_frames(std::span<const std::uint8_t> bytes) {
  std::vector<ScanFrame> frames;
  std::size_t at = 0;
  while (at < bytes.size()) {
    std::size_t used = 0;
    try {
      frames.push_back(decode_frame(bytes.subspan(at), &used));
    } catch (const DecodeError& e) {
      throw DecodeError(at + e.offset(), e.detail());
    }
    at += used;
  }
  return frames;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace voxmap
