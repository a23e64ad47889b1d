// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_DDA_HPP
#define VOXMAP_DDA_HPP

#include <array>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <optional>

#include "voxmap/coord.hpp"
#include "voxmap/transform.hpp"

namespace voxmap {

/// World-space segment. `is_maxray` marks an endpoint produced by range truncation.
struct Ray {
  Vec3d origin;
  Vec3d end;
  bool is_maxray = false;
};

/// Clips `end` to `max_range` from `origin`. The result has is_maxray set when clipped.
inline Ray make_ray(const Vec3d& origin, const Vec3d& end, double max_range) {
  const Vec3d d = end - origin;
  const double len = d.norm();
  if (len > max_range) return {origin, origin + d * (max_range / len), true};
  return {origin, end, false};
}

/// Incremental voxel walk (Amanatides & Woo) over a 6-connected chain.
///
/// The chain starts at the origin voxel and stops before the endpoint voxel; both are
/// resolved with the same floor rule as Transform::world_to_index. Each step moves one
/// axis, the one whose next boundary crossing is nearest; ties go x, then y, then z.
/// Steps along an axis are capped at the index distance to the endpoint so the walk
/// always terminates exactly on the endpoint voxel.
class DdaState {
public:
  /// Throws Error for a zero-length ray and IndexOverflowError when either end leaves
  /// the 32-bit index space.
  DdaState(const Ray& ray, const Transform& transform) {
    const Vec3d u0 = transform.to_index_space(ray.origin);
    const Vec3d u1 = transform.to_index_space(ray.end);
    if (!u0.finite() || !u1.finite()) throw IndexOverflowError("ray endpoints are not finite");
    if (ray.origin == ray.end) throw Error("zero-length ray");
    current_ = {floor_to_index(u0.x), floor_to_index(u0.y), floor_to_index(u0.z)};
    end_ = {floor_to_index(u1.x), floor_to_index(u1.y), floor_to_index(u1.z)};
    const Vec3d d = u1 - u0;
    constexpr double inf = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      const auto delta = static_cast<std::int64_t>(end_[a]) - current_[a];
      remaining_[a] = static_cast<std::uint64_t>(delta < 0 ? -delta : delta);
      if (d[a] > 0.0) {
        step_[a] = 1;
        t_delta_[a] = 1.0 / d[a];
        t_max_[a] = (static_cast<double>(current_[a]) + 1.0 - u0[a]) / d[a];
      } else if (d[a] < 0.0) {
        step_[a] = -1;
        t_delta_[a] = -1.0 / d[a];
        t_max_[a] = (u0[a] - static_cast<double>(current_[a])) / -d[a];
      } else {
        step_[a] = 0;
        t_delta_[a] = inf;
        t_max_[a] = inf;
      }
    }
  }

  const Coord& current() const { return current_; }
  const Coord& end_voxel() const { return end_; }
  bool done() const { return remaining_[0] == 0 && remaining_[1] == 0 && remaining_[2] == 0; }

  /// Returns the next free-chain voxel, or nullopt once the endpoint voxel is reached.
  /// The endpoint voxel itself is never returned.
  std::optional<Coord> step() {
    if (done()) return std::nullopt;
    const Coord out = current_;
    advance();
    return out;
  }

  /// Moves to the next voxel on the chain. Precondition: !done().
  void advance() {
    int axis = -1;
    double best = std::numeric_limits<double>::infinity();
    for (int a = 0; a < 3; ++a) {
      if (remaining_[a] != 0 && (axis < 0 || t_max_[a] < best)) {
        axis = a;
        best = t_max_[a];
      }
    }
    current_[axis] += step_[axis];
    t_max_[axis] += t_delta_[axis];
    --remaining_[axis];
  }

private:
  Coord current_;
  Coord end_;
  std::array<int, 3> step_{};
  std::array<double, 3> t_max_{};
  std::array<double, 3> t_delta_{};
  std::array<std::uint64_t, 3> remaining_{};
};

struct MarchResult {
  std::size_t free_count = 0;
  Coord endpoint;
};

/// Walks `ray` and calls visit(Coord) once per free-chain voxel, in ray order.
template <typename Visit>
MarchResult march(const Ray& ray, const Transform& transform, Visit&& visit) {
  DdaState dda(ray, transform);
  MarchResult result{0, dda.end_voxel()};
  while (!dda.done()) {
    visit(dda.current());
    ++result.free_count;
    dda.advance();
  }
  return result;
}

}  // namespace voxmap

#endif  // VOXMAP_DDA_HPP
