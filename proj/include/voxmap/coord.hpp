// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_COORD_HPP
#define VOXMAP_COORD_HPP

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace voxmap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid tree, occupancy or integration configuration.
class ConfigError : public Error {
public:
  using Error::Error;
};

/// A world point or ray would leave the signed 32-bit index space.
class IndexOverflowError : public Error {
public:
  using Error::Error;
};

/// Index-space voxel address. Ordering is lexicographic with z fastest.
struct Coord {
  std::int32_t x = 0;
  std::int32_t y = 0;
  std::int32_t z = 0;

  constexpr auto operator<=>(const Coord&) const = default;

  constexpr std::int32_t operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr std::int32_t& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
};

struct CoordHash {
  std::size_t operator()(const Coord& c) const noexcept {
    // large primes from the classic spatial hashing scheme, mixed to 64 bit
    std::uint64_t h = static_cast<std::uint32_t>(c.x) * 73856093ULL;
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.y)) * 19349669ULL << 21;
    h ^= static_cast<std::uint64_t>(static_cast<std::uint32_t>(c.z)) * 83492791ULL << 42;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h);
  }
};

template <typename T>
struct Vec3 {
  T x{};
  T y{};
  T z{};

  constexpr bool operator==(const Vec3&) const = default;

  constexpr T operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
  constexpr T& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }

  constexpr Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  constexpr Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  constexpr Vec3 operator*(T s) const { return {x * s, y * s, z * s}; }
  constexpr Vec3 operator/(T s) const { return {x / s, y / s, z / s}; }
  constexpr Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }

  T norm() const { return std::sqrt(x * x + y * y + z * z); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

using Vec3d = Vec3<double>;
using Vec3f = Vec3<float>;

inline std::string to_string(const Coord& c) {
  return "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ", " + std::to_string(c.z) + ")";
}

}  // namespace voxmap

#endif  // VOXMAP_COORD_HPP
