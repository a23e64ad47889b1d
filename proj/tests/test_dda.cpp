// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "voxmap/dda.hpp"

namespace voxmap {
namespace {

const Transform kT{0.1, {}};

std::vector<Coord> chain_of(const Ray& r, const Transform& t = kT) {
  std::vector<Coord> out;
  march(r, t, [&](const Coord& c) { out.push_back(c); });
  return out;
}

TEST(Dda, InitResolvesStartAndEndVoxels) {
  DdaState s(Ray{{0.05, 0.05, 0.05}, {0.35, 0.05, 0.05}}, kT);
  EXPECT_EQ(s.current(), (Coord{0, 0, 0}));
  EXPECT_EQ(s.end_voxel(), (Coord{3, 0, 0}));
}

TEST(Dda, ZeroLengthRayIsRejected) {
  EXPECT_THROW(DdaState(Ray{{1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}}, kT), Error);
}

TEST(Dda, OverflowIsRejected) {
  EXPECT_THROW(DdaState(Ray{{0.0, 0.0, 0.0}, {1e12, 0.0, 0.0}}, kT), IndexOverflowError);
}

TEST(Dda, DiagonalEndVoxelAgreesWithWorldToIndex) {
  const Vec3d o{0.05, 0.05, 0.05};
  for (double len : {0.1, 0.25, 1.0, 3.3, 17.77}) {
    const Vec3d e = o + Vec3d{1.0, 1.0, 1.0} * (len / std::sqrt(3.0));
    DdaState s(Ray{o, e}, kT);
    EXPECT_EQ(s.end_voxel(), kT.world_to_index(e));
    EXPECT_EQ(s.current(), kT.world_to_index(o));
  }
}

TEST(Dda, StepYieldsFreeChainAndExcludesEndpoint) {
  DdaState s(Ray{{0.05, 0.05, 0.05}, {0.35, 0.05, 0.05}}, kT);
  std::vector<Coord> got;
  while (auto c = s.step()) got.push_back(*c);
  EXPECT_EQ(got, (std::vector<Coord>{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}));
  EXPECT_FALSE(s.step().has_value());
  EXPECT_EQ(got, oracle::sampled_voxels({0.05, 0.05, 0.05}, {0.35, 0.05, 0.05}, 0.1, 1e-4));
}

TEST(Dda, SameVoxelIsImmediatelyDone) {
  DdaState s(Ray{{0.01, 0.01, 0.01}, {0.09, 0.02, 0.03}}, kT);
  EXPECT_TRUE(s.done());
  EXPECT_FALSE(s.step().has_value());
  const MarchResult r = march(Ray{{0.01, 0.01, 0.01}, {0.09, 0.02, 0.03}}, kT, [](const Coord&) { FAIL(); });
  EXPECT_EQ(r.free_count, 0U);
  EXPECT_EQ(r.endpoint, (Coord{0, 0, 0}));
}

TEST(Dda, AxisAlignedVisitsEqualIndexDistance) {
  for (int axis = 0; axis < 3; ++axis) {
    for (double sign : {1.0, -1.0}) {
      Vec3d e{0.05, 0.05, 0.05};
      e[axis] += sign * 2.0;
      const auto chain = chain_of(Ray{{0.05, 0.05, 0.05}, e});
      EXPECT_EQ(chain.size(), 20U);
    }
  }
}

TEST(Dda, CornerTieAdvancesXThenYThenZ) {
  // from the centre of (0,0,0) along (1,1,1): all three boundaries are crossed at once
  const auto chain = chain_of(Ray{{0.05, 0.05, 0.05}, {0.15, 0.15, 0.15}});
  EXPECT_EQ(chain, (std::vector<Coord>{{0, 0, 0}, {1, 0, 0}, {1, 1, 0}}));
  const auto yz = chain_of(Ray{{0.05, 0.05, 0.05}, {0.05, 0.15, 0.15}});
  EXPECT_EQ(yz, (std::vector<Coord>{{0, 0, 0}, {0, 1, 0}}));
}

TEST(Dda, SixMeterRayRespectsVisitBound) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 1.0);
  std::size_t worst = 0;
  for (int i = 0; i < 2000; ++i) {
    Vec3d d{n(rng), n(rng), n(rng)};
    d = d / d.norm();
    const Vec3d o{0.013, -0.071, 0.042};
    const MarchResult r = march(Ray{o, o + d * 6.0}, kT, [](const Coord&) {});
    worst = std::max(worst, r.free_count);
  }
  EXPECT_LE(worst, 183U);
}

TEST(Dda, PlanarFortyFiveDegreeRaysMatchOracleExactly) {
  std::mt19937_64 rng(45);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> len(0.3, 6.0);
  for (int i = 0; i < 300; ++i) {
    const Vec3d o{u(rng), u(rng), u(rng)};
    const double q = (i % 4) * std::numbers::pi / 2.0 + std::numbers::pi / 4.0;
    const Vec3d e = o + Vec3d{std::cos(q), std::sin(q), 0.0} * len(rng);
    const auto chain = chain_of(Ray{o, e});
    EXPECT_EQ(chain, oracle::crossed_voxels(o, e, 0.1)) << "ray " << i;
  }
}

TEST(Dda, RandomRaysCoverOracleSamplesAndFormChains) {
  std::mt19937_64 rng(123);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (double length : {0.3, 1.0, 6.0}) {
    for (int i = 0; i < 200; ++i) {
      Vec3d d{n(rng), n(rng), n(rng)};
      d = d / d.norm();
      const Vec3d o{u(rng), u(rng), u(rng)};
      const Vec3d e = o + d * length;
      const auto chain = chain_of(Ray{o, e});
      const Coord start = kT.world_to_index(o);
      const Coord end = kT.world_to_index(e);
      ASSERT_EQ(oracle::check_chain(chain, start, end), "");
      for (const Coord& c : oracle::sampled_voxels(o, e, 0.1, 1e-4)) {
        ASSERT_NE(std::find(chain.begin(), chain.end(), c), chain.end()) << to_string(c);
      }
      for (const Coord& c : chain) ASSERT_TRUE(oracle::segment_touches(o, e, 0.1, c, 1e-9)) << to_string(c);
    }
  }
}

TEST(Dda, MakeRayTruncatesAtMaxRange) {
  const Ray r = make_ray({0.0, 0.0, 0.0}, {10.0, 0.0, 0.0}, 4.0);
  EXPECT_TRUE(r.is_maxray);
  EXPECT_DOUBLE_EQ(r.end.x, 4.0);
  const Ray s = make_ray({0.0, 0.0, 0.0}, {3.0, 0.0, 0.0}, 4.0);
  EXPECT_FALSE(s.is_maxray);
  EXPECT_EQ(s.end, (Vec3d{3.0, 0.0, 0.0}));
}

TEST(Dda, DeterministicAcrossRepeats) {
  const Ray r{{0.123, -4.56, 7.89}, {-12.3, 4.5, -6.7}};
  EXPECT_EQ(chain_of(r), chain_of(r));
}

}  // namespace
}  // namespace voxmap
