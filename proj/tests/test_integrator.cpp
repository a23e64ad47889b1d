// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "voxmap/integrator.hpp"
#include "voxmap/scenario.hpp"

namespace voxmap {
namespace {

const OccupancyParams kP{};

OccupancyMap fresh_map() { return make_occupancy_map(TreeConfig{}); }

UpdateStats integrate(OccupancyMap& map, const std::vector<Vec3d>& pts, const IntegrationOptions& opts,
                      const Vec3d& origin = {}) {
  const UpdateStats s = integrate_scan(map, origin, pts, opts, kP);
  EXPECT_TRUE(s.accounting_holds()) << s.rays_cast << "+" << s.rays_skipped_sub << "+" << s.rays_skipped_bundle
                                    << " != " << s.points_in;
  return s;
}

TEST(Integrator, SingleRayTrace) {
  OccupancyMap map = fresh_map();
  IntegrationOptions opts;
  const Vec3d o{0.05, 0.05, 0.05};
  const UpdateStats s = integrate(map, {{0.35, 0.05, 0.05}}, opts, o);
  EXPECT_EQ(s.points_in, 1U);
  EXPECT_EQ(s.rays_cast, 1U);
  EXPECT_EQ(s.voxels_hit, 1U);
  EXPECT_EQ(s.voxels_freed, 3U);
  for (int x = 0; x < 3; ++x) EXPECT_EQ(map.get({x, 0, 0}), (VoxelState<double>{true, kP.l_miss})) << x;
  EXPECT_EQ(map.get({3, 0, 0}), (VoxelState<double>{true, kP.l_hit}));
  EXPECT_EQ(map.active_count(), 4U);
}

TEST(Integrator, DoubleIntegrationDoublesDeltas) {
  std::vector<Vec3d> pts;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int i = 0; i < 300; ++i) pts.push_back({u(rng), u(rng), u(rng)});
  OccupancyMap once = fresh_map();
  integrate(once, pts, {});
  OccupancyMap twice = fresh_map();
  integrate(twice, pts, {});
  integrate(twice, pts, {});
  const auto a = once.active_voxels();
  const auto b = twice.active_voxels();
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(a[i].first, b[i].first);
    EXPECT_NEAR(b[i].second, 2.0 * a[i].second, 1e-12);
  }
}

TEST(Integrator, SingleUpdatePerVoxelPerScan) {
  Scenario sc;
  sc.kind = ScenarioKind::Structured;
  sc.n_points = 5000;
  sc.ray_length = 2.0;
  const auto pts = generate(sc);
  OccupancyMap map = fresh_map();
  IntegrationOptions opts;
  opts.chunks = 3;
  integrate(map, pts, opts);
  map.for_each_active([&](const Coord&, double v) { ASSERT_TRUE(v == kP.l_hit || v == kP.l_miss) << v; });
}

TEST(Integrator, HitDominatesTraversal) {
  // the second ray passes through the endpoint voxel of the first
  OccupancyMap map = fresh_map();
  const Vec3d o{0.05, 0.05, 0.05};
  integrate(map, {{0.25, 0.05, 0.05}, {0.55, 0.05, 0.05}}, {}, o);
  EXPECT_EQ(map.get({2, 0, 0}).value, kP.l_hit);
  EXPECT_EQ(map.get({5, 0, 0}).value, kP.l_hit);
  EXPECT_EQ(map.get({3, 0, 0}).value, kP.l_miss);
}

TEST(Integrator, ChunkSizes) {
  std::vector<Vec3d> pts(10);
  auto sizes = [](const auto& chunks) {
    std::vector<std::size_t> s;
    for (const auto& c : chunks) s.push_back(c.size());
    return s;
  };
  EXPECT_EQ(sizes(chunk_points(pts, 3)), (std::vector<std::size_t>{4, 3, 3}));
  EXPECT_EQ(sizes(chunk_points(pts, 1)), (std::vector<std::size_t>{10}));
  EXPECT_EQ(chunk_points(pts, 1)[0].data(), pts.data());
  EXPECT_EQ(sizes(chunk_points(std::span(pts).first(3), 5)), (std::vector<std::size_t>{1, 1, 1, 0, 0}));
  EXPECT_THROW(chunk_points(pts, 0), ConfigError);
}

TEST(Integrator, MoreChunksThanPointsStillIntegrates) {
  OccupancyMap a = fresh_map();
  OccupancyMap b = fresh_map();
  const std::vector<Vec3d> pts = {{1.0, 0.2, 0.3}, {-0.7, 0.4, 0.1}};
  IntegrationOptions opts;
  integrate(a, pts, opts);
  opts.chunks = 8;
  integrate(b, pts, opts);
  EXPECT_EQ(a.active_voxels(), b.active_voxels());
}

TEST(Integrator, BundleCastsAfterThreshold) {
  for (unsigned t : {1U, 2U, 5U}) {
    for (std::size_t k : {1U, 2U, 3U, 6U, 9U}) {
      OccupancyMap map = fresh_map();
      IntegrationOptions opts;
      opts.enable_bundle = true;
      opts.bundle_threshold = t;
      std::vector<Vec3d> pts(k, Vec3d{1.03, 0.51, 0.22});
      const UpdateStats s = integrate(map, pts, opts);
      EXPECT_EQ(s.rays_cast, k > t ? k - t : 0) << "t=" << t << " k=" << k;
      EXPECT_EQ(s.rays_skipped_bundle, std::min<std::size_t>(k, t));

      opts.bundle_compare = BundleCompare::Strict;
      OccupancyMap strict = fresh_map();
      const UpdateStats ss = integrate(strict, pts, opts);
      EXPECT_EQ(ss.rays_cast, k > t + 1 ? k - t - 1 : 0) << "strict t=" << t << " k=" << k;
    }
  }
}

TEST(Integrator, BundleCastTargetsMeanEndpoint) {
  // two accumulated rays averaging to the centre of their shared cell, then a third ray
  OccupancyMap map = fresh_map();
  IntegrationOptions opts;
  opts.enable_bundle = true;
  opts.bundle_threshold = 2;
  const UpdateStats s = integrate(map, {{1.01, 0.01, 0.0}, {1.09, 0.09, 0.0}, {1.01, 0.09, 0.0}}, opts,
                                  {0.05, 0.05, 0.05});
  EXPECT_EQ(s.rays_cast, 1U);
  EXPECT_EQ(map.get({10, 0, 0}).value, kP.l_hit);
}

TEST(Integrator, BundleFlushCastsLeftovers) {
  OccupancyMap map = fresh_map();
  IntegrationOptions opts;
  opts.enable_bundle = true;
  opts.bundle_threshold = 3;
  opts.flush_bundles = true;
  const UpdateStats s = integrate(map, {{1.05, 0.05, 0.05}, {-1.05, 0.05, 0.05}}, opts);
  EXPECT_EQ(s.rays_cast, 0U);
  EXPECT_EQ(s.rays_flushed, 2U);
  EXPECT_EQ(map.get({10, 0, 0}).value, kP.l_hit);
  EXPECT_EQ(map.get({-11, 0, 0}).value, kP.l_hit);

  opts.flush_bundles = false;
  OccupancyMap none = fresh_map();
  const UpdateStats n = integrate(none, {{1.05, 0.05, 0.05}, {-1.05, 0.05, 0.05}}, opts);
  EXPECT_EQ(n.rays_flushed, 0U);
  EXPECT_TRUE(none.empty());
}

TEST(Integrator, SubsamplingSkipsDuplicates) {
  OccupancyMap map = fresh_map();
  IntegrationOptions opts;
  opts.enable_sub = true;
  const UpdateStats s = integrate(map, {{1.0, 0.5, 0.2}, {1.0, 0.5, 0.2}}, opts);
  EXPECT_EQ(s.rays_cast, 1U);
  EXPECT_EQ(s.rays_skipped_sub, 1U);

  // same map voxel, different sub-cells: both cast
  OccupancyMap other = fresh_map();
  const UpdateStats d = integrate(other, {{1.001, 0.501, 0.201}, {1.099, 0.599, 0.299}}, opts);
  EXPECT_EQ(d.rays_cast, 2U);
}

TEST(Integrator, SubsamplingBoundsMultiplicity) {
  Scenario sc;
  sc.kind = ScenarioKind::Structured;
  sc.n_points = 20000;
  sc.ray_length = 1.0;
  const auto pts = generate(sc);
  OccupancyMap map = fresh_map();
  IntegrationOptions opts;
  opts.enable_sub = true;
  opts.sub_factor = 2;
  opts.max_range = 1.0;
  const UpdateStats s = integrate(map, pts, opts);
  const auto counts = oracle::endpoint_counts(pts, {}, 0.1, 1.0);
  std::size_t bound = 0;
  for (const auto& [c, k] : counts) bound += std::min<std::size_t>(k, 8);
  EXPECT_LE(s.rays_cast, bound);
  EXPECT_GT(s.rays_skipped_sub, 0U);
}

TEST(Integrator, MaxrayEndpointIsFree) {
  IntegrationOptions opts;
  opts.max_range = 0.5;
  OccupancyMap map = fresh_map();
  const UpdateStats s = integrate(map, {{3.05, 0.05, 0.05}}, opts, {0.05, 0.05, 0.05});
  EXPECT_EQ(s.voxels_hit, 0U);
  EXPECT_EQ(s.voxels_freed, 6U);
  EXPECT_EQ(map.get({5, 0, 0}).value, kP.l_miss);
  EXPECT_FALSE(map.get({6, 0, 0}).active);

  opts.maxray_as_free = false;
  OccupancyMap hit = fresh_map();
  integrate(hit, {{3.05, 0.05, 0.05}}, opts, {0.05, 0.05, 0.05});
  EXPECT_EQ(hit.get({5, 0, 0}).value, kP.l_hit);
}

TEST(Integrator, DroppedPointsAreCountedOutsideIdentity) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  OccupancyMap map = fresh_map();
  IntegrationOptions opts;
  opts.max_range = 1e15;  // keep the far point untruncated so it overflows the index space
  const UpdateStats s = integrate(map, {{nan, 0.0, 0.0}, {0.0, 0.0, 0.0}, {1e12, 0.0, 0.0}, {0.5, 0.0, 0.0}}, opts);
  EXPECT_EQ(s.points_dropped, 3U);
  EXPECT_EQ(s.points_in, 1U);
  EXPECT_EQ(s.rays_cast, 1U);
}

TEST(Integrator, RejectsBadInput) {
  OccupancyMap map = fresh_map();
  std::vector<Vec3d> none;
  EXPECT_THROW(integrate_scan(map, {}, none, {}, kP), Error);
  std::vector<Vec3d> one = {{1.0, 0.0, 0.0}};
  EXPECT_THROW(integrate_scan(map, {std::nan(""), 0.0, 0.0}, one, {}, kP), Error);
  IntegrationOptions bad;
  bad.enable_bundle = true;
  bad.bundle_threshold = 0;
  EXPECT_THROW(integrate_scan(map, {}, one, bad, kP), ConfigError);
  bad = {};
  bad.sub_factor = 3;
  EXPECT_THROW(integrate_scan(map, {}, one, bad, kP), ConfigError);
  bad = {};
  bad.chunks = 0;
  EXPECT_THROW(integrate_scan(map, {}, one, bad, kP), ConfigError);
}

TEST(Integrator, ParallelChunksMatchSerial) {
  Scenario sc;
  sc.n_points = 20000;
  sc.ray_length = 3.0;
  sc.seed = 77;
  const auto pts = generate(sc);
  IntegrationOptions opts;
  opts.max_range = 3.0;
  OccupancyMap ref = fresh_map();
  integrate(ref, pts, opts);
  for (unsigned c : {2U, 4U, 8U}) {
    opts.chunks = c;
    OccupancyMap map = fresh_map();
    integrate(map, pts, opts);
    EXPECT_EQ(map.active_voxels(), ref.active_voxels()) << c;
  }
}

TEST(Integrator, AccountingHoldsAcrossOptionMatrix) {
  Scenario sc;
  sc.kind = ScenarioKind::Structured;
  sc.n_points = 4000;
  sc.ray_length = 2.0;
  const auto pts = generate(sc);
  for (unsigned chunks : {1U, 3U}) {
    for (bool sub : {false, true}) {
      for (bool bun : {false, true}) {
        IntegrationOptions opts;
        opts.chunks = chunks;
        opts.enable_sub = sub;
        opts.enable_bundle = bun;
        opts.bundle_threshold = 2;
        opts.max_range = 1.5;
        OccupancyMap map = fresh_map();
        const UpdateStats s = integrate(map, pts, opts);
        EXPECT_EQ(s.points_in, pts.size());
      }
    }
  }
}

TEST(Integrator, ApplyAggregate) {
  OccupancyMap map = fresh_map();
  AggGrid agg(TreeConfig{}, false);
  EXPECT_EQ(apply_aggregate(map, agg, kP).hits, 0U);
  EXPECT_TRUE(map.empty());
  agg.set({1, 2, 3}, true);
  agg.set({1, 2, 4}, false);
  const ApplyResult r = apply_aggregate(map, agg, kP);
  EXPECT_EQ(r.hits, 1U);
  EXPECT_EQ(r.frees, 1U);
  EXPECT_EQ(map.get({1, 2, 3}), (VoxelState<double>{true, kP.l_hit}));
  EXPECT_EQ(map.get({1, 2, 4}), (VoxelState<double>{true, kP.l_miss}));

  TreeConfig other;
  other.transform.voxel_size = 0.05;
  AggGrid misaligned(other, false);
  EXPECT_THROW(apply_aggregate(map, misaligned, kP), ConfigError);
}

TEST(Integrator, MergeTempRecordsDuration) {
  AggGrid agg(TreeConfig{}, false);
  AggGrid temp(TreeConfig{}, false);
  temp.set({0, 0, 0}, true);
  std::mutex m;
  const double ms = merge_temp(agg, std::move(temp), m);
  EXPECT_GE(ms, 0.0);
  EXPECT_EQ(agg.active_count(), 1U);
}

TEST(Integrator, CsvRow) {
  UpdateStats s;
  s.points_in = 10;
  s.rays_cast = 7;
  s.rays_skipped_sub = 2;
  s.rays_skipped_bundle = 1;
  s.voxels_hit = 4;
  s.voxels_freed = 20;
  s.t_insert_ms = 1.25;
  s.t_merge_ms = 0.5;
  s.t_integrate_ms = 2.0;
  EXPECT_EQ(update_stats_csv_header(),
            "frame,points_in,rays_cast,skip_sub,skip_bundle,voxels_hit,voxels_freed,t_insert_ms,t_merge_ms,"
            "t_integrate_ms");
  EXPECT_EQ(to_csv_row(3, s), "3,10,7,2,1,4,20,1.250,0.500,2.000");
  EXPECT_DOUBLE_EQ(s.t_total_ms(), 3.75);
}

}  // namespace
}  // namespace voxmap
