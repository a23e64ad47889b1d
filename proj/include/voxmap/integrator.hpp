// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_INTEGRATOR_HPP
#define VOXMAP_INTEGRATOR_HPP

#include <array>
#include <cstddef>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "voxmap/dda.hpp"
#include "voxmap/grid.hpp"
#include "voxmap/occupancy.hpp"

namespace voxmap {

/// How the bundle counter is compared against the threshold t.
/// Inclusive: the first t rays per cell are accumulated, every later ray is cast.
/// Strict: a ray is cast only once more than t rays have been accumulated.
enum class BundleCompare { Inclusive, Strict };

struct IntegrationOptions {
  unsigned chunks = 1;  ///< worker count
  double max_range = 60.0;
  bool enable_sub = false;
  unsigned sub_factor = 4;  ///< power of two; filter map voxel = map voxel / sub_factor
  bool enable_bundle = false;
  unsigned bundle_threshold = 1;
  BundleCompare bundle_compare = BundleCompare::Inclusive;
  bool maxray_as_free = true;
  bool flush_bundles = false;  ///< cast never-triggered bundles at scan end

  void validate() const;
};

/// Per-scan counters and phase timings. Every accepted point takes exactly one of the
/// three paths cast / skipped by subsampling / skipped by bundling.
struct UpdateStats {
  std::size_t points_in = 0;       ///< finite, non-degenerate points entering the filters
  std::size_t points_dropped = 0;  ///< non-finite or zero-length points
  std::size_t rays_cast = 0;
  std::size_t rays_skipped_sub = 0;
  std::size_t rays_skipped_bundle = 0;
  std::size_t rays_flushed = 0;  ///< extra casts from flush_bundles, outside the identity
  std::size_t voxels_hit = 0;
  std::size_t voxels_freed = 0;
  double t_insert_ms = 0.0;
  double t_merge_ms = 0.0;
  double t_integrate_ms = 0.0;

  double t_total_ms() const { return t_insert_ms + t_merge_ms + t_integrate_ms; }
  bool accounting_holds() const { return rays_cast + rays_skipped_sub + rays_skipped_bundle == points_in; }

  UpdateStats& operator+=(const UpdateStats& o);
};

/// `frame,points_in,rays_cast,skip_sub,skip_bundle,voxels_hit,voxels_freed,t_insert_ms,t_merge_ms,t_integrate_ms`
std::string update_stats_csv_header();
std::string to_csv_row(std::size_t frame, const UpdateStats& s);

/// Splits `points` into `chunks` contiguous spans whose sizes differ by at most one;
/// the first (n mod chunks) spans get the extra point. Throws ConfigError for chunks == 0.
std::vector<std::span<const Vec3d>> chunk_points(std::span<const Vec3d> points, unsigned chunks);

namespace detail {

/// Hash map split into independently locked shards.
template <typename Value>
class ShardedCoordMap {
public:
  template <typename F>
  decltype(auto) with_entry(const Coord& c, F&& f) {
    Shard& s = shard(c);
    std::lock_guard lock(s.mutex);
    return f(s.map[c]);
  }

  bool contains(const Coord& c) {
    Shard& s = shard(c);
    std::lock_guard lock(s.mutex);
    return s.map.find(c) != s.map.end();
  }

  /// Calls f(coord, value) for every entry; not synchronised with writers.
  template <typename F>
  void for_each(F&& f) const {
    for (const auto& s : shards_) {
      for (const auto& [c, v] : s.map) f(c, v);
    }
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (const auto& s : shards_) n += s.map.size();
    return n;
  }

private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    std::mutex mutex;
    std::unordered_map<Coord, Value, CoordHash> map;
  };
  Shard& shard(const Coord& c) { return shards_[(CoordHash{}(c) >> 20) % kShards]; }

  std::array<Shard, kShards> shards_;
};

}  // namespace detail

/// Endpoint cells (in the finer subsampling lattice) already cast this scan.
class SubsampleFilter {
public:
  bool contains(const Coord& c) { return cells_.contains(c); }
  void insert(const Coord& c) {
    cells_.with_entry(c, [](bool& present) { present = true; });
  }
  std::size_t size() const { return cells_.size(); }

private:
  detail::ShardedCoordMap<bool> cells_;
};

/// Accumulates rays per endpoint cell and decides when a cell's rays start being cast.
class BundleFilter {
public:
  struct Entry {
    std::size_t count = 0;  ///< rays accumulated (skipped) for this cell
    Vec3d sum_dir{};        ///< sum of accumulated endpoint offsets from the origin
    bool maxray = false;    ///< OR of accumulated maxray flags
    bool cast = false;      ///< set once a ray was cast for this cell
  };

  /// What to cast when a cell triggers: averaged offset and accumulated maxray flag.
  struct Cast {
    Vec3d mean_dir;
    bool maxray;
  };

  BundleFilter(unsigned threshold, BundleCompare compare) : threshold_(threshold), compare_(compare) {}

  /// Atomically either accumulates the ray (returns nullopt) or reports the bundle to cast.
  std::optional<Cast> offer(const Coord& cell, const Vec3d& dir, bool maxray);

  /// Entries that accumulated rays but never triggered a cast.
  std::vector<Cast> untriggered() const;

  std::size_t size() const { return entries_.size(); }

private:
  unsigned threshold_;
  BundleCompare compare_;
  detail::ShardedCoordMap<Entry> entries_;
};

struct ChunkStats {
  std::size_t points_in = 0;
  std::size_t points_dropped = 0;
  std::size_t rays_cast = 0;
  std::size_t rays_skipped_sub = 0;
  std::size_t rays_skipped_bundle = 0;
};

/// Raycasts one chunk into the private aggregation grid `temp` (coaligned with the map),
/// consulting the shared filters when enabled. Free-chain voxels are marked active+false,
/// endpoints active+true, maxray endpoints active+false when opts.maxray_as_free.
ChunkStats cast_chunk(std::span<const Vec3d> points, const Vec3d& origin, AggGrid& temp, SubsampleFilter& sub,
                      BundleFilter& bundle, const IntegrationOptions& opts);

/// Marks one ray into an aggregation grid. `hit_endpoint` decides the endpoint state.
void cast_ray(const Ray& ray, Accessor<bool>& temp, bool hit_endpoint);

/// Serialised agg |= temp under `agg_mutex`; temp is consumed and released. Returns the
/// time spent holding the lock in milliseconds.
double merge_temp(AggGrid& agg, AggGrid&& temp, std::mutex& agg_mutex);

struct ApplyResult {
  std::size_t hits = 0;
  std::size_t frees = 0;
};

/// One pass over the aggregation grid: hit -> update_hit, free -> update_miss. Voxels that
/// were unobserved start from log-odds 0 and become observed.
ApplyResult apply_aggregate(OccupancyMap& map, const AggGrid& agg, const OccupancyParams& params);

/// Full parallel map update for one scan taken from `origin`.
/// Throws Error for an empty point list and ConfigError for invalid options.
UpdateStats integrate_scan(OccupancyMap& map, const Vec3d& origin, std::span<const Vec3d> points,
                           const IntegrationOptions& opts, const OccupancyParams& params);

}  // namespace voxmap

#endif  // VOXMAP_INTEGRATOR_HPP
