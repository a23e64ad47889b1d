// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxmap/integrator.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cstdio>
#include <exception>
#include <numeric>
#include <thread>

namespace voxmap {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

}  // namespace

void IntegrationOptions::validate() const {
  if (chunks == 0) throw ConfigError("chunk count must be >= 1");
  if (!(max_range > 0.0)) throw ConfigError("max_range must be positive");
  if (sub_factor == 0 || !std::has_single_bit(sub_factor)) throw ConfigError("sub_factor must be a power of two");
  if (bundle_threshold == 0) throw ConfigError("bundle threshold must be >= 1");
}

UpdateStats& UpdateStats::operator+=(const UpdateStats& o) {
  points_in += o.points_in;
  points_dropped += o.points_dropped;
  rays_cast += o.rays_cast;
  rays_skipped_sub += o.rays_skipped_sub;
  rays_skipped_bundle += o.rays_skipped_bundle;
  rays_flushed += o.rays_flushed;
  voxels_hit += o.voxels_hit;
  voxels_freed += o.voxels_freed;
  t_insert_ms += o.t_insert_ms;
  t_merge_ms += o.t_merge_ms;
  t_integrate_ms += o.t_integrate_ms;
  return *this;
}

std::string update_stats_csv_header() {
  return "frame,points_in,rays_cast,skip_sub,skip_bundle,voxels_hit,voxels_freed,t_insert_ms,t_merge_ms,t_integrate_ms";
}

std::string to_csv_row(std::size_t frame, const UpdateStats& s) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%zu,%zu,%zu,%zu,%zu,%zu,%zu,%.3f,%.3f,%.3f", frame, s.points_in, s.rays_cast,
                s.rays_skipped_sub, s.rays_skipped_bundle, s.voxels_hit, s.voxels_freed, s.t_insert_ms, s.t_merge_ms,
                s.t_integrate_ms);
  return buf;
}

std::vector<std::span<const Vec3d>> chunk_points(std::span<const Vec3d> points, unsigned chunks) {
  if (chunks == 0) throw ConfigError("chunk count must be >= 1");
  std::vector<std::span<const Vec3d>> out;
  out.reserve(chunks);
  const std::size_t base = points.size() / chunks;
  const std::size_t extra = points.size() % chunks;
  std::size_t begin = 0;
  for (unsigned i = 0; i < chunks; ++i) {
    const std::size_t len = base + (i < extra ? 1 : 0);
    out.push_back(points.subspan(begin, len));
    begin += len;
  }
  return out;
}

std::optional<BundleFilter::Cast> BundleFilter::offer(const Coord& cell, const Vec3d& dir, bool maxray) {
  return entries_.with_entry(cell, [&](Entry& e) -> std::optional<Cast> {
    const bool trigger = compare_ == BundleCompare::Inclusive ? e.count >= threshold_ : e.count > threshold_;
    if (trigger) {
      e.cast = true;
      return Cast{e.sum_dir / static_cast<double>(e.count), e.maxray};
    }
    ++e.count;
    e.sum_dir += dir;
    e.maxray = e.maxray || maxray;
    return std::nullopt;
  });
}

std::vector<BundleFilter::Cast> BundleFilter::untriggered() const {
  std::vector<std::pair<Coord, Cast>> found;
  entries_.for_each([&](const Coord& c, const Entry& e) {
    if (!e.cast && e.count > 0) found.emplace_back(c, Cast{e.sum_dir / static_cast<double>(e.count), e.maxray});
  });
  std::sort(found.begin(), found.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Cast> out;
  out.reserve(found.size());
  for (auto& f : found) out.push_back(f.second);
  return out;
}

void cast_ray(const Ray& ray, Accessor<bool>& temp, bool hit_endpoint) {
  const Transform& t = temp.grid().transform();
  if (ray.origin == ray.end) {
    temp.mark(t.world_to_index(ray.end), hit_endpoint);
    return;
  }
  const MarchResult r = march(ray, t, [&](const Coord& c) { temp.mark(c, false); });
  temp.mark(r.endpoint, hit_endpoint);
}

ChunkStats cast_chunk(std::span<const Vec3d> points, const Vec3d& origin, AggGrid& temp, SubsampleFilter& sub,
                      BundleFilter& bundle, const IntegrationOptions& opts) {
  ChunkStats stats;
  const Transform& map_t = temp.transform();
  const Transform sub_t = map_t.refined(opts.sub_factor);
  Accessor<bool> acc = temp.accessor();

  for (const Vec3d& p : points) {
    if (!p.finite() || p == origin) {
      ++stats.points_dropped;
      continue;
    }
    Ray ray = make_ray(origin, p, opts.max_range);
    Coord end_cell;
    Coord end_sub;
    try {
      end_cell = map_t.world_to_index(ray.end);
      if (opts.enable_sub) end_sub = sub_t.world_to_index(ray.end);
    } catch (const IndexOverflowError&) {
      ++stats.points_dropped;
      continue;
    }
    ++stats.points_in;

    if (opts.enable_sub && sub.contains(end_sub)) {
      ++stats.rays_skipped_sub;
      continue;
    }
    if (opts.enable_bundle) {
      const auto cast = bundle.offer(end_cell, ray.end - origin, ray.is_maxray);
      if (!cast) {
        ++stats.rays_skipped_bundle;
        continue;
      }
      ray = Ray{origin, origin + cast->mean_dir, cast->maxray};
    }

    cast_ray(ray, acc, !(ray.is_maxray && opts.maxray_as_free));
    ++stats.rays_cast;
    if (opts.enable_sub) sub.insert(end_sub);
  }
  return stats;
}

double merge_temp(AggGrid& agg, AggGrid&& temp, std::mutex& agg_mutex) {
  std::lock_guard lock(agg_mutex);
  const auto start = Clock::now();
  merge_or(agg, std::move(temp));
  AggGrid discarded = std::move(temp);
  return elapsed_ms(start);
}

ApplyResult apply_aggregate(OccupancyMap& map, const AggGrid& agg, const OccupancyParams& params) {
  if (!(map.config() == agg.config())) throw ConfigError("aggregation grid is not coaligned with the map");
  ApplyResult result;
  Accessor<OccValue> acc = map.accessor();
  agg.for_each_active([&](const Coord& c, bool hit) {
    const VoxelState<OccValue> s = acc.get(c);
    const OccValue prior = s.active ? s.value : 0.0;
    if (hit) {
      acc.set(c, update_hit(prior, params));
      ++result.hits;
    } else {
      acc.set(c, update_miss(prior, params));
      ++result.frees;
    }
  });
  return result;
}

UpdateStats integrate_scan(OccupancyMap& map, const Vec3d& origin, std::span<const Vec3d> points,
                           const IntegrationOptions& opts, const OccupancyParams& params) {
  if (points.empty()) throw Error("empty frame");
  if (!origin.finite()) throw Error("sensor origin is not finite");
  opts.validate();

  UpdateStats stats;
  const auto chunks = chunk_points(points, opts.chunks);
  const std::size_t workers = chunks.size();

  AggGrid agg = coalign<bool>(map, 1, false);
  SubsampleFilter sub;
  BundleFilter bundle(opts.bundle_threshold, opts.bundle_compare);
  std::mutex agg_mutex;
  std::vector<ChunkStats> chunk_stats(workers);
  std::vector<double> insert_ms(workers, 0.0);
  std::vector<double> merge_ms(workers, 0.0);
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](std::size_t i) {
    try {
      const auto start = Clock::now();
      AggGrid temp = coalign<bool>(map, 1, false);
      chunk_stats[i] = cast_chunk(chunks[i], origin, temp, sub, bundle, opts);
      insert_ms[i] = elapsed_ms(start);
      merge_ms[i] = merge_temp(agg, std::move(temp), agg_mutex);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (std::size_t i = 0; i < workers; ++i) threads.emplace_back(work, i);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  for (const ChunkStats& c : chunk_stats) {
    stats.points_in += c.points_in;
    stats.points_dropped += c.points_dropped;
    stats.rays_cast += c.rays_cast;
    stats.rays_skipped_sub += c.rays_skipped_sub;
    stats.rays_skipped_bundle += c.rays_skipped_bundle;
  }
  stats.t_insert_ms = *std::max_element(insert_ms.begin(), insert_ms.end());
  stats.t_merge_ms = std::accumulate(merge_ms.begin(), merge_ms.end(), 0.0);

  if (opts.enable_bundle && opts.flush_bundles) {
    const auto start = Clock::now();
    AggGrid temp = coalign<bool>(map, 1, false);
    Accessor<bool> acc = temp.accessor();
    for (const auto& b : bundle.untriggered()) {
      cast_ray(Ray{origin, origin + b.mean_dir, b.maxray}, acc, !(b.maxray && opts.maxray_as_free));
      ++stats.rays_flushed;
    }
    stats.t_insert_ms += elapsed_ms(start);
    stats.t_merge_ms += merge_temp(agg, std::move(temp), agg_mutex);
  }

  const auto apply_start = Clock::now();
  const ApplyResult applied = apply_aggregate(map, agg, params);
  stats.voxels_hit = applied.hits;
  stats.voxels_freed = applied.frees;
  stats.t_integrate_ms = elapsed_ms(apply_start);
  return stats;
}

}  // namespace voxmap
