// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxmap/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace voxmap {

namespace {

struct BallSample {
  double x, y, z;
};

BallSample sample_ball(UniformSource& rng, double radius) {
  const double cz = 2.0 * rng.next() - 1.0;
  const double phi = 2.0 * std::numbers::pi * rng.next();
  const double r = radius * std::cbrt(rng.next());
  const double s = std::sqrt(std::max(0.0, 1.0 - cz * cz));
  return {r * s * std::cos(phi), r * s * std::sin(phi), r * cz};
}

}  // namespace

std::string to_string(ScenarioKind k) { return k == ScenarioKind::Random ? "random" : "structured"; }

ScenarioKind parse_scenario_kind(const std::string& s) {
  if (s == "random") return ScenarioKind::Random;
  if (s == "structured") return ScenarioKind::Structured;
  throw ConfigError("unknown scenario '" + s + "' (expected random|structured)");
}

std::vector<Vec3d> gen_random(const Scenario& s) {
  UniformSource rng(s.seed);
  const double radius = 1.2 * s.ray_length;
  std::vector<Vec3d> points;
  points.reserve(s.n_points);
  for (std::size_t i = 0; i < s.n_points; ++i) {
    const BallSample b = sample_ball(rng, radius);
    points.push_back({s.origin.x + b.x, s.origin.y + b.y, s.origin.z + b.z});
  }
  return points;
}

std::vector<Vec3d> gen_structured(const Scenario& s) {
  UniformSource rng(s.seed);
  const double radius = 1.2 * s.ray_length;
  std::vector<Vec3d> points;
  points.reserve(s.n_points);
  for (std::size_t i = 0; i < s.n_points; ++i) {
    const BallSample b = sample_ball(rng, radius);
    const double band = rng.next() - 0.5;
    points.push_back({s.origin.x + b.x, s.origin.y + b.y, s.origin.z + band});
  }
  return points;
}

std::vector<Vec3d> generate(const Scenario& s) {
  return s.kind == ScenarioKind::Random ? gen_random(s) : gen_structured(s);
}

std::vector<Vec3d> gen_wall(double wall_x, double y_min, double y_max, double z_min, double z_max, double spacing) {
  if (!(spacing > 0.0)) throw ConfigError("wall spacing must be positive");
  std::vector<Vec3d> points;
  const auto ny = static_cast<std::size_t>(std::floor((y_max - y_min) / spacing + 1e-9)) + 1;
  const auto nz = static_cast<std::size_t>(std::floor((z_max - z_min) / spacing + 1e-9)) + 1;
  points.reserve(ny * nz);
  for (std::size_t i = 0; i < ny; ++i) {
    for (std::size_t j = 0; j < nz; ++j) {
      points.push_back({wall_x, y_min + static_cast<double>(i) * spacing, z_min + static_cast<double>(j) * spacing});
    }
  }
  return points;
}

std::string BenchVariant::label() const {
  switch (kind) {
    case VariantKind::Fmap:
      return "FMAP";
    case VariantKind::Sub:
      return "SUB";
    case VariantKind::Bun:
      return "BUN";
    case VariantKind::Par:
      break;
  }
  return "PAR-" + std::to_string(threads);
}

IntegrationOptions BenchVariant::apply(IntegrationOptions base) const {
  base.chunks = kind == VariantKind::Par ? threads : 1;
  base.enable_sub = kind == VariantKind::Sub;
  base.enable_bundle = kind == VariantKind::Bun;
  return base;
}

BenchVariant parse_variant(const std::string& name, unsigned threads) {
  if (name == "fmap") return {VariantKind::Fmap, 1};
  if (name == "sub") return {VariantKind::Sub, 1};
  if (name == "bun") return {VariantKind::Bun, 1};
  if (name == "par") {
    if (threads == 0) throw ConfigError("par variant needs at least one thread");
    return {VariantKind::Par, threads};
  }
  throw ConfigError("unknown variant '" + name + "' (expected fmap|sub|bun|par)");
}

BenchRun BenchResult::mean() const {
  BenchRun m;
  if (runs.empty()) return m;
  double occupied = 0.0;
  double cast = 0.0;
  for (const auto& r : runs) {
    m.stats.t_insert_ms += r.stats.t_insert_ms;
    m.stats.t_merge_ms += r.stats.t_merge_ms;
    m.stats.t_integrate_ms += r.stats.t_integrate_ms;
    m.wall_ms += r.wall_ms;
    occupied += static_cast<double>(r.occupied_voxels);
    cast += static_cast<double>(r.stats.rays_cast);
  }
  const auto n = static_cast<double>(runs.size());
  m.stats.t_insert_ms /= n;
  m.stats.t_merge_ms /= n;
  m.stats.t_integrate_ms /= n;
  m.wall_ms /= n;
  m.stats.rays_cast = static_cast<std::size_t>(std::llround(cast / n));
  m.occupied_voxels = static_cast<std::size_t>(std::llround(occupied / n));
  return m;
}

BenchRun BenchResult::min() const {
  if (runs.empty()) return {};
  return *std::min_element(runs.begin(), runs.end(),
                           [](const BenchRun& a, const BenchRun& b) { return a.wall_ms < b.wall_ms; });
}

IntegrationOptions default_bench_options(const Scenario& s) {
  IntegrationOptions o;
  o.max_range = s.ray_length;
  return o;
}

BenchResult run_bench(const Scenario& scenario, const BenchVariant& variant, const IntegrationOptions& base,
                      const OccupancyParams& params, unsigned repetitions, const TreeConfig& tree) {
  if (repetitions == 0) throw ConfigError("repetitions must be >= 1");
  BenchResult result{scenario, variant, variant.apply(base), {}, {}};
  result.options.validate();
  TreeConfig config = tree;
  config.transform.voxel_size = scenario.resolution;
  config.transform.origin = {};
  const std::vector<Vec3d> points = generate(scenario);

  for (unsigned rep = 0; rep < repetitions; ++rep) {
    const auto start = std::chrono::steady_clock::now();
    OccupancyMap map = make_occupancy_map(config);
    BenchRun run;
    run.stats = integrate_scan(map, scenario.origin, points, result.options, params);
    run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    run.occupied_voxels = count_occupied(map, params);
    result.runs.push_back(run);
    if (rep + 1 == repetitions) result.map_stats = map.stats();
  }
  return result;
}

std::string bench_csv_header() {
  return "variant,kind,n,ray_m,res_m,threads,run,t_insert_ms,t_merge_ms,t_integrate_ms,t_total_ms,rays_cast,"
         "occupied_voxels";
}

std::vector<std::string> bench_csv_rows(const BenchResult& r) {
  auto row = [&](const std::string& run, const BenchRun& b) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%s,%s,%zu,%g,%g,%u,%s,%.3f,%.3f,%.3f,%.3f,%zu,%zu", r.variant.label().c_str(),
                  to_string(r.scenario.kind).c_str(), r.scenario.n_points, r.scenario.ray_length,
                  r.scenario.resolution, r.options.chunks, run.c_str(), b.stats.t_insert_ms, b.stats.t_merge_ms,
                  b.stats.t_integrate_ms, b.wall_ms, b.stats.rays_cast, b.occupied_voxels);
    return std::string(buf);
  };
  std::vector<std::string> rows;
  for (std::size_t i = 0; i < r.runs.size(); ++i) rows.push_back(row(std::to_string(i + 1), r.runs[i]));
  rows.push_back(row("mean", r.mean()));
  rows.push_back(row("min", r.min()));
  return rows;
}

}  // namespace voxmap
