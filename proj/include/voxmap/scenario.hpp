// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_SCENARIO_HPP
#define VOXMAP_SCENARIO_HPP

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "voxmap/integrator.hpp"

namespace voxmap {

enum class ScenarioKind { Random, Structured };

/// Synthetic insertion workload.
///
/// Random: points uniform in the ball of radius 1.2 * ray_length around origin.
/// Structured: (x, y) drawn exactly like Random, z uniform in a 1 m band centred on origin.z.
///
/// Generator: std::mt19937_64 seeded with `seed`; each uniform double is
/// (engine() >> 11) * 2^-53. Per point, in this order: u_z, u_phi, u_r (ball direction
/// z = 2 u_z - 1, azimuth 2 pi u_phi, radius R cbrt(u_r)), then u_band for Structured.
struct Scenario {
  ScenarioKind kind = ScenarioKind::Random;
  std::size_t n_points = 50000;
  double ray_length = 6.0;
  double resolution = 0.1;
  std::uint64_t seed = 0;
  Vec3d origin{};
};

std::string to_string(ScenarioKind k);
ScenarioKind parse_scenario_kind(const std::string& s);

/// Uniform doubles in [0, 1) with a platform-independent bit recipe.
class UniformSource {
public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
  std::mt19937_64 engine_;
};

std::vector<Vec3d> gen_random(const Scenario& s);
std::vector<Vec3d> gen_structured(const Scenario& s);
std::vector<Vec3d> generate(const Scenario& s);

/// Regular grid of points on the plane x = wall_x spanning [y_min, y_max] x [z_min, z_max]
/// with the given spacing (inclusive of both ends when they fall on the lattice).
std::vector<Vec3d> gen_wall(double wall_x, double y_min, double y_max, double z_min, double z_max, double spacing);

enum class VariantKind { Fmap, Sub, Bun, Par };

/// Ablation variant: FMAP is the single-worker baseline without filters, SUB and BUN enable
/// one filter each on a single worker, PAR-k runs k workers without filters.
struct BenchVariant {
  VariantKind kind = VariantKind::Fmap;
  unsigned threads = 1;

  std::string label() const;
  /// `base` with chunks and filter switches replaced according to the variant.
  IntegrationOptions apply(IntegrationOptions base) const;
};

BenchVariant parse_variant(const std::string& name, unsigned threads);

struct BenchRun {
  UpdateStats stats;
  double wall_ms = 0.0;  ///< end-to-end integrate_scan time
  std::size_t occupied_voxels = 0;
};

struct BenchResult {
  Scenario scenario;
  BenchVariant variant;
  IntegrationOptions options;
  std::vector<BenchRun> runs;
  GridStats map_stats;  ///< of the map after the last repetition

  BenchRun mean() const;
  BenchRun min() const;  ///< run with the smallest wall time
};

/// Options for a scenario: max_range equals the scenario's ray length.
IntegrationOptions default_bench_options(const Scenario& s);

/// Integrates the scenario into a fresh map `repetitions` times. Throws ConfigError for
/// repetitions == 0.
BenchResult run_bench(const Scenario& scenario, const BenchVariant& variant, const IntegrationOptions& base,
                      const OccupancyParams& params, unsigned repetitions, const TreeConfig& tree = {});

/// `variant,kind,n,ray_m,res_m,threads,run,t_insert_ms,t_merge_ms,t_integrate_ms,t_total_ms,rays_cast,occupied_voxels`
std::string bench_csv_header();
/// One row per run (run = 1..J), then a `mean` row and a `min` row.
std::vector<std::string> bench_csv_rows(const BenchResult& r);

}  // namespace voxmap

#endif  // VOXMAP_SCENARIO_HPP
