// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

// voxmap command line: bench | replay | inspect | make-dataset
//
// Exit codes: 0 success, 2 usage or configuration error, 3 data error.
// CSV and reports go to stdout (or --out); diagnostics go to stderr.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "voxmap/config.hpp"
#include "voxmap/replay.hpp"
#include "voxmap/scenario.hpp"
#include "voxmap/voxlist.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;

class UsageError : public voxmap::Error {
public:
  using Error::Error;
};

class DataError : public voxmap::Error {
public:
  using Error::Error;
};

unsigned default_threads() {
  if (const char* env = std::getenv("VOXMAP_THREADS")) {
    try {
      const unsigned long v = std::stoul(env);
      if (v > 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring invalid VOXMAP_THREADS='" << env << "'\n";
  }
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Flags shared by bench and replay that override config-file values.
struct Overrides {
  std::string config_path;
  std::optional<double> resolution;
  std::optional<double> max_range;
  std::optional<unsigned> sub_factor;
  std::optional<unsigned> bundle_threshold;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App& app) {
    app.add_option("--config", config_path, "key=value config file")->check(CLI::ExistingFile);
    app.add_option("--resolution", resolution, "voxel size in meters");
    app.add_option("--max-range", max_range, "maximum ray length in meters");
    app.add_option("--sub-factor", sub_factor, "subsampling factor (power of two)");
    app.add_option("--bundle-threshold", bundle_threshold, "rays accumulated per cell before casting (>= 1)");
    app.add_option("--seed", seed, "generator seed");
  }

  voxmap::Config load() const {
    voxmap::Config c;
    if (!config_path.empty()) c.merge_file(config_path);
    if (resolution) c.set("resolution", std::to_string(*resolution));
    if (max_range) c.set("max_range", std::to_string(*max_range));
    if (sub_factor) c.set("sub_factor", std::to_string(*sub_factor));
    if (bundle_threshold) c.set("bundle_threshold", std::to_string(*bundle_threshold));
    if (seed) c.set("seed", std::to_string(*seed));
    return c;
  }
};

/// stdout unless a path is given.
class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::trunc);
      if (!file_) throw UsageError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
  std::ofstream file_;
};

struct BenchArgs {
  Overrides overrides;
  std::string scenario = "structured";
  std::size_t points = 50000;
  double ray_length = 6.0;
  std::string variant = "fmap";
  unsigned threads = 0;
  unsigned runs = 5;
  std::string out;
};

int cmd_bench(const BenchArgs& a) {
  voxmap::Config cfg = a.overrides.load();
  voxmap::Scenario s;
  s.kind = voxmap::parse_scenario_kind(a.scenario);
  s.n_points = a.points;
  s.ray_length = a.ray_length;
  s.resolution = cfg.tree.transform.voxel_size;
  s.seed = cfg.seed;
  if (!(s.ray_length > 0.0)) throw voxmap::ConfigError("ray length must be positive");
  if (s.n_points == 0) throw voxmap::ConfigError("point count must be positive");
  if (!a.overrides.max_range && !cfg.was_assigned("max_range")) cfg.integration.max_range = s.ray_length;
  const voxmap::BenchVariant variant = voxmap::parse_variant(a.variant, a.threads);
  cfg.validate();
  variant.apply(cfg.integration).validate();

  std::cerr << "bench: " << variant.label() << " " << voxmap::to_string(s.kind) << " n=" << s.n_points
            << " ray=" << s.ray_length << "m res=" << s.resolution << "m runs=" << a.runs << "\n";
  const voxmap::BenchResult r =
      voxmap::run_bench(s, variant, cfg.integration, cfg.occupancy, a.runs, cfg.tree);
  Output out(a.out);
  out.stream() << voxmap::bench_csv_header() << '\n';
  for (const auto& row : voxmap::bench_csv_rows(r)) out.stream() << row << '\n';
  return 0;
}

struct ReplayArgs {
  Overrides overrides;
  std::string manifest;
  std::string variant;
  unsigned threads = 0;
  std::string export_path;
  std::string format = "text";
  std::string out;
};

int cmd_replay(const ReplayArgs& a) {
  voxmap::Config cfg = a.overrides.load();
  if (!std::filesystem::is_regular_file(a.manifest)) throw UsageError("manifest not found: " + a.manifest);
  const voxmap::DatasetManifest manifest = voxmap::DatasetManifest::load(a.manifest);
  if (manifest.resolution_hint && !cfg.was_assigned("resolution")) {
    cfg.tree.transform.voxel_size = *manifest.resolution_hint;
  }
  if (!a.variant.empty()) cfg.integration = voxmap::parse_variant(a.variant, a.threads).apply(cfg.integration);
  const auto format = voxmap::parse_voxlist_format(a.format);
  cfg.validate();

  voxmap::OccupancyMap map = voxmap::make_occupancy_map(cfg.tree);
  Output out(a.out);
  out.stream() << voxmap::update_stats_csv_header() << '\n';
  voxmap::ReplayResult result;
  try {
    result = voxmap::replay(manifest, map, cfg.integration, cfg.occupancy,
                            [&](std::size_t i, const voxmap::UpdateStats& s) {
                              out.stream() << voxmap::to_csv_row(i, s) << '\n';
                            });
  } catch (const voxmap::FrameError& e) {
    throw DataError(e.what());
  }
  const voxmap::ReplaySummary& s = result.summary;
  char line[256];
  std::snprintf(line, sizeof(line), "# summary frames=%zu total_points=%zu occupied_voxels=%zu mean_ms_per_frame=%.3f",
                s.frames, s.total_points, s.occupied_voxels, s.mean_ms_per_frame);
  out.stream() << line << '\n';
  if (!a.export_path.empty()) {
    voxmap::export_map(map, cfg.occupancy, a.export_path, format);
    std::cerr << "replay: exported " << s.occupied_voxels << " occupied voxels to " << a.export_path << "\n";
  }
  return 0;
}

struct InspectArgs {
  std::string path;
  std::string config_path;
};

int cmd_inspect(const InspectArgs& a) {
  voxmap::Config cfg;
  if (!a.config_path.empty()) cfg.merge_file(a.config_path);
  cfg.tree.validate();
  voxmap::VoxList list;
  try {
    list = voxmap::read_voxlist(a.path);
    std::cout << voxmap::inspect_report(list, cfg.tree);
  } catch (const voxmap::DecodeError& e) {
    throw DataError(a.path + ": " + e.what());
  }
  return 0;
}

struct DatasetArgs {
  std::string out_dir;
  voxmap::CorridorSpec spec;
  std::optional<double> resolution;
};

int cmd_make_dataset(const DatasetArgs& a) {
  if (a.spec.frames == 0 || a.spec.points_per_frame == 0) throw voxmap::ConfigError("frames and points must be > 0");
  const auto frames = voxmap::synth_corridor(a.spec);
  const auto manifest = voxmap::write_dataset(a.out_dir, frames, a.resolution);
  std::cout << manifest.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxmap: sparse voxel occupancy mapping tools"};
  app.require_subcommand(1);

  BenchArgs bench;
  bench.threads = default_threads();
  auto* b = app.add_subcommand("bench", "run a synthetic insertion benchmark and print CSV");
  bench.overrides.add_to(*b);
  b->add_option("--scenario", bench.scenario, "random|structured")->check(CLI::IsMember({"random", "structured"}));
  b->add_option("--points", bench.points, "points per scan");
  b->add_option("--ray-length", bench.ray_length, "ray length in meters (also the default max range)");
  b->add_option("--variant", bench.variant, "fmap|sub|bun|par")->check(CLI::IsMember({"fmap", "sub", "bun", "par"}));
  b->add_option("--threads", bench.threads, "worker threads for par (default $VOXMAP_THREADS or all cores)");
  b->add_option("--runs", bench.runs, "repetitions")->check(CLI::PositiveNumber);
  b->add_option("--out", bench.out, "write CSV here instead of stdout");

  ReplayArgs rep;
  rep.threads = default_threads();
  auto* r = app.add_subcommand("replay", "replay an OCCF dataset and print per-frame CSV");
  rep.overrides.add_to(*r);
  r->add_option("--manifest", rep.manifest, "dataset manifest")->required();
  r->add_option("--variant", rep.variant, "fmap|sub|bun|par")->check(CLI::IsMember({"fmap", "sub", "bun", "par"}));
  r->add_option("--threads", rep.threads, "worker threads for par");
  r->add_option("--export", rep.export_path, "export occupied voxels here");
  r->add_option("--format", rep.format, "text|binary")->check(CLI::IsMember({"text", "binary"}));
  r->add_option("--out", rep.out, "write CSV here instead of stdout");

  InspectArgs ins;
  auto* i = app.add_subcommand("inspect", "print statistics of a voxlist file");
  i->add_option("map", ins.path, "voxlist file (text or binary)")->required();
  i->add_option("--config", ins.config_path, "config file for the tree layout")->check(CLI::ExistingFile);

  DatasetArgs ds;
  auto* d = app.add_subcommand("make-dataset", "write a synthetic corridor dataset");
  d->add_option("--out", ds.out_dir, "output directory")->required();
  d->add_option("--frames", ds.spec.frames, "frame count");
  d->add_option("--points", ds.spec.points_per_frame, "points per frame");
  d->add_option("--noise", ds.spec.noise, "uniform range noise, meters");
  d->add_option("--seed", ds.spec.seed, "generator seed");
  d->add_option("--resolution", ds.resolution, "resolution hint written to the manifest");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (b->parsed()) return cmd_bench(bench);
    if (r->parsed()) return cmd_replay(rep);
    if (i->parsed()) return cmd_inspect(ins);
    if (d->parsed()) return cmd_make_dataset(ds);
  } catch (const voxmap::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
