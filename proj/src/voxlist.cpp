// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxmap/voxlist.hpp"

#include <algorithm>
#include <charconv>
#include <cstring>
#include <sstream>

#include "byte_io.hpp"

namespace voxmap {

namespace {

constexpr std::string_view kTextHeader = "# voxlist v1";

// Splits on single spaces; returns false on any malformed field.
bool parse_record(std::string_view line, VoxelRecord& out) {
  std::int32_t xyz[3];
  const char* p = line.data();
  const char* end = line.data() + line.size();
  for (auto& v : xyz) {
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || next == end || *next != ' ') return false;
    p = next + 1;
  }
  auto [next, ec] = std::from_chars(p, end, out.value);
  if (ec != std::errc() || next != end) return false;
  out.coord = {xyz[0], xyz[1], xyz[2]};
  return true;
}

VoxList decode_text(std::span<const std::uint8_t> bytes) {
  VoxList out;
  const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
  std::size_t at = 0;
  while (at < text.size()) {
    std::size_t eol = text.find('\n', at);
    if (eol == std::string_view::npos) eol = text.size();
    const std::string_view line = text.substr(at, eol - at);
    if (!line.empty() && line.front() != '#') {
      VoxelRecord r;
      if (!parse_record(line, r)) throw DecodeError(at, "malformed voxlist line '" + std::string(line) + "'");
      out.push_back(r);
    }
    at = eol + 1;
  }
  return out;
}

VoxList decode_binary(std::span<const std::uint8_t> bytes) {
  detail::ByteReader r(bytes);
  r.skip(4);
  const std::uint64_t count = r.u64();
  if (r.remaining() / 16 < count) {
    throw DecodeError(r.offset() + (r.remaining() / 16) * 16,
                      "truncated voxlist: header announces " + std::to_string(count) + " records");
  }
  VoxList out(count);
  for (auto& rec : out) {
    rec.coord = {r.i32(), r.i32(), r.i32()};
    rec.value = r.f32();
  }
  if (r.remaining() != 0) throw DecodeError(r.offset(), "trailing bytes after voxlist records");
  return out;
}

}  // namespace

VoxlistFormat parse_voxlist_format(const std::string& s) {
  if (s == "text") return VoxlistFormat::Text;
  if (s == "binary") return VoxlistFormat::Binary;
  throw ConfigError("unknown export format '" + s + "' (expected text|binary)");
}

VoxList occupied_voxels(const OccupancyMap& map, const OccupancyParams& params) {
  VoxList out;
  map.for_each_active([&](const Coord& c, OccValue v) {
    if (classify(v, true, params) == Occupancy::Occupied) out.push_back({c, static_cast<float>(prob(v))});
  });
  return out;
}

VoxList grid_voxels(const Grid<float>& grid) {
  VoxList out;
  grid.for_each_active([&](const Coord& c, float v) { out.push_back({c, v}); });
  return out;
}

Grid<float> voxlist_to_grid(const VoxList& list, const TreeConfig& config) {
  Grid<float> grid(config, 0.0F);
  Accessor<float> acc = grid.accessor();
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (acc.get(list[i].coord).active) {
      throw DecodeError(i, "duplicate voxel " + to_string(list[i].coord) + " at record " + std::to_string(i));
    }
    acc.set(list[i].coord, list[i].value);
  }
  return grid;
}

std::string encode_voxlist_text(const VoxList& list) {
  std::string out(kTextHeader);
  out += '\n';
  char buf[96];
  for (const auto& r : list) {
    char* p = buf;
    for (std::int32_t v : {r.coord.x, r.coord.y, r.coord.z}) {
      p = std::to_chars(p, buf + sizeof(buf), v).ptr;
      *p++ = ' ';
    }
    p = std::to_chars(p, buf + sizeof(buf), r.value).ptr;
    *p++ = '\n';
    out.append(buf, p);
  }
  return out;
}

std::vector<std::uint8_t> encode_voxlist_binary(const VoxList& list) {
  detail::ByteWriter w;
  w.bytes("VXL1", 4);
  w.u64(list.size());
  for (const auto& r : list) {
    w.i32(r.coord.x);
    w.i32(r.coord.y);
    w.i32(r.coord.z);
    w.f32(r.value);
  }
  return w.take();
}

std::vector<std::uint8_t> encode_voxlist(const VoxList& list, VoxlistFormat format) {
  if (format == VoxlistFormat::Binary) return encode_voxlist_binary(list);
  const std::string text = encode_voxlist_text(list);
  return {text.begin(), text.end()};
}

VoxList decode_voxlist(std::span<const std::uint8_t> bytes) {
  if (bytes.size() >= 4 && std::memcmp(bytes.data(), "VXL1", 4) == 0) return decode_binary(bytes);
  return decode_text(bytes);
}

void export_map(const OccupancyMap& map, const OccupancyParams& params, const std::filesystem::path& path,
                VoxlistFormat format) {
  write_file(path, encode_voxlist(occupied_voxels(map, params), format));
}

VoxList read_voxlist(const std::filesystem::path& path) { return decode_voxlist(read_file(path)); }

std::string inspect_report(const VoxList& list, const TreeConfig& config) {
  const Grid<float> grid = voxlist_to_grid(list, config);
  const GridStats s = grid.stats();
  std::ostringstream out;
  out << "voxels: " << s.active_voxels << '\n';
  if (list.empty()) {
    out << "bounds: none\n";
  } else {
    Coord lo = list.front().coord;
    Coord hi = lo;
    float vmin = list.front().value;
    float vmax = vmin;
    for (const auto& r : list) {
      for (int a = 0; a < 3; ++a) {
        lo[a] = std::min(lo[a], r.coord[a]);
        hi[a] = std::max(hi[a], r.coord[a]);
      }
      vmin = std::min(vmin, r.value);
      vmax = std::max(vmax, r.value);
    }
    out << "bounds: min " << lo.x << ' ' << lo.y << ' ' << lo.z << " max " << hi.x << ' ' << hi.y << ' ' << hi.z
        << '\n';
    char buf[64];
    auto fmt = [&](float v) { return std::string(buf, std::to_chars(buf, buf + sizeof(buf), v).ptr); };
    out << "values: min " << fmt(vmin) << " max " << fmt(vmax) << '\n';
  }
  out << "nodes: upper " << s.upper_nodes << " lower " << s.lower_nodes << " leaf " << s.leaf_nodes << '\n';
  return out.str();
}

}  // namespace voxmap
