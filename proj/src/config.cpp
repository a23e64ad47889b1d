// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#include "voxmap/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace voxmap {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [p, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || p != end) throw ConfigError("bad value '" + value + "' for key " + key);
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError("bad boolean '" + value + "' for key " + key);
}

std::string fmt(double v) {
  char buf[64];
  return std::string(buf, std::to_chars(buf, buf + sizeof(buf), v).ptr);
}

std::string fmt(bool v) { return v ? "true" : "false"; }

}  // namespace

const std::vector<std::string>& Config::keys() {
  static const std::vector<std::string> k = {
      "resolution", "log2_upper",    "log2_lower",    "log2_leaf",        "l_hit",          "l_miss",
      "l_min",      "l_max",         "phi_occ",       "phi_free",         "chunks",         "max_range",
      "enable_sub", "sub_factor",    "enable_bundle", "bundle_threshold", "bundle_compare", "maxray_as_free",
      "flush_bundles", "seed"};
  return k;
}

void Config::set(const std::string& key, const std::string& raw) {
  const std::string value = trim(raw);
  if (key == "resolution") tree.transform.voxel_size = parse_number<double>(key, value);
  else if (key == "log2_upper") tree.log2_upper = parse_number<int>(key, value);
  else if (key == "log2_lower") tree.log2_lower = parse_number<int>(key, value);
  else if (key == "log2_leaf") tree.log2_leaf = parse_number<int>(key, value);
  else if (key == "l_hit") occupancy.l_hit = parse_number<double>(key, value);
  else if (key == "l_miss") occupancy.l_miss = parse_number<double>(key, value);
  else if (key == "l_min") occupancy.l_min = parse_number<double>(key, value);
  else if (key == "l_max") occupancy.l_max = parse_number<double>(key, value);
  else if (key == "phi_occ") occupancy.phi_occ = parse_number<double>(key, value);
  else if (key == "phi_free") occupancy.phi_free = parse_number<double>(key, value);
  else if (key == "chunks") integration.chunks = parse_number<unsigned>(key, value);
  else if (key == "max_range") integration.max_range = parse_number<double>(key, value);
  else if (key == "enable_sub") integration.enable_sub = parse_bool(key, value);
  else if (key == "sub_factor") integration.sub_factor = parse_number<unsigned>(key, value);
  else if (key == "enable_bundle") integration.enable_bundle = parse_bool(key, value);
  else if (key == "bundle_threshold") integration.bundle_threshold = parse_number<unsigned>(key, value);
  else if (key == "bundle_compare") {
    if (value == "inclusive") integration.bundle_compare = BundleCompare::Inclusive;
    else if (value == "strict") integration.bundle_compare = BundleCompare::Strict;
    else throw ConfigError("bad value '" + value + "' for key bundle_compare (inclusive|strict)");
  } else if (key == "maxray_as_free") integration.maxray_as_free = parse_bool(key, value);
  else if (key == "flush_bundles") integration.flush_bundles = parse_bool(key, value);
  else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
  else throw ConfigError("unknown config key '" + key + "'");
  assigned.push_back(key);
}

bool Config::was_assigned(const std::string& key) const {
  return std::find(assigned.begin(), assigned.end(), key) != assigned.end();
}

std::string Config::get(const std::string& key) const {
  if (key == "resolution") return fmt(tree.transform.voxel_size);
  if (key == "log2_upper") return std::to_string(tree.log2_upper);
  if (key == "log2_lower") return std::to_string(tree.log2_lower);
  if (key == "log2_leaf") return std::to_string(tree.log2_leaf);
  if (key == "l_hit") return fmt(occupancy.l_hit);
  if (key == "l_miss") return fmt(occupancy.l_miss);
  if (key == "l_min") return fmt(occupancy.l_min);
  if (key == "l_max") return fmt(occupancy.l_max);
  if (key == "phi_occ") return fmt(occupancy.phi_occ);
  if (key == "phi_free") return fmt(occupancy.phi_free);
  if (key == "chunks") return std::to_string(integration.chunks);
  if (key == "max_range") return fmt(integration.max_range);
  if (key == "enable_sub") return fmt(integration.enable_sub);
  if (key == "sub_factor") return std::to_string(integration.sub_factor);
  if (key == "enable_bundle") return fmt(integration.enable_bundle);
  if (key == "bundle_threshold") return std::to_string(integration.bundle_threshold);
  if (key == "bundle_compare") return integration.bundle_compare == BundleCompare::Inclusive ? "inclusive" : "strict";
  if (key == "maxray_as_free") return fmt(integration.maxray_as_free);
  if (key == "flush_bundles") return fmt(integration.flush_bundles);
  if (key == "seed") return std::to_string(seed);
  throw ConfigError("unknown config key '" + key + "'");
}

void Config::merge_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    const std::string body = trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    set(trim(std::string_view(body).substr(0, eq)), body.substr(eq + 1));
  }
}

void Config::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  merge_text(ss.str());
}

std::string Config::serialize() const {
  std::string out;
  for (const auto& k : keys()) out += k + "=" + get(k) + "\n";
  return out;
}

void Config::validate() const {
  tree.validate();
  occupancy.validate();
  integration.validate();
}

}  // namespace voxmap
