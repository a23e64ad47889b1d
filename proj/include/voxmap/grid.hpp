// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_GRID_HPP
#define VOXMAP_GRID_HPP

#include <algorithm>
#include <cstddef>
#include <memory>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "voxmap/bitmask.hpp"
#include "voxmap/coord.hpp"
#include "voxmap/transform.hpp"

namespace voxmap {

template <typename V>
struct VoxelState {
  bool active = false;
  V value{};

  bool operator==(const VoxelState&) const = default;
};

struct GridStats {
  std::size_t active_voxels = 0;
  std::size_t upper_nodes = 0;  ///< children of the root table
  std::size_t lower_nodes = 0;
  std::size_t leaf_nodes = 0;
  std::size_t memory_bytes = 0;

  bool operator==(const GridStats&) const = default;
};

namespace detail {

/// Bit/child offset of `c` inside a node whose children are `1 << shift` voxels wide
/// and which has `1 << log2` children per axis. z runs fastest.
inline std::size_t node_offset(const Coord& c, int shift, int log2) {
  const std::int32_t mask = (std::int32_t{1} << log2) - 1;
  const auto ox = static_cast<std::size_t>((c.x >> shift) & mask);
  const auto oy = static_cast<std::size_t>((c.y >> shift) & mask);
  const auto oz = static_cast<std::size_t>((c.z >> shift) & mask);
  return (ox << (2 * log2)) | (oy << log2) | oz;
}

/// Inverse of node_offset relative to the node origin.
inline Coord offset_coord(const Coord& origin, std::size_t offset, int shift, int log2) {
  const std::size_t mask = (std::size_t{1} << log2) - 1;
  const auto ox = static_cast<std::int32_t>((offset >> (2 * log2)) & mask);
  const auto oy = static_cast<std::int32_t>((offset >> log2) & mask);
  const auto oz = static_cast<std::int32_t>(offset & mask);
  return {origin.x + (ox << shift), origin.y + (oy << shift), origin.z + (oz << shift)};
}

/// Origin of the node spanning `1 << span` voxels per axis that contains `c`.
inline Coord node_key(const Coord& c, int span) {
  const std::int32_t mask = ~((std::int32_t{1} << span) - 1);
  return {c.x & mask, c.y & mask, c.z & mask};
}

/// Leaf with sparse value storage: values exist only for voxels that were ever written
/// (`stored`), packed in index order. Once a quarter of the leaf is stored the payload
/// switches to a dense array indexed directly.
template <typename V>
struct LeafNode {
  Coord origin;
  Bitmask active;
  Bitmask stored;
  std::vector<V> values;
  V background;
  bool dense = false;

  LeafNode(const Coord& o, std::size_t voxels, const V& bg)
      : origin(o), active(voxels), stored(voxels), background(bg) {}

  V value(std::size_t i) const {
    if (dense) return values[i];
    return stored.test(i) ? values[stored.rank(i)] : background;
  }

  void set_value(std::size_t i, const V& v) {
    if (dense) {
      values[i] = v;
      return;
    }
    const std::size_t r = stored.rank(i);
    if (stored.test(i)) {
      values[r] = v;
      return;
    }
    if (4 * (values.size() + 1) >= stored.size()) {
      std::vector<V> full(stored.size(), background);
      std::size_t k = 0;
      stored.for_each_set([&](std::size_t j) { full[j] = values[k++]; });
      full[i] = v;
      values = std::move(full);
      dense = true;
      return;
    }
    stored.set(i);
    values.insert(values.begin() + static_cast<std::ptrdiff_t>(r), v);
  }

  std::size_t memory_bytes() const {
    return sizeof(LeafNode) + active.memory_bytes() + stored.memory_bytes() + values.capacity() * sizeof(V);
  }
};

template <>
struct LeafNode<bool> {
  Coord origin;
  Bitmask active;
  Bitmask values;

  LeafNode(const Coord& o, std::size_t voxels, bool background) : origin(o), active(voxels), values(voxels) {
    if (background) {
      for (auto& w : values.words()) w = ~std::uint64_t{0};
    }
  }

  bool value(std::size_t i) const { return values.test(i); }
  void set_value(std::size_t i, bool v) { values.assign(i, v); }

  std::size_t memory_bytes() const { return sizeof(LeafNode) + active.memory_bytes() + values.memory_bytes(); }
};

template <typename Child>
struct InternalNode {
  Coord origin;
  Bitmask child_mask;   ///< bit set iff children[i] exists
  Bitmask active_mask;  ///< bit set iff the child subtree holds at least one active voxel
  std::vector<std::unique_ptr<Child>> children;

  InternalNode(const Coord& o, std::size_t slots) : origin(o), child_mask(slots), active_mask(slots), children(slots) {}

  InternalNode(const InternalNode& other)
      : origin(other.origin), child_mask(other.child_mask), active_mask(other.active_mask), children(other.children.size()) {
    other.child_mask.for_each_set([&](std::size_t i) { children[i] = std::make_unique<Child>(*other.children[i]); });
  }
  InternalNode& operator=(const InternalNode&) = delete;
};

}  // namespace detail

template <typename V>
class Accessor;

/// Fixed-height sparse voxel tree: hashed root, two dense internal levels, dense leaves.
///
/// Voxels are either active (explicitly stored) or inactive, in which case they read as
/// the background value. Nodes are allocated lazily and never pruned. Deactivating a voxel
/// only clears its active bit; the stored value is retained.
///
/// Thread safety: one mutating actor or any number of readers at a time.
template <typename V>
class Grid {
public:
  using ValueType = V;
  using Leaf = detail::LeafNode<V>;
  using Lower = detail::InternalNode<Leaf>;
  using Upper = detail::InternalNode<Lower>;

  Grid(const TreeConfig& config, V background) : config_(config), background_(background) {
    config_.validate();
    leaf_shift_ = config_.log2_leaf;
    lower_shift_ = config_.log2_leaf + config_.log2_lower;
    upper_shift_ = lower_shift_ + config_.log2_upper;
  }

  Grid(const Grid& other)
      : config_(other.config_),
        background_(other.background_),
        leaf_shift_(other.leaf_shift_),
        lower_shift_(other.lower_shift_),
        upper_shift_(other.upper_shift_) {
    root_.reserve(other.root_.size());
    for (const auto& [key, node] : other.root_) root_.emplace(key, std::make_unique<Upper>(*node));
  }
  Grid& operator=(const Grid& other) {
    if (this != &other) *this = Grid(other);
    return *this;
  }
  Grid(Grid&&) noexcept = default;
  Grid& operator=(Grid&&) noexcept = default;

  const TreeConfig& config() const { return config_; }
  const Transform& transform() const { return config_.transform; }
  const V& background() const { return background_; }

  Coord world_to_index(const Vec3d& p) const { return config_.transform.world_to_index(p); }
  Vec3d index_to_world(const Coord& c) const { return config_.transform.index_to_world(c); }

  Accessor<V> accessor() { return Accessor<V>(*this); }

  /// Uncached root-down read.
  VoxelState<V> get(const Coord& c) const {
    const Leaf* leaf = probe_leaf(c);
    if (leaf == nullptr) return {false, background_};
    const std::size_t i = detail::node_offset(c, 0, config_.log2_leaf);
    if (!leaf->active.test(i)) return {false, background_};
    return {true, leaf->value(i)};
  }

  /// Uncached root-down write. With active == false the node path is not allocated and
  /// the stored value is left untouched.
  void set(const Coord& c, const V& value, bool active = true) {
    if (!active) {
      set_active(c, false);
      return;
    }
    auto [upper, lower_slot, lower, leaf_slot, leaf] = touch_path(c);
    const std::size_t i = detail::node_offset(c, 0, config_.log2_leaf);
    leaf->set_value(i, value);
    leaf->active.set(i);
    lower->active_mask.set(leaf_slot);
    upper->active_mask.set(lower_slot);
  }

  /// Toggles the active state without writing a value.
  void set_active(const Coord& c, bool active) {
    if (active) {
      auto [upper, lower_slot, lower, leaf_slot, leaf] = touch_path(c);
      leaf->active.set(detail::node_offset(c, 0, config_.log2_leaf));
      lower->active_mask.set(leaf_slot);
      upper->active_mask.set(lower_slot);
      return;
    }
    auto it = root_.find(detail::node_key(c, upper_shift_));
    if (it == root_.end()) return;
    Upper& upper = *it->second;
    const std::size_t lower_slot = detail::node_offset(c, lower_shift_, config_.log2_upper);
    if (!upper.child_mask.test(lower_slot)) return;
    Lower& lower = *upper.children[lower_slot];
    const std::size_t leaf_slot = detail::node_offset(c, leaf_shift_, config_.log2_lower);
    if (!lower.child_mask.test(leaf_slot)) return;
    deactivate(upper, lower_slot, lower, leaf_slot, *lower.children[leaf_slot],
               detail::node_offset(c, 0, config_.log2_leaf));
  }

  bool empty() const {
    for (const auto& [key, node] : root_) {
      if (node->active_mask.any()) return false;
    }
    return true;
  }

  void clear() { root_.clear(); }

  std::size_t active_count() const {
    std::size_t n = 0;
    for_each_leaf([&](const Leaf& leaf) { n += leaf.active.count(); });
    return n;
  }

  GridStats stats() const {
    GridStats s;
    s.upper_nodes = root_.size();
    s.memory_bytes = sizeof(Grid) + root_.bucket_count() * sizeof(void*) +
                     root_.size() * (sizeof(Coord) + sizeof(std::unique_ptr<Upper>) + 2 * sizeof(void*));
    for (const auto& [key, upper] : root_) {
      s.memory_bytes += internal_bytes(*upper);
      upper->child_mask.for_each_set([&](std::size_t i) {
        const Lower& lower = *upper->children[i];
        ++s.lower_nodes;
        s.memory_bytes += internal_bytes(lower);
        lower.child_mask.for_each_set([&](std::size_t j) {
          const Leaf& leaf = *lower.children[j];
          ++s.leaf_nodes;
          s.active_voxels += leaf.active.count();
          s.memory_bytes += leaf.memory_bytes();
        });
      });
    }
    return s;
  }

  /// Visits every active voxel exactly once in canonical order: root keys ascending
  /// (lexicographic, z fastest), then child bit order inside each node.
  template <typename F>
  void for_each_active(F&& f) const {
    for (const Upper* upper : sorted_roots()) {
      upper->active_mask.for_each_set([&](std::size_t i) {
        const Lower& lower = *upper->children[i];
        lower.active_mask.for_each_set([&](std::size_t j) {
          const Leaf& leaf = *lower.children[j];
          leaf.active.for_each_set([&](std::size_t k) {
            f(detail::offset_coord(leaf.origin, k, 0, config_.log2_leaf), leaf.value(k));
          });
        });
      });
    }
  }

  std::vector<std::pair<Coord, V>> active_voxels() const {
    std::vector<std::pair<Coord, V>> out;
    for_each_active([&](const Coord& c, const V& v) { out.emplace_back(c, v); });
    return out;
  }

  /// Full-tree consistency check of child and active bitmasks. Returns false and fills
  /// `why` on the first violation.
  bool audit(std::string* why = nullptr) const {
    auto fail = [&](const std::string& msg) {
      if (why != nullptr) *why = msg;
      return false;
    };
    for (const auto& [key, upper] : root_) {
      if (upper->origin != key || detail::node_key(key, upper_shift_) != key) return fail("root key mismatch");
      for (std::size_t i = 0; i < upper->children.size(); ++i) {
        const bool present = upper->children[i] != nullptr;
        if (present != upper->child_mask.test(i)) return fail("upper child mask mismatch");
        if (!present) {
          if (upper->active_mask.test(i)) return fail("upper active bit without child");
          continue;
        }
        const Lower& lower = *upper->children[i];
        if (lower.origin != detail::offset_coord(upper->origin, i, lower_shift_, config_.log2_upper)) {
          return fail("lower origin mismatch");
        }
        bool lower_active = false;
        for (std::size_t j = 0; j < lower.children.size(); ++j) {
          const bool leaf_present = lower.children[j] != nullptr;
          if (leaf_present != lower.child_mask.test(j)) return fail("lower child mask mismatch");
          if (!leaf_present) {
            if (lower.active_mask.test(j)) return fail("lower active bit without child");
            continue;
          }
          const Leaf& leaf = *lower.children[j];
          if (leaf.origin != detail::offset_coord(lower.origin, j, leaf_shift_, config_.log2_lower)) {
            return fail("leaf origin mismatch");
          }
          if (leaf.active.any() != lower.active_mask.test(j)) return fail("lower active bit disagrees with leaf");
          lower_active = lower_active || leaf.active.any();
        }
        if (lower_active != upper->active_mask.test(i)) return fail("upper active bit disagrees with lower");
      }
    }
    return true;
  }

private:
  friend class Accessor<V>;
  template <typename W, typename Src>
  friend void merge_or_impl(Grid<W>& dst, Src&& src);

  struct Path {
    Upper* upper;
    std::size_t lower_slot;
    Lower* lower;
    std::size_t leaf_slot;
    Leaf* leaf;
  };

  std::size_t leaf_voxels() const { return std::size_t{1} << (3 * config_.log2_leaf); }
  std::size_t lower_slots() const { return std::size_t{1} << (3 * config_.log2_lower); }
  std::size_t upper_slots() const { return std::size_t{1} << (3 * config_.log2_upper); }

  Upper& touch_upper(const Coord& c) {
    const Coord key = detail::node_key(c, upper_shift_);
    auto it = root_.find(key);
    if (it == root_.end()) it = root_.emplace(key, std::make_unique<Upper>(key, upper_slots())).first;
    return *it->second;
  }

  Lower& touch_lower(Upper& upper, std::size_t slot) {
    if (!upper.child_mask.test(slot)) {
      upper.children[slot] =
          std::make_unique<Lower>(detail::offset_coord(upper.origin, slot, lower_shift_, config_.log2_upper), lower_slots());
      upper.child_mask.set(slot);
    }
    return *upper.children[slot];
  }

  Leaf& touch_leaf(Lower& lower, std::size_t slot) {
    if (!lower.child_mask.test(slot)) {
      lower.children[slot] = std::make_unique<Leaf>(
          detail::offset_coord(lower.origin, slot, leaf_shift_, config_.log2_lower), leaf_voxels(), background_);
      lower.child_mask.set(slot);
    }
    return *lower.children[slot];
  }

  Path touch_path(const Coord& c) {
    Upper& upper = touch_upper(c);
    const std::size_t lower_slot = detail::node_offset(c, lower_shift_, config_.log2_upper);
    Lower& lower = touch_lower(upper, lower_slot);
    const std::size_t leaf_slot = detail::node_offset(c, leaf_shift_, config_.log2_lower);
    Leaf& leaf = touch_leaf(lower, leaf_slot);
    return {&upper, lower_slot, &lower, leaf_slot, &leaf};
  }

  const Leaf* probe_leaf(const Coord& c) const {
    auto it = root_.find(detail::node_key(c, upper_shift_));
    if (it == root_.end()) return nullptr;
    const Upper& upper = *it->second;
    const std::size_t lower_slot = detail::node_offset(c, lower_shift_, config_.log2_upper);
    if (!upper.child_mask.test(lower_slot)) return nullptr;
    const Lower& lower = *upper.children[lower_slot];
    const std::size_t leaf_slot = detail::node_offset(c, leaf_shift_, config_.log2_lower);
    if (!lower.child_mask.test(leaf_slot)) return nullptr;
    return lower.children[leaf_slot].get();
  }

  static void deactivate(Upper& upper, std::size_t lower_slot, Lower& lower, std::size_t leaf_slot, Leaf& leaf,
                         std::size_t voxel) {
    leaf.active.clear(voxel);
    if (leaf.active.none()) {
      lower.active_mask.clear(leaf_slot);
      if (lower.active_mask.none()) upper.active_mask.clear(lower_slot);
    }
  }

  template <typename F>
  void for_each_leaf(F&& f) const {
    for (const auto& [key, upper] : root_) {
      upper->child_mask.for_each_set([&](std::size_t i) {
        const Lower& lower = *upper->children[i];
        lower.child_mask.for_each_set([&](std::size_t j) { f(*lower.children[j]); });
      });
    }
  }

  std::vector<const Upper*> sorted_roots() const {
    std::vector<const Upper*> nodes;
    nodes.reserve(root_.size());
    for (const auto& [key, node] : root_) nodes.push_back(node.get());
    std::sort(nodes.begin(), nodes.end(), [](const Upper* a, const Upper* b) { return a->origin < b->origin; });
    return nodes;
  }

  template <typename Node>
  static std::size_t internal_bytes(const Node& node) {
    return sizeof(Node) + node.child_mask.memory_bytes() + node.active_mask.memory_bytes() +
           node.children.capacity() * sizeof(void*);
  }

  TreeConfig config_;
  V background_;
  int leaf_shift_ = 0;
  int lower_shift_ = 0;
  int upper_shift_ = 0;
  std::unordered_map<Coord, std::unique_ptr<Upper>, CoordHash> root_;
};

/// Cached access path into one grid. Remembers the last leaf, lower and upper node so
/// spatially coherent access skips the root lookup. Not thread safe; one per worker.
/// Valid as long as the grid is neither cleared, moved nor used as a merge source.
template <typename V>
class Accessor {
public:
  explicit Accessor(Grid<V>& grid) : grid_(&grid) {}

  Grid<V>& grid() const { return *grid_; }

  VoxelState<V> get(const Coord& c) {
    const Leaf* leaf = find(c, false);
    if (leaf == nullptr) return {false, grid_->background_};
    const std::size_t i = detail::node_offset(c, 0, grid_->config_.log2_leaf);
    if (!leaf->active.test(i)) return {false, grid_->background_};
    return {true, leaf->value(i)};
  }

  void set(const Coord& c, const V& value, bool active = true) {
    if (!active) {
      set_active(c, false);
      return;
    }
    Leaf& leaf = *find(c, true);
    const std::size_t i = detail::node_offset(c, 0, grid_->config_.log2_leaf);
    leaf.set_value(i, value);
    activate(leaf, i);
  }

  void set_active(const Coord& c, bool active) {
    Leaf* leaf = find(c, active);
    if (leaf == nullptr) return;
    const std::size_t i = detail::node_offset(c, 0, grid_->config_.log2_leaf);
    if (active) {
      activate(*leaf, i);
    } else {
      Grid<V>::deactivate(*upper_, lower_slot_, *lower_, leaf_slot_, *leaf, i);
    }
  }

  /// Aggregation-grid write: activates `c` and ORs `hit` into its value, so a hit is
  /// never downgraded to free.
  void mark(const Coord& c, bool hit)
    requires std::is_same_v<V, bool>
  {
    Leaf& leaf = *find(c, true);
    const std::size_t i = detail::node_offset(c, 0, grid_->config_.log2_leaf);
    if (!leaf.active.test(i)) {
      leaf.values.assign(i, hit);
      activate(leaf, i);
    } else if (hit) {
      leaf.values.set(i);
    }
  }

private:
  using Leaf = typename Grid<V>::Leaf;
  using Lower = typename Grid<V>::Lower;
  using Upper = typename Grid<V>::Upper;

  void activate(Leaf& leaf, std::size_t i) {
    leaf.active.set(i);
    lower_->active_mask.set(leaf_slot_);
    upper_->active_mask.set(lower_slot_);
  }

  Leaf* find(const Coord& c, bool create) {
    Grid<V>& g = *grid_;
    const Coord leaf_key = detail::node_key(c, g.leaf_shift_);
    if (leaf_ != nullptr && leaf_key == leaf_key_) return leaf_;

    leaf_ = nullptr;
    const Coord lower_key = detail::node_key(c, g.lower_shift_);
    if (lower_ == nullptr || lower_key != lower_key_) {
      lower_ = nullptr;
      const Coord upper_key = detail::node_key(c, g.upper_shift_);
      if (upper_ == nullptr || upper_key != upper_key_) {
        upper_ = nullptr;
        if (create) {
          upper_ = &g.touch_upper(c);
        } else {
          auto it = g.root_.find(upper_key);
          if (it == g.root_.end()) return nullptr;
          upper_ = it->second.get();
        }
        upper_key_ = upper_key;
      }
      const std::size_t slot = detail::node_offset(c, g.lower_shift_, g.config_.log2_upper);
      if (create) {
        lower_ = &g.touch_lower(*upper_, slot);
      } else {
        if (!upper_->child_mask.test(slot)) return nullptr;
        lower_ = upper_->children[slot].get();
      }
      lower_slot_ = slot;
      lower_key_ = lower_key;
    }

    const std::size_t slot = detail::node_offset(c, g.leaf_shift_, g.config_.log2_lower);
    if (create) {
      leaf_ = &g.touch_leaf(*lower_, slot);
    } else {
      if (!lower_->child_mask.test(slot)) return nullptr;
      leaf_ = lower_->children[slot].get();
    }
    leaf_slot_ = slot;
    leaf_key_ = leaf_key;
    return leaf_;
  }

  Grid<V>* grid_;
  Coord leaf_key_{}, lower_key_{}, upper_key_{};
  Leaf* leaf_ = nullptr;
  Lower* lower_ = nullptr;
  Upper* upper_ = nullptr;
  std::size_t leaf_slot_ = 0;
  std::size_t lower_slot_ = 0;
};

/// Boolean aggregation grid: active+true = hit this scan, active+false = traversed (free).
using AggGrid = Grid<bool>;

/// Empty grid sharing the origin of `grid` with voxel size divided by `scale`.
template <typename W, typename V>
Grid<W> coalign(const Grid<V>& grid, unsigned scale, W background) {
  TreeConfig config = grid.config();
  config.transform = config.transform.refined(scale);
  return Grid<W>(config, background);
}

template <typename W, typename Src>
void merge_or_impl(Grid<W>& dst, Src&& src) {
  static_assert(std::is_same_v<W, bool>, "merge_or is defined on aggregation grids");
  constexpr bool steal = !std::is_const_v<std::remove_reference_t<Src>> && std::is_rvalue_reference_v<Src&&>;
  using G = Grid<W>;
  if (!(dst.config_ == src.config_)) throw ConfigError("merge_or: grids are not coaligned");
  if (static_cast<const void*>(&dst) == static_cast<const void*>(&src)) return;

  auto adopt = [](auto& slot_ptr) {
    using Node = typename std::remove_reference_t<decltype(slot_ptr)>::element_type;
    if constexpr (steal) {
      return std::move(slot_ptr);
    } else {
      return std::make_unique<Node>(*slot_ptr);
    }
  };

  auto merge_leaf = [](typename G::Leaf& d, const typename G::Leaf& s) {
    auto da = d.active.words();
    auto dv = d.values.words();
    const auto sa = s.active.words();
    const auto sv = s.values.words();
    for (std::size_t w = 0; w < da.size(); ++w) {
      dv[w] = (dv[w] & da[w]) | (sv[w] & sa[w]);
      da[w] |= sa[w];
    }
  };

  for (auto& [key, src_upper] : src.root_) {
    auto it = dst.root_.find(key);
    if (it == dst.root_.end()) {
      dst.root_.emplace(key, adopt(src_upper));
      continue;
    }
    typename G::Upper& du = *it->second;
    src_upper->child_mask.for_each_set([&](std::size_t i) {
      auto& src_lower = src_upper->children[i];
      if (!du.child_mask.test(i)) {
        du.children[i] = adopt(src_lower);
        du.child_mask.set(i);
        return;
      }
      typename G::Lower& dl = *du.children[i];
      src_lower->child_mask.for_each_set([&](std::size_t j) {
        auto& src_leaf = src_lower->children[j];
        if (!dl.child_mask.test(j)) {
          dl.children[j] = adopt(src_leaf);
          dl.child_mask.set(j);
        } else {
          merge_leaf(*dl.children[j], *src_leaf);
        }
      });
      dl.active_mask |= src_lower->active_mask;
    });
    du.active_mask |= src_upper->active_mask;
  }
  if constexpr (steal) src.root_.clear();
}

/// dst |= src over the (inactive < free < hit) lattice. Works node-wise: subtrees missing
/// in dst are adopted whole, shared leaves are combined word by word. src is unchanged.
inline void merge_or(AggGrid& dst, const AggGrid& src) { merge_or_impl(dst, src); }

/// As above, but moves nodes out of src instead of copying them. src is left empty.
inline void merge_or(AggGrid& dst, AggGrid&& src) { merge_or_impl(dst, std::move(src)); }

}  // namespace voxmap

#endif  // VOXMAP_GRID_HPP
