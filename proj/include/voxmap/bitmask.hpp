// SPDX-FileCopyrightText: 2026 The voxmap Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef VOXMAP_BITMASK_HPP
#define VOXMAP_BITMASK_HPP

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace voxmap {

/// Fixed-size bit set whose size is chosen at runtime (node extents are configurable).
/// Masks of up to 512 bits live inline; larger ones go to the heap.
class Bitmask {
public:
  static constexpr std::size_t kInlineWords = 8;

  Bitmask() = default;
  explicit Bitmask(std::size_t bits) : bits_(bits), nwords_((bits + 63) / 64) {
    if (nwords_ > kInlineWords) heap_.assign(nwords_, 0);
  }

  std::size_t size() const { return bits_; }

  bool test(std::size_t i) const { return (data()[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) { data()[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void clear(std::size_t i) { data()[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool on) { on ? set(i) : clear(i); }

  bool any() const {
    for (auto w : words()) {
      if (w != 0) return true;
    }
    return false;
  }
  bool none() const { return !any(); }

  std::size_t count() const {
    std::size_t n = 0;
    for (auto w : words()) n += static_cast<std::size_t>(std::popcount(w));
    return n;
  }

  /// Number of set bits strictly below index i.
  std::size_t rank(std::size_t i) const {
    const std::uint64_t* w = data();
    std::size_t n = 0;
    for (std::size_t k = 0; k < (i >> 6); ++k) n += static_cast<std::size_t>(std::popcount(w[k]));
    const std::uint64_t below = (std::uint64_t{1} << (i & 63)) - 1;
    return n + static_cast<std::size_t>(std::popcount(w[i >> 6] & below));
  }

  /// Calls f(index) for every set bit in increasing index order.
  template <typename F>
  void for_each_set(F&& f) const {
    const std::uint64_t* words = data();
    for (std::size_t wi = 0; wi < nwords_; ++wi) {
      std::uint64_t w = words[wi];
      while (w != 0) {
        const int b = std::countr_zero(w);
        f(wi * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  Bitmask& operator|=(const Bitmask& o) {
    auto dst = words();
    auto src = o.words();
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] |= src[i];
    return *this;
  }

  bool operator==(const Bitmask& o) const {
    if (bits_ != o.bits_) return false;
    auto a = words();
    auto b = o.words();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != b[i]) return false;
    }
    return true;
  }

  std::span<std::uint64_t> words() { return {data(), nwords_}; }
  std::span<const std::uint64_t> words() const { return {data(), nwords_}; }

  /// Heap bytes only; inline words are part of sizeof(Bitmask).
  std::size_t memory_bytes() const { return heap_.capacity() * sizeof(std::uint64_t); }

private:
  std::uint64_t* data() { return nwords_ > kInlineWords ? heap_.data() : inline_.data(); }
  const std::uint64_t* data() const { return nwords_ > kInlineWords ? heap_.data() : inline_.data(); }

  std::size_t bits_ = 0;
  std::size_t nwords_ = 0;
  std::array<std::uint64_t, kInlineWords> inline_{};
  std::vector<std::uint64_t> heap_;
};

}  // namespace voxmap

#endif  // VOXMAP_BITMASK_HPP
