#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace hyperarr {

// Fixed-capacity bitset of hyperplane (or atom) indices.
class IndexSet {
 public:
  static constexpr std::size_t kWords = 4;
  static constexpr std::size_t kCapacity = kWords * 64;

  IndexSet() = default;
  static IndexSet range(std::size_t n) {
    IndexSet s;
    for (std::size_t i = 0; i < n; ++i) s.set(i);
    return s;
  }
  static IndexSet of(const std::vector<int>& idx) {
    IndexSet s;
    for (int i : idx) s.set(static_cast<std::size_t>(i));
    return s;
  }

  void set(std::size_t i) { w_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { w_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (w_[i >> 6] >> (i & 63)) & 1U; }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto x : w_) c += static_cast<std::size_t>(std::popcount(x));
    return c;
  }
  bool empty() const noexcept {
    for (auto x : w_)
      if (x) return false;
    return true;
  }
  bool subset_of(const IndexSet& o) const noexcept {
    for (std::size_t i = 0; i < kWords; ++i)
      if (w_[i] & ~o.w_[i]) return false;
    return true;
  }
  bool intersects(const IndexSet& o) const noexcept {
    for (std::size_t i = 0; i < kWords; ++i)
      if (w_[i] & o.w_[i]) return true;
    return false;
  }
  std::size_t count_and(const IndexSet& o) const noexcept {
    std::size_t c = 0;
    for (std::size_t i = 0; i < kWords; ++i) c += static_cast<std::size_t>(std::popcount(w_[i] & o.w_[i]));
    return c;
  }
  // Lowest index, or kCapacity when empty.
  std::size_t first() const noexcept {
    for (std::size_t i = 0; i < kWords; ++i)
      if (w_[i]) return i * 64 + static_cast<std::size_t>(std::countr_zero(w_[i]));
    return kCapacity;
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < kWords; ++i) {
      std::uint64_t x = w_[i];
      while (x) {
        f(static_cast<int>(i * 64 + static_cast<std::size_t>(std::countr_zero(x))));
        x &= x - 1;
      }
    }
  }
  std::vector<int> to_vector() const {
    std::vector<int> v;
    for_each([&](int i) { v.push_back(i); });
    return v;
  }

  IndexSet& operator|=(const IndexSet& o) {
    for (std::size_t i = 0; i < kWords; ++i) w_[i] |= o.w_[i];
    return *this;
  }
  IndexSet& operator&=(const IndexSet& o) {
    for (std::size_t i = 0; i < kWords; ++i) w_[i] &= o.w_[i];
    return *this;
  }
  IndexSet& operator-=(const IndexSet& o) {
    for (std::size_t i = 0; i < kWords; ++i) w_[i] &= ~o.w_[i];
    return *this;
  }
  friend IndexSet operator|(IndexSet a, const IndexSet& b) { return a |= b; }
  friend IndexSet operator&(IndexSet a, const IndexSet& b) { return a &= b; }
  friend IndexSet operator-(IndexSet a, const IndexSet& b) { return a -= b; }
  friend bool operator==(const IndexSet& a, const IndexSet& b) = default;
  friend bool operator<(const IndexSet& a, const IndexSet& b) {
    for (std::size_t i = kWords; i-- > 0;)
      if (a.w_[i] != b.w_[i]) return a.w_[i] < b.w_[i];
    return false;
  }

  std::size_t hash() const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (auto x : w_) {
      h ^= x + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    }
    return static_cast<std::size_t>(h);
  }

 private:
  std::array<std::uint64_t, kWords> w_{};
};

}  // namespace hyperarr

template <>
struct std::hash<hyperarr::IndexSet> {
  std::size_t operator()(const hyperarr::IndexSet& s) const noexcept { return s.hash(); }
};
