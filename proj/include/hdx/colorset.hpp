#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace hdx {

// Subset of the color set [d] = {0, ..., d-1}, packed as a bitmask.
// Colors are 0-based everywhere in the library.
class ColorSet {
 public:
  constexpr ColorSet() : bits_(0) {}
  constexpr explicit ColorSet(uint32_t bits) : bits_(bits) {}

  static constexpr ColorSet all(int d) {
    return ColorSet(d >= 32 ? ~0u : ((1u << d) - 1u));
  }
  static constexpr ColorSet single(int i) { return ColorSet(1u << i); }
  static ColorSet of(std::initializer_list<int> colors) {
    uint32_t b = 0;
    for (int c : colors) b |= (1u << c);
    return ColorSet(b);
  }
  static ColorSet from(const std::vector<int>& colors) {
    uint32_t b = 0;
    for (int c : colors) b |= (1u << c);
    return ColorSet(b);
  }

  constexpr uint32_t bits() const { return bits_; }
  constexpr bool contains(int i) const { return (bits_ >> i) & 1u; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }

  constexpr ColorSet with(int i) const { return ColorSet(bits_ | (1u << i)); }
  constexpr ColorSet without(int i) const { return ColorSet(bits_ & ~(1u << i)); }
  constexpr bool subset_of(ColorSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(ColorSet o) const { return (bits_ & o.bits_) != 0; }

  constexpr ColorSet operator|(ColorSet o) const { return ColorSet(bits_ | o.bits_); }
  constexpr ColorSet operator&(ColorSet o) const { return ColorSet(bits_ & o.bits_); }
  constexpr ColorSet minus(ColorSet o) const { return ColorSet(bits_ & ~o.bits_); }
  constexpr ColorSet complement(int d) const {
    return ColorSet(all(d).bits_ & ~bits_);
  }

  // Members in increasing order.
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for (uint32_t b = bits_; b; b &= b - 1) out.push_back(std::countr_zero(b));
    return out;
  }

  // Position of color i among the members (0-based); i must be a member.
  constexpr int rank_of(int i) const {
    return std::popcount(bits_ & ((1u << i) - 1u));
  }

  std::string str() const {
    std::string s = "{";
    bool first = true;
    for (int c : members()) {
      if (!first) s += ",";
      s += std::to_string(c);
      first = false;
    }
    return s + "}";
  }

  constexpr auto operator<=>(const ColorSet&) const = default;

 private:
  uint32_t bits_;
};

// Visits every subset T of S in ascending bitmask order (starting at the
// empty set, ending at S itself).
template <class F>
inline void for_each_subset(ColorSet S, F&& fn) {
  const uint32_t s = S.bits();
  uint32_t t = 0;
  while (true) {
    fn(ColorSet(t));
    if (t == s) break;
    t = (t - s) & s;
  }
}

inline int parity_sign(int k) { return (k & 1) ? -1 : 1; }

}  // namespace hdx
