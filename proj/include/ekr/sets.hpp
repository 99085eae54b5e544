#pragma once

#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "ekr/errors.hpp"

namespace ekr {

// A subset of the ground set [n] packed into one machine word. Internal
// positions are 0-based; 1-based labels appear only at the I/O boundary.
using Mask = std::uint64_t;

constexpr int kMaxGround = 64;

inline Mask universe(int n) {
  return n >= kMaxGround ? ~Mask{0} : (Mask{1} << n) - 1;
}

inline int popcount(Mask m) { return std::popcount(m); }

inline bool subset_of(Mask a, Mask b) { return (a & ~b) == 0; }

inline int lowest_bit(Mask m) { return std::countr_zero(m); }

// Calls f(pos) for each set bit, ascending.
template <typename F>
inline void for_each_bit(Mask m, F&& f) {
  while (m) {
    f(std::countr_zero(m));
    m &= m - 1;
  }
}

inline std::vector<int> bits_of(Mask m) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(popcount(m)));
  for_each_bit(m, [&](int i) { out.push_back(i); });
  return out;
}

inline Mask mask_of(std::initializer_list<int> positions) {
  Mask m = 0;
  for (int p : positions) m |= Mask{1} << p;
  return m;
}

// Ground-set element subset with an attached ground size.
struct ElementSet {
  Mask bits = 0;
  int n = 0;

  ElementSet() = default;
  ElementSet(Mask b, int ground) : bits(b), n(ground) {
    if (ground < 0 || ground > kMaxGround)
      throw PreconditionError("ground set size out of range");
    if ((b & ~universe(ground)) != 0)
      throw PreconditionError("element beyond ground set");
  }

  int cardinality() const { return popcount(bits); }
  bool empty() const { return bits == 0; }
  bool contains(int pos) const { return (bits >> pos) & 1; }

  friend bool operator==(const ElementSet&, const ElementSet&) = default;
};

// "{1,3,4}" style rendering with 1-based labels.
inline std::string to_string(const ElementSet& s) {
  std::string out = "{";
  bool first = true;
  for_each_bit(s.bits, [&](int i) {
    if (!first) out += ',';
    out += std::to_string(i + 1);
    first = false;
  });
  return out + "}";
}

}  // namespace ekr
