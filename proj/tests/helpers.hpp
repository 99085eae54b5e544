#pragma once

// Test-only brute-force oracles. These deliberately avoid the library's
// search code paths: subfamilies are enumerated exhaustively.

#include <functional>
#include <stdexcept>
#include <vector>

#include "ekr/family.hpp"

namespace ekr::testing {

// Family from 1-based element lists, matching the .fam label convention.
inline SetFamily fam(int n, std::initializer_list<std::initializer_list<int>> sets) {
  std::vector<Mask> ms;
  for (const auto& s : sets) {
    Mask m = 0;
    for (int e : s) m |= Mask{1} << (e - 1);
    ms.push_back(m);
  }
  return SetFamily(n, std::move(ms));
}

inline Mask set1(std::initializer_list<int> elems) {
  Mask m = 0;
  for (int e : elems) m |= Mask{1} << (e - 1);
  return m;
}

// i(H) over all 2^|H| subfamilies, via subset DP on the member index set.
// valid[mask] means the chosen members are pairwise intersecting.
inline int brute_max_intersecting(const SetFamily& h) {
  const auto& ms = h.members();
  const int m = static_cast<int>(ms.size());
  if (m == 0) return 0;
  if (m > 22) throw std::runtime_error("brute force oracle limited to 22 members");
  std::vector<std::uint32_t> conflict(m, 0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && (ms[i] & ms[j]) == 0) conflict[i] |= std::uint32_t{1} << j;
  std::vector<std::uint8_t> valid(std::size_t{1} << m, 0);
  valid[0] = 1;
  int best = 0;
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
    int low = std::countr_zero(mask);
    std::uint32_t rest = mask & (mask - 1);
    valid[mask] = valid[rest] && (conflict[low] & rest) == 0;
    if (valid[mask]) best = std::max(best, std::popcount(mask));
  }
  return best;
}

// All maximum intersecting subfamilies by the same exhaustive scan.
inline std::vector<SetFamily> brute_maximum_families(const SetFamily& h) {
  const auto& ms = h.members();
  const int m = static_cast<int>(ms.size());
  std::vector<SetFamily> out;
  if (m == 0) {
    out.push_back(SetFamily(h.ground(), {}));
    return out;
  }
  int best = brute_max_intersecting(h);
  if (best == 0) {
    out.push_back(SetFamily(h.ground(), {}));
    return out;
  }
  for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
    if (std::popcount(mask) != best) continue;
    bool ok = true;
    for (int i = 0; i < m && ok; ++i)
      if ((mask >> i) & 1)
        for (int j = i + 1; j < m && ok; ++j)
          if (((mask >> j) & 1) && (ms[i] & ms[j]) == 0) ok = false;
    if (!ok) continue;
    std::vector<Mask> sel;
    for (int i = 0; i < m; ++i)
      if ((mask >> i) & 1) sel.push_back(ms[i]);
    out.push_back(SetFamily(h.ground(), std::move(sel)));
  }
  return out;
}

// Does any k-subset of members form a sunflower (all pairwise intersections
// equal, petals nonempty)?
inline bool brute_sunflower_exists(const SetFamily& f, int k) {
  const auto& ms = f.members();
  const int m = static_cast<int>(ms.size());
  if (k == 1) return m >= 1;
  if (m < k) return false;
  std::vector<int> idx(k);
  std::function<bool(int, int)> rec = [&](int pos, int from) -> bool {
    if (pos == k) {
      Mask core = ms[idx[0]] & ms[idx[1]];
      for (int i = 0; i < k; ++i) {
        for (int j = i + 1; j < k; ++j)
          if ((ms[idx[i]] & ms[idx[j]]) != core) return false;
        if ((ms[idx[i]] & ~core) == 0) return false;
      }
      return true;
    }
    for (int i = from; i < m; ++i) {
      idx[pos] = i;
      if (rec(pos + 1, i + 1)) return true;
    }
    return false;
  };
  return rec(0, 0);
}

// Downsets of ([n] choose <= max_size) by filtering every subfamily.
inline std::vector<SetFamily> brute_downsets(int n, int max_size = 3) {
  std::vector<Mask> pool;
  for (Mask m = 1; m < (Mask{1} << n); ++m)
    if (popcount(m) <= max_size) pool.push_back(m);
  const int p = static_cast<int>(pool.size());
  if (p > 20) throw std::runtime_error("brute downset oracle limited to 20 sets");
  std::vector<SetFamily> out;
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << p); ++mask) {
    std::vector<Mask> sel;
    for (int i = 0; i < p; ++i)
      if ((mask >> i) & 1) sel.push_back(pool[i]);
    SetFamily f(n, std::move(sel));
    if (is_downset(f)) out.push_back(f);
  }
  return out;
}

}  // namespace ekr::testing
