#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "ekr/family.hpp"

namespace ekr {

// Splittable 64-bit generator (splitmix64); fixed across platforms so
// seeded campaigns are bit-reproducible.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // uniform in [0, bound)
  std::uint64_t next_below(std::uint64_t bound) { return next() % bound; }

 private:
  std::uint64_t state_;
};

// Relabeling-invariant identity: the lexicographically least serialized
// member list over all permutations of [n]. Two families get equal keys
// iff some permutation of the ground set maps one onto the other.
struct CanonicalKey {
  std::string bytes;
  friend auto operator<=>(const CanonicalKey&, const CanonicalKey&) = default;
};

constexpr int kCanonicalMaxGround = 10;

namespace detail {

inline Mask apply_permutation(Mask m, const std::vector<int>& perm) {
  Mask out = 0;
  for_each_bit(m, [&](int i) { out |= Mask{1} << perm[i]; });
  return out;
}

inline std::string render_key(int n, const std::vector<Mask>& ms) {
  std::string s = "n" + std::to_string(n) + ":";
  for (Mask m : ms) {
    s += std::to_string(m);
    s += ',';
  }
  return s;
}

}  // namespace detail

inline CanonicalKey canonical_form(const SetFamily& f) {
  const int n = f.ground();
  if (n > kCanonicalMaxGround)
    throw GroundSetTooLargeError("canonical_form limited to n <= 10");
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<Mask> best;
  bool have = false;
  std::vector<Mask> image(f.size());
  do {
    for (std::size_t i = 0; i < f.size(); ++i)
      image[i] = detail::apply_permutation(f.members()[i], perm);
    std::sort(image.begin(), image.end());
    if (!have || image < best) {
      best = image;
      have = true;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  if (!have) best = {};
  return CanonicalKey{detail::render_key(n, best)};
}

// (k-1)-subsets of the members of layer k
inline std::vector<Mask> shadow(const std::vector<Mask>& sets) {
  std::set<Mask> out;
  for (Mask m : sets)
    for_each_bit(m, [&](int i) {
      Mask sub = m & ~(Mask{1} << i);
      if (sub) out.insert(sub);
    });
  return {out.begin(), out.end()};
}

constexpr int kEnumerateGuard = 5;

// Every downset of ([n] choose <= max_size), exactly once (one canonical
// representative per isomorphism class when up_to_iso). Generation order:
// choose the top layer, then each lower layer as shadow plus free sets.
// The callback may return false to stop.
inline void enumerate_downsets(int n, int max_size, bool up_to_iso,
                               const std::function<bool(const SetFamily&)>& yield,
                               bool override_guard = false) {
  if (n < 1) throw PreconditionError("n must be >= 1");
  if (n > kEnumerateGuard && !override_guard)
    throw ResourceGuardError("exhaustive enumeration guarded at n=5");
  if (max_size < 1 || max_size > 3)
    throw PreconditionError("max_size must be in 1..3");

  auto all_of_size = [&](int r) {
    std::vector<Mask> out;
    for (Mask m = 1; m < (Mask{1} << n); ++m)
      if (popcount(m) == r) out.push_back(m);
    std::sort(out.begin(), out.end());
    return out;
  };

  std::set<std::string> seen;
  bool stop = false;

  auto emit = [&](std::vector<Mask> members) {
    if (stop) return;
    SetFamily fam(n, std::move(members));
    if (up_to_iso) {
      auto key = canonical_form(fam);
      if (!seen.insert(key.bytes).second) return;
    }
    if (!yield(fam)) stop = true;
  };

  // subsets of `free` joined with `forced`, then recurse one layer down
  std::function<void(int, std::vector<Mask>)> build = [&](int size, std::vector<Mask> above) {
    if (stop) return;
    if (size == 0) {
      emit(std::move(above));
      return;
    }
    std::vector<Mask> forced;
    for (Mask m : shadow(above))
      if (popcount(m) == size) forced.push_back(m);
    std::vector<Mask> pool = all_of_size(size);
    std::vector<Mask> free_sets;
    for (Mask m : pool)
      if (!std::binary_search(forced.begin(), forced.end(), m)) free_sets.push_back(m);
    const std::size_t fcount = free_sets.size();
    for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << fcount) && !stop; ++pick) {
      std::vector<Mask> lay = forced;
      for (std::size_t i = 0; i < fcount; ++i)
        if ((pick >> i) & 1) lay.push_back(free_sets[i]);
      std::vector<Mask> acc = above;
      acc.insert(acc.end(), lay.begin(), lay.end());
      build(size - 1, std::move(acc));
    }
  };

  int top = std::min(max_size, n);
  std::vector<Mask> pool = all_of_size(top);
  for (std::uint64_t pick = 0; pick < (std::uint64_t{1} << pool.size()) && !stop; ++pick) {
    std::vector<Mask> topsets;
    for (std::size_t i = 0; i < pool.size(); ++i)
      if ((pick >> i) & 1) topsets.push_back(pool[i]);
    build(top - 1, std::move(topsets));
  }
}

inline std::vector<SetFamily> enumerate_downsets(int n, int max_size = 3,
                                                 bool up_to_iso = false,
                                                 bool override_guard = false) {
  std::vector<SetFamily> out;
  enumerate_downsets(
      n, max_size, up_to_iso,
      [&](const SetFamily& f) {
        out.push_back(f);
        return true;
      },
      override_guard);
  return out;
}

struct SamplerConfig {
  int n = 8;
  double p3 = 0.3;      // inclusion probability per 3-set
  double extra2 = 0.0;  // extra 2-sets beyond forced shadows
  double extra1 = 0.0;
  std::uint64_t seed = 0;
};

namespace detail {

inline void validate(const SamplerConfig& cfg) {
  if (cfg.n < 1 || cfg.n > kMaxGround) throw PreconditionError("sampler n out of range");
  for (double p : {cfg.p3, cfg.extra2, cfg.extra1})
    if (p < 0.0 || p > 1.0) throw PreconditionError("probability outside [0,1]");
}

inline SetFamily close_with_extras(const SamplerConfig& cfg, std::vector<Mask> triples,
                                   SplitMix64& rng) {
  SetFamily fam = downward_closure(SetFamily(cfg.n, std::move(triples)));
  std::vector<Mask> members = fam.members();
  for (Mask m = 1; m < (Mask{1} << cfg.n); ++m) {
    int c = popcount(m);
    if (c == 2 && !fam.contains(m) && rng.next_double() < cfg.extra2) members.push_back(m);
    if (c == 1 && !fam.contains(m) && rng.next_double() < cfg.extra1) members.push_back(m);
  }
  return downward_closure(SetFamily(cfg.n, std::move(members)));
}

}  // namespace detail

// Each 3-set independently with probability p3, closed downward, extra
// 2-/1-sets, closed again. Identical seed, identical output.
inline SetFamily sample_random_downset(const SamplerConfig& cfg) {
  detail::validate(cfg);
  SplitMix64 rng(cfg.seed);
  std::vector<Mask> triples;
  for (Mask m = 1; m < (Mask{1} << cfg.n); ++m)
    if (popcount(m) == 3 && rng.next_double() < cfg.p3) triples.push_back(m);
  return detail::close_with_extras(cfg, std::move(triples), rng);
}

// Star-seeded mode: only 3-sets through `center` are candidates (each with
// probability p3), guaranteeing a large star; extra2/extra1 add noise.
inline SetFamily sample_star_seeded_downset(const SamplerConfig& cfg, int center) {
  detail::validate(cfg);
  if (center < 0 || center >= cfg.n) throw PreconditionError("center outside ground set");
  SplitMix64 rng(cfg.seed);
  std::vector<Mask> triples;
  for (Mask m = 1; m < (Mask{1} << cfg.n); ++m)
    if (popcount(m) == 3 && ((m >> center) & 1) && rng.next_double() < cfg.p3)
      triples.push_back(m);
  return detail::close_with_extras(cfg, std::move(triples), rng);
}

}  // namespace ekr
