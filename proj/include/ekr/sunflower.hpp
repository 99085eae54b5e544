#pragma once

#include <optional>
#include <set>
#include <vector>

#include "ekr/family.hpp"

namespace ekr {

// Sets whose pairwise intersections all equal the core; parts outside the
// core are nonempty and pairwise disjoint. For k=1 the core may be any
// proper subset of the single member (we pick the empty set).
struct SunflowerCertificate {
  ElementSet core;
  std::vector<ElementSet> petals;  // the member sets themselves
  int k = 0;
};

// Family with a core whose link has covering number >= k. tau may be
// unbounded (core itself a member); that counts as >= k for every k.
struct FlowerCertificate {
  ElementSet core;
  bool tau_unbounded = false;
  int tau_link = 0;
  int k = 0;
};

namespace detail {

// Backtracking set-packing: k pairwise-disjoint sets among `sets`,
// ascending order, first solution.
inline bool pack_disjoint(const std::vector<Mask>& sets, int k, std::size_t from,
                          Mask used, std::vector<std::size_t>& picked) {
  if (static_cast<int>(picked.size()) == k) return true;
  for (std::size_t i = from; i < sets.size(); ++i) {
    if (sets[i] & used) continue;
    picked.push_back(i);
    if (pack_disjoint(sets, k, i + 1, used | sets[i], picked)) return true;
    picked.pop_back();
  }
  return false;
}

inline std::optional<SunflowerCertificate> sunflower_with_core(const SetFamily& f,
                                                              Mask core, int k) {
  // members containing the core, with nonempty part outside it
  std::vector<Mask> links, full;
  for (Mask m : f.members()) {
    if (!subset_of(core, m)) continue;
    Mask rem = m & ~core;
    if (rem == 0) continue;
    links.push_back(rem);
    full.push_back(m);
  }
  std::vector<std::size_t> picked;
  if (!pack_disjoint(links, k, 0, 0, picked)) return std::nullopt;
  SunflowerCertificate cert;
  cert.core = ElementSet(core, f.ground());
  cert.k = k;
  for (std::size_t i : picked) cert.petals.emplace_back(full[i], f.ground());
  return cert;
}

}  // namespace detail

// A k-petal sunflower in F, if any. Candidate cores are the pairwise
// intersections of members plus the empty core (for k >= 2 the core of any
// sunflower is the intersection of two of its petal sets, so this is
// complete); for k=1 any proper subset works and we return core = empty.
inline std::optional<SunflowerCertificate> find_sunflower(const SetFamily& f, int k) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  if (k == 1) {
    if (f.empty()) return std::nullopt;
    SunflowerCertificate cert;
    cert.core = ElementSet(0, f.ground());
    cert.k = 1;
    cert.petals.emplace_back(f.members().front(), f.ground());
    return cert;
  }
  std::set<Mask> cores;
  cores.insert(0);
  const auto& ms = f.members();
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) cores.insert(ms[i] & ms[j]);
  for (Mask c : cores)
    if (auto cert = detail::sunflower_with_core(f, c, k)) return cert;
  return std::nullopt;
}

namespace detail {

// Candidate flower cores: all subsets of members (a core contained in no
// member has an empty link), deduplicated, ascending by size then bitmask.
inline std::vector<Mask> flower_core_candidates(const SetFamily& f, int max_core_size) {
  std::set<Mask> seen;
  for (Mask m : f.members()) {
    for (Mask s = m;; s = (s - 1) & m) {
      if (popcount(s) <= max_core_size) seen.insert(s);
      if (s == 0) break;
    }
  }
  std::vector<Mask> out(seen.begin(), seen.end());
  std::stable_sort(out.begin(), out.end(), [](Mask a, Mask b) {
    int ca = popcount(a), cb = popcount(b);
    return ca != cb ? ca < cb : a < b;
  });
  return out;
}

}  // namespace detail

// First core (ascending size, then bitmask) whose link has covering number
// >= k. max_core_size can exclude full-member cores, whose unbounded tau
// makes every nonempty family a k-flower for every k.
inline std::optional<FlowerCertificate> find_k_flower(const SetFamily& f, int k,
                                                      int max_core_size = kMaxGround) {
  if (k < 1) throw PreconditionError("k must be >= 1");
  for (Mask c : detail::flower_core_candidates(f, max_core_size)) {
    LinkResult lr = link(f, ElementSet(c, f.ground()));
    CoveringResult cov = covering_number(lr);
    if (cov.unbounded || cov.value >= k) {
      FlowerCertificate cert;
      cert.core = ElementSet(c, f.ground());
      cert.tau_unbounded = cov.unbounded;
      cert.tau_link = cov.unbounded ? 0 : cov.value;
      cert.k = k;
      return cert;
    }
  }
  return std::nullopt;
}

// r!(k-1)^r and (k-1)^r, the sunflower-existence thresholds.
struct ThresholdBounds {
  std::uint64_t erdos_rado = 0;
  std::uint64_t hastad = 0;
};

inline ThresholdBounds threshold_bounds(int r, int k) {
  if (r < 1 || k < 1) throw PreconditionError("r and k must be >= 1");
  std::uint64_t pow = 1;
  for (int i = 0; i < r; ++i) {
    std::uint64_t next = pow * static_cast<std::uint64_t>(k - 1);
    if (k > 1 && next / static_cast<std::uint64_t>(k - 1) != pow)
      throw OverflowError("(k-1)^r overflows");
    pow = next;
  }
  std::uint64_t fact = 1;
  for (int i = 2; i <= r; ++i) {
    if (fact > UINT64_MAX / static_cast<std::uint64_t>(i))
      throw OverflowError("r! overflows");
    fact *= static_cast<std::uint64_t>(i);
  }
  if (pow != 0 && fact > UINT64_MAX / pow) throw OverflowError("r!(k-1)^r overflows");
  return {fact * pow, pow};
}

// Independent re-check of a certificate against F, apart from the finders.
inline bool verify_certificate(const SunflowerCertificate& cert, const SetFamily& f) {
  if (static_cast<int>(cert.petals.size()) != cert.k || cert.k < 1) return false;
  for (const auto& p : cert.petals) {
    if (!f.contains(p.bits)) return false;
    if (!subset_of(cert.core.bits, p.bits)) return false;
    if ((p.bits & ~cert.core.bits) == 0) return false;  // empty petal
  }
  if (cert.k == 1) return cert.core.bits != cert.petals[0].bits;  // proper subset
  for (std::size_t i = 0; i < cert.petals.size(); ++i)
    for (std::size_t j = i + 1; j < cert.petals.size(); ++j)
      if ((cert.petals[i].bits & cert.petals[j].bits) != cert.core.bits) return false;
  return true;
}

inline bool verify_certificate(const FlowerCertificate& cert, const SetFamily& f) {
  if (cert.k < 1) return false;
  LinkResult lr = link(f, cert.core);
  CoveringResult cov = covering_number(lr);
  if (cov.unbounded) return cert.tau_unbounded;
  return !cert.tau_unbounded && cov.value == cert.tau_link && cov.value >= cert.k;
}

}  // namespace ekr
