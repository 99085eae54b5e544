#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "ekr/sets.hpp"

namespace ekr {

// Duplicate-free collection of nonempty subsets of [n], kept sorted
// ascending by bitmask value. The empty set is never stored as a member;
// link results carry it out-of-band (see LinkResult). Immutable after
// construction.
class SetFamily {
 public:
  SetFamily() = default;

  // Normalizes: sorts, removes duplicates. Throws on empty members or
  // members leaving the ground set.
  SetFamily(int n, std::vector<Mask> members) : n_(n), members_(std::move(members)) {
    if (n < 1 || n > kMaxGround)
      throw PreconditionError("ground set size must be in 1..64");
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
    for (Mask m : members_) {
      if (m == 0) throw PreconditionError("empty set cannot be a family member");
      if ((m & ~universe(n)) != 0)
        throw PreconditionError("member leaves the ground set");
    }
  }

  int ground() const { return n_; }
  const std::vector<Mask>& members() const& { return members_; }
  // calling members() on a temporary must not hand out a dangling reference
  std::vector<Mask> members() && { return std::move(members_); }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }

  bool contains(Mask m) const {
    return std::binary_search(members_.begin(), members_.end(), m);
  }

  friend bool operator==(const SetFamily&, const SetFamily&) = default;

 private:
  int n_ = 1;
  std::vector<Mask> members_;
};

// Result of the link operation F_Y. SetFamily cannot hold the empty set, so
// "Y itself was a member" is recorded in has_empty; covering_number treats
// it as an uncoverable member.
struct LinkResult {
  SetFamily family;
  bool has_empty = false;
};

// tau(F). unbounded is set exactly when the empty set would have to be
// covered; value then has no meaning.
struct CoveringResult {
  bool unbounded = false;
  int value = 0;
  std::optional<ElementSet> witness;
};

inline SetFamily downward_closure(const SetFamily& f) {
  std::vector<Mask> out;
  for (Mask m : f.members()) {
    // all nonempty submasks of m
    for (Mask s = m;; s = (s - 1) & m) {
      if (s) out.push_back(s);
      if (s == 0) break;
    }
  }
  return SetFamily(f.ground(), std::move(out));
}

inline bool is_downset(const SetFamily& f) {
  for (Mask m : f.members()) {
    if (popcount(m) == 1) continue;
    Mask rest = m;
    while (rest) {
      Mask sub = m & ~(rest & (~rest + 1));  // drop one element
      rest &= rest - 1;
      if (!f.contains(sub)) return false;
    }
  }
  return true;
}

inline bool is_intersecting(const SetFamily& f) {
  const auto& ms = f.members();
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j)
      if ((ms[i] & ms[j]) == 0) return false;
  return true;
}

inline SetFamily layer(const SetFamily& f, int r) {
  std::vector<Mask> out;
  for (Mask m : f.members())
    if (popcount(m) == r) out.push_back(m);
  return SetFamily(f.ground(), std::move(out));
}

// F_x: all members containing x.
inline SetFamily star(const SetFamily& f, int x) {
  if (x < 0 || x >= f.ground()) throw PreconditionError("star center outside ground set");
  std::vector<Mask> out;
  for (Mask m : f.members())
    if ((m >> x) & 1) out.push_back(m);
  return SetFamily(f.ground(), std::move(out));
}

struct StarMax {
  int size = 0;
  int center = 0;  // smallest-index maximizing center
};

inline StarMax star_size_max(const SetFamily& f) {
  StarMax best;
  for (int x = 0; x < f.ground(); ++x) {
    int c = 0;
    for (Mask m : f.members()) c += static_cast<int>((m >> x) & 1);
    if (c > best.size) best = {c, x};
  }
  return best;
}

// Intersection of all members; nonempty iff F is a partial star.
inline ElementSet head(const SetFamily& f) {
  if (f.empty()) throw EmptyFamilyError("head of an empty family");
  Mask h = universe(f.ground());
  for (Mask m : f.members()) h &= m;
  return ElementSet(h, f.ground());
}

inline LinkResult link(const SetFamily& f, const ElementSet& y) {
  LinkResult res;
  std::vector<Mask> out;
  for (Mask m : f.members()) {
    if (!subset_of(y.bits, m)) continue;
    Mask rem = m & ~y.bits;
    if (rem == 0)
      res.has_empty = true;
    else
      out.push_back(rem);
  }
  res.family = SetFamily(f.ground(), std::move(out));
  return res;
}

namespace detail {

inline void covering_search(const std::vector<Mask>& members, Mask chosen, int depth,
                            int& best, Mask& best_witness) {
  // smallest member not yet hit
  Mask pivot = 0;
  int pivot_card = kMaxGround + 1;
  for (Mask m : members) {
    if (m & chosen) continue;
    int c = popcount(m);
    if (c < pivot_card) {
      pivot_card = c;
      pivot = m;
    }
  }
  if (pivot == 0) {
    if (depth < best) {
      best = depth;
      best_witness = chosen;
    }
    return;
  }
  if (depth + 1 >= best) return;
  for_each_bit(pivot, [&](int e) {
    covering_search(members, chosen | (Mask{1} << e), depth + 1, best, best_witness);
  });
}

}  // namespace detail

// Exact minimum transversal by branching over elements of a smallest
// uncovered member. tau(empty family) = 0.
inline CoveringResult covering_number(const SetFamily& f) {
  CoveringResult res;
  if (f.empty()) {
    res.value = 0;
    res.witness = ElementSet(0, f.ground());
    return res;
  }
  int best = kMaxGround + 1;
  Mask witness = 0;
  detail::covering_search(f.members(), 0, 0, best, witness);
  res.value = best;
  res.witness = ElementSet(witness, f.ground());
  return res;
}

inline CoveringResult covering_number(const LinkResult& lr) {
  if (lr.has_empty) {
    CoveringResult res;
    res.unbounded = true;
    return res;
  }
  return covering_number(lr.family);
}

inline bool cross_intersecting(const SetFamily& a, const SetFamily& b) {
  for (Mask x : a.members())
    for (Mask y : b.members())
      if ((x & y) == 0) return false;
  return true;
}

// Union of all members' elements.
inline Mask vertex_set(const SetFamily& f) {
  Mask v = 0;
  for (Mask m : f.members()) v |= m;
  return v;
}

}  // namespace ekr
