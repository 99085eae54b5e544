#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "ekr/family.hpp"

namespace ekr {

// Bitset over member indices of one family.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(int cap) : words_((cap + 63) / 64, 0), cap_(cap) {}

  void set(int i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }

  bool empty() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  int count() const {
    int c = 0;
    for (auto w : words_) c += std::popcount(w);
    return c;
  }

  IndexSet& operator&=(const IndexSet& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }

  bool intersects(const IndexSet& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & o.words_[k]) return true;
    return false;
  }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        f(static_cast<int>(k * 64) + std::countr_zero(w));
        w &= w - 1;
      }
    }
  }

  int capacity() const { return cap_; }

 private:
  std::vector<std::uint64_t> words_;
  int cap_ = 0;
};

struct SolveResult {
  int size = 0;
  SetFamily witness;
  std::uint64_t nodes_explored = 0;
  bool optimality_proved = true;
};

constexpr std::uint64_t kDefaultNodeBudget = 100'000'000;
constexpr std::uint64_t kDefaultEnumCap = 1'000'000;

namespace detail {

// Branch-and-bound maximum clique over the intersection graph of a family:
// vertices are members, edges join intersecting pairs, so cliques are
// exactly the intersecting subfamilies. Greedy-coloring upper bound,
// deterministic vertex order.
class CliqueSolver {
 public:
  CliqueSolver(const SetFamily& h, std::uint64_t budget)
      : h_(h), m_(static_cast<int>(h.size())), budget_(budget) {
    adj_.assign(m_, IndexSet(m_));
    const auto& ms = h.members();
    for (int i = 0; i < m_; ++i)
      for (int j = i + 1; j < m_; ++j)
        if (ms[i] & ms[j]) {
          adj_[i].set(j);
          adj_[j].set(i);
        }
  }

  SolveResult solve() {
    best_.clear();
    best_size_ = 0;
    aborted_ = false;
    nodes_ = 0;
    seed_star_lower_bound();
    IndexSet all(m_);
    for (int i = 0; i < m_; ++i) all.set(i);
    std::vector<int> r;
    expand(r, all, /*stop_at=*/m_ + 1);

    SolveResult res;
    res.size = best_size_;
    res.nodes_explored = nodes_;
    res.optimality_proved = !aborted_;
    if (res.optimality_proved && best_size_ > 0) {
      std::vector<int> fallback = best_;
      auto lex = lex_min_witness(res.size);
      if (!aborted_) {
        res.witness = indices_to_family(lex);
      } else {
        res.optimality_proved = false;
        res.witness = indices_to_family(fallback);
      }
      res.nodes_explored = nodes_;
    } else {
      res.witness = indices_to_family(best_);
    }
    return res;
  }

  // True iff some clique of size >= need exists within p.
  bool exists_clique(const IndexSet& p, int need) {
    if (need <= 0) return true;
    best_size_ = need - 1;
    best_.clear();
    std::vector<int> r;
    expand(r, p, /*stop_at=*/need);
    return best_size_ >= need;
  }

  std::uint64_t nodes() const { return nodes_; }
  bool aborted() const { return aborted_; }
  const std::vector<IndexSet>& adjacency() const { return adj_; }

  SetFamily indices_to_family(const std::vector<int>& idx) const {
    std::vector<Mask> ms;
    ms.reserve(idx.size());
    for (int i : idx) ms.push_back(h_.members()[i]);
    return SetFamily(h_.ground(), std::move(ms));
  }

 private:
  void seed_star_lower_bound() {
    // a star is always an intersecting subfamily
    StarMax s = star_size_max(h_);
    if (s.size == 0) return;
    std::vector<int> idx;
    for (int i = 0; i < m_; ++i)
      if ((h_.members()[i] >> s.center) & 1) idx.push_back(i);
    best_ = idx;
    best_size_ = static_cast<int>(idx.size());
  }

  // Greedy sequential coloring of the candidates; emits vertices grouped by
  // color ascending, so a suffix scan gets monotone bounds.
  void color_sort(const IndexSet& p, std::vector<int>& order, std::vector<int>& colors) {
    order.clear();
    colors.clear();
    classes_.clear();
    p.for_each([&](int v) {
      std::size_t c = 0;
      while (c < classes_.size() && classes_[c].intersects(adj_[v])) ++c;
      if (c == classes_.size()) classes_.emplace_back(m_);
      classes_[c].set(v);
    });
    for (std::size_t c = 0; c < classes_.size(); ++c)
      classes_[c].for_each([&](int v) {
        order.push_back(v);
        colors.push_back(static_cast<int>(c) + 1);
      });
  }

  void expand(std::vector<int>& r, IndexSet p, int stop_at) {
    if (aborted_ || best_size_ >= stop_at) return;
    if (++nodes_ > budget_) {
      aborted_ = true;
      return;
    }
    std::vector<int> order, colors;
    color_sort(p, order, colors);
    for (int idx = static_cast<int>(order.size()) - 1; idx >= 0; --idx) {
      if (aborted_ || best_size_ >= stop_at) return;
      int v = order[idx];
      if (static_cast<int>(r.size()) + colors[idx] <= best_size_) return;
      IndexSet p2 = p;
      p2 &= adj_[v];
      r.push_back(v);
      if (p2.empty()) {
        if (static_cast<int>(r.size()) > best_size_) {
          best_size_ = static_cast<int>(r.size());
          best_ = r;
        }
      } else {
        expand(r, p2, stop_at);
      }
      r.pop_back();
      p.reset(v);
    }
  }

  // Lexicographically smallest maximum clique under member order: include
  // the earliest vertex that still extends to the known optimum.
  std::vector<int> lex_min_witness(int target) {
    std::vector<int> chosen;
    IndexSet p(m_);
    for (int i = 0; i < m_; ++i) p.set(i);
    for (int v = 0; v < m_ && static_cast<int>(chosen.size()) < target; ++v) {
      if (!p.test(v)) continue;
      if (aborted_) break;
      IndexSet p2 = p;
      p2 &= adj_[v];
      int need = target - static_cast<int>(chosen.size()) - 1;
      if (exists_clique(p2, need)) {
        chosen.push_back(v);
        p = p2;
      } else {
        p.reset(v);
      }
    }
    return chosen;
  }

  const SetFamily& h_;
  int m_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
  std::vector<IndexSet> adj_;
  std::vector<IndexSet> classes_;
  std::vector<int> best_;
  int best_size_ = 0;
};

}  // namespace detail

// i(H) with certificate. Exact unless the node budget runs out, in which
// case the best clique found so far is reported with
// optimality_proved=false.
inline SolveResult max_intersecting(const SetFamily& h,
                                    std::uint64_t budget = kDefaultNodeBudget) {
  if (budget == 0) throw PreconditionError("budget must be positive");
  if (h.empty()) return SolveResult{0, SetFamily(h.ground(), {}), 0, true};
  detail::CliqueSolver solver(h, budget);
  return solver.solve();
}

enum class EnumStatus { Done, CapExceeded, Stopped };

// Yields every intersecting subfamily of maximum size, each exactly once,
// in a deterministic order. The callback may return false to stop early.
inline EnumStatus enumerate_maximum_intersecting(
    const SetFamily& h, std::uint64_t cap,
    const std::function<bool(const SetFamily&)>& yield,
    std::uint64_t budget = kDefaultNodeBudget) {
  SolveResult opt = max_intersecting(h, budget);
  if (!opt.optimality_proved) throw CapExceededError("node budget exceeded before enumeration");
  const int target = opt.size;
  if (target == 0) {
    yield(SetFamily(h.ground(), {}));
    return EnumStatus::Done;
  }
  detail::CliqueSolver solver(h, budget);
  const auto& adj = solver.adjacency();
  const int m = static_cast<int>(h.size());

  std::uint64_t emitted = 0;
  EnumStatus status = EnumStatus::Done;
  std::vector<int> r;

  // greedy color bound reused for pruning
  std::function<void(IndexSet)> walk = [&](IndexSet p) {
    if (status != EnumStatus::Done) return;
    if (static_cast<int>(r.size()) == target) {
      if (++emitted > cap) {
        status = EnumStatus::CapExceeded;
        return;
      }
      if (!yield(solver.indices_to_family(r))) status = EnumStatus::Stopped;
      return;
    }
    std::vector<int> order, colors;
    {
      std::vector<IndexSet> classes;
      p.for_each([&](int v) {
        std::size_t c = 0;
        while (c < classes.size() && classes[c].intersects(adj[v])) ++c;
        if (c == classes.size()) classes.emplace_back(m);
        classes[c].set(v);
      });
      for (std::size_t c = 0; c < classes.size(); ++c)
        classes[c].for_each([&](int v) {
          order.push_back(v);
          colors.push_back(static_cast<int>(c) + 1);
        });
    }
    for (int idx = static_cast<int>(order.size()) - 1; idx >= 0; --idx) {
      if (status != EnumStatus::Done) return;
      int v = order[idx];
      if (static_cast<int>(r.size()) + colors[idx] < target) return;
      IndexSet p2 = p;
      p2 &= adj[v];
      r.push_back(v);
      walk(p2);
      r.pop_back();
      p.reset(v);
    }
  };

  IndexSet all(m);
  for (int i = 0; i < m; ++i) all.set(i);
  walk(all);
  return status;
}

inline std::vector<SetFamily> enumerate_maximum_intersecting(
    const SetFamily& h, std::uint64_t cap = kDefaultEnumCap) {
  std::vector<SetFamily> out;
  EnumStatus st = enumerate_maximum_intersecting(h, cap, [&](const SetFamily& f) {
    out.push_back(f);
    return true;
  });
  if (st == EnumStatus::CapExceeded)
    throw CapExceededError("more than cap maximum intersecting families");
  return out;
}

struct NonStarResult {
  bool answer = false;
  std::optional<SetFamily> witness;
};

namespace detail {

// Fallback for has_nonstar_maximum when the enumerator overflows its cap:
// branch-and-bound directly for a maximum-size clique whose running head
// (intersection of chosen members) is empty.
inline bool find_empty_head_maximum(const SetFamily& h, int target, SetFamily& out,
                                    std::uint64_t budget) {
  detail::CliqueSolver solver(h, budget);
  const auto& adj = solver.adjacency();
  const int m = static_cast<int>(h.size());
  const auto& ms = h.members();
  bool found = false;
  std::vector<int> r;

  std::function<void(IndexSet, Mask)> walk = [&](IndexSet p, Mask head_mask) {
    if (found) return;
    if (static_cast<int>(r.size()) == target) {
      if (head_mask == 0) {
        out = solver.indices_to_family(r);
        found = true;
      }
      return;
    }
    std::vector<int> order, colors;
    {
      std::vector<IndexSet> classes;
      p.for_each([&](int v) {
        std::size_t c = 0;
        while (c < classes.size() && classes[c].intersects(adj[v])) ++c;
        if (c == classes.size()) classes.emplace_back(m);
        classes[c].set(v);
      });
      for (std::size_t c = 0; c < classes.size(); ++c)
        classes[c].for_each([&](int v) {
          order.push_back(v);
          colors.push_back(static_cast<int>(c) + 1);
        });
    }
    for (int idx = static_cast<int>(order.size()) - 1; idx >= 0; --idx) {
      if (found) return;
      int v = order[idx];
      if (static_cast<int>(r.size()) + colors[idx] < target) return;
      IndexSet p2 = p;
      p2 &= adj[v];
      r.push_back(v);
      walk(p2, head_mask & ms[v]);
      r.pop_back();
      p.reset(v);
    }
  };

  IndexSet all(m);
  for (int i = 0; i < m; ++i) all.set(i);
  walk(all, universe(h.ground()));
  return found;
}

}  // namespace detail

// Does H have a maximum intersecting subfamily with empty head?
inline NonStarResult has_nonstar_maximum(const SetFamily& h,
                                         std::uint64_t cap = kDefaultEnumCap,
                                         std::uint64_t budget = kDefaultNodeBudget) {
  NonStarResult res;
  if (h.empty()) return res;
  SetFamily found(h.ground(), {});
  bool got = false;
  EnumStatus st = enumerate_maximum_intersecting(
      h, cap,
      [&](const SetFamily& f) {
        if (!f.empty() && head(f).empty()) {
          found = f;
          got = true;
          return false;
        }
        return true;
      },
      budget);
  if (st == EnumStatus::CapExceeded) {
    int target = max_intersecting(h, budget).size;
    got = detail::find_empty_head_maximum(h, target, found, budget);
  }
  if (got) {
    res.answer = true;
    res.witness = found;
  }
  return res;
}

}  // namespace ekr
