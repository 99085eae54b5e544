#include <catch2/catch_amalgamated.hpp>

#include "ekr/enumerate.hpp"
#include "ekr/family.hpp"
#include "helpers.hpp"

using namespace ekr;
using ekr::testing::fam;
using ekr::testing::set1;

TEST_CASE("downward closure of one triple") {
  SetFamily h = downward_closure(fam(3, {{1, 2, 3}}));
  CHECK(h.size() == 7);
  CHECK(h == fam(3, {{1}, {2}, {3}, {1, 2}, {1, 3}, {2, 3}, {1, 2, 3}}));
  CHECK(is_downset(h));
  CHECK(downward_closure(h) == h);  // idempotent
}

TEST_CASE("closure of the two-triangle family has 14 members") {
  SetFamily z = fam(4, {{1, 2}, {1, 3}, {2, 3}, {1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}});
  SetFamily h = downward_closure(z);
  CHECK(h.size() == 14);
  CHECK(h.contains(set1({4})));
  for (int i = 1; i <= 3; ++i) CHECK(h.contains(set1({i, 4})));
}

TEST_CASE("intersecting checks") {
  CHECK(is_intersecting(fam(3, {{1, 2}, {1, 3}, {2, 3}})));
  CHECK_FALSE(is_intersecting(fam(4, {{1, 2}, {3, 4}})));
  CHECK(is_intersecting(SetFamily(4, {})));
  CHECK(is_intersecting(fam(4, {{1, 2}})));
}

TEST_CASE("stars and the maximum star") {
  SetFamily h = downward_closure(fam(4, {{1, 2, 3}, {1, 2, 4}, {1, 3, 4}, {2, 3, 4}}));
  auto sm = star_size_max(h);
  CHECK(sm.size == 7);
  CHECK(sm.center == 0);

  SetFamily tri = fam(3, {{1, 2}, {1, 3}, {2, 3}, {1}, {2}, {3}});
  CHECK(star_size_max(tri).size == 3);

  SetFamily single = fam(5, {{5}});
  auto sm2 = star_size_max(single);
  CHECK(sm2.size == 1);
  CHECK(sm2.center == 4);
}

TEST_CASE("head") {
  CHECK(head(fam(3, {{1, 2}, {1, 3}})).bits == set1({1}));
  CHECK(head(fam(3, {{1, 2}, {1, 3}, {2, 3}})).empty());
  CHECK(head(fam(3, {{1, 2, 3}})).bits == set1({1, 2, 3}));
  CHECK_THROWS_AS(head(SetFamily(3, {})), EmptyFamilyError);
}

TEST_CASE("link") {
  SetFamily f = fam(5, {{1, 2, 3}, {1, 4, 5}});
  LinkResult lr = link(f, ElementSet(set1({1}), 5));
  CHECK_FALSE(lr.has_empty);
  CHECK(lr.family == fam(5, {{2, 3}, {4, 5}}));

  LinkResult lr2 = link(fam(3, {{1, 2, 3}}), ElementSet(set1({1, 2, 3}), 3));
  CHECK(lr2.has_empty);
  CHECK(lr2.family.empty());

  LinkResult lr3 = link(fam(4, {{2, 3, 4}}), ElementSet(set1({1}), 4));
  CHECK_FALSE(lr3.has_empty);
  CHECK(lr3.family.empty());
}

TEST_CASE("covering number") {
  auto cov = covering_number(fam(6, {{1, 2}, {3, 4}, {5, 6}}));
  CHECK_FALSE(cov.unbounded);
  CHECK(cov.value == 3);

  auto cov2 = covering_number(fam(7, {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}}));
  CHECK(cov2.value == 1);
  CHECK(cov2.witness->bits == set1({1}));

  CHECK(covering_number(SetFamily(3, {})).value == 0);

  LinkResult lr = link(fam(3, {{1, 2, 3}}), ElementSet(set1({1, 2, 3}), 3));
  CHECK(covering_number(lr).unbounded);
}

TEST_CASE("covering number of any intersecting 3-uniform family is at most 3") {
  SplitMix64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Mask> ms;
    Mask first = 0;
    while (popcount(first) != 3) first = rng.next() & universe(9);
    ms.push_back(first);
    for (int t = 0; t < 30; ++t) {
      Mask c = rng.next() & universe(9);
      if (popcount(c) != 3) continue;
      bool ok = true;
      for (Mask m : ms)
        if ((m & c) == 0) ok = false;
      if (ok) ms.push_back(c);
    }
    SetFamily f(9, std::move(ms));
    REQUIRE(is_intersecting(f));
    CHECK(covering_number(f).value <= 3);
  }
}

TEST_CASE("cross-intersecting") {
  CHECK(cross_intersecting(fam(6, {{3, 4}, {5, 6}}), fam(6, {{3, 5}, {4, 6}})));
  CHECK_FALSE(cross_intersecting(fam(2, {{1}}), fam(2, {{2}})));
  CHECK(cross_intersecting(SetFamily(4, {}), fam(4, {{1, 2}})));
}

TEST_CASE("closure is monotone") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Mask> sub, super;
    for (int t = 0; t < 8; ++t) {
      Mask m = rng.next() & universe(6);
      if (m == 0) continue;
      super.push_back(m);
      if (rng.next() & 1) sub.push_back(m);
    }
    if (super.empty()) continue;
    SetFamily cf = downward_closure(SetFamily(6, sub));
    SetFamily cg = downward_closure(SetFamily(6, super));
    for (Mask m : cf.members()) CHECK(cg.contains(m));
  }
}

TEST_CASE("stars are intersecting and sum of star sizes double-counts") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Mask> ms;
    for (int t = 0; t < 12; ++t) {
      Mask m = rng.next() & universe(8);
      if (m) ms.push_back(m);
    }
    SetFamily f(8, std::move(ms));
    long lhs = 0, rhs = 0;
    for (int x = 0; x < f.ground(); ++x) {
      SetFamily fx = star(f, x);
      CHECK(is_intersecting(fx));
      lhs += static_cast<long>(fx.size());
    }
    for (Mask m : f.members()) rhs += popcount(m);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("covering number of an intersecting family is at most the minimum cardinality") {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    // accept members only if they intersect everything chosen so far
    std::vector<Mask> ms;
    for (int t = 0; t < 20 && ms.size() < 10; ++t) {
      Mask m = rng.next() & universe(8);
      if (!m) continue;
      bool ok = true;
      for (Mask prev : ms)
        if ((prev & m) == 0) ok = false;
      if (ok) ms.push_back(m);
    }
    if (ms.empty()) continue;
    SetFamily f(8, std::move(ms));
    int min_card = 64;
    for (Mask m : f.members()) min_card = std::min(min_card, popcount(m));
    auto cov = covering_number(f);
    REQUIRE_FALSE(cov.unbounded);
    CHECK(cov.value <= min_card);
    // witness actually covers
    for (Mask m : f.members()) CHECK((m & cov.witness->bits) != 0);
    CHECK(cov.witness->cardinality() == cov.value);
  }
}

TEST_CASE("nonempty head implies intersecting") {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Mask> ms;
    for (int t = 0; t < 8; ++t) {
      Mask m = rng.next() & universe(7);
      if (m) ms.push_back(m);
    }
    if (ms.empty()) continue;
    SetFamily f(7, std::move(ms));
    if (!head(f).empty()) CHECK(is_intersecting(f));
  }
}

TEST_CASE("link composes over disjoint prefixes") {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Mask> ms;
    for (int t = 0; t < 10; ++t) {
      Mask m = rng.next() & universe(8);
      if (m) ms.push_back(m);
    }
    if (ms.empty()) continue;
    SetFamily f(8, std::move(ms));
    Mask y = rng.next() & universe(8);
    Mask z = rng.next() & universe(8) & ~y;
    LinkResult once = link(f, ElementSet(y | z, 8));
    LinkResult twice = link(link(f, ElementSet(y, 8)).family, ElementSet(z, 8));
    // the intermediate family drops empty remainders, which only happens
    // when y itself was a member; skip that case
    if (link(f, ElementSet(y, 8)).has_empty) continue;
    CHECK(once.family == twice.family);
    CHECK(once.has_empty == twice.has_empty);
  }
}
