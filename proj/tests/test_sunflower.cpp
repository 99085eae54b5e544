#include <catch2/catch_amalgamated.hpp>

#include "ekr/enumerate.hpp"
#include "ekr/sunflower.hpp"
#include "helpers.hpp"

using namespace ekr;
using ekr::testing::fam;
using ekr::testing::set1;

namespace {

// distinct random r-sets of [n]
SetFamily random_uniform(SplitMix64& rng, int n, int r, int count) {
  long long avail = 1;
  for (int i = 0; i < r; ++i) avail = avail * (n - i) / (i + 1);
  count = std::min<long long>(count, avail);
  std::vector<Mask> ms;
  std::set<Mask> seen;
  while (static_cast<int>(seen.size()) < count) {
    Mask m = 0;
    while (popcount(m) < r) m |= Mask{1} << rng.next_below(static_cast<std::uint64_t>(n));
    if (seen.insert(m).second) ms.push_back(m);
  }
  return SetFamily(n, std::move(ms));
}

}  // namespace

TEST_CASE("find_sunflower on named families") {
  SetFamily f = fam(7, {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}});
  auto cert = find_sunflower(f, 3);
  REQUIRE(cert);
  CHECK(cert->core.bits == set1({1}));
  CHECK(cert->petals.size() == 3);
  CHECK(verify_certificate(*cert, f));

  CHECK_FALSE(find_sunflower(fam(3, {{1, 2}, {1, 3}, {2, 3}}), 3));

  auto one = find_sunflower(fam(3, {{1, 2, 3}}), 1);
  REQUIRE(one);
  CHECK(one->core.empty());
  CHECK(one->petals.size() == 1);
  CHECK(verify_certificate(*one, fam(3, {{1, 2, 3}})));
}

TEST_CASE("find_sunflower agrees with exhaustive search on small families") {
  SplitMix64 rng(211);
  for (int trial = 0; trial < 150; ++trial) {
    int n = 5 + static_cast<int>(rng.next_below(4));
    int count = 2 + static_cast<int>(rng.next_below(11));  // at most 12 members
    int r = 2 + static_cast<int>(rng.next_below(2));
    SetFamily f = random_uniform(rng, n, r, count);
    for (int k = 2; k <= 4; ++k) {
      auto cert = find_sunflower(f, k);
      CHECK(static_cast<bool>(cert) == ekr::testing::brute_sunflower_exists(f, k));
      if (cert) CHECK(verify_certificate(*cert, f));
    }
  }
}

TEST_CASE("find_k_flower on named families") {
  auto cert = find_k_flower(fam(6, {{1, 2}, {3, 4}, {5, 6}}), 3);
  REQUIRE(cert);
  CHECK(cert->core.empty());
  CHECK(cert->tau_link == 3);

  SetFamily f = fam(11, {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}, {1, 8, 9}, {1, 10, 11}});
  auto cert4 = find_k_flower(f, 4);
  REQUIRE(cert4);
  CHECK(cert4->core.bits == set1({1}));
  REQUIRE_FALSE(cert4->tau_unbounded);
  CHECK(cert4->tau_link == 5);
  CHECK(verify_certificate(*cert4, f));
}

TEST_CASE("flower core equal to a member gives unbounded tau") {
  SetFamily f = fam(3, {{1, 2, 3}, {1, 2}});
  auto cert = find_k_flower(f, 100);
  REQUIRE(cert);
  CHECK(cert->tau_unbounded);
  CHECK(verify_certificate(*cert, f));
  // proper-subset restriction excludes the degenerate cores
  CHECK_FALSE(find_k_flower(f, 100, 1));
}

TEST_CASE("threshold bounds") {
  auto b = threshold_bounds(3, 4);
  CHECK(b.erdos_rado == 162);
  CHECK(b.hastad == 27);

  auto b1 = threshold_bounds(1, 5);
  CHECK(b1.erdos_rado == 4);
  CHECK(b1.hastad == 4);

  auto b2 = threshold_bounds(2, 2);
  CHECK(b2.erdos_rado == 2);
  CHECK(b2.hastad == 1);

  CHECK_THROWS_AS(threshold_bounds(30, 1000), OverflowError);
  CHECK_THROWS_AS(threshold_bounds(0, 1), PreconditionError);
}

TEST_CASE("every k-petal sunflower is a k-flower with the same core") {
  SplitMix64 rng(223);
  for (int trial = 0; trial < 80; ++trial) {
    SetFamily f = random_uniform(rng, 9, 3, 10);
    for (int k = 2; k <= 3; ++k) {
      auto cert = find_sunflower(f, k);
      if (!cert) continue;
      LinkResult lr = link(f, cert->core);
      CoveringResult cov = covering_number(lr);
      CHECK((cov.unbounded || cov.value >= k));
    }
  }
}

TEST_CASE("a k-flower need not contain a k-sunflower") {
  // the 5-cycle: tau = 3, so a 3-flower with empty core, but its maximum
  // matching has 2 edges and its maximum degree is 2, so no 3 petals
  SetFamily f = fam(5, {{1, 2}, {2, 3}, {3, 4}, {4, 5}, {5, 1}});
  auto flower = find_k_flower(f, 3);
  REQUIRE(flower);
  CHECK(flower->core.empty());
  CHECK(flower->tau_link == 3);
  CHECK_FALSE(find_sunflower(f, 3));
  CHECK_FALSE(ekr::testing::brute_sunflower_exists(f, 3));
}

TEST_CASE("tampered certificates fail verification") {
  SetFamily f = fam(7, {{1, 2, 3}, {1, 4, 5}, {1, 6, 7}});
  auto cert = find_sunflower(f, 3);
  REQUIRE(cert);

  SunflowerCertificate missing = *cert;
  missing.petals[0] = ElementSet(set1({2, 3, 4}), 7);  // not a member of f
  CHECK_FALSE(verify_certificate(missing, f));

  SunflowerCertificate bad_core = *cert;
  bad_core.core = ElementSet(set1({2}), 7);
  CHECK_FALSE(verify_certificate(bad_core, f));

  auto flower = find_k_flower(f, 3);
  REQUIRE(flower);
  FlowerCertificate too_big = *flower;
  too_big.k = 10;
  CHECK_FALSE(verify_certificate(too_big, f));
}

TEST_CASE("seeded threshold property spot checks") {
  SplitMix64 rng(227);
  for (int trial = 0; trial < 50; ++trial) {
    // above the Erdos-Rado threshold for (r,k)=(3,2): 3!*1=6
    SetFamily f = random_uniform(rng, 12, 3, 7);
    auto cert = find_sunflower(f, 2);
    REQUIRE(cert);
    CHECK(verify_certificate(*cert, f));
  }
  for (int trial = 0; trial < 50; ++trial) {
    // above the k-flower threshold for k=3: 2^3=8
    SetFamily f = random_uniform(rng, 12, 3, 9);
    auto cert = find_k_flower(f, 3);
    REQUIRE(cert);
    CHECK(verify_certificate(*cert, f));
  }
}
