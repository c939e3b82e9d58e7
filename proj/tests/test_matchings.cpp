#include <doctest.h>

#include <algorithm>
#include <set>

#include "taw/matchings.hpp"

using namespace taw;
using namespace taw::matchings;

namespace {

// involution-number recursion a(n) = a(n-1) + (n-1) a(n-2), the independent
// census oracle for P_{1,2}(n)
long census(int n) {
  if (n <= 1) return 1;
  long a0 = 1, a1 = 1;
  for (int k = 2; k <= n; ++k) {
    const long a2 = a1 + (k - 1) * a0;
    a0 = a1;
    a1 = a2;
  }
  return a1;
}

IncompleteMatching eg1() {
  return IncompleteMatching::make(10, {{1, 4}, {2, 10}, {5, 8}, {7, 9}});
}

}  // namespace

TEST_CASE("enumeration matches the involution-number census") {
  CHECK(enumerate_matchings(0).size() == 1);  // the trivial partition of the empty set
  for (int n = 1; n <= 8; ++n) {
    const auto all = enumerate_matchings(n);
    CHECK(static_cast<long>(all.size()) == census(n));
    std::set<IncompleteMatching> dedup(all.begin(), all.end());
    CHECK(dedup.size() == all.size());
  }
  CHECK(enumerate_matchings(3).size() == 4);
  CHECK(enumerate_matchings(5).size() == 26);
  CHECK_THROWS_AS((void)enumerate_matchings(11), Error);
}

TEST_CASE("crossing numbers reproduce the worked example") {
  const auto pi = eg1();
  const auto left = crossing_numbers(pi, left_standard(pi));
  CHECK(left.per_pair == std::vector<long>{2, 6, 2, 0});
  CHECK(left.total == 10);

  // order {2,10} < {5,8} < {1,4} < {7,9}
  AdmissibleOrder phi;
  auto index_of = [&](std::pair<int, int> p) {
    return static_cast<int>(std::find(pi.pairs.begin(), pi.pairs.end(), p) - pi.pairs.begin());
  };
  phi = {index_of({2, 10}), index_of({5, 8}), index_of({1, 4}), index_of({7, 9})};
  const auto alt = crossing_numbers(pi, phi);
  CHECK(alt.per_pair == std::vector<long>{7, 2, 1, 0});
  CHECK(alt.total == 10);

  const auto nc = IncompleteMatching::make(4, {{1, 2}, {3, 4}});
  CHECK(crossing_numbers(nc, left_standard(nc)).total == 0);
}

TEST_CASE("admissible orders") {
  const auto pi = IncompleteMatching::make(6, {{1, 4}, {2, 6}, {3, 5}});
  const auto orders = admissible_orders(pi);
  CHECK(orders.size() == 3);
  CHECK(is_admissible(pi, left_standard(pi)));
  CHECK(is_admissible(pi, right_standard(pi)));
  for (const auto& o : orders) CHECK(is_admissible(pi, o));

  const auto nested = IncompleteMatching::make(6, {{1, 6}, {2, 5}, {3, 4}});
  CHECK(admissible_orders(nested).size() == 1);
  const auto disjoint = IncompleteMatching::make(4, {{1, 2}, {3, 4}});
  CHECK(admissible_orders(disjoint).size() == 2);

  AdmissibleOrder bad{1, 0, 2};  // puts {2,6} before {1,4}: fine; but {3,5} after is nested inside {2,6}
  // a genuinely inadmissible order: nested pair first
  AdmissibleOrder nested_first{2, 1, 0};
  CHECK(!is_admissible(nested, nested_first));
  CHECK_THROWS_AS((void)crossing_numbers(nested, nested_first), Error);
}

TEST_CASE("total crossing number is order independent") {
  for (int n = 1; n <= 6; ++n)
    for (const auto& pi : enumerate_matchings(n)) {
      if (pi.num_pairs() > 5) continue;
      const long ref = crossing_numbers(pi, left_standard(pi)).total;
      for (const auto& o : admissible_orders(pi)) CHECK(crossing_numbers(pi, o).total == ref);
    }
}

TEST_CASE("B(2n+1) census and crossing floor") {
  const auto b1 = enumerate_B(1);
  REQUIRE(b1.size() == 1);
  CHECK(b1[0].num_pairs() == 0);
  CHECK(b1[0].singletons == std::vector<int>{1});

  const auto b3 = enumerate_B(3);
  REQUIRE(b3.size() == 1);
  CHECK(b3[0] == IncompleteMatching::make(3, {{1, 3}}));

  long fact = 1;
  for (int n = 1; n <= 4; ++n) {
    fact *= n;
    const auto bs = enumerate_B(2 * n + 1);
    CHECK(static_cast<long>(bs.size()) == fact);
    for (const auto& pi : bs) {
      CHECK(pi.is_singleton(n + 1));
      const long cr = crossing_numbers(pi, left_standard(pi)).total;
      CHECK(cr >= n * (n + 1) / 2);
    }
  }
  CHECK_THROWS_AS((void)enumerate_B(4), Error);
}

TEST_CASE("dcp round trip") {
  // pairs straddling k=6 are {2,10} and {5,8}
  const auto pi_fixed = eg1();
  const auto dec = dcp(pi_fixed, 6);
  CHECK(dec.pi_m.pairs == std::vector<std::pair<int, int>>{{2, 10}, {5, 8}});
  const auto [back, k] = dcp_inverse(dec);
  CHECK(back == pi_fixed);
  CHECK(k == 6);

  // no pair straddles k: pi_m keeps no pairs
  const auto flat = IncompleteMatching::make(5, {{1, 2}, {4, 5}});
  const auto dflat = dcp(flat, 3);
  CHECK(dflat.pi_m.num_pairs() == 0);
  CHECK(dflat.sigma_l == IncompleteMatching::make(2, {{1, 2}}));
  CHECK(dflat.sigma_r == IncompleteMatching::make(2, {{1, 2}}));

  CHECK_THROWS_AS((void)dcp(flat, 4), Error);  // 4 is paired

  for (int n = 1; n <= 7; ++n)
    for (const auto& p : enumerate_matchings(n))
      for (int s : p.singletons) {
        const auto d = dcp(p, s);
        const auto [q, kk] = dcp_inverse(d);
        CHECK(q == p);
        CHECK(kk == s);
      }
}

TEST_CASE("d_s and D_p bijections") {
  CHECK(d_s(IncompleteMatching::make(3, {{2, 3}})) == IncompleteMatching::make(2, {{1, 2}}));
  {
    const auto [sigma, k] = D_p(IncompleteMatching::make(3, {{1, 3}}));
    CHECK(sigma == IncompleteMatching::make(1, {}));
    CHECK(k == 2);
  }
  CHECK_THROWS_AS((void)d_s(IncompleteMatching::make(3, {{1, 3}})), Error);
  CHECK_THROWS_AS((void)D_p(IncompleteMatching::make(3, {{2, 3}})), Error);

  for (int n = 2; n <= 8; ++n) {
    const auto all = enumerate_matchings(n);
    long with1 = 0, without1 = 0;
    std::set<IncompleteMatching> ds_images;
    std::set<std::pair<IncompleteMatching, int>> dp_images;
    for (const auto& p : all) {
      if (p.is_singleton(1)) {
        ++with1;
        const auto s = d_s(p);
        CHECK(d_s_inverse(s) == p);
        ds_images.insert(s);
      } else if (n >= 3) {
        ++without1;
        const auto [s, k] = D_p(p);
        CHECK(D_p_inverse(s, k) == p);
        dp_images.insert({s, k});
      }
    }
    // census split and injectivity/surjectivity of the deletion maps
    if (n >= 3) CHECK(with1 + without1 == static_cast<long>(all.size()));
    CHECK(ds_images.size() == static_cast<size_t>(with1));
    CHECK(static_cast<long>(ds_images.size()) == census(n - 1));
    if (n >= 3) {
      CHECK(dp_images.size() == static_cast<size_t>(without1));
      CHECK(static_cast<long>(dp_images.size()) == census(n - 2) * (n - 1));
    }
  }
}

TEST_CASE("interval intersection and singleton positions") {
  const auto pi = eg1();
  // pairs {1,4},{2,10},{5,8},{7,9}: open-interval intersection is empty
  CHECK(interval_intersection(pi).empty());
  const auto b5 = IncompleteMatching::make(5, {{1, 4}, {2, 5}});
  CHECK(interval_intersection(b5) == std::vector<int>{3});
  const auto nopairs = IncompleteMatching::make(3, {});
  CHECK(interval_intersection(nopairs) == std::vector<int>{1, 2, 3});
  CHECK(singleton_position(b5, 3) == 1);
  CHECK(singleton_position(pi, 6) == 2);
}
