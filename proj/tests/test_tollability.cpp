#include <utility>
#include <vector>

#include "doctest.h"
#include "mintb/random_instances.hpp"
#include "mintb/tollability.hpp"

using namespace mintb;

namespace {

LeafEdge used(const char* id, long long now, long long plus) {
  return LeafEdge{id, true, Rational(now), Rational(plus)};
}

LeafEdge idle(const char* id, long long plus) {
  return LeafEdge{id, false, Rational(0), Rational(plus)};
}

std::vector<std::pair<int, ExtCost>> shape(const TollabilityList& list) {
  std::vector<std::pair<int, ExtCost>> out;
  for (const auto& e : list.entries) out.emplace_back(e.eta, e.lambda);
  return out;
}

// A list paired with the highest cost its residents pay, as the parallel
// composition needs it.  Mirrors what the solver's annotation provides.
struct Sub {
  TollabilityList list;
  Rational cmax;
};

Sub random_leaf(Rng& rng) {
  int count = rng.uniform(1, 4);
  std::vector<LeafEdge> edges;
  Rational cmax(0);
  for (int i = 0; i < count; ++i) {
    LeafEdge e;
    e.id = "e" + std::to_string(i);
    e.used = rng.coin();
    long long now = rng.uniform(0, 10);
    long long plus = now + rng.uniform(0, 10);
    if (e.used) {
      e.cost_now = Rational(now);
      if (e.cost_now > cmax) cmax = e.cost_now;
    }
    e.cost_plus = Rational(plus);
    edges.push_back(std::move(e));
  }
  return {leaf_list(edges), cmax};
}

Sub random_sub(Rng& rng, int depth) {
  if (depth == 0 || rng.uniform(0, 2) == 0) return random_leaf(rng);
  Sub a = random_sub(rng, depth - 1);
  Sub b = random_sub(rng, depth - 1);
  if (rng.coin()) return {compose_series(a.list, b.list), a.cmax + b.cmax};
  return {compose_parallel(a.list, b.list, a.cmax, b.cmax), std::max(a.cmax, b.cmax)};
}

}  // namespace

TEST_CASE("leaf lists: tolling the k cheapest upgrades leaves the next as entry") {
  SUBCASE("the two-link split: growing edge plus a flat one") {
    TollabilityList list = leaf_list({used("e1", 2, 4), used("e2", 5, 5)});
    CHECK(list.lambda0 == ExtCost(5));
    CHECK(shape(list) ==
          std::vector<std::pair<int, ExtCost>>{{1, ExtCost(5)}, {2, ExtCost::infinity()}});
  }
  SUBCASE("a single used edge starts at eta 0") {
    TollabilityList list = leaf_list({used("e", 2, 4)});
    CHECK(list.lambda0 == ExtCost(4));
    CHECK(shape(list) ==
          std::vector<std::pair<int, ExtCost>>{{0, ExtCost(4)}, {1, ExtCost::infinity()}});
  }
  SUBCASE("an unused bundle constrains nobody") {
    TollabilityList list = leaf_list({idle("a", 3), idle("b", 7)});
    CHECK(list.lambda0 == ExtCost(3));
    CHECK(shape(list) == std::vector<std::pair<int, ExtCost>>{
                             {0, ExtCost(3)}, {1, ExtCost(7)}, {2, ExtCost::infinity()}});
  }
  SUBCASE("upgrades below the resident cost must be tolled away") {
    // Residents pay up to 6; two cheap alternatives (3, 5) would lure them.
    TollabilityList list = leaf_list({used("a", 6, 8), idle("b", 3), idle("c", 5)});
    CHECK(list.lambda0 == ExtCost(6));
    CHECK(list.eta_min() == 2);
    CHECK(shape(list) == std::vector<std::pair<int, ExtCost>>{
                             {2, ExtCost(8)}, {3, ExtCost::infinity()}});
  }
  SUBCASE("empty bundles are rejected") {
    CHECK_THROWS_AS(leaf_list({}), validation_error);
  }
}

TEST_CASE("series composition adds etas and lambdas over exact-sum pairs") {
  TollabilityList two_link = leaf_list({used("e1", 2, 4), used("e2", 5, 5)});
  TollabilityList single = leaf_list({used("e3", 2, 4)});

  TollabilityList joined = compose_series(two_link, single);
  CHECK(joined.lambda0 == ExtCost(9));
  CHECK(shape(joined) ==
        std::vector<std::pair<int, ExtCost>>{{1, ExtCost(9)}, {2, ExtCost::infinity()}});
  // The finite entry must point at the children entries it combined.
  CHECK(joined.entries[0].idx_v == 0);
  CHECK(joined.entries[0].idx_w == 0);

  // A one-entry infinite list caps the composition at a single entry.
  TollabilityList cap;
  cap.lambda0 = ExtCost(0);
  cap.entries = {{0, ExtCost::infinity(), -1, -1}};
  TollabilityList capped = compose_series(two_link, cap);
  CHECK(capped.lambda0 == ExtCost(5));
  CHECK(shape(capped) == std::vector<std::pair<int, ExtCost>>{{1, ExtCost::infinity()}});
}

TEST_CASE("parallel composition takes the best worst-side entry") {
  TollabilityList lv = leaf_list({used("e", 2, 4)});               // lambda0 4
  TollabilityList lw = leaf_list({used("f", 5, 5), idle("g", 6)});  // lambda0 5
  TollabilityList par = compose_parallel(lv, lw, Rational(2), Rational(5));
  CHECK(par.lambda0 == ExtCost(5));
  CHECK(shape(par) == std::vector<std::pair<int, ExtCost>>{
                          {1, ExtCost(5)}, {2, ExtCost(6)}, {3, ExtCost::infinity()}});
  // eta 1: the v side prices its (cheap) edge away, w stays untolled.
  CHECK(par.entries[0].idx_v == 1);
  CHECK(par.entries[0].idx_w == 0);
}

TEST_CASE("list validity checks catch every structural violation") {
  auto entry = [](int eta, ExtCost lambda) { return TollabilityEntry{eta, lambda, -1, -1}; };
  TollabilityList good;
  good.lambda0 = ExtCost(2);
  good.entries = {entry(1, ExtCost(3)), entry(2, ExtCost::infinity())};
  good.check_valid();
  CHECK(good.eta_min() == 1);
  CHECK(good.eta_max() == 2);
  CHECK(good.first_index_reaching(ExtCost(3)) == 0);
  CHECK(good.first_index_reaching(ExtCost(4)) == 1);

  TollabilityList bad = good;
  SUBCASE("empty") {
    bad.entries.clear();
    CHECK_THROWS_AS(bad.check_valid(), internal_error);
  }
  SUBCASE("infinite lambda0") {
    bad.lambda0 = ExtCost::infinity();
    CHECK_THROWS_AS(bad.check_valid(), internal_error);
  }
  SUBCASE("negative eta") {
    bad.entries[0].eta = -1;
    CHECK_THROWS_AS(bad.check_valid(), internal_error);
  }
  SUBCASE("gap in the etas") {
    bad.entries[1].eta = 3;
    CHECK_THROWS_AS(bad.check_valid(), internal_error);
  }
  SUBCASE("decreasing lambda") {
    bad.entries = {entry(1, ExtCost(3)), entry(2, ExtCost(2)), entry(3, ExtCost::infinity())};
    CHECK_THROWS_AS(bad.check_valid(), internal_error);
  }
  SUBCASE("missing infinite tail") {
    bad.entries = {entry(1, ExtCost(3)), entry(2, ExtCost(4))};
    CHECK_THROWS_AS(bad.check_valid(), internal_error);
  }
  SUBCASE("infinity before the end") {
    bad.entries = {entry(1, ExtCost::infinity()), entry(2, ExtCost::infinity())};
    CHECK_THROWS_AS(bad.check_valid(), internal_error);
  }
  SUBCASE("first lambda below lambda0") {
    bad.lambda0 = ExtCost(4);
    CHECK_THROWS_AS(bad.check_valid(), internal_error);
  }
}

TEST_CASE("random compositions keep the invariants and commute") {
  Rng rng(991);
  for (int round = 0; round < 400; ++round) {
    Sub a = random_sub(rng, 2);
    Sub b = random_sub(rng, 2);

    TollabilityList s1 = compose_series(a.list, b.list);
    TollabilityList s2 = compose_series(b.list, a.list);
    s1.check_valid();
    CHECK(s1.lambda0 == s2.lambda0);
    CHECK(shape(s1) == shape(s2));

    TollabilityList p1 = compose_parallel(a.list, b.list, a.cmax, b.cmax);
    TollabilityList p2 = compose_parallel(b.list, a.list, b.cmax, a.cmax);
    p1.check_valid();
    CHECK(p1.lambda0 == p2.lambda0);
    CHECK(shape(p1) == shape(p2));
    CHECK(p1.lambda0 >= ExtCost(std::max(a.cmax, b.cmax)));
  }
}
