#include <doctest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "tcvrp/assign.hpp"
#include "tcvrp/error.hpp"

using namespace tcvrp;
using namespace tcvrp::assign;

namespace {

// Minimum-cost capacitated assignment by exhaustive search.
double brute_force(const std::vector<Customer>& cs, const std::vector<Depot>& ds) {
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> load(ds.size(), 0);
  std::function<void(std::size_t, double)> rec = [&](std::size_t c, double acc) {
    if (acc >= best) return;
    if (c == cs.size()) {
      best = acc;
      return;
    }
    for (std::size_t d = 0; d < ds.size(); ++d) {
      if (load[d] == ds[d].capacity) continue;
      ++load[d];
      rec(c + 1, acc + manhattan(cs[c].location, ds[d].location));
      --load[d];
    }
  };
  rec(0, 0.0);
  return best;
}

}  // namespace

TEST_CASE("provider split validation") {
  CHECK_NOTHROW(check_split({{"A", 0.5}, {"B", 0.5}}));
  CHECK_THROWS_AS(check_split({}), Error);
  CHECK_THROWS_AS(check_split({{"A", 0.5}, {"B", 0.4}}), Error);
  CHECK_THROWS_AS(check_split({{"A", 1.2}, {"B", -0.2}}), Error);
  CHECK_THROWS_AS(check_split({{"A", 0.5}, {"A", 0.5}}), Error);
}

TEST_CASE("missing provider share is spread equally") {
  const ProviderSplit s{{"Amazon", 0.21}, {"FedEx", 0.16}, {"UPS", 0.24}, {"USPS", 0.39}};
  const ProviderSplit r = redistribute_missing(s, "FedEx");
  REQUIRE(r.size() == 3);
  CHECK(r[0].provider == "Amazon");
  CHECK(r[0].share == doctest::Approx(0.21 + 0.16 / 3));
  CHECK(r[1].share == doctest::Approx(0.24 + 0.16 / 3));
  CHECK(r[2].share == doctest::Approx(0.39 + 0.16 / 3));
  CHECK_THROWS_AS(redistribute_missing(s, "DHL"), Error);
  CHECK_THROWS_AS(redistribute_missing({{"A", 1.0}}, "A"), Error);
}

TEST_CASE("split_by_provider partitions customers and follows the shares") {
  std::vector<Customer> cs;
  for (int i = 0; i < 20000; ++i) cs.push_back({i, {0, 0}, 1});
  const ProviderSplit s{{"A", 0.2}, {"B", 0.0}, {"C", 0.3}, {"D", 0.5}};
  const auto out = split_by_provider(cs, s, 9);
  CHECK_FALSE(out.contains("B"));
  std::size_t total = 0;
  for (const auto& [p, list] : out) {
    total += list.size();
    for (std::size_t i = 1; i < list.size(); ++i) CHECK(list[i - 1].id < list[i].id);
  }
  CHECK(total == cs.size());
  CHECK(out.at("A").size() / 20000.0 == doctest::Approx(0.2).epsilon(0.05));
  CHECK(out.at("D").size() / 20000.0 == doctest::Approx(0.5).epsilon(0.05));
  CHECK(split_by_provider(cs, s, 9) == out);
}

TEST_CASE("default depot capacity") {
  CHECK(default_depot_capacity(100, 3) == 40);
  CHECK(default_depot_capacity(10, 1, 1.0) == 10);
  CHECK_THROWS_AS(default_depot_capacity(10, 0), Error);
}

TEST_CASE("depot assignment is optimal against exhaustive search") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> coord(0.0, 5.0);
  std::uniform_int_distribution<int> ncust(1, 8), ndep(1, 3);
  for (int trial = 0; trial < 150; ++trial) {
    const int n = ncust(rng), m = ndep(rng);
    std::vector<Customer> cs;
    for (int i = 0; i < n; ++i) cs.push_back({i, {coord(rng), coord(rng)}, 1});
    std::vector<Depot> ds;
    std::uniform_int_distribution<int> cap(0, n);
    int total = 0;
    for (int d = 0; d < m; ++d) {
      const int c = d + 1 == m ? std::max(cap(rng), n - total) : cap(rng);
      ds.push_back({100 + d, "P", {coord(rng), coord(rng)}, c});
      total += c;
    }
    const DepotAssignment a = assign_to_depots(cs, ds);
    CHECK(a.total_distance_mi == doctest::Approx(brute_force(cs, ds)));
    std::size_t seen = 0;
    for (const Depot& d : ds) {
      REQUIRE(a.customers_by_depot.contains(d.id));
      const auto& list = a.customers_by_depot.at(d.id);
      CHECK(static_cast<int>(list.size()) <= d.capacity);
      seen += list.size();
    }
    CHECK(seen == cs.size());
  }
}

TEST_CASE("assignment fails when capacity is short") {
  std::vector<Customer> cs{{1, {0, 0}, 1}, {2, {1, 1}, 1}};
  std::vector<Depot> ds{{1, "P", {0, 0}, 1}};
  try {
    assign_to_depots(cs, ds);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
  }
  CHECK_THROWS_AS(assign_to_depots(cs, std::vector<Depot>{}), Error);
}

TEST_CASE("split examples") {
  std::vector<Customer> cs;
  for (int i = 0; i < 100000; ++i) cs.push_back({i, {0.0, 0.0}, 1});
  const auto all = split_by_provider(std::span<const Customer>(cs.data(), 50), {{"A", 1.0}}, 3);
  REQUIRE(all.size() == 1);
  CHECK(all.at("A").size() == 50);

  const ProviderSplit shares{{"A", 0.21}, {"B", 0.16}, {"C", 0.24}, {"D", 0.39}};
  const auto parts = split_by_provider(cs, shares, 11);
  for (const auto& [p, s] : shares) {
    CHECK(std::abs(static_cast<double>(parts.at(p).size()) / 1e5 - s) <= 0.01);
  }
}

TEST_CASE("assignment examples") {
  const std::vector<Depot> ds{{1, "A", {1.0, 0.0}, 1}, {2, "A", {9.0, 0.0}, 1}};
  const std::vector<Customer> cs{{10, {0.0, 0.0}, 1}, {11, {10.0, 0.0}, 1}};
  const DepotAssignment a = assign_to_depots(cs, ds);
  CHECK(a.customers_by_depot.at(1) == std::vector<std::int64_t>{10});
  CHECK(a.customers_by_depot.at(2) == std::vector<std::int64_t>{11});
  CHECK(a.total_distance_mi == doctest::Approx(2.0));

  const std::vector<Depot> single{{5, "A", {0.0, 0.0}, 2}};
  CHECK(assign_to_depots(cs, single).customers_by_depot.at(5).size() == 2);

  // 20 customers, 3 depots: dynamic program over depot loads as the oracle.
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Customer> many;
    for (int i = 0; i < 20; ++i) many.push_back({i, {u(rng), u(rng)}, 1});
    std::vector<Depot> three;
    for (int d = 0; d < 3; ++d) three.push_back({d, "A", {u(rng), u(rng)}, 8});
    const double inf = std::numeric_limits<double>::infinity();
    // f[l0][l1]: best cost so far with l0 / l1 customers at depots 0 / 1.
    std::vector<std::vector<double>> f(9, std::vector<double>(9, inf));
    f[0][0] = 0.0;
    for (int c = 0; c < 20; ++c) {
      std::vector<std::vector<double>> g(9, std::vector<double>(9, inf));
      for (int l0 = 0; l0 <= 8; ++l0)
        for (int l1 = 0; l1 <= 8; ++l1) {
          if (f[l0][l1] == inf) continue;
          const int l2 = c - l0 - l1;
          const auto cost = [&](int d) {
            return manhattan(many[c].location, three[d].location);
          };
          if (l0 < 8) g[l0 + 1][l1] = std::min(g[l0 + 1][l1], f[l0][l1] + cost(0));
          if (l1 < 8) g[l0][l1 + 1] = std::min(g[l0][l1 + 1], f[l0][l1] + cost(1));
          if (l2 < 8) g[l0][l1] = std::min(g[l0][l1], f[l0][l1] + cost(2));
        }
      f = std::move(g);
    }
    double best = inf;
    for (const auto& row : f)
      for (double v : row) best = std::min(best, v);
    CHECK(assign_to_depots(many, three).total_distance_mi == doctest::Approx(best));
  }
}
