#include <doctest.h>

#include <algorithm>
#include <limits>
#include <random>

#include "tcvrp/aggregate.hpp"
#include "tcvrp/error.hpp"

using namespace tcvrp;
using namespace tcvrp::aggregate;

namespace {

// 4 x 4 two-way grid with 0.5 mile blocks; arc ids in insertion order.
network::RoadNetwork grid() {
  std::vector<network::Vertex> vs;
  std::vector<network::Arc> arcs;
  auto id = [](int r, int c) { return static_cast<network::VertexId>(r * 4 + c + 1); };
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) vs.push_back({id(r, c), {0.5 * c, 0.5 * r}});
  network::ArcId next = 1;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) {
      if (c + 1 < 4) {
        arcs.push_back({next++, id(r, c), id(r, c + 1), 0.5, 25.0});
        arcs.push_back({next++, id(r, c + 1), id(r, c), 0.5, 35.0});
      }
      if (r + 1 < 4) {
        arcs.push_back({next++, id(r, c), id(r + 1, c), 0.5, 25.0});
        arcs.push_back({next++, id(r + 1, c), id(r, c), 0.5, 30.0});
      }
    }
  return network::RoadNetwork(std::move(vs), std::move(arcs));
}

double perm_tour(const std::vector<Point>& pts, double mph) {
  std::vector<int> order;
  for (std::size_t i = 1; i < pts.size(); ++i) order.push_back(static_cast<int>(i));
  double best = std::numeric_limits<double>::infinity();
  do {
    double t = 0.0;
    int prev = 0;
    for (int v : order) {
      t += minutes_at(manhattan(pts[prev], pts[v]), mph);
      prev = v;
    }
    t += minutes_at(manhattan(pts[prev], pts[0]), mph);
    best = std::min(best, t);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace

TEST_CASE("customers attach to the nearest arc midpoint") {
  const auto net = grid();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> coord(-0.2, 1.7);
  std::vector<assign::Customer> cs;
  for (int i = 0; i < 300; ++i) cs.push_back({i, {coord(rng), coord(rng)}, 1 + i % 3});
  const auto sites = cluster_customers(cs, net);

  int members = 0, demand = 0;
  for (std::size_t s = 0; s < sites.size(); ++s) {
    if (s > 0) CHECK(sites[s - 1].id < sites[s].id);
    members += static_cast<int>(sites[s].members.size());
    demand += sites[s].demand;
    for (std::size_t k = 0; k < sites[s].members.size(); ++k) {
      const Point p = sites[s].member_locations[k];
      // Exhaustive scan over every arc midpoint.
      double best = std::numeric_limits<double>::infinity();
      network::ArcId best_arc = -1;
      network::VertexId head = -1;
      for (std::size_t a = 0; a < net.arcs().size(); ++a) {
        const auto& arc = net.arcs()[a];
        const Point m = midpoint(net.vertices()[net.arc_tail(a)].pos,
                                 net.vertices()[net.arc_head(a)].pos);
        const double d = manhattan(p, m);
        if (d < best || (d == best && arc.id < best_arc)) {
          best = d;
          best_arc = arc.id;
          head = arc.to;
        }
      }
      CHECK(sites[s].id == best_arc);
      CHECK(sites[s].vertex == head);
      CHECK(manhattan(p, sites[s].anchor) == doctest::Approx(best));
    }
  }
  CHECK(members == 300);
  int expect = 0;
  for (const auto& c : cs) expect += c.demand;
  CHECK(demand == expect);
}

TEST_CASE("attach breaks ties toward the smaller arc id") {
  const auto net = grid();
  // A vertex equidistant from the midpoints of both directions of each arc.
  const Attachment a = attach(net, {0.25, 0.0});
  CHECK(a.arc == 1);
  CHECK(a.vertex == 2);
  CHECK(a.anchor == Point{0.25, 0.0});
  CHECK_THROWS_AS(attach(network::RoadNetwork({{1, {0, 0}}}, {}), {0, 0}), Error);
}

TEST_CASE("intra tour matches a permutation oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(0.0, 0.3);
  for (int members = 1; members <= 7; ++members) {
    for (int trial = 0; trial < 10; ++trial) {
      SuperLocation s;
      s.anchor = {0.1, 0.1};
      std::vector<Point> pts{s.anchor};
      for (int m = 0; m < members; ++m) {
        const Point p{coord(rng), coord(rng)};
        s.member_locations.push_back(p);
        s.members.push_back(m);
        pts.push_back(p);
      }
      const IntraTour t = intra_tour(s);
      CHECK(t.exact);
      CHECK(t.time_min == doctest::Approx(perm_tour(pts, kIntraSpeedMph)));
      CHECK(t.dist_mi == doctest::Approx(t.time_min / 60.0 * kIntraSpeedMph));
    }
  }
  CHECK_THROWS_AS(intra_tour(SuperLocation{}), Error);
}

TEST_CASE("large sites fall back to the heuristic tour") {
  SuperLocation s;
  for (int m = 0; m < 20; ++m) {
    s.members.push_back(m);
    s.member_locations.push_back({0.01 * m, 0.02 * (m % 5)});
  }
  const IntraTour t = intra_tour(s);
  CHECK_FALSE(t.exact);
  CHECK(t.time_min > 0.0);
}

TEST_CASE("instance construction charges intra distance on departure") {
  const auto net = grid();
  std::vector<assign::Customer> cs{{1, {0.26, 0.02}, 2}, {2, {0.22, 0.03}, 1},
                                   {3, {1.5, 1.24}, 4}};
  auto sites = cluster_customers(cs, net);
  REQUIRE(sites.size() == 2);
  compute_intra_tours(sites);
  const network::VertexId depot = 6;
  std::vector<network::VertexId> vs{depot};
  for (const auto& s : sites) vs.push_back(s.vertex);
  const auto tm = network::shortest_paths(net, vs, vs);
  const InstanceParams params{120, 600.0, 2.0, 80.0};
  const TcvrpInstance inst = build_instance(depot, sites, tm, params);
  REQUIRE(inst.customers() == 2);
  CHECK(inst.demand(0) == 0);
  CHECK(inst.service(0) == 0.0);
  for (int i = 1; i <= 2; ++i) {
    const auto& s = sites[static_cast<std::size_t>(i - 1)];
    CHECK(inst.demand(i) == s.demand);
    CHECK(inst.service(i) == doctest::Approx(s.intra_time_min + 2.0 * s.demand));
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      if (i == j) continue;
      const double intra = i == 0 ? 0.0 : sites[static_cast<std::size_t>(i - 1)].intra_dist_mi;
      CHECK(inst.time(i, j) == doctest::Approx(tm.time_min(tm.row_of(vs[i]), tm.col_of(vs[j]))));
      CHECK(inst.dist(i, j) ==
            doctest::Approx(tm.dist_mi(tm.row_of(vs[i]), tm.col_of(vs[j])) + intra));
    }
  }
  CHECK(inst.capacity() == 120);
  CHECK(inst.max_dist().value() == 80.0);
}

TEST_CASE("aggregation examples") {
  const auto net = grid();
  // Both customers sit nearest the midpoint (0.25, 0) of arc 1.
  const std::vector<assign::Customer> pair{{1, {0.25, 0.01}, 1}, {2, {0.24, 0.0}, 1}};
  auto sites = cluster_customers(pair, net);
  REQUIRE(sites.size() == 1);
  CHECK(sites[0].demand == 2);
  CHECK(sites[0].id == 1);
  CHECK(sites[0].vertex == 2);

  // A lone member 0.25 mi from the anchor: 0.5 mi walked at 15 mph.
  const std::vector<assign::Customer> lone{{3, {0.25, 0.25}, 1}};
  auto one = cluster_customers(lone, net);
  REQUIRE(one.size() == 1);
  const IntraTour t = intra_tour(one[0]);
  CHECK(t.dist_mi == doctest::Approx(0.5));
  CHECK(t.time_min == doctest::Approx(2.0));

  const std::vector<assign::Customer> at_anchor{{4, {0.25, 0.0}, 1}};
  auto zero = cluster_customers(at_anchor, net);
  CHECK(intra_tour(zero[0]).time_min == 0.0);

  // S = intra time + N * P = 2 + 3 * 2.
  SuperLocation s;
  s.id = 1;
  s.vertex = 2;
  s.demand = 3;
  s.intra_time_min = 2.0;
  s.intra_dist_mi = 0.5;
  const std::vector<network::VertexId> vs{1, 2};
  const auto tm = network::shortest_paths(net, vs, vs);
  const std::vector<SuperLocation> sl{s};
  const TcvrpInstance inst = build_instance(1, sl, tm, {120, 600.0, 2.0, std::nullopt});
  CHECK(inst.service(1) == doctest::Approx(8.0));
  CHECK(inst.dist(1, 0) == doctest::Approx(0.5 + 0.5));
  CHECK(inst.dist(0, 1) == doctest::Approx(0.5));
}
