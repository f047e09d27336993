#include <doctest.h>

#include <limits>
#include <random>

#include "tcvrp/error.hpp"
#include "tcvrp/network.hpp"

using namespace tcvrp;
using namespace tcvrp::network;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Random sparse digraph on `n` vertices: a directed ring (strongly connected)
// plus extra random arcs, some parallel.
RoadNetwork random_network(std::uint64_t seed, int n, int extra) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> len(0.05, 1.0);
  std::uniform_real_distribution<double> speed(15.0, 45.0);
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::vector<Vertex> vs;
  for (int i = 0; i < n; ++i) vs.push_back({100 + i, {double(i), 0.0}});
  std::vector<Arc> arcs;
  ArcId next = 1;
  for (int i = 0; i < n; ++i) {
    arcs.push_back({next++, 100 + i, 100 + (i + 1) % n, len(rng), speed(rng)});
  }
  for (int e = 0; e < extra; ++e) {
    const int a = pick(rng), b = pick(rng);
    if (a == b) continue;
    arcs.push_back({next++, 100 + a, 100 + b, len(rng), speed(rng)});
  }
  return RoadNetwork(std::move(vs), std::move(arcs));
}

struct Label {
  double t = kInf;
  double d = kInf;
};

bool less(const Label& a, const Label& b) {
  return a.t < b.t || (a.t == b.t && a.d < b.d);
}

// Floyd-Warshall over (time, distance) labels compared lexicographically.
std::vector<std::vector<Label>> floyd(const RoadNetwork& net) {
  const std::size_t n = net.vertices().size();
  std::vector<std::vector<Label>> m(n, std::vector<Label>(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = {0.0, 0.0};
  for (std::size_t a = 0; a < net.arcs().size(); ++a) {
    const Arc& arc = net.arcs()[a];
    Label l{arc.time_min(), arc.length_mi};
    auto& cell = m[net.arc_tail(a)][net.arc_head(a)];
    if (less(l, cell)) cell = l;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        Label via{m[i][k].t + m[k][j].t, m[i][k].d + m[k][j].d};
        if (less(via, m[i][j])) m[i][j] = via;
      }
  return m;
}

}  // namespace

TEST_CASE("network construction rejects malformed input") {
  std::vector<Vertex> vs{{1, {0, 0}}, {2, {1, 0}}};
  CHECK_THROWS_AS(RoadNetwork(vs, {{1, 1, 3, 1.0, 25.0}}), Error);
  CHECK_THROWS_AS(RoadNetwork(vs, {{1, 1, 1, 1.0, 25.0}}), Error);
  CHECK_THROWS_AS(RoadNetwork(vs, {{1, 1, 2, 0.0, 25.0}}), Error);
  CHECK_THROWS_AS(RoadNetwork(vs, {{1, 1, 2, 1.0, -3.0}}), Error);
  CHECK_THROWS_AS(RoadNetwork(vs, {{1, 1, 2, 1.0, 25.0}, {1, 2, 1, 1.0, 25.0}}),
                  Error);
  CHECK_THROWS_AS(RoadNetwork({{1, {0, 0}}, {1, {1, 0}}}, {}), Error);
  const RoadNetwork ok(vs, {{7, 1, 2, 1.0, 30.0}});
  CHECK(ok.vertex_index(2) == 1);
  CHECK_THROWS_AS(ok.vertex_index(9), Error);
  CHECK(ok.arcs()[0].time_min() == doctest::Approx(2.0));
}

TEST_CASE("shortest paths match a Floyd-Warshall oracle") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const RoadNetwork net = random_network(seed, 25, 60);
    const auto oracle = floyd(net);
    std::vector<VertexId> ids;
    for (const auto& v : net.vertices()) ids.push_back(v.id);
    const TravelMatrices tm = shortest_paths(net, ids, ids);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      for (std::size_t j = 0; j < ids.size(); ++j) {
        CHECK(tm.time_min(i, j) == doctest::Approx(oracle[i][j].t).epsilon(1e-12));
        CHECK(tm.dist_mi(i, j) == doctest::Approx(oracle[i][j].d).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("tree paths are consistent with their labels") {
  const RoadNetwork net = random_network(77, 30, 80);
  const PathTree tree = shortest_path_tree(net, 105);
  for (const auto& v : net.vertices()) {
    const auto path = tree_path(net, tree, v.id);
    double t = 0.0, d = 0.0;
    VertexId at = 105;
    for (ArcId id : path) {
      const Arc* arc = nullptr;
      for (const auto& a : net.arcs()) {
        if (a.id == id) arc = &a;
      }
      REQUIRE(arc != nullptr);
      CHECK(arc->from == at);
      at = arc->to;
      t += arc->time_min();
      d += arc->length_mi;
    }
    CHECK(at == v.id);
    const std::size_t k = net.vertex_index(v.id);
    CHECK(t == doctest::Approx(tree.time_min[k]));
    CHECK(d == doctest::Approx(tree.dist_mi[k]));
  }
}

TEST_CASE("ties break on distance, then on the arc-id sequence") {
  // 1 -> 2 -> 4 and 1 -> 3 -> 4 take equal time; the second is shorter.
  std::vector<Vertex> vs{{1, {0, 0}}, {2, {1, 0}}, {3, {0, 1}}, {4, {1, 1}}};
  {
    const RoadNetwork net(vs, {{10, 1, 2, 1.0, 30.0},
                               {11, 2, 4, 1.0, 30.0},
                               {12, 1, 3, 0.5, 15.0},
                               {13, 3, 4, 1.0, 30.0}});
    const auto tree = shortest_path_tree(net, 1);
    CHECK(tree_path(net, tree, 4) == std::vector<ArcId>{12, 13});
    CHECK(tree.dist_mi[net.vertex_index(4)] == doctest::Approx(1.5));
  }
  {
    // Identical time and distance: the smaller id sequence wins, whichever
    // order the arcs are listed in.
    const RoadNetwork net(vs, {{21, 1, 3, 1.0, 30.0},
                               {22, 3, 4, 1.0, 30.0},
                               {20, 1, 2, 1.0, 30.0},
                               {23, 2, 4, 1.0, 30.0}});
    const auto tree = shortest_path_tree(net, 1);
    CHECK(tree_path(net, tree, 4) == std::vector<ArcId>{20, 23});
  }
  {
    // Parallel arcs with identical labels.
    const RoadNetwork net({{1, {0, 0}}, {2, {1, 0}}},
                          {{9, 1, 2, 1.0, 30.0}, {4, 1, 2, 1.0, 30.0}});
    const auto tree = shortest_path_tree(net, 1);
    CHECK(tree_path(net, tree, 2) == std::vector<ArcId>{4});
  }
}

TEST_CASE("unreachable targets and bad vertex lists are reported") {
  const RoadNetwork net({{1, {0, 0}}, {2, {1, 0}}, {3, {2, 0}}},
                        {{1, 1, 2, 1.0, 30.0}, {2, 2, 1, 1.0, 30.0}});
  const std::vector<VertexId> from{1}, to{3}, none;
  try {
    shortest_paths(net, from, to);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kInfeasible);
  }
  CHECK_THROWS_AS(shortest_paths(net, none, to), Error);
  const std::vector<VertexId> bad{42};
  CHECK_THROWS_AS(shortest_paths(net, from, bad), Error);
  const auto tree = shortest_path_tree(net, 1);
  CHECK_THROWS_AS(tree_path(net, tree, 3), Error);
}

TEST_CASE("matrix lookup by vertex id") {
  const RoadNetwork net = random_network(5, 8, 10);
  const std::vector<VertexId> src{103, 101}, dst{102, 107, 101};
  const auto tm = shortest_paths(net, src, dst);
  CHECK(tm.row_of(101) == 1);
  CHECK(tm.col_of(107) == 1);
  CHECK_THROWS_AS(tm.row_of(102), Error);
  CHECK(tm.time_min(tm.row_of(101), tm.col_of(101)) == 0.0);
}

TEST_CASE("single arc example") {
  const RoadNetwork net({{1, {0.0, 0.0}}, {2, {2.0, 0.0}}}, {{7, 1, 2, 2.0, 30.0}});
  const std::vector<VertexId> from{1}, to{1, 2};
  const TravelMatrices m = shortest_paths(net, from, to);
  CHECK(m.time_min(0, 1) == doctest::Approx(4.0));
  CHECK(m.dist_mi(0, 1) == doctest::Approx(2.0));
  CHECK(m.time_min(0, 0) == 0.0);
  const PathTree back = shortest_path_tree(net, 2);
  CHECK(back.time_min[net.vertex_index(1)] == kInf);
  CHECK(back.time_min[net.vertex_index(2)] == 0.0);
  const std::vector<VertexId> both{1, 2};
  CHECK_THROWS_AS(shortest_paths(net, both, both), Error);
  CHECK(tree_path(net, shortest_path_tree(net, 1), 2) == std::vector<ArcId>{7});
}

TEST_CASE("shortest-time matrices satisfy the triangle inequality") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RoadNetwork net = random_network(seed, 15, 30);
    std::vector<VertexId> ids;
    for (const auto& v : net.vertices()) ids.push_back(v.id);
    const TravelMatrices m = shortest_paths(net, ids, ids);
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = 0; j < ids.size(); ++j)
        for (std::size_t k = 0; k < ids.size(); ++k)
          CHECK(m.time_min(i, j) <= m.time_min(i, k) + m.time_min(k, j) + 1e-9);
  }
}
