#pragma once

// Shared test fixtures: random instances with triangle-consistent matrices
// and a brute-force TCVRP oracle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "tcvrp/instance.hpp"
#include "tcvrp/matrix.hpp"

namespace fixtures {

// Shortest-path closure in place.
inline void close_paths(tcvrp::Matrix& m) {
  const std::size_t n = m.rows();
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        m(i, j) = std::min(m(i, j), m(i, k) + m(k, j));
}

struct RandomSpec {
  int customers = 6;
  bool range_limit = true;  // BEV style D-bar
  double tightness = 0.5;   // 0: loose limits, 1: tight
};

// Customers scattered over a 10 x 10 mile square; asymmetric travel via
// direction-dependent detours, closed under shortest paths.
inline tcvrp::TcvrpInstance random_instance(std::uint64_t seed,
                                            const RandomSpec& spec) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, 10.0);
  std::uniform_real_distribution<double> detour(1.0, 1.4);
  std::uniform_int_distribution<int> pkgs(1, 6);
  std::uniform_real_distribution<double> svc(2.0, 20.0);
  const int n = spec.customers;
  const auto nodes = static_cast<std::size_t>(n + 1);
  std::vector<double> x(nodes), y(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    x[i] = coord(rng);
    y[i] = coord(rng);
  }
  tcvrp::Matrix d = tcvrp::Matrix::square(nodes);
  tcvrp::Matrix t = tcvrp::Matrix::square(nodes);
  for (std::size_t i = 0; i < nodes; ++i) {
    for (std::size_t j = 0; j < nodes; ++j) {
      if (i == j) continue;
      const double base = std::abs(x[i] - x[j]) + std::abs(y[i] - y[j]);
      d(i, j) = base * detour(rng);
      t(i, j) = d(i, j) / 25.0 * 60.0 * detour(rng);
    }
  }
  close_paths(d);
  close_paths(t);
  std::vector<int> demand(nodes, 0);
  std::vector<double> service(nodes, 0.0);
  int total = 0;
  double max_rt = 0.0, max_rd = 0.0, total_t = 0.0;
  for (std::size_t i = 1; i < nodes; ++i) {
    demand[i] = pkgs(rng);
    service[i] = svc(rng);
    total += demand[i];
    max_rt = std::max(max_rt, t(0, i) + service[i] + t(i, 0));
    max_rd = std::max(max_rd, d(0, i) + d(i, 0));
    total_t += service[i] + t(0, i);
  }
  const double tight = spec.tightness;
  const int q = std::max(*std::max_element(demand.begin(), demand.end()),
                         static_cast<int>(std::ceil(total * (1.0 - 0.7 * tight))));
  const double tbar = std::max(max_rt, total_t * (1.0 - 0.75 * tight));
  std::optional<double> dbar;
  if (spec.range_limit) {
    dbar = std::max(max_rd, 2.5 * max_rd * (1.0 - 0.5 * tight));
  }
  return tcvrp::TcvrpInstance(std::move(demand), std::move(service), std::move(t),
                              std::move(d), q, tbar, dbar);
}

// Optimal cost by enumerating every ordered customer subset as a route and
// combining routes over all set partitions. +inf when infeasible.
inline double brute_force_optimum(const tcvrp::TcvrpInstance& inst) {
  const int n = inst.customers();
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t full = (std::size_t{1} << n) - 1;
  std::vector<double> route(full + 1, inf);
  route[0] = 0.0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    std::vector<int> members;
    int load = 0;
    for (int c = 0; c < n; ++c) {
      if (mask >> c & 1U) {
        members.push_back(c + 1);
        load += inst.demand(c + 1);
      }
    }
    if (load > inst.capacity()) continue;
    do {
      double t = 0.0, d = 0.0;
      int prev = 0;
      for (int v : members) {
        t += inst.time(prev, v) + inst.service(v);
        d += inst.dist(prev, v);
        prev = v;
      }
      t += inst.time(prev, 0);
      d += inst.dist(prev, 0);
      if (t > inst.max_time() + 1e-9) continue;
      if (inst.max_dist() && d > *inst.max_dist() + 1e-9) continue;
      route[mask] = std::min(route[mask], d);
    } while (std::next_permutation(members.begin(), members.end()));
  }
  std::vector<double> best(full + 1, inf);
  best[0] = 0.0;
  for (std::size_t mask = 1; mask <= full; ++mask) {
    const std::size_t low = mask & (~mask + 1);
    for (std::size_t sub = mask; sub; sub = (sub - 1) & mask) {
      if (!(sub & low) || route[sub] == inf) continue;
      best[mask] = std::min(best[mask], route[sub] + best[mask ^ sub]);
    }
  }
  return best[full];
}

}  // namespace fixtures
