#pragma once

#include <vector>

#include "tcvrp/instance.hpp"

namespace tcvrp {

struct Route {
  std::vector<int> nodes;  // 0, ..., 0
  int load = 0;
  double time_min = 0.0;  // arc times plus service times
  double dist_mi = 0.0;

  bool operator==(const Route&) const = default;
};

struct Solution {
  std::vector<Route> routes;
  double vmt_mi = 0.0;
  double vht_min = 0.0;

  int vehicles() const { return static_cast<int>(routes.size()); }
  std::vector<std::vector<int>> sequences() const;
};

// Recomputes per-route load, time and distance from the instance. Throws
// Error(kInput) on node indices outside the instance. Feasibility is not
// checked here; see model::validate.
Solution make_solution(const TcvrpInstance& inst,
                       std::vector<std::vector<int>> routes);

// Route totals for a node sequence starting and ending at the depot.
Route evaluate_route(const TcvrpInstance& inst, std::vector<int> nodes);

}  // namespace tcvrp
