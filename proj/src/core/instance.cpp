#include "tcvrp/instance.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "tcvrp/error.hpp"
#include "tcvrp/solution.hpp"

namespace tcvrp {

namespace {

void check_matrix(const Matrix& m, std::size_t n, const char* what) {
  if (m.rows() != n || m.cols() != n) {
    fail(ErrorCode::kInput, std::string(what) + " matrix must be " +
                                std::to_string(n) + "x" + std::to_string(n));
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = m(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        fail(ErrorCode::kInput, std::string(what) +
                                    " entries must be finite and nonnegative");
      }
    }
  }
}

}  // namespace

TcvrpInstance::TcvrpInstance(std::vector<int> demands,
                             std::vector<double> service_min, Matrix time_min,
                             Matrix dist_mi, int capacity, double max_time_min,
                             std::optional<double> max_dist_mi)
    : demand_(std::move(demands)),
      service_(std::move(service_min)),
      time_(std::move(time_min)),
      dist_(std::move(dist_mi)),
      capacity_(capacity),
      max_time_(max_time_min),
      max_dist_(max_dist_mi) {
  const std::size_t n = demand_.size();
  if (n < 1) fail(ErrorCode::kInput, "instance needs at least the depot");
  if (service_.size() != n) {
    fail(ErrorCode::kInput, "service times and demands differ in length");
  }
  check_matrix(time_, n, "time");
  check_matrix(dist_, n, "distance");
  if (capacity_ < 1) fail(ErrorCode::kInput, "capacity Q must be >= 1");
  if (!(max_time_ > 0.0)) fail(ErrorCode::kInput, "Tbar must be positive");
  if (max_dist_ && !(*max_dist_ > 0.0)) {
    fail(ErrorCode::kInput, "Dbar must be positive when present");
  }
  if (demand_[0] != 0 || service_[0] != 0.0) {
    fail(ErrorCode::kInput, "depot entry of N and S must be zero");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (time_(i, i) != 0.0 || dist_(i, i) != 0.0) {
      fail(ErrorCode::kInput, "matrix diagonals must be zero");
    }
  }
  for (int i = 1; i < nodes(); ++i) {
    std::ostringstream msg;
    msg << "node " << i << ": ";
    if (demand(i) < 1) {
      msg << "N_i = " << demand(i) << " must be >= 1";
      fail(ErrorCode::kInput, msg.str());
    }
    if (!(service(i) >= 0.0) || !std::isfinite(service(i))) {
      msg << "S_i must be finite and nonnegative";
      fail(ErrorCode::kInput, msg.str());
    }
    if (demand(i) > capacity_) {
      msg << "N_i = " << demand(i) << " exceeds Q = " << capacity_;
      fail(ErrorCode::kInfeasible, msg.str());
    }
    const double round_trip_time = time(0, i) + service(i) + time(i, 0);
    if (round_trip_time > max_time_) {
      msg << "round trip takes " << round_trip_time << " min > Tbar = "
          << max_time_;
      fail(ErrorCode::kInfeasible, msg.str());
    }
    if (max_dist_) {
      const double round_trip_dist = dist(0, i) + dist(i, 0);
      if (round_trip_dist > *max_dist_) {
        msg << "round trip covers " << round_trip_dist << " mi > Dbar = "
            << *max_dist_;
        fail(ErrorCode::kInfeasible, msg.str());
      }
    }
  }
}

int TcvrpInstance::total_demand() const {
  return std::accumulate(demand_.begin(), demand_.end(), 0);
}

TcvrpInstance TcvrpInstance::with_limits(
    int capacity, double max_time_min,
    std::optional<double> max_dist_mi) const {
  return TcvrpInstance(demand_, service_, time_, dist_, capacity, max_time_min,
                       max_dist_mi);
}

std::vector<std::vector<int>> Solution::sequences() const {
  std::vector<std::vector<int>> out;
  out.reserve(routes.size());
  for (const Route& r : routes) out.push_back(r.nodes);
  return out;
}

Route evaluate_route(const TcvrpInstance& inst, std::vector<int> nodes) {
  Route r;
  for (int v : nodes) {
    if (v < 0 || v >= inst.nodes()) {
      fail(ErrorCode::kInput, "route mentions unknown node " + std::to_string(v));
    }
  }
  for (std::size_t p = 0; p < nodes.size(); ++p) {
    r.load += inst.demand(nodes[p]);
    r.time_min += inst.service(nodes[p]);
    if (p + 1 < nodes.size()) {
      r.time_min += inst.time(nodes[p], nodes[p + 1]);
      r.dist_mi += inst.dist(nodes[p], nodes[p + 1]);
    }
  }
  r.nodes = std::move(nodes);
  return r;
}

Solution make_solution(const TcvrpInstance& inst,
                       std::vector<std::vector<int>> routes) {
  Solution s;
  s.routes.reserve(routes.size());
  for (auto& seq : routes) {
    s.routes.push_back(evaluate_route(inst, std::move(seq)));
    s.vmt_mi += s.routes.back().dist_mi;
    s.vht_min += s.routes.back().time_min;
  }
  return s;
}

}  // namespace tcvrp
