#include "tcvrp/aggregate.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "tcvrp/error.hpp"
#include "tcvrp/tsp.hpp"

namespace tcvrp::aggregate {

namespace {

struct Midpoint {
  network::ArcId arc;
  Point pos;
  network::VertexId head;
};

std::vector<Midpoint> midpoints(const network::RoadNetwork& net) {
  std::vector<Midpoint> out;
  out.reserve(net.arcs().size());
  for (std::size_t a = 0; a < net.arcs().size(); ++a) {
    const auto& arc = net.arcs()[a];
    out.push_back({arc.id,
                   midpoint(net.vertices()[net.arc_tail(a)].pos,
                            net.vertices()[net.arc_head(a)].pos),
                   arc.to});
  }
  return out;
}

const Midpoint& nearest(const std::vector<Midpoint>& mids, Point p) {
  const Midpoint* best = nullptr;
  double best_d = std::numeric_limits<double>::infinity();
  for (const Midpoint& m : mids) {
    const double d = manhattan(p, m.pos);
    if (d < best_d || (d == best_d && m.arc < best->arc)) {
      best = &m;
      best_d = d;
    }
  }
  return *best;
}

}  // namespace

Attachment attach(const network::RoadNetwork& net, Point p) {
  if (net.arcs().empty()) fail(ErrorCode::kInput, "network has no arcs");
  const auto mids = midpoints(net);
  const Midpoint& m = nearest(mids, p);
  return {m.arc, m.pos, m.head};
}

std::vector<SuperLocation> cluster_customers(
    std::span<const assign::Customer> customers,
    const network::RoadNetwork& net) {
  if (net.arcs().empty()) fail(ErrorCode::kInput, "network has no arcs");
  const auto mids = midpoints(net);
  std::map<network::ArcId, SuperLocation> by_arc;
  for (const auto& c : customers) {
    const Midpoint& m = nearest(mids, c.location);
    auto [it, fresh] = by_arc.try_emplace(m.arc);
    SuperLocation& s = it->second;
    if (fresh) {
      s.id = m.arc;
      s.anchor = m.pos;
      s.vertex = m.head;
    }
    s.members.push_back(c.id);
    s.member_locations.push_back(c.location);
    s.demand += c.demand;
  }
  std::vector<SuperLocation> out;
  out.reserve(by_arc.size());
  for (auto& [arc, s] : by_arc) out.push_back(std::move(s));
  return out;
}

IntraTour intra_tour(const SuperLocation& site, double speed_mph) {
  if (site.member_locations.empty()) {
    fail(ErrorCode::kInput, "super-location has no members");
  }
  std::vector<Point> pts{site.anchor};
  pts.insert(pts.end(), site.member_locations.begin(),
             site.member_locations.end());
  const std::size_t n = pts.size();
  Matrix cost = Matrix::square(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j) cost(i, j) = minutes_at(manhattan(pts[i], pts[j]), speed_mph);
    }
  }
  const tsp::Tour tour = n <= tsp::kMaxExactSize
                             ? tsp::solve_exact(cost)
                             : tsp::solve_heuristic(cost, {.seed = static_cast<std::uint64_t>(site.id) + 1});
  return {tour.cost, tour.cost / 60.0 * speed_mph, tour.exact};
}

void compute_intra_tours(std::vector<SuperLocation>& sites, double speed_mph) {
  for (SuperLocation& s : sites) {
    const IntraTour t = intra_tour(s, speed_mph);
    s.intra_time_min = t.time_min;
    s.intra_dist_mi = t.dist_mi;
    s.intra_exact = t.exact;
  }
}

TcvrpInstance build_instance(network::VertexId depot_vertex,
                             std::span<const SuperLocation> sites,
                             const network::TravelMatrices& matrices,
                             const InstanceParams& params) {
  const std::size_t n = sites.size() + 1;
  std::vector<std::size_t> rows{matrices.row_of(depot_vertex)};
  std::vector<std::size_t> cols{matrices.col_of(depot_vertex)};
  for (const SuperLocation& s : sites) {
    rows.push_back(matrices.row_of(s.vertex));
    cols.push_back(matrices.col_of(s.vertex));
  }
  std::vector<int> demand(n, 0);
  std::vector<double> service(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    demand[i] = sites[i - 1].demand;
    service[i] = sites[i - 1].intra_time_min +
                 static_cast<double>(demand[i]) * params.dwell_min;
  }
  Matrix time = Matrix::square(n);
  Matrix dist = Matrix::square(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double intra = i == 0 ? 0.0 : sites[i - 1].intra_dist_mi;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      time(i, j) = matrices.time_min(rows[i], cols[j]);
      dist(i, j) = matrices.dist_mi(rows[i], cols[j]) + intra;
    }
  }
  return TcvrpInstance(std::move(demand), std::move(service), std::move(time),
                       std::move(dist), params.capacity, params.max_time_min,
                       params.max_dist_mi);
}

}  // namespace tcvrp::aggregate
