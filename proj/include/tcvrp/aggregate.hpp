#pragma once

// Customer aggregation onto arc-midpoint super-locations and construction of
// depot-level instances.

#include <span>
#include <vector>

#include "tcvrp/assign.hpp"
#include "tcvrp/instance.hpp"
#include "tcvrp/network.hpp"

namespace tcvrp::aggregate {

// Customers sharing the nearest arc midpoint. Its routing vertex is the head
// of that arc.
struct SuperLocation {
  network::ArcId id = 0;  // arc whose midpoint anchors the cluster
  Point anchor;
  network::VertexId vertex = 0;
  std::vector<std::int64_t> members;
  std::vector<Point> member_locations;
  int demand = 0;  // N
  double intra_time_min = 0.0;
  double intra_dist_mi = 0.0;
  bool intra_exact = true;
};

struct Attachment {
  network::ArcId arc = 0;
  Point anchor;
  network::VertexId vertex = 0;
};

// Nearest arc midpoint under the Manhattan metric; ties go to the smaller arc
// id. Requires a network with at least one arc.
Attachment attach(const network::RoadNetwork& net, Point p);

// One super-location per occupied midpoint, ordered by arc id. Intra-tour
// fields are left zero; see intra_tour.
std::vector<SuperLocation> cluster_customers(
    std::span<const assign::Customer> customers,
    const network::RoadNetwork& net);

struct IntraTour {
  double time_min = 0.0;
  double dist_mi = 0.0;
  bool exact = true;
};

inline constexpr double kIntraSpeedMph = 15.0;

// Minimum-time closed tour from the anchor through every member under the
// Manhattan metric at constant speed. Exact up to 12 members.
IntraTour intra_tour(const SuperLocation& site,
                     double speed_mph = kIntraSpeedMph);

// Fills the intra fields of every site.
void compute_intra_tours(std::vector<SuperLocation>& sites,
                         double speed_mph = kIntraSpeedMph);

// Builds the depot-level instance: node 0 is the depot vertex, nodes 1..n the
// sites in order. S_i = intra_time_i + N_i * P; D_ij = path_dist + intra_dist_i
// for i != j (charged on departure); T_ij = path time. `matrices` must cover
// the depot vertex and every site vertex as both source and target.
TcvrpInstance build_instance(network::VertexId depot_vertex,
                             std::span<const SuperLocation> sites,
                             const network::TravelMatrices& matrices,
                             const InstanceParams& params);

}  // namespace tcvrp::aggregate
