#pragma once

// Road network topology and travel-time shortest paths.

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "tcvrp/geometry.hpp"
#include "tcvrp/matrix.hpp"

namespace tcvrp::network {

using VertexId = std::int64_t;
using ArcId = std::int64_t;

struct Vertex {
  VertexId id = 0;
  Point pos;
};

// A unidirectional road segment.
struct Arc {
  ArcId id = 0;
  VertexId from = 0;
  VertexId to = 0;
  double length_mi = 0.0;
  double speed_mph = 0.0;

  double time_min() const { return length_mi / speed_mph * 60.0; }
};

// Immutable directed multigraph. Construction validates that every arc
// references existing vertices, is not a self-loop, has positive length and
// speed, and that vertex and arc ids are unique.
class RoadNetwork {
 public:
  RoadNetwork(std::vector<Vertex> vertices, std::vector<Arc> arcs);

  std::span<const Vertex> vertices() const { return vertices_; }
  std::span<const Arc> arcs() const { return arcs_; }

  bool has_vertex(VertexId id) const { return vertex_index_.contains(id); }
  // Dense index of a vertex id; throws on unknown ids.
  std::size_t vertex_index(VertexId id) const;
  // Indices into arcs() of the arcs leaving the vertex at dense index `v`.
  std::span<const std::size_t> out_arcs(std::size_t v) const;
  std::size_t arc_head(std::size_t arc) const { return heads_[arc]; }
  std::size_t arc_tail(std::size_t arc) const { return tails_[arc]; }

 private:
  std::vector<Vertex> vertices_;
  std::vector<Arc> arcs_;
  std::unordered_map<VertexId, std::size_t> vertex_index_;
  std::vector<std::size_t> tails_;
  std::vector<std::size_t> heads_;
  std::vector<std::size_t> out_offsets_;
  std::vector<std::size_t> out_arcs_;
};

// Single-source shortest-path tree under the lexicographic label
// (time, distance, arc-id sequence).
struct PathTree {
  std::size_t source = 0;                // dense vertex index
  std::vector<double> time_min;          // +inf where unreachable
  std::vector<double> dist_mi;
  std::vector<std::ptrdiff_t> parent_arc;  // arc index, -1 at source/unreached
};

PathTree shortest_path_tree(const RoadNetwork& net, VertexId source);

// Arc ids of the tree path from the tree's source to `target`.
std::vector<ArcId> tree_path(const RoadNetwork& net, const PathTree& tree,
                             VertexId target);

// Travel matrices between two ordered vertex lists: time in minutes, distance
// in miles along the time-minimizing path.
struct TravelMatrices {
  std::vector<VertexId> sources;
  std::vector<VertexId> targets;
  Matrix time_min;
  Matrix dist_mi;

  // Row/column lookup by vertex id; throws when absent.
  std::size_t row_of(VertexId v) const;
  std::size_t col_of(VertexId v) const;
};

// Throws Error(kInput) for empty or unknown vertex lists and
// Error(kInfeasible) naming the first unreachable pair.
TravelMatrices shortest_paths(const RoadNetwork& net,
                              std::span<const VertexId> sources,
                              std::span<const VertexId> targets);

}  // namespace tcvrp::network
