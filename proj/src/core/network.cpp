#include "tcvrp/network.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <sstream>
#include <unordered_set>

#include "tcvrp/error.hpp"

namespace tcvrp::network {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string id_str(std::int64_t id) { return std::to_string(id); }

// Arc ids from source to `v` following parent arcs.
std::vector<ArcId> walk_back(const RoadNetwork& net,
                             const std::vector<std::ptrdiff_t>& parent,
                             std::size_t v) {
  std::vector<ArcId> path;
  while (parent[v] >= 0) {
    const auto a = static_cast<std::size_t>(parent[v]);
    path.push_back(net.arcs()[a].id);
    v = net.arc_tail(a);
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

RoadNetwork::RoadNetwork(std::vector<Vertex> vertices, std::vector<Arc> arcs)
    : vertices_(std::move(vertices)), arcs_(std::move(arcs)) {
  vertex_index_.reserve(vertices_.size());
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vertex_index_.emplace(vertices_[i].id, i).second) {
      fail(ErrorCode::kInput, "duplicate vertex id " + id_str(vertices_[i].id));
    }
  }
  std::unordered_set<ArcId> arc_ids;
  tails_.reserve(arcs_.size());
  heads_.reserve(arcs_.size());
  std::vector<std::size_t> out_degree(vertices_.size(), 0);
  for (const Arc& a : arcs_) {
    if (!arc_ids.insert(a.id).second) {
      fail(ErrorCode::kInput, "duplicate arc id " + id_str(a.id));
    }
    auto tail = vertex_index_.find(a.from);
    auto head = vertex_index_.find(a.to);
    if (tail == vertex_index_.end() || head == vertex_index_.end()) {
      fail(ErrorCode::kInput,
           "arc " + id_str(a.id) + " references an unknown vertex");
    }
    if (a.from == a.to) {
      fail(ErrorCode::kInput, "arc " + id_str(a.id) + " is a self-loop");
    }
    if (!(a.length_mi > 0.0) || !(a.speed_mph > 0.0)) {
      fail(ErrorCode::kInput,
           "arc " + id_str(a.id) + " needs positive length and speed");
    }
    tails_.push_back(tail->second);
    heads_.push_back(head->second);
    ++out_degree[tail->second];
  }
  out_offsets_.assign(vertices_.size() + 1, 0);
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    out_offsets_[v + 1] = out_offsets_[v] + out_degree[v];
  }
  out_arcs_.resize(arcs_.size());
  std::vector<std::size_t> fill(out_offsets_.begin(), out_offsets_.end() - 1);
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    out_arcs_[fill[tails_[a]]++] = a;
  }
}

std::size_t RoadNetwork::vertex_index(VertexId id) const {
  auto it = vertex_index_.find(id);
  if (it == vertex_index_.end()) {
    fail(ErrorCode::kInput, "unknown vertex " + id_str(id));
  }
  return it->second;
}

std::span<const std::size_t> RoadNetwork::out_arcs(std::size_t v) const {
  return {out_arcs_.data() + out_offsets_[v],
          out_offsets_[v + 1] - out_offsets_[v]};
}

PathTree shortest_path_tree(const RoadNetwork& net, VertexId source) {
  const std::size_t nv = net.vertices().size();
  PathTree tree;
  tree.source = net.vertex_index(source);
  tree.time_min.assign(nv, kInf);
  tree.dist_mi.assign(nv, kInf);
  tree.parent_arc.assign(nv, -1);
  std::vector<char> settled(nv, 0);

  struct Entry {
    double time;
    double dist;
    std::size_t v;
    bool operator>(const Entry& o) const {
      if (time != o.time) return time > o.time;
      if (dist != o.dist) return dist > o.dist;
      return v > o.v;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
  tree.time_min[tree.source] = 0.0;
  tree.dist_mi[tree.source] = 0.0;
  pq.push({0.0, 0.0, tree.source});

  while (!pq.empty()) {
    const Entry cur = pq.top();
    pq.pop();
    if (settled[cur.v]) continue;
    if (cur.time != tree.time_min[cur.v] || cur.dist != tree.dist_mi[cur.v]) {
      continue;
    }
    settled[cur.v] = 1;
    for (std::size_t a : net.out_arcs(cur.v)) {
      const std::size_t w = net.arc_head(a);
      if (settled[w]) continue;
      const Arc& arc = net.arcs()[a];
      const double t = cur.time + arc.time_min();
      const double d = cur.dist + arc.length_mi;
      bool better = t < tree.time_min[w] ||
                    (t == tree.time_min[w] && d < tree.dist_mi[w]);
      if (!better && t == tree.time_min[w] && d == tree.dist_mi[w]) {
        // Exact tie: keep the lexicographically smaller arc-id sequence.
        auto candidate = walk_back(net, tree.parent_arc, cur.v);
        candidate.push_back(arc.id);
        const auto incumbent = walk_back(net, tree.parent_arc, w);
        better = std::lexicographical_compare(candidate.begin(), candidate.end(),
                                              incumbent.begin(), incumbent.end());
        if (better) {
          tree.parent_arc[w] = static_cast<std::ptrdiff_t>(a);
          continue;  // label values unchanged; queued entry stays valid
        }
      }
      if (better) {
        tree.time_min[w] = t;
        tree.dist_mi[w] = d;
        tree.parent_arc[w] = static_cast<std::ptrdiff_t>(a);
        pq.push({t, d, w});
      }
    }
  }
  return tree;
}

std::vector<ArcId> tree_path(const RoadNetwork& net, const PathTree& tree,
                             VertexId target) {
  const std::size_t v = net.vertex_index(target);
  if (tree.time_min[v] == kInf) {
    fail(ErrorCode::kInfeasible, "vertex " + id_str(target) + " is unreachable");
  }
  return walk_back(net, tree.parent_arc, v);
}

std::size_t TravelMatrices::row_of(VertexId v) const {
  auto it = std::find(sources.begin(), sources.end(), v);
  if (it == sources.end()) {
    fail(ErrorCode::kInput, "vertex " + id_str(v) + " is not a matrix source");
  }
  return static_cast<std::size_t>(it - sources.begin());
}

std::size_t TravelMatrices::col_of(VertexId v) const {
  auto it = std::find(targets.begin(), targets.end(), v);
  if (it == targets.end()) {
    fail(ErrorCode::kInput, "vertex " + id_str(v) + " is not a matrix target");
  }
  return static_cast<std::size_t>(it - targets.begin());
}

TravelMatrices shortest_paths(const RoadNetwork& net,
                              std::span<const VertexId> sources,
                              std::span<const VertexId> targets) {
  if (sources.empty() || targets.empty()) {
    fail(ErrorCode::kInput, "shortest_paths needs nonempty sources and targets");
  }
  std::vector<std::size_t> target_index;
  target_index.reserve(targets.size());
  for (VertexId t : targets) target_index.push_back(net.vertex_index(t));
  for (VertexId s : sources) net.vertex_index(s);

  TravelMatrices out;
  out.sources.assign(sources.begin(), sources.end());
  out.targets.assign(targets.begin(), targets.end());
  out.time_min = Matrix(sources.size(), targets.size());
  out.dist_mi = Matrix(sources.size(), targets.size());

  std::unordered_map<VertexId, PathTree> trees;
  for (std::size_t r = 0; r < sources.size(); ++r) {
    auto it = trees.find(sources[r]);
    if (it == trees.end()) {
      it = trees.emplace(sources[r], shortest_path_tree(net, sources[r])).first;
    }
    const PathTree& tree = it->second;
    for (std::size_t c = 0; c < targets.size(); ++c) {
      const double t = tree.time_min[target_index[c]];
      if (t == kInf) {
        std::ostringstream msg;
        msg << "no path from vertex " << sources[r] << " to vertex "
            << targets[c];
        fail(ErrorCode::kInfeasible, msg.str());
      }
      out.time_min(r, c) = t;
      out.dist_mi(r, c) = tree.dist_mi[target_index[c]];
    }
  }
  return out;
}

}  // namespace tcvrp::network
