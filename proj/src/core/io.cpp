#include "tcvrp/io.hpp"

#include <cmath>
#include <fstream>

#include "tcvrp/error.hpp"

namespace tcvrp::io {

namespace {

// Wraps nlohmann type/key errors as input errors.
template <typename F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string(what) + ": " + e.what());
  }
}

Matrix matrix_from_json(const json& rows, std::size_t n, const char* name) {
  if (!rows.is_array() || rows.size() != n) {
    fail(ErrorCode::kInput, std::string(name) + " must have " + std::to_string(n) + " rows");
  }
  Matrix m = Matrix::square(n);
  for (std::size_t i = 0; i < n; ++i) {
    const json& row = rows[i];
    if (!row.is_array() || row.size() != n) {
      fail(ErrorCode::kInput, std::string(name) + " row " + std::to_string(i) +
                                  " must have " + std::to_string(n) + " entries");
    }
    for (std::size_t j = 0; j < n; ++j) m(i, j) = row[j].get<double>();
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto r = m.row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

}  // namespace

json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::kIo, "cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::kInput, path.string() + ": " + e.what());
  }
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::kIo, "cannot write " + path.string());
  out << j.dump(1) << '\n';
  if (!out) fail(ErrorCode::kIo, "write failed for " + path.string());
}

json to_json(const network::RoadNetwork& net) {
  json v = json::array(), a = json::array();
  for (const auto& x : net.vertices()) {
    v.push_back({{"id", x.id}, {"x", x.pos.x}, {"y", x.pos.y}});
  }
  for (const auto& x : net.arcs()) {
    a.push_back({{"id", x.id},
                 {"from", x.from},
                 {"to", x.to},
                 {"length_mi", x.length_mi},
                 {"speed_mph", x.speed_mph}});
  }
  return {{"vertices", v}, {"arcs", a}};
}

network::RoadNetwork network_from_json(const json& j) {
  return guarded("road network", [&] {
    std::vector<network::Vertex> vs;
    for (const auto& v : j.at("vertices")) {
      vs.push_back({v.at("id").get<network::VertexId>(),
                    {v.at("x").get<double>(), v.at("y").get<double>()}});
    }
    std::vector<network::Arc> as;
    for (const auto& a : j.at("arcs")) {
      as.push_back({a.at("id").get<network::ArcId>(), a.at("from").get<network::VertexId>(),
                    a.at("to").get<network::VertexId>(), a.at("length_mi").get<double>(),
                    a.at("speed_mph").get<double>()});
    }
    return network::RoadNetwork(std::move(vs), std::move(as));
  });
}

json customers_to_json(const std::vector<assign::Customer>& customers) {
  json arr = json::array();
  for (const auto& c : customers) {
    arr.push_back({{"id", c.id}, {"x", c.location.x}, {"y", c.location.y}, {"demand", c.demand}});
  }
  return {{"customers", arr}};
}

std::vector<assign::Customer> customers_from_json(const json& j) {
  return guarded("customers", [&] {
    std::vector<assign::Customer> out;
    for (const auto& c : j.at("customers")) {
      assign::Customer cu;
      cu.id = c.at("id").get<std::int64_t>();
      cu.location = {c.at("x").get<double>(), c.at("y").get<double>()};
      cu.demand = c.value("demand", 1);
      if (cu.demand < 1) fail(ErrorCode::kInput, "customer demand must be >= 1");
      out.push_back(cu);
    }
    return out;
  });
}

json depots_to_json(const std::vector<assign::Depot>& depots) {
  json arr = json::array();
  for (const auto& d : depots) {
    arr.push_back({{"id", d.id},
                   {"provider", d.provider},
                   {"x", d.location.x},
                   {"y", d.location.y},
                   {"capacity", d.capacity}});
  }
  return {{"depots", arr}};
}

std::vector<assign::Depot> depots_from_json(const json& j) {
  return guarded("depots", [&] {
    std::vector<assign::Depot> out;
    for (const auto& d : j.at("depots")) {
      assign::Depot dp;
      dp.id = d.at("id").get<std::int64_t>();
      dp.provider = d.at("provider").get<std::string>();
      dp.location = {d.at("x").get<double>(), d.at("y").get<double>()};
      dp.capacity = d.value("capacity", 0);
      out.push_back(dp);
    }
    return out;
  });
}

json to_json(const assign::DepotAssignment& a) {
  json m = json::object();
  for (const auto& [depot, ids] : a.customers_by_depot) m[std::to_string(depot)] = ids;
  return {{"assignment", m}, {"total_distance_mi", a.total_distance_mi}};
}

json to_json(const TcvrpInstance& inst) {
  json j;
  j["depot"] = 0;
  j["n"] = inst.customers();
  j["N"] = inst.demands();
  j["S_min"] = inst.services();
  j["T_min"] = matrix_to_json(inst.time_matrix());
  j["D_mi"] = matrix_to_json(inst.dist_matrix());
  j["Q"] = inst.capacity();
  j["Tbar_min"] = inst.max_time();
  j["Dbar_mi"] = inst.max_dist() ? json(*inst.max_dist()) : json(nullptr);
  return j;
}

TcvrpInstance instance_from_json(const json& j) {
  return guarded("instance", [&] {
    if (j.at("depot").get<int>() != 0) fail(ErrorCode::kInput, "depot must be node 0");
    const int n = j.at("n").get<int>();
    if (n < 0) fail(ErrorCode::kInput, "n must be >= 0");
    const auto nodes = static_cast<std::size_t>(n) + 1;
    auto demand = j.at("N").get<std::vector<int>>();
    auto service = j.at("S_min").get<std::vector<double>>();
    if (demand.size() != nodes || service.size() != nodes) {
      fail(ErrorCode::kInput, "N and S_min must have n + 1 entries");
    }
    Matrix t = matrix_from_json(j.at("T_min"), nodes, "T_min");
    Matrix d = matrix_from_json(j.at("D_mi"), nodes, "D_mi");
    std::optional<double> dbar;
    if (j.contains("Dbar_mi") && !j["Dbar_mi"].is_null()) dbar = j["Dbar_mi"].get<double>();
    return TcvrpInstance(std::move(demand), std::move(service), std::move(t), std::move(d),
                         j.at("Q").get<int>(), j.at("Tbar_min").get<double>(), dbar);
  });
}

json to_json(const Solution& sol) {
  return {{"routes", sol.sequences()},
          {"k", sol.vehicles()},
          {"vmt_mi", sol.vmt_mi},
          {"vht_min", sol.vht_min}};
}

Solution solution_from_json(const TcvrpInstance& inst, const json& j) {
  return guarded("solution", [&] {
    return make_solution(inst, j.at("routes").get<std::vector<std::vector<int>>>());
  });
}

json to_json(const exact::ExactResult& r) {
  json j = r.solution ? to_json(*r.solution) : json::object();
  j["status"] = exact::status_name(r.status);
  j["lower_bound_mi"] = r.lower_bound;
  j["upper_bound_mi"] = std::isfinite(r.upper_bound) ? json(r.upper_bound) : json(nullptr);
  j["mip_gap_pct"] = r.mip_gap();
  j["nodes"] = r.nodes;
  j["elapsed_s"] = r.elapsed_s;
  return j;
}

}  // namespace tcvrp::io
