#pragma once

// JSON interchange for networks, customers, depots, instances and solutions.

#include <filesystem>
#include <json.hpp>
#include <vector>

#include "tcvrp/assign.hpp"
#include "tcvrp/exact.hpp"
#include "tcvrp/instance.hpp"
#include "tcvrp/network.hpp"
#include "tcvrp/solution.hpp"

namespace tcvrp::io {

using nlohmann::json;

// Error(kIo) when the file cannot be opened, Error(kInput) on malformed JSON.
json read_json(const std::filesystem::path& path);
void write_json(const std::filesystem::path& path, const json& j);

json to_json(const network::RoadNetwork& net);
network::RoadNetwork network_from_json(const json& j);

json customers_to_json(const std::vector<assign::Customer>& customers);
std::vector<assign::Customer> customers_from_json(const json& j);

json depots_to_json(const std::vector<assign::Depot>& depots);
std::vector<assign::Depot> depots_from_json(const json& j);

json to_json(const assign::DepotAssignment& a);

// {"depot":0,"n":..,"N":[..],"S_min":[..],"T_min":[[..]],"D_mi":[[..]],
//  "Q":..,"Tbar_min":..,"Dbar_mi":null|..}; N and S_min carry n + 1 entries
// with the depot first.
json to_json(const TcvrpInstance& inst);
TcvrpInstance instance_from_json(const json& j);

// {"routes":[[0,..,0],..],"k":..,"vmt_mi":..,"vht_min":..}
json to_json(const Solution& sol);
// Routes are re-evaluated against `inst`; stored totals are ignored.
Solution solution_from_json(const TcvrpInstance& inst, const json& j);

// Solution fields plus status, lower/upper bound, gap, nodes, elapsed time.
json to_json(const exact::ExactResult& r);

}  // namespace tcvrp::io
