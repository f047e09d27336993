#pragma once

// Synthetic cities and the preparation pipeline from city files to one
// depot-level instance per depot.

#include <cstdint>
#include <filesystem>
#include <json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcvrp/aggregate.hpp"
#include "tcvrp/assign.hpp"
#include "tcvrp/instance.hpp"
#include "tcvrp/network.hpp"

namespace tcvrp::city {

// Amazon 21%, FedEx 16%, UPS 24%, USPS 39%.
assign::ProviderSplit default_shares();

struct CityConfig {
  std::string name = "synthetic";
  double extent_mi = 6.0;        // side of the square service area
  double grid_spacing_mi = 0.25;
  int households = 4000;
  double ordering_rate = 1.0 / 7.0;
  assign::ProviderSplit shares = default_shares();
  // Depots per provider, in share order. Empty: one per provider.
  std::vector<std::pair<std::string, int>> depots;
  std::uint64_t seed = 1;
};

void check(const CityConfig& cfg);
nlohmann::json to_json(const CityConfig& cfg);
// Missing keys keep their defaults.
CityConfig config_from_json(const nlohmann::json& j);

struct City {
  CityConfig config;
  network::RoadNetwork network;
  std::vector<assign::Customer> customers;  // ordering households only
  std::vector<assign::Depot> depots;        // capacity 0: derived in the pipeline
};

// Grid-with-diagonals road network (two-way grid streets with
// direction-dependent speeds, scattered one-way diagonals), uniform
// households, exactly round(households * rate) of them ordering, depots by
// stratified random placement.
City generate(const CityConfig& cfg);

// city.json, network.json, customers.json, depots.json; each carries
// "meta": {"city", "seed"}.
void write_city(const City& city, const std::filesystem::path& dir);
City read_city(const std::filesystem::path& dir);

struct PipelineParams {
  InstanceParams limits;
  bool shared_economy = false;  // pool all depots regardless of provider
  std::uint64_t seed = 1;       // provider split
  double depot_slack = 1.2;     // capacity = ceil(slack * customers / depots)
};

struct DepotInstance {
  assign::Depot depot;
  network::VertexId vertex = 0;
  std::vector<aggregate::SuperLocation> sites;
  int customers = 0;
  network::TravelMatrices matrices;  // depot and site vertices
  TcvrpInstance instance;
};

struct PipelineResult {
  std::vector<DepotInstance> depots;  // depots with at least one customer
  std::vector<std::pair<std::int64_t, int>> customers_per_depot;  // all depots
  assign::DepotAssignment assignment;
  int customers = 0;
};

// split -> assign -> cluster -> matrices -> intra tours -> instances.
PipelineResult run_pipeline(const City& city, const PipelineParams& params);

// Same customer-to-site structure with the instances rebuilt for another
// dwell time and limits.
PipelineResult rebuild(const PipelineResult& base, const City& city,
                       const InstanceParams& limits);

// instance_<depot>.json per depot plus assignment.json; returns the instance
// file paths in depot order.
std::vector<std::filesystem::path> write_pipeline(
    const PipelineResult& result, const City& city, const PipelineParams& params,
    const std::filesystem::path& dir);

}  // namespace tcvrp::city
