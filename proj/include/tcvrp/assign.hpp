#pragma once

// Provider market split and capacitated customer-to-depot assignment.

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "tcvrp/geometry.hpp"

namespace tcvrp::assign {

struct Customer {
  std::int64_t id = 0;
  Point location;
  int demand = 1;  // packages, >= 1

  bool operator==(const Customer&) const = default;
};

struct ProviderShare {
  std::string provider;
  double share = 0.0;
};

// Ordered provider shares; must be in [0, 1] and sum to 1 within 1e-9.
using ProviderSplit = std::vector<ProviderShare>;

void check_split(const ProviderSplit& split);

// Drops `missing` and spreads its share equally over the remaining providers.
ProviderSplit redistribute_missing(const ProviderSplit& split,
                                   const std::string& missing);

// Independently draws a provider for every customer. Providers that receive
// nobody are absent from the result. Input order is preserved per provider.
std::map<std::string, std::vector<Customer>> split_by_provider(
    std::span<const Customer> customers, const ProviderSplit& split,
    std::uint64_t seed);

struct Depot {
  std::int64_t id = 0;
  std::string provider;
  Point location;
  int capacity = 0;  // customers
};

struct DepotAssignment {
  std::map<std::int64_t, std::vector<std::int64_t>> customers_by_depot;
  double total_distance_mi = 0.0;
};

// ceil(slack * customers / depots).
int default_depot_capacity(std::size_t customers, std::size_t depots,
                           double slack = 1.2);

// Exact minimum total Manhattan distance assignment subject to depot
// capacities (a transportation problem solved by successive shortest paths).
// Every depot appears in the result, possibly with no customers.
DepotAssignment assign_to_depots(std::span<const Customer> customers,
                                 std::span<const Depot> depots);

}  // namespace tcvrp::assign
