#include "tcvrp/assign.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <unordered_set>

#include "tcvrp/error.hpp"

namespace tcvrp::assign {

void check_split(const ProviderSplit& split) {
  if (split.empty()) fail(ErrorCode::kInput, "provider split is empty");
  double total = 0.0;
  std::unordered_set<std::string> names;
  for (const auto& s : split) {
    if (!(s.share >= 0.0 && s.share <= 1.0)) {
      fail(ErrorCode::kInput, "share of provider '" + s.provider +
                                  "' must lie in [0, 1]");
    }
    if (!names.insert(s.provider).second) {
      fail(ErrorCode::kInput, "provider '" + s.provider + "' listed twice");
    }
    total += s.share;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    fail(ErrorCode::kInput, "provider shares sum to " + std::to_string(total) +
                                ", expected 1");
  }
}

ProviderSplit redistribute_missing(const ProviderSplit& split,
                                   const std::string& missing) {
  check_split(split);
  ProviderSplit out;
  double freed = 0.0;
  for (const auto& s : split) {
    if (s.provider == missing) {
      freed += s.share;
    } else {
      out.push_back(s);
    }
  }
  if (out.empty()) fail(ErrorCode::kInput, "no provider left after removal");
  if (out.size() == split.size()) {
    fail(ErrorCode::kInput, "provider '" + missing + "' not in split");
  }
  for (auto& s : out) s.share += freed / static_cast<double>(out.size());
  return out;
}

std::map<std::string, std::vector<Customer>> split_by_provider(
    std::span<const Customer> customers, const ProviderSplit& split,
    std::uint64_t seed) {
  check_split(split);
  std::map<std::string, std::vector<Customer>> out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (const Customer& c : customers) {
    const double u = unit(rng);
    double acc = 0.0;
    std::size_t pick = split.size() - 1;
    for (std::size_t i = 0; i < split.size(); ++i) {
      acc += split[i].share;
      if (u < acc && split[i].share > 0.0) {
        pick = i;
        break;
      }
    }
    // Rounding can leave u >= acc; the last provider with a share catches it.
    while (split[pick].share == 0.0 && pick > 0) --pick;
    out[split[pick].provider].push_back(c);
  }
  return out;
}

int default_depot_capacity(std::size_t customers, std::size_t depots,
                           double slack) {
  if (depots == 0) fail(ErrorCode::kInput, "no depots");
  return static_cast<int>(std::ceil(slack * static_cast<double>(customers) /
                                    static_cast<double>(depots)));
}

DepotAssignment assign_to_depots(std::span<const Customer> customers,
                                 std::span<const Depot> depots) {
  if (depots.empty()) fail(ErrorCode::kInput, "no depots to assign to");
  long long capacity = 0;
  for (const Depot& d : depots) {
    if (d.capacity < 0) fail(ErrorCode::kInput, "negative depot capacity");
    capacity += d.capacity;
  }
  const auto need = static_cast<long long>(customers.size());
  if (capacity < need) {
    fail(ErrorCode::kInfeasible,
         "depot capacity short by " + std::to_string(need - capacity) +
             " customers");
  }

  const std::size_t m = depots.size();
  auto cost = [&](std::size_t c, std::size_t d) {
    return manhattan(customers[c].location, depots[d].location);
  };

  // Customers are added one at a time; each augmentation follows the
  // cheapest chain "new customer -> depot a -> (move a customer from a to b)
  // -> ... -> depot with spare capacity". Keeping the partial flow optimal
  // after every augmentation keeps the final assignment optimal.
  // moves[a * m + b] orders customers at depot a by cost(c, b) - cost(c, a).
  std::vector<std::set<std::pair<double, std::size_t>>> moves(m * m);
  std::vector<std::size_t> where(customers.size(), m);
  std::vector<int> load(m, 0);

  auto place = [&](std::size_t c, std::size_t d) {
    if (where[c] < m) {
      const std::size_t old = where[c];
      for (std::size_t b = 0; b < m; ++b) {
        if (b != old) moves[old * m + b].erase({cost(c, b) - cost(c, old), c});
      }
      --load[old];
    }
    where[c] = d;
    ++load[d];
    for (std::size_t b = 0; b < m; ++b) {
      if (b != d) moves[d * m + b].insert({cost(c, b) - cost(c, d), c});
    }
  };

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(m);
  std::vector<std::ptrdiff_t> prev(m);
  for (std::size_t c = 0; c < customers.size(); ++c) {
    // Bellman-Ford over depots; residual has no negative cycles.
    for (std::size_t d = 0; d < m; ++d) {
      dist[d] = depots[d].capacity > 0 ? cost(c, d) : kInf;
      prev[d] = -1;
    }
    for (std::size_t round = 0; round + 1 < m; ++round) {
      bool changed = false;
      for (std::size_t a = 0; a < m; ++a) {
        if (dist[a] == kInf) continue;
        for (std::size_t b = 0; b < m; ++b) {
          if (a == b || moves[a * m + b].empty()) continue;
          const double w = moves[a * m + b].begin()->first;
          if (dist[a] + w < dist[b] - 1e-12) {
            dist[b] = dist[a] + w;
            prev[b] = static_cast<std::ptrdiff_t>(a);
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    std::size_t sink = m;
    for (std::size_t d = 0; d < m; ++d) {
      if (load[d] < depots[d].capacity &&
          (sink == m || dist[d] < dist[sink] - 1e-12)) {
        sink = d;
      }
    }
    // Shift customers backwards along the chain, then place the newcomer.
    std::size_t b = sink;
    while (prev[b] >= 0) {
      const auto a = static_cast<std::size_t>(prev[b]);
      const std::size_t moved = moves[a * m + b].begin()->second;
      place(moved, b);
      b = a;
    }
    place(c, b);
  }

  DepotAssignment out;
  for (const Depot& d : depots) out.customers_by_depot[d.id];
  for (std::size_t c = 0; c < customers.size(); ++c) {
    out.customers_by_depot[depots[where[c]].id].push_back(customers[c].id);
    out.total_distance_mi += cost(c, where[c]);
  }
  return out;
}

}  // namespace tcvrp::assign
