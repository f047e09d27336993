#pragma once

// System-level metrics, optimality gaps and fleet energy.

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tcvrp/instance.hpp"
#include "tcvrp/solution.hpp"

namespace tcvrp::metrics {

// (1 - lower / upper) * 100. Throws Error(kInput) unless 0 <= lower <= upper
// and upper > 0 (lower may exceed upper by rounding noise of 1e-9 relative).
double mip_gap(double lower, double upper);

// (1 - best_found / lower) * 100, signed: negative whenever best_found > lower.
double its_gap(double best_found, double lower);

struct EnergyParams {
  double bev_kwh_per_mile = 1.14;
  double cv_mpg = 8.0;
  double diesel_kwh_per_gallon = 40.15;
};

struct Energy {
  double bev_kwh = 0.0;
  double cv_kwh = 0.0;
};

Energy energy(double vmt_mi, const EnergyParams& p = {});

enum class VehicleType { kBev, kCv };
const char* vehicle_name(VehicleType v);

struct ScenarioKey {
  std::string city;
  int capacity = 120;
  double max_time_h = 10.0;
  double dwell_min = 2.0;
  std::optional<double> max_dist_mi;
  VehicleType vehicle = VehicleType::kCv;
};

struct GapStats {
  int instances = 0;
  int optimal = 0;
  double mean_mip_gap = 0.0;
  std::optional<double> mean_its_gap;  // needs an ITS result per instance
};

struct ScenarioReport {
  ScenarioKey key;
  double vmt_mi = 0.0;
  double vht_h = 0.0;
  int vehicles = 0;
  double vmt_per_vehicle = 0.0;
  Energy energy;
  std::optional<GapStats> gaps;
  std::string status = "ok";  // or the failure message of a sweep cell
};

// Validates every (instance, solution) pair, then sums across depots. Throws
// Error(kInput) naming the first infeasible solution.
ScenarioReport summarize(
    const std::vector<std::pair<const TcvrpInstance*, const Solution*>>& depots,
    const ScenarioKey& key, const EnergyParams& p = {});

std::string csv_header();
std::string csv_row(const ScenarioReport& r);
void write_csv(std::ostream& out, const std::vector<ScenarioReport>& rows);

}  // namespace tcvrp::metrics
