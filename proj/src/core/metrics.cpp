#include "tcvrp/metrics.hpp"

#include <cstdio>
#include <ostream>

#include "tcvrp/error.hpp"
#include "tcvrp/model.hpp"

namespace tcvrp::metrics {

double mip_gap(double lower, double upper) {
  if (!(upper > 0.0)) fail(ErrorCode::kInput, "MIP gap needs upper bound > 0");
  if (lower < 0.0 || lower > upper * (1.0 + 1e-9)) {
    fail(ErrorCode::kInput, "MIP gap needs 0 <= lower <= upper");
  }
  const double g = (upper - lower) * 100.0 / upper;
  return g < 0.0 ? 0.0 : g;
}

double its_gap(double best_found, double lower) {
  if (!(lower > 0.0)) fail(ErrorCode::kInput, "ITS gap needs lower bound > 0");
  return (lower - best_found) * 100.0 / lower;
}

Energy energy(double vmt_mi, const EnergyParams& p) {
  if (vmt_mi < 0.0) fail(ErrorCode::kInput, "VMT must be nonnegative");
  return {vmt_mi * p.bev_kwh_per_mile,
          vmt_mi * (p.diesel_kwh_per_gallon / p.cv_mpg)};
}

const char* vehicle_name(VehicleType v) {
  return v == VehicleType::kBev ? "BEV" : "CV";
}

ScenarioReport summarize(
    const std::vector<std::pair<const TcvrpInstance*, const Solution*>>& depots,
    const ScenarioKey& key, const EnergyParams& p) {
  ScenarioReport r;
  r.key = key;
  double vht_min = 0.0;
  for (std::size_t d = 0; d < depots.size(); ++d) {
    const auto& [inst, sol] = depots[d];
    const auto rep = model::validate(*inst, *sol);
    if (!rep.feasible) {
      fail(ErrorCode::kInput, "solution " + std::to_string(d) +
                                  " fails validation (" +
                                  rep.violations.front().family + ")");
    }
    r.vmt_mi += rep.vmt_mi;
    vht_min += rep.vht_min;
    r.vehicles += sol->vehicles();
  }
  r.vht_h = vht_min / 60.0;
  r.vmt_per_vehicle = r.vehicles > 0 ? r.vmt_mi / r.vehicles : 0.0;
  r.energy = energy(r.vmt_mi, p);
  return r;
}

std::string csv_header() {
  return "city,Q,Tbar_h,P_min,Dbar_mi,vehicle_type,vmt_mi,vht_h,vehicles,"
         "vmt_per_vehicle,bev_kwh,cv_kwh,exact_instances,optimal,"
         "mean_mip_gap_pct,mean_its_gap_pct,status";
}

std::string csv_row(const ScenarioReport& r) {
  char buf[512];
  const std::string dbar =
      r.key.max_dist_mi ? [&] {
        char b[32];
        std::snprintf(b, sizeof b, "%g", *r.key.max_dist_mi);
        return std::string(b);
      }()
                        : std::string();
  std::snprintf(buf, sizeof buf, "%s,%d,%g,%g,%s,%s,%.6f,%.6f,%d,%.6f,%.6f,%.6f",
                r.key.city.c_str(), r.key.capacity, r.key.max_time_h,
                r.key.dwell_min, dbar.c_str(), vehicle_name(r.key.vehicle),
                r.vmt_mi, r.vht_h, r.vehicles, r.vmt_per_vehicle,
                r.energy.bev_kwh, r.energy.cv_kwh);
  std::string row = buf;
  if (r.gaps) {
    std::snprintf(buf, sizeof buf, ",%d,%d,%.6f,", r.gaps->instances,
                  r.gaps->optimal, r.gaps->mean_mip_gap);
    row += buf;
    if (r.gaps->mean_its_gap) {
      std::snprintf(buf, sizeof buf, "%.6f", *r.gaps->mean_its_gap);
      row += buf;
    }
  } else {
    row += ",,,,";
  }
  return row + "," + r.status;
}

void write_csv(std::ostream& out, const std::vector<ScenarioReport>& rows) {
  out << csv_header() << "\n";
  for (const auto& r : rows) out << csv_row(r) << "\n";
}

}  // namespace tcvrp::metrics
