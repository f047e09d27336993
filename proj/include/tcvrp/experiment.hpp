#pragma once

// Solver dispatch and scenario sweeps over a prepared city.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "tcvrp/city.hpp"
#include "tcvrp/exact.hpp"
#include "tcvrp/metrics.hpp"
#include "tcvrp/solution.hpp"

namespace tcvrp::experiment {

enum class Solver { kAuto, kExact, kIts };
const char* solver_name(Solver s);

// Above this many super-locations kAuto picks ITS.
inline constexpr int kAutoExactLimit = 60;

struct SolveOptions {
  Solver solver = Solver::kAuto;
  double time_limit_s = 60.0;  // exact: search limit; ITS: budget per run
  int runs = 1;                // ITS runs (seeds seed, seed + 1, ...)
  std::uint64_t seed = 1;
};

struct SolveOutcome {
  Solver used = Solver::kIts;
  std::optional<Solution> solution;  // validated when present
  std::optional<exact::ExactResult> exact;
};

// `warm` seeds ITS as its start and exact as its incumbent; it must be
// feasible for `inst`.
SolveOutcome solve(const TcvrpInstance& inst, const SolveOptions& opt,
                   const std::optional<Solution>& warm = std::nullopt);

struct SweepConfig {
  std::vector<int> capacity{120};
  std::vector<double> max_time_h{10.0};
  std::vector<double> dwell_min{2.0};
  std::vector<double> bev_range_mi{80.0};
  std::vector<metrics::VehicleType> vehicles{metrics::VehicleType::kBev,
                                             metrics::VehicleType::kCv};
  SolveOptions solve;  // time_limit_s is per cell, split over its depots
  bool shared_economy = false;
  std::uint64_t seed = 1;  // provider split
};

void check(const SweepConfig& cfg);

struct CellResult {
  metrics::ScenarioReport report;
  bool ok = true;
  std::vector<Solution> solutions;  // per depot instance, pipeline order
};

// One result per (Q, Tbar, P, vehicle[, range]) cell, grouped by dwell,
// vehicle and range. Within a dwell time, cells run from most to least
// constrained and each depot starts from the cheapest earlier solution that
// is feasible for it, so VMT cannot rise as Q or Tbar grow. A BEV depot whose
// CV plan for the same limits fits the range takes that plan unchanged.
// Failed cells are reported with ok = false.
std::vector<CellResult> run_sweep(
    const city::City& city, const SweepConfig& cfg,
    const std::function<void(const CellResult&)>& progress = nullptr);

}  // namespace tcvrp::experiment
