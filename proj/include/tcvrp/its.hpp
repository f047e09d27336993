#pragma once

// Iterated tabu search for the TCVRP. The search only ever holds feasible
// solutions: every candidate move is checked against Q, T-bar and D-bar
// before it is taken.

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "tcvrp/instance.hpp"
#include "tcvrp/solution.hpp"

namespace tcvrp::its {

struct ItsConfig {
  std::uint64_t seed = 1;
  double time_budget_s = 60.0;
  int restarts = 1;
  int tenure = 0;        // 0: round(sqrt(n))
  int perturbation = 0;  // customers ejected per round; 0: ceil(0.1 n)
  int max_stall_rounds = 50;
  int phase_stall_iterations = 0;  // 0: max(25, n)
  // Moves must create an arc between candidate neighbours: each customer's
  // `neighbors` nearest nodes by D_uv + D_vu, plus the depot. 0: no filter.
  int neighbors = 30;
  bool relocate = true;
  bool swap = true;
  bool two_opt = true;
  bool two_opt_star = true;

  // Called with every solution the search moves to (after each move and each
  // perturbation) and its total distance.
  std::function<void(const std::vector<std::vector<int>>&, double)> on_accept;
};

struct PhaseRecord {
  double start_cost = 0.0;
  double end_cost = 0.0;
};

struct ItsResult {
  Solution solution;
  double best_cost = 0.0;  // omega, equal to solution.vmt_mi
  int rounds = 0;
  bool hit_time_budget = false;
  std::vector<PhaseRecord> phases;
};

// Throws Error(kInfeasible) naming the first node that cannot be placed, and
// Error(kInput) when `initial` is given but infeasible.
ItsResult solve_its(const TcvrpInstance& inst, const ItsConfig& cfg,
                    const std::optional<Solution>& initial = std::nullopt);

// Best of `runs` independent runs with seeds seed, seed + 1, ...; ties go to
// the earliest run.
ItsResult best_of_runs(const TcvrpInstance& inst, const ItsConfig& cfg,
                       int runs,
                       const std::optional<Solution>& initial = std::nullopt);

// Parallel cheapest-insertion construction used to start the search.
std::vector<std::vector<int>> construct(const TcvrpInstance& inst);

}  // namespace tcvrp::its
