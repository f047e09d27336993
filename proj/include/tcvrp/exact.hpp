#pragma once

// Depth-first branch-and-bound for the TCVRP. Nodes fix arcs in or out; the
// bound is an assignment relaxation over the customers plus one depot copy
// per potential vehicle.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tcvrp/instance.hpp"
#include "tcvrp/solution.hpp"

namespace tcvrp::exact {

enum class ArcState : std::uint8_t { kFree, kIncluded, kExcluded };

struct SearchNode {
  int nodes = 0;
  std::vector<ArcState> arcs;  // row-major nodes x nodes; diagonal unused

  static SearchNode root(const TcvrpInstance& inst);

  ArcState state(int i, int j) const {
    return arcs[static_cast<std::size_t>(i * nodes + j)];
  }
  ArcState& state(int i, int j) {
    return arcs[static_cast<std::size_t>(i * nodes + j)];
  }
  void include(int i, int j);  // also excludes arcs made impossible
  void exclude(int i, int j) { state(i, j) = ArcState::kExcluded; }
};

// Assignment-relaxation bound in miles, +inf when the fixed decisions admit
// no feasible completion.
double lower_bound(const SearchNode& node, const TcvrpInstance& inst);

enum class Status { kOptimal, kGap, kInfeasible, kTimeout };
const char* status_name(Status s);

struct ExactOptions {
  double time_limit_s = 60.0;
  bool warm_start = true;
  double warm_start_budget_s = 2.0;
  std::uint64_t seed = 1;
  std::optional<Solution> incumbent;  // validated before use
};

struct BoundRecord {
  double elapsed_s = 0.0;
  double lower = 0.0;
  double upper = 0.0;  // +inf until an incumbent exists
};

struct ExactResult {
  std::optional<Solution> solution;
  double lower_bound = 0.0;  // iota
  double upper_bound = 0.0;  // upsilon, +inf without a solution
  Status status = Status::kTimeout;
  double elapsed_s = 0.0;
  long long nodes = 0;
  std::uint64_t trace_hash = 0;  // FNV-1a over the branching decisions
  std::vector<BoundRecord> history;

  double mip_gap() const;  // percent; 0 when both bounds are 0
};

inline constexpr double kOptimalityTolerance = 1e-6;

ExactResult solve_exact(const TcvrpInstance& inst, const ExactOptions& opt = {});

}  // namespace tcvrp::exact
