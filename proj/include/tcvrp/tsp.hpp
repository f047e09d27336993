#pragma once

// Asymmetric TSP over small point sets, used to sequence customer visits
// inside a super-location. Node 0 is the anchor; tours start and end there.

#include <cstdint>
#include <vector>

#include "tcvrp/matrix.hpp"

namespace tcvrp::tsp {

// Largest instance (anchor included) accepted by solve_exact.
inline constexpr std::size_t kMaxExactSize = 13;

struct Tour {
  std::vector<int> order;  // 0, p1, ..., p_{n-1}, 0
  double cost = 0.0;
  bool exact = false;
};

// Square, nonnegative, zero-diagonal cost matrix. Throws on violation.
void check_instance(const Matrix& cost);

// Closed-tour cost of `order` (which must start and end at the anchor).
double tour_cost(const Matrix& cost, const std::vector<int>& order);

// Held-Karp dynamic program. Throws Error(kInput) when the instance has more
// than kMaxExactSize nodes.
Tour solve_exact(const Matrix& cost);

struct HeuristicOptions {
  std::uint64_t seed = 1;
  // Move proposals per temperature level; 0 picks 20 * size.
  int moves_per_level = 0;
  double cooling = 0.995;
};

// Nearest-neighbour start, simulated annealing with geometric cooling, then
// first-improvement local search (2-opt and or-opt). Deterministic per seed.
Tour solve_heuristic(const Matrix& cost, const HeuristicOptions& options = {});

}  // namespace tcvrp::tsp
