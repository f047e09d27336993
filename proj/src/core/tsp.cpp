#include "tcvrp/tsp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tcvrp/error.hpp"

namespace tcvrp::tsp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cost of the path segment order[from..to] (inclusive indices).
double segment_cost(const Matrix& c, const std::vector<int>& order,
                    std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += c(order[i], order[i + 1]);
  return s;
}

// Reverses order[i..j] if that lowers the tour cost.
bool try_two_opt(const Matrix& c, std::vector<int>& order, double& cost) {
  const std::size_t last = order.size() - 1;  // position of closing anchor
  for (std::size_t i = 1; i + 1 < last; ++i) {
    for (std::size_t j = i + 1; j < last; ++j) {
      const double before = c(order[i - 1], order[i]) +
                            segment_cost(c, order, i, j) +
                            c(order[j], order[j + 1]);
      double reversed = c(order[i - 1], order[j]) + c(order[i], order[j + 1]);
      for (std::size_t k = i; k < j; ++k) reversed += c(order[k + 1], order[k]);
      if (reversed < before - 1e-12) {
        std::reverse(order.begin() + static_cast<std::ptrdiff_t>(i),
                     order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        cost += reversed - before;
        return true;
      }
    }
  }
  return false;
}

// Moves a segment of 1..3 consecutive nodes to another position, preserving
// its direction.
bool try_or_opt(const Matrix& c, std::vector<int>& order, double& cost) {
  const std::size_t last = order.size() - 1;
  for (std::size_t len = 1; len <= 3; ++len) {
    for (std::size_t i = 1; i + len <= last; ++i) {
      const std::size_t j = i + len - 1;  // segment [i, j]
      const int prev = order[i - 1];
      const int next = order[j + 1];
      const double removal = c(prev, order[i]) + c(order[j], next) - c(prev, next);
      for (std::size_t p = 0; p < last; ++p) {
        if (p + 1 >= i && p <= j) continue;  // edge touches the segment
        const int a = order[p];
        const int b = order[p + 1];
        const double insertion = c(a, order[i]) + c(order[j], b) - c(a, b);
        if (insertion - removal < -1e-12) {
          std::vector<int> seg(order.begin() + static_cast<std::ptrdiff_t>(i),
                               order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          order.erase(order.begin() + static_cast<std::ptrdiff_t>(i),
                      order.begin() + static_cast<std::ptrdiff_t>(j) + 1);
          const std::size_t at = p < i ? p + 1 : p + 1 - len;
          order.insert(order.begin() + static_cast<std::ptrdiff_t>(at),
                       seg.begin(), seg.end());
          cost += insertion - removal;
          return true;
        }
      }
    }
  }
  return false;
}

void local_search(const Matrix& c, std::vector<int>& order, double& cost) {
  while (try_two_opt(c, order, cost) || try_or_opt(c, order, cost)) {
  }
  cost = tour_cost(c, order);
}

}  // namespace

void check_instance(const Matrix& cost) {
  if (cost.rows() != cost.cols() || cost.rows() == 0) {
    fail(ErrorCode::kInput, "TSP cost matrix must be square and nonempty");
  }
  for (std::size_t i = 0; i < cost.rows(); ++i) {
    for (std::size_t j = 0; j < cost.cols(); ++j) {
      if (!(cost(i, j) >= 0.0) || !std::isfinite(cost(i, j))) {
        fail(ErrorCode::kInput, "TSP costs must be finite and nonnegative");
      }
    }
    if (cost(i, i) != 0.0) {
      fail(ErrorCode::kInput, "TSP cost matrix needs a zero diagonal");
    }
  }
}

double tour_cost(const Matrix& cost, const std::vector<int>& order) {
  return segment_cost(cost, order, 0, order.size() - 1);
}

Tour solve_exact(const Matrix& cost) {
  check_instance(cost);
  const std::size_t n = cost.rows();
  if (n > kMaxExactSize) {
    fail(ErrorCode::kInput, "exact TSP limited to " +
                                std::to_string(kMaxExactSize) +
                                " nodes; use solve_heuristic");
  }
  if (n == 1) return {{0, 0}, 0.0, true};

  // best[mask][j]: cheapest path from the anchor through the non-anchor nodes
  // in `mask`, ending at j (bit j-1).
  const std::size_t m = n - 1;
  const std::size_t full = (std::size_t{1} << m) - 1;
  std::vector<double> best((full + 1) * m, kInf);
  std::vector<int> pred((full + 1) * m, -1);
  for (std::size_t j = 0; j < m; ++j) {
    best[(std::size_t{1} << j) * m + j] = cost(0, j + 1);
  }
  for (std::size_t mask = 1; mask <= full; ++mask) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!(mask >> j & 1)) continue;
      const double here = best[mask * m + j];
      if (here == kInf) continue;
      for (std::size_t k = 0; k < m; ++k) {
        if (mask >> k & 1) continue;
        const std::size_t next = mask | (std::size_t{1} << k);
        const double cand = here + cost(j + 1, k + 1);
        if (cand < best[next * m + k]) {
          best[next * m + k] = cand;
          pred[next * m + k] = static_cast<int>(j);
        }
      }
    }
  }
  double total = kInf;
  int end = -1;
  for (std::size_t j = 0; j < m; ++j) {
    const double cand = best[full * m + j] + cost(j + 1, 0);
    if (cand < total) {
      total = cand;
      end = static_cast<int>(j);
    }
  }
  std::vector<int> order{0};
  std::size_t mask = full;
  std::vector<int> rev;
  for (int j = end; j >= 0;) {
    rev.push_back(j + 1);
    const int p = pred[mask * m + static_cast<std::size_t>(j)];
    mask &= ~(std::size_t{1} << j);
    j = p;
  }
  order.insert(order.end(), rev.rbegin(), rev.rend());
  order.push_back(0);
  return {std::move(order), total, true};
}

Tour solve_heuristic(const Matrix& cost, const HeuristicOptions& options) {
  check_instance(cost);
  const std::size_t n = cost.rows();
  if (n == 1) return {{0, 0}, 0.0, false};

  // Nearest neighbour from the anchor.
  std::vector<int> order{0};
  std::vector<char> used(n, 0);
  used[0] = 1;
  for (std::size_t step = 1; step < n; ++step) {
    const int cur = order.back();
    int pick = -1;
    for (std::size_t j = 1; j < n; ++j) {
      if (!used[j] && (pick < 0 || cost(cur, j) < cost(cur, pick))) {
        pick = static_cast<int>(j);
      }
    }
    used[pick] = 1;
    order.push_back(pick);
  }
  order.push_back(0);
  double current = tour_cost(cost, order);

  double mean_arc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) mean_arc += cost(i, j);
  }
  mean_arc /= static_cast<double>(n * (n - 1));

  std::vector<int> best = order;
  double best_cost = current;
  if (n > 3 && mean_arc > 0.0) {
    std::mt19937_64 rng(options.seed);
    const int per_level = options.moves_per_level > 0
                              ? options.moves_per_level
                              : static_cast<int>(20 * n);
    std::uniform_int_distribution<std::size_t> pos(1, n - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<int> cand;
    for (double temp = mean_arc; temp >= 1e-3 * mean_arc;
         temp *= options.cooling) {
      for (int it = 0; it < per_level; ++it) {
        std::size_t i = pos(rng);
        std::size_t j = pos(rng);
        if (i == j) continue;
        cand = order;
        if (unit(rng) < 0.5) {
          // Relocate one node.
          const int node = cand[i];
          cand.erase(cand.begin() + static_cast<std::ptrdiff_t>(i));
          cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(j), node);
        } else {
          if (i > j) std::swap(i, j);
          std::reverse(cand.begin() + static_cast<std::ptrdiff_t>(i),
                       cand.begin() + static_cast<std::ptrdiff_t>(j) + 1);
        }
        const double c = tour_cost(cost, cand);
        if (c <= current || unit(rng) < std::exp((current - c) / temp)) {
          order.swap(cand);
          current = c;
          if (current < best_cost) {
            best = order;
            best_cost = current;
          }
        }
      }
    }
  }
  local_search(cost, best, best_cost);
  return {std::move(best), best_cost, false};
}

}  // namespace tcvrp::tsp
