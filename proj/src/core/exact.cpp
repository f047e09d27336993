#include "tcvrp/exact.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "tcvrp/error.hpp"
#include "tcvrp/its.hpp"
#include "tcvrp/model.hpp"

namespace tcvrp::exact {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFeasTol = 1e-9;
constexpr double kPruneTol = 1e-9;

// Instance data shared by every node of one search.
struct Context {
  const TcvrpInstance& inst;
  int n;          // customers
  int copies;     // depot copies in the relaxation
  int min_routes;
  Matrix t_lb;  // shortest-path closure of T (service excluded)
  Matrix d_lb;  // shortest-path closure of D

  explicit Context(const TcvrpInstance& in) : inst(in), n(in.customers()) {
    copies = n;
    const auto nodes = static_cast<std::size_t>(in.nodes());
    t_lb = in.time_matrix();
    d_lb = in.dist_matrix();
    for (std::size_t k = 0; k < nodes; ++k) {
      for (std::size_t i = 0; i < nodes; ++i) {
        for (std::size_t j = 0; j < nodes; ++j) {
          t_lb(i, j) = std::min(t_lb(i, j), t_lb(i, k) + t_lb(k, j));
          d_lb(i, j) = std::min(d_lb(i, j), d_lb(i, k) + d_lb(k, j));
        }
      }
    }
    // Every customer is entered once, every route takes at most T-bar / D-bar.
    double work_t = 0.0, work_d = 0.0;
    for (int j = 1; j <= n; ++j) {
      double min_t = kInf, min_d = kInf;
      for (int i = 0; i <= n; ++i) {
        if (i == j) continue;
        min_t = std::min(min_t, in.time(i, j));
        min_d = std::min(min_d, in.dist(i, j));
      }
      work_t += min_t + in.service(j);
      work_d += min_d;
    }
    min_routes = static_cast<int>(
        std::ceil(static_cast<double>(in.total_demand()) / in.capacity() - 1e-12));
    min_routes = std::max(min_routes,
                          static_cast<int>(std::ceil(work_t / in.max_time() - 1e-9)));
    if (in.max_dist()) {
      min_routes = std::max(
          min_routes, static_cast<int>(std::ceil(work_d / *in.max_dist() - 1e-9)));
    }
    min_routes = std::clamp(min_routes, n > 0 ? 1 : 0, n);
  }

  bool within(int load, double time, double dist) const {
    if (load > inst.capacity()) return false;
    if (time > inst.max_time() + kFeasTol) return false;
    if (inst.max_dist() && dist > *inst.max_dist() + kFeasTol) return false;
    return true;
  }
};

// Minimum-cost perfect assignment (shortest augmenting paths with
// potentials). Returns +inf when no finite assignment exists.
double hungarian(const std::vector<double>& cost, int m, std::vector<int>& col_of_row) {
  const auto M = static_cast<std::size_t>(m);
  std::vector<double> u(M + 1, 0.0), v(M + 1, 0.0);
  std::vector<int> p(M + 1, 0), way(M + 1, 0);
  auto a = [&](int i, int j) {
    return cost[static_cast<std::size_t>(i - 1) * M + static_cast<std::size_t>(j - 1)];
  };
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(M + 1, kInf);
    std::vector<char> used(M + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = -1;
      for (int j = 1; j <= m; ++j) {
        const auto J = static_cast<std::size_t>(j);
        if (used[J]) continue;
        const double c = a(i0, j);
        if (c < kInf) {
          const double cur = c - u[static_cast<std::size_t>(i0)] - v[J];
          if (cur < minv[J]) {
            minv[J] = cur;
            way[J] = j0;
          }
        }
        if (minv[J] < delta) {
          delta = minv[J];
          j1 = j;
        }
      }
      if (j1 < 0) return kInf;
      for (int j = 0; j <= m; ++j) {
        const auto J = static_cast<std::size_t>(j);
        if (used[J]) {
          u[static_cast<std::size_t>(p[J])] += delta;
          v[J] -= delta;
        } else {
          minv[J] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  col_of_row.assign(M, -1);
  double total = 0.0;
  for (int j = 1; j <= m; ++j) {
    const int i = p[static_cast<std::size_t>(j)];
    col_of_row[static_cast<std::size_t>(i - 1)] = j - 1;
    total += a(i, j);
  }
  return total;
}

// Chains of included customer arcs; see propagate.
struct Chains {
  std::vector<int> succ, pred;      // customer links, -1 when none
  std::vector<char> from_depot;     // chain head entered from the depot
  std::vector<char> to_depot;       // chain tail returns to the depot
  std::vector<int> head_of, tail_of;  // per customer
  std::vector<int> load;             // per chain head
  std::vector<double> time, dist;    // internal totals per chain head
};

// Applies implied exclusions and returns false when the fixed arcs already
// rule out every feasible completion.
bool propagate(SearchNode& node, const Context& ctx, Chains* out = nullptr) {
  const TcvrpInstance& inst = ctx.inst;
  const int N = node.nodes;
  const auto S = static_cast<std::size_t>(N);
  Chains c;
  c.succ.assign(S, -1);
  c.pred.assign(S, -1);
  c.from_depot.assign(S, 0);
  c.to_depot.assign(S, 0);
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) {
      if (i == j || node.state(i, j) != ArcState::kIncluded) continue;
      if (i == 0) {
        if (c.from_depot[static_cast<std::size_t>(j)] || c.pred[static_cast<std::size_t>(j)] >= 0) return false;
        c.from_depot[static_cast<std::size_t>(j)] = 1;
      } else if (j == 0) {
        if (c.to_depot[static_cast<std::size_t>(i)] || c.succ[static_cast<std::size_t>(i)] >= 0) return false;
        c.to_depot[static_cast<std::size_t>(i)] = 1;
      } else {
        const auto I = static_cast<std::size_t>(i), J = static_cast<std::size_t>(j);
        if (c.succ[I] >= 0 || c.to_depot[I] || c.pred[J] >= 0 || c.from_depot[J]) return false;
        c.succ[I] = j;
        c.pred[J] = i;
      }
    }
  }
  c.head_of.assign(S, -1);
  c.tail_of.assign(S, -1);
  c.load.assign(S, 0);
  c.time.assign(S, 0.0);
  c.dist.assign(S, 0.0);
  for (int h = 1; h < N; ++h) {
    if (c.pred[static_cast<std::size_t>(h)] >= 0) continue;
    int load = 0;
    double t = 0.0, d = 0.0;
    int v = h, last = h;
    while (v >= 0) {
      const auto V = static_cast<std::size_t>(v);
      c.head_of[V] = h;
      load += inst.demand(v);
      t += inst.service(v);
      if (c.succ[V] >= 0) {
        t += inst.time(v, c.succ[V]);
        d += inst.dist(v, c.succ[V]);
      }
      last = v;
      v = c.succ[V];
    }
    for (int w = h; w >= 0; w = c.succ[static_cast<std::size_t>(w)]) {
      c.tail_of[static_cast<std::size_t>(w)] = last;
    }
    const auto H = static_cast<std::size_t>(h);
    c.load[H] = load;
    c.time[H] = t;
    c.dist[H] = d;
    const double st = c.from_depot[H] ? inst.time(0, h) : ctx.t_lb(0, H);
    const double sd = c.from_depot[H] ? inst.dist(0, h) : ctx.d_lb(0, H);
    const auto L = static_cast<std::size_t>(last);
    const double et = c.to_depot[L] ? inst.time(last, 0) : ctx.t_lb(L, 0);
    const double ed = c.to_depot[L] ? inst.dist(last, 0) : ctx.d_lb(L, 0);
    if (!ctx.within(load, t + st + et, d + sd + ed)) return false;
  }
  for (int v = 1; v < N; ++v) {
    if (c.head_of[static_cast<std::size_t>(v)] < 0) return false;  // customer-only cycle
  }

  auto chain_ok = [&](int h1, int t2, int load, double t, double d,
                      std::optional<int> exact_start, std::optional<int> exact_end) {
    const auto H = static_cast<std::size_t>(h1), T = static_cast<std::size_t>(t2);
    double st, sd, et, ed;
    if (exact_start) {
      st = inst.time(0, h1);
      sd = inst.dist(0, h1);
    } else if (c.from_depot[H]) {
      st = inst.time(0, h1);
      sd = inst.dist(0, h1);
    } else {
      st = ctx.t_lb(0, H);
      sd = ctx.d_lb(0, H);
    }
    if (exact_end || c.to_depot[T]) {
      et = inst.time(t2, 0);
      ed = inst.dist(t2, 0);
    } else {
      et = ctx.t_lb(T, 0);
      ed = ctx.d_lb(T, 0);
    }
    return ctx.within(load, t + st + et, d + sd + ed);
  };

  for (int a = 0; a < N; ++a) {
    for (int b = 0; b < N; ++b) {
      if (a == b || node.state(a, b) != ArcState::kFree) continue;
      const auto A = static_cast<std::size_t>(a), B = static_cast<std::size_t>(b);
      bool ok = true;
      if (a == 0) {
        ok = !c.from_depot[B] && c.pred[B] < 0;
        if (ok) {
          const int h = c.head_of[B];
          ok = chain_ok(h, c.tail_of[B], c.load[B], c.time[B], c.dist[B], b, std::nullopt);
        }
      } else if (b == 0) {
        ok = !c.to_depot[A] && c.succ[A] < 0;
        if (ok) {
          const int h = c.head_of[A];
          const auto H = static_cast<std::size_t>(h);
          ok = chain_ok(h, a, c.load[H], c.time[H], c.dist[H], std::nullopt, a);
        }
      } else {
        ok = !c.to_depot[A] && c.succ[A] < 0 && !c.from_depot[B] && c.pred[B] < 0 &&
             c.head_of[A] != b;
        if (ok) {
          const auto H = static_cast<std::size_t>(c.head_of[A]);
          ok = chain_ok(c.head_of[A], c.tail_of[B], c.load[H] + c.load[B],
                        c.time[H] + c.time[B] + inst.time(a, b),
                        c.dist[H] + c.dist[B] + inst.dist(a, b), std::nullopt,
                        std::nullopt);
        }
      }
      if (!ok) node.exclude(a, b);
    }
  }
  if (out) *out = std::move(c);
  return true;
}

struct Relaxation {
  double bound = kInf;
  std::vector<int> col_of_row;  // rows/cols: customers 0..n-1, copies n..
};

Relaxation relax(const SearchNode& node, const Context& ctx) {
  const int n = ctx.n;
  const int m = n + ctx.copies;
  const TcvrpInstance& inst = ctx.inst;
  std::vector<double> cost(static_cast<std::size_t>(m) * static_cast<std::size_t>(m), kInf);
  auto at = [&](int r, int col) -> double& {
    return cost[static_cast<std::size_t>(r) * static_cast<std::size_t>(m) +
                static_cast<std::size_t>(col)];
  };
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) {
      if (i != j && node.state(i, j) != ArcState::kExcluded) at(i - 1, j - 1) = inst.dist(i, j);
    }
    if (node.state(i, 0) != ArcState::kExcluded) {
      for (int k = 0; k < ctx.copies; ++k) at(i - 1, n + k) = inst.dist(i, 0);
    }
    if (node.state(0, i) != ArcState::kExcluded) {
      for (int k = 0; k < ctx.copies; ++k) at(n + k, i - 1) = inst.dist(0, i);
    }
  }
  for (int k = ctx.min_routes; k < ctx.copies; ++k) at(n + k, n + k) = 0.0;
  Relaxation r;
  r.bound = hungarian(cost, m, r.col_of_row);
  return r;
}

struct Evaluated {
  SearchNode node;
  Relaxation relax;
};

// Propagates and bounds `node`; bound is +inf when infeasible.
Evaluated evaluate(SearchNode node, const Context& ctx, double floor) {
  Evaluated e{std::move(node), {}};
  if (ctx.n == 0) {
    e.relax.bound = 0.0;
    return e;
  }
  if (!propagate(e.node, ctx)) return e;
  e.relax = relax(e.node, ctx);
  if (e.relax.bound < floor) e.relax.bound = floor;
  return e;
}

// A violated structure in the relaxation: some arc in it must be excluded.
struct Decoded {
  std::vector<std::vector<int>> routes;          // feasible when `violation` empty
  std::vector<std::pair<int, int>> violation;    // arcs of the chosen structure
};

Decoded decode(const SearchNode& node, const Relaxation& rel, const Context& ctx) {
  const int n = ctx.n;
  const TcvrpInstance& inst = ctx.inst;
  auto node_of = [&](int idx) { return idx < n ? idx + 1 : 0; };
  Decoded d;
  std::vector<std::vector<std::pair<int, int>>> structures;
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (int k = 0; k < ctx.copies; ++k) {
    int col = rel.col_of_row[static_cast<std::size_t>(n + k)];
    if (col == n + k) continue;
    std::vector<int> seq{0};
    while (col < n) {
      seen[static_cast<std::size_t>(col)] = 1;
      seq.push_back(node_of(col));
      col = rel.col_of_row[static_cast<std::size_t>(col)];
    }
    seq.push_back(0);
    int load = 0;
    double t = 0.0, dist = 0.0;
    std::size_t bad = 0;
    for (std::size_t p = 1; p < seq.size(); ++p) {
      const int u = seq[p - 1], v = seq[p];
      load += inst.demand(v);
      t += inst.time(u, v) + inst.service(v);
      dist += inst.dist(u, v);
      const auto V = static_cast<std::size_t>(v);
      if (!ctx.within(load, t + ctx.t_lb(V, 0), dist + ctx.d_lb(V, 0))) {
        bad = p;
        break;
      }
    }
    if (bad) {
      std::vector<std::pair<int, int>> arcs;
      for (std::size_t p = 1; p <= bad; ++p) arcs.emplace_back(seq[p - 1], seq[p]);
      structures.push_back(std::move(arcs));
    }
    d.routes.push_back(std::move(seq));
  }
  for (int s = 0; s < n; ++s) {
    if (seen[static_cast<std::size_t>(s)]) continue;
    std::vector<std::pair<int, int>> arcs;
    int v = s;
    do {
      seen[static_cast<std::size_t>(v)] = 1;
      const int w = rel.col_of_row[static_cast<std::size_t>(v)];
      arcs.emplace_back(node_of(v), node_of(w));
      v = w;
    } while (v != s);
    structures.push_back(std::move(arcs));
  }
  std::size_t best_free = std::numeric_limits<std::size_t>::max();
  for (auto& st : structures) {
    std::size_t free = 0;
    for (auto [i, j] : st) free += node.state(i, j) == ArcState::kFree;
    if (free > 0 && free < best_free) {
      best_free = free;
      d.violation = st;
    }
  }
  if (!structures.empty() && d.violation.empty()) {
    d.violation = structures.front();  // all fixed: the node is infeasible
  }
  return d;
}

struct Fnv {
  std::uint64_t h = 1469598103934665603ULL;
  void add(std::uint64_t v) {
    for (int b = 0; b < 8; ++b) {
      h ^= (v >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  }
};

}  // namespace

SearchNode SearchNode::root(const TcvrpInstance& inst) {
  SearchNode node;
  node.nodes = inst.nodes();
  node.arcs.assign(static_cast<std::size_t>(node.nodes * node.nodes), ArcState::kFree);
  for (int i = 0; i < node.nodes; ++i) node.state(i, i) = ArcState::kExcluded;
  return node;
}

void SearchNode::include(int i, int j) {
  state(i, j) = ArcState::kIncluded;
  for (int k = 0; k < nodes; ++k) {
    if (i != 0 && k != j && k != i) state(i, k) = ArcState::kExcluded;
    if (j != 0 && k != i && k != j) state(k, j) = ArcState::kExcluded;
  }
  if (i != 0 && j != 0) state(j, i) = ArcState::kExcluded;
}

double lower_bound(const SearchNode& node, const TcvrpInstance& inst) {
  if (node.nodes != inst.nodes()) fail(ErrorCode::kInput, "search node size mismatch");
  const Context ctx(inst);
  return evaluate(node, ctx, 0.0).relax.bound;
}

const char* status_name(Status s) {
  switch (s) {
    case Status::kOptimal: return "optimal";
    case Status::kGap: return "gap";
    case Status::kInfeasible: return "infeasible";
    case Status::kTimeout: return "timeout";
  }
  return "unknown";
}

double ExactResult::mip_gap() const {
  if (!std::isfinite(upper_bound)) return 100.0;
  if (upper_bound <= 0.0) return 0.0;
  return std::max(0.0, (upper_bound - lower_bound) * 100.0 / upper_bound);
}

ExactResult solve_exact(const TcvrpInstance& inst, const ExactOptions& opt) {
  if (!(opt.time_limit_s > 0.0)) fail(ErrorCode::kInput, "time limit must be positive");
  const auto start = Clock::now();
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(
                                    std::chrono::duration<double>(opt.time_limit_s));
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };

  ExactResult res;
  res.upper_bound = kInf;
  std::vector<std::vector<int>> best;

  auto offer_incumbent = [&](const std::vector<std::vector<int>>& routes) {
    const auto rep = model::validate(inst, routes, kFeasTol);
    if (rep.feasible && rep.vmt_mi < res.upper_bound) {
      res.upper_bound = rep.vmt_mi;
      best = routes;
      return true;
    }
    return false;
  };
  if (opt.incumbent) {
    if (!model::validate(inst, *opt.incumbent).feasible) {
      fail(ErrorCode::kInput, "incumbent solution is infeasible");
    }
    offer_incumbent(opt.incumbent->sequences());
  }
  if (opt.warm_start && inst.customers() > 0) {
    its::ItsConfig cfg;
    cfg.seed = opt.seed;
    cfg.time_budget_s = std::min(opt.warm_start_budget_s, opt.time_limit_s);
    try {
      offer_incumbent(its::solve_its(inst, cfg).solution.sequences());
    } catch (const Error&) {
      // no warm start; the search alone decides
    }
  }

  const Context ctx(inst);
  Fnv trace;
  auto record = [&](double lower) {
    if (res.history.empty() || res.history.back().lower != lower ||
        res.history.back().upper != res.upper_bound) {
      res.history.push_back({elapsed(), lower, res.upper_bound});
    }
  };
  auto prunable = [&](double bound) {
    if (!std::isfinite(res.upper_bound)) return !std::isfinite(bound);
    return !(bound < res.upper_bound - kPruneTol * std::max(1.0, std::abs(res.upper_bound)));
  };

  std::vector<Evaluated> stack;
  std::multiset<double> open;
  double iota = 0.0;
  auto update_iota = [&] {
    const double lo = open.empty() ? res.upper_bound : std::min(*open.begin(), res.upper_bound);
    if (std::isfinite(lo)) iota = std::max(iota, lo);
    record(iota);
  };

  {
    Evaluated root = evaluate(SearchNode::root(inst), ctx, 0.0);
    if (std::isfinite(root.relax.bound)) {
      iota = root.relax.bound;
      if (!prunable(root.relax.bound)) {
        open.insert(root.relax.bound);
        stack.push_back(std::move(root));
      }
    }
    update_iota();
  }

  bool timed_out = false;
  while (!stack.empty()) {
    if (Clock::now() >= deadline) {
      timed_out = true;
      break;
    }
    Evaluated cur = std::move(stack.back());
    stack.pop_back();
    open.erase(open.find(cur.relax.bound));
    if (prunable(cur.relax.bound)) {
      update_iota();
      continue;
    }
    ++res.nodes;
    if (ctx.n == 0) {
      offer_incumbent({});
      update_iota();
      continue;
    }
    const Decoded dec = decode(cur.node, cur.relax, ctx);
    if (dec.violation.empty()) {
      offer_incumbent(dec.routes);
      trace.add(0xfeedULL);
      trace.add(std::bit_cast<std::uint64_t>(cur.relax.bound));
      update_iota();
      continue;
    }
    std::vector<std::pair<int, int>> cand;
    for (auto a : dec.violation) {
      if (cur.node.state(a.first, a.second) == ArcState::kFree) cand.push_back(a);
    }
    if (cand.empty()) {
      update_iota();
      continue;
    }
    std::sort(cand.begin(), cand.end(), [&](auto x, auto y) {
      const double dx = inst.dist(x.first, x.second), dy = inst.dist(y.first, y.second);
      return dx != dy ? dx > dy : x < y;
    });
    cand.resize(std::min<std::size_t>(cand.size(), 3));
    std::optional<Evaluated> out_child;
    std::pair<int, int> arc{-1, -1};
    for (auto a : cand) {
      SearchNode child = cur.node;
      child.exclude(a.first, a.second);
      Evaluated e = evaluate(std::move(child), ctx, cur.relax.bound);
      if (!out_child || e.relax.bound > out_child->relax.bound ||
          (e.relax.bound == out_child->relax.bound && a < arc)) {
        out_child = std::move(e);
        arc = a;
      }
    }
    SearchNode in = cur.node;
    in.include(arc.first, arc.second);
    Evaluated in_child = evaluate(std::move(in), ctx, cur.relax.bound);
    trace.add(static_cast<std::uint64_t>(arc.first) << 32 | static_cast<std::uint32_t>(arc.second));
    trace.add(std::bit_cast<std::uint64_t>(cur.relax.bound));

    // Explore the smaller bound first; on ties the include branch.
    std::array<Evaluated*, 2> order{&in_child, &*out_child};
    if (out_child->relax.bound < in_child.relax.bound) std::swap(order[0], order[1]);
    for (int k = 1; k >= 0; --k) {
      Evaluated& e = *order[static_cast<std::size_t>(k)];
      if (!std::isfinite(e.relax.bound) || prunable(e.relax.bound)) continue;
      open.insert(e.relax.bound);
      stack.push_back(std::move(e));
    }
    update_iota();
  }

  res.elapsed_s = elapsed();
  res.trace_hash = trace.h;
  if (!timed_out && std::isfinite(res.upper_bound)) iota = res.upper_bound;
  res.lower_bound = std::isfinite(res.upper_bound) ? std::min(iota, res.upper_bound) : iota;
  record(res.lower_bound);

  if (std::isfinite(res.upper_bound)) {
    res.solution = make_solution(inst, best);
    const bool closed = res.upper_bound - res.lower_bound <=
                        kOptimalityTolerance * std::max(1.0, res.upper_bound);
    res.status = (!timed_out || closed) ? Status::kOptimal : Status::kGap;
  } else {
    res.status = timed_out ? Status::kTimeout : Status::kInfeasible;
  }
  return res;
}

}  // namespace tcvrp::exact
