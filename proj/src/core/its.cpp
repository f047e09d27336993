#include "tcvrp/its.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "tcvrp/error.hpp"
#include "tcvrp/model.hpp"

namespace tcvrp::its {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Route with prefix sums over positions 0..L-1 (depot at both ends).
struct RouteData {
  int id = 0;
  std::vector<int> seq;
  std::vector<double> ft, fd;  // forward arc sums up to position p
  std::vector<double> bt, bd;  // sums of reversed arcs (s[q+1] -> s[q]), q < p
  std::vector<double> svc;     // service sums through position p
  std::vector<int> load;       // demand sums through position p

  std::size_t last() const { return seq.size() - 1; }
  double arc_time() const { return ft.back(); }
  double time() const { return ft.back() + svc.back(); }
  double dist() const { return fd.back(); }
  int total_load() const { return load.back(); }
  std::size_t customers() const { return seq.size() - 2; }

  void rebuild(const TcvrpInstance& inst) {
    const std::size_t len = seq.size();
    ft.assign(len, 0.0);
    fd.assign(len, 0.0);
    bt.assign(len, 0.0);
    bd.assign(len, 0.0);
    svc.assign(len, 0.0);
    load.assign(len, 0);
    for (std::size_t p = 0; p < len; ++p) {
      svc[p] = (p ? svc[p - 1] : 0.0) + inst.service(seq[p]);
      load[p] = (p ? load[p - 1] : 0) + inst.demand(seq[p]);
      if (p) {
        ft[p] = ft[p - 1] + inst.time(seq[p - 1], seq[p]);
        fd[p] = fd[p - 1] + inst.dist(seq[p - 1], seq[p]);
        bt[p] = bt[p - 1] + inst.time(seq[p], seq[p - 1]);
        bd[p] = bd[p - 1] + inst.dist(seq[p], seq[p - 1]);
      }
    }
  }
};

enum class MoveType { kRelocate, kSwap, kTwoOpt, kTwoOptStar };

struct Move {
  MoveType type = MoveType::kRelocate;
  std::size_t r1 = 0, r2 = 0;  // route indices
  std::size_t i = 0, j = 0;    // positions
  double delta = kInf;
};

class Search {
 public:
  Search(const TcvrpInstance& inst, const ItsConfig& cfg, Clock::time_point deadline)
      : inst_(inst), cfg_(cfg), deadline_(deadline), rng_(cfg.seed) {
    const int n = inst.customers();
    tenure_ = cfg.tenure > 0 ? cfg.tenure
                             : std::max(1, static_cast<int>(std::lround(std::sqrt(n))));
    eject_ = cfg.perturbation > 0
                 ? cfg.perturbation
                 : std::max(1, static_cast<int>(std::ceil(0.1 * n)));
    build_candidates();
    phase_limit_ = cfg.phase_stall_iterations > 0 ? cfg.phase_stall_iterations
                                                  : std::max(25, n);
  }

  ItsResult run(const std::optional<Solution>& initial) {
    ItsResult result;
    best_cost_ = kInf;
    for (int restart = 0; restart < std::max(1, cfg_.restarts); ++restart) {
      if (restart > 0 && out_of_time()) break;
      if (restart == 0 && initial) {
        load_routes(initial->sequences());
      } else {
        load_routes(restart == 0 ? construct(inst_) : randomized_construction());
      }
      notify();
      consider_global();
      int stall = 0;
      while (stall < cfg_.max_stall_rounds) {
        const double start = cost();
        tabu_phase();
        result.phases.push_back({start, cost()});
        ++result.rounds;
        if (consider_global()) {
          stall = 0;
        } else {
          ++stall;
        }
        if (out_of_time()) break;
        perturb(eject_ + stall / 10);
      }
      if (out_of_time()) result.hit_time_budget = true;
    }
    result.solution = make_solution(inst_, best_routes_);
    result.best_cost = result.solution.vmt_mi;
    return result;
  }

 private:
  bool out_of_time() const { return Clock::now() >= deadline_; }

  double cost() const {
    double c = 0.0;
    for (const auto& r : routes_) c += r.dist();
    return c;
  }

  std::vector<std::vector<int>> sequences() const {
    std::vector<std::vector<int>> out;
    out.reserve(routes_.size());
    for (const auto& r : routes_) out.push_back(r.seq);
    return out;
  }

  void notify() const {
    if (cfg_.on_accept) cfg_.on_accept(sequences(), cost());
  }

  bool consider_global() {
    const double c = cost();
    if (c < best_cost_ - kEps) {
      best_cost_ = c;
      best_routes_ = sequences();
      return true;
    }
    return false;
  }

  void build_candidates() {
    const auto nodes = static_cast<std::size_t>(inst_.nodes());
    const int n = inst_.customers();
    const bool all = cfg_.neighbors <= 0 || cfg_.neighbors >= n - 1;
    near_.assign(nodes * nodes, all ? 1 : 0);
    if (!all) {
      const auto k = static_cast<std::size_t>(cfg_.neighbors);
      for (std::size_t u = 1; u < nodes; ++u) {
        std::vector<std::pair<double, std::size_t>> by_dist;
        for (std::size_t v = 1; v < nodes; ++v) {
          if (v != u) by_dist.emplace_back(D(int(u), int(v)) + D(int(v), int(u)), v);
        }
        std::partial_sort(by_dist.begin(), by_dist.begin() + static_cast<std::ptrdiff_t>(k),
                          by_dist.end());
        for (std::size_t r = 0; r < k; ++r) {
          const std::size_t v = by_dist[r].second;
          near_[u * nodes + v] = near_[v * nodes + u] = 1;
        }
      }
    }
    nbrs_.assign(nodes, {});
    for (std::size_t u = 0; u < nodes; ++u) {
      for (std::size_t v = 1; v < nodes; ++v) {
        if (v == u) continue;
        if (u == 0 || near_[u * nodes + v]) nbrs_[u].push_back(static_cast<int>(v));
      }
    }
  }

  bool near(int u, int v) const {
    if (u == 0 || v == 0) return true;
    return near_[static_cast<std::size_t>(u) * static_cast<std::size_t>(inst_.nodes()) +
                 static_cast<std::size_t>(v)];
  }

  void index_positions() {
    route_of_.assign(static_cast<std::size_t>(inst_.nodes()), 0);
    pos_of_.assign(static_cast<std::size_t>(inst_.nodes()), 0);
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const auto& s = routes_[r].seq;
      for (std::size_t p = 1; p + 1 < s.size(); ++p) {
        route_of_[static_cast<std::size_t>(s[p])] = r;
        pos_of_[static_cast<std::size_t>(s[p])] = p;
      }
    }
  }

  void load_routes(const std::vector<std::vector<int>>& seqs) {
    routes_.clear();
    for (const auto& s : seqs) {
      if (s.size() <= 2) continue;
      RouteData r;
      r.id = next_id_++;
      r.seq = s;
      r.rebuild(inst_);
      routes_.push_back(std::move(r));
    }
  }

  bool fits(int load, double time, double dist) const {
    if (load > inst_.capacity()) return false;
    if (time > inst_.max_time() + kEps) return false;
    if (inst_.max_dist() && dist > *inst_.max_dist() + kEps) return false;
    return true;
  }

  double T(int a, int b) const { return inst_.time(a, b); }
  double D(int a, int b) const { return inst_.dist(a, b); }

  // --- tabu bookkeeping -------------------------------------------------

  static std::uint64_t key(int customer, int route_id) {
    return (static_cast<std::uint64_t>(customer) << 32) |
           static_cast<std::uint32_t>(route_id);
  }

  bool is_tabu(int customer, int route_id) const {
    auto it = tabu_.find(key(customer, route_id));
    return it != tabu_.end() && it->second > iteration_;
  }

  void forbid_return(int customer, int route_id) {
    tabu_[key(customer, route_id)] = iteration_ + tenure_;
  }

  bool move_is_tabu(const Move& m) const {
    const RouteData& a = routes_[m.r1];
    const RouteData& b = routes_[m.r2];
    switch (m.type) {
      case MoveType::kRelocate:
        return m.r1 != m.r2 && is_tabu(a.seq[m.i], b.id);
      case MoveType::kSwap:
        return m.r1 != m.r2 &&
               (is_tabu(a.seq[m.i], b.id) || is_tabu(b.seq[m.j], a.id));
      case MoveType::kTwoOpt:
        return false;
      case MoveType::kTwoOptStar:
        for (std::size_t p = m.j + 1; p < b.last(); ++p) {
          if (is_tabu(b.seq[p], a.id)) return true;
        }
        for (std::size_t p = m.i + 1; p < a.last(); ++p) {
          if (is_tabu(a.seq[p], b.id)) return true;
        }
        return false;
    }
    return false;
  }

  // --- neighbourhood scan -------------------------------------------------

  // Offers a feasible candidate. Returns true when scanning should stop
  // because an admissible improving move was found.
  bool offer(const Move& m, bool ascent_allowed, Move& best_ascent) {
    const double current = current_cost_;
    const bool improving = m.delta < -kEps;
    if (!improving && !ascent_allowed) return false;
    if (!improving && m.delta >= best_ascent.delta) return false;
    if (move_is_tabu(m) && !(current + m.delta < best_cost_ - kEps)) return false;
    if (improving) {
      found_ = m;
      return true;
    }
    best_ascent = m;
    return false;
  }

  // Insertion slots for u: after or before a candidate neighbour, or next
  // to the depot; each slot p means between seq[p] and seq[p + 1].
  void insertion_slots(int u, std::vector<std::pair<std::size_t, std::size_t>>& out) const {
    out.clear();
    for (int v : nbrs_[static_cast<std::size_t>(u)]) {
      const std::size_t r = route_of_[static_cast<std::size_t>(v)];
      const std::size_t p = pos_of_[static_cast<std::size_t>(v)];
      out.emplace_back(r, p);
      const int pred = routes_[r].seq[p - 1];
      if (pred != 0 && !near(u, pred)) out.emplace_back(r, p - 1);
    }
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      out.emplace_back(r, 0);
      const RouteData& b = routes_[r];
      if (b.last() >= 2 && !near(u, b.seq[b.last() - 1])) out.emplace_back(r, b.last() - 1);
    }
  }

  bool scan_relocate(Move& best_ascent) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t r1 = 0; r1 < routes_.size(); ++r1) {
      const RouteData& a = routes_[r1];
      for (std::size_t i = 1; i < a.last(); ++i) {
        const int u = a.seq[i];
        const int pu = a.seq[i - 1];
        const int nu = a.seq[i + 1];
        const double rem_t = T(pu, nu) - T(pu, u) - T(u, nu);
        const double rem_d = D(pu, nu) - D(pu, u) - D(u, nu);
        const double t1 = a.arc_time() + rem_t + a.svc.back() - inst_.service(u);
        const double d1 = a.dist() + rem_d;
        const bool src_ok = fits(a.total_load() - inst_.demand(u), t1, d1);
        insertion_slots(u, slots);
        for (const auto& [r2, p] : slots) {
          const RouteData& b = routes_[r2];
          const int c = b.seq[p];
          const int d = b.seq[p + 1];
          if (r1 == r2) {
            if (p + 1 == i || p == i) continue;
            const double t = a.time() + rem_t - T(c, d) + T(c, u) + T(u, d);
            const double dd = a.dist() + rem_d - D(c, d) + D(c, u) + D(u, d);
            if (!fits(a.total_load(), t, dd)) continue;
            const Move m{MoveType::kRelocate, r1, r2, i, p, dd - a.dist()};
            if (offer(m, false, best_ascent)) return true;
            continue;
          }
          if (!src_ok) continue;
          if (b.total_load() + inst_.demand(u) > inst_.capacity()) continue;
          const double t2 = b.time() + inst_.service(u) - T(c, d) + T(c, u) + T(u, d);
          const double d2 = b.dist() - D(c, d) + D(c, u) + D(u, d);
          if (!fits(b.total_load() + inst_.demand(u), t2, d2)) continue;
          const Move m{MoveType::kRelocate, r1, r2, i, p, rem_d + d2 - b.dist()};
          if (offer(m, true, best_ascent)) return true;
        }
      }
    }
    return false;
  }

  bool scan_swap(Move& best_ascent) {
    for (std::size_t r1 = 0; r1 < routes_.size(); ++r1) {
      const RouteData& a = routes_[r1];
      for (std::size_t i = 1; i < a.last(); ++i) {
        const int u = a.seq[i];
        const int pu = a.seq[i - 1];
        const int nu = a.seq[i + 1];
        for (int v : nbrs_[static_cast<std::size_t>(u)]) {
          const std::size_t r2 = route_of_[static_cast<std::size_t>(v)];
          const std::size_t j = pos_of_[static_cast<std::size_t>(v)];
          if (std::make_pair(r2, j) <= std::make_pair(r1, i)) continue;  // each pair once
          const RouteData& b = routes_[r2];
          const int pv = b.seq[j - 1];
          const int nv = b.seq[j + 1];
          if (r1 == r2) {
            double dt, dd;
            if (j == i + 1) {
              dt = T(pu, v) + T(v, u) + T(u, nv) - T(pu, u) - T(u, v) - T(v, nv);
              dd = D(pu, v) + D(v, u) + D(u, nv) - D(pu, u) - D(u, v) - D(v, nv);
            } else {
              dt = T(pu, v) + T(v, nu) + T(pv, u) + T(u, nv) - T(pu, u) - T(u, nu) -
                   T(pv, v) - T(v, nv);
              dd = D(pu, v) + D(v, nu) + D(pv, u) + D(u, nv) - D(pu, u) - D(u, nu) -
                   D(pv, v) - D(v, nv);
            }
            if (!fits(a.total_load(), a.time() + dt, a.dist() + dd)) continue;
            const Move m{MoveType::kSwap, r1, r2, i, j, dd};
            if (offer(m, false, best_ascent)) return true;
            continue;
          }
          const int l1 = a.total_load() - inst_.demand(u) + inst_.demand(v);
          const int l2 = b.total_load() - inst_.demand(v) + inst_.demand(u);
          if (l1 > inst_.capacity() || l2 > inst_.capacity()) continue;
          const double dd1 = D(pu, v) + D(v, nu) - D(pu, u) - D(u, nu);
          const double dd2 = D(pv, u) + D(u, nv) - D(pv, v) - D(v, nv);
          const double t1 = a.time() + inst_.service(v) - inst_.service(u) + T(pu, v) +
                            T(v, nu) - T(pu, u) - T(u, nu);
          const double t2 = b.time() + inst_.service(u) - inst_.service(v) + T(pv, u) +
                            T(u, nv) - T(pv, v) - T(v, nv);
          if (!fits(l1, t1, a.dist() + dd1) || !fits(l2, t2, b.dist() + dd2)) continue;
          const Move m{MoveType::kSwap, r1, r2, i, j, dd1 + dd2};
          if (offer(m, true, best_ascent)) return true;
        }
      }
    }
    return false;
  }

  // Reversal of seq[i..j]; driven by the new arc (seq[i-1], seq[j]).
  bool scan_two_opt(Move& best_ascent) {
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const RouteData& a = routes_[r];
      const std::size_t L = a.last();
      for (std::size_t i = 1; i < L; ++i) {
        for (int w : nbrs_[static_cast<std::size_t>(a.seq[i - 1])]) {
          if (route_of_[static_cast<std::size_t>(w)] != r) continue;
          const std::size_t j = pos_of_[static_cast<std::size_t>(w)];
          if (j <= i) continue;
          const double t = a.ft[i - 1] + T(a.seq[i - 1], a.seq[j]) + (a.bt[j] - a.bt[i]) +
                           T(a.seq[i], a.seq[j + 1]) + (a.ft[L] - a.ft[j + 1]);
          const double d = a.fd[i - 1] + D(a.seq[i - 1], a.seq[j]) + (a.bd[j] - a.bd[i]) +
                           D(a.seq[i], a.seq[j + 1]) + (a.fd[L] - a.fd[j + 1]);
          if (!fits(a.total_load(), t + a.svc.back(), d)) continue;
          const Move m{MoveType::kTwoOpt, r, r, i, j, d - a.dist()};
          if (offer(m, false, best_ascent)) return true;
        }
      }
    }
    return false;
  }

  bool try_two_opt_star(std::size_t r1, std::size_t i, std::size_t r2, std::size_t j,
                        Move& best_ascent) {
    const RouteData& a = routes_[r1];
    const RouteData& b = routes_[r2];
    const std::size_t La = a.last();
    const std::size_t Lb = b.last();
    if ((i == 0 && j == 0) || (i + 1 == La && j + 1 == Lb)) return false;
    const int l1 = a.load[i] + b.total_load() - b.load[j];
    const int l2 = b.load[j] + a.total_load() - a.load[i];
    if (l1 > inst_.capacity() || l2 > inst_.capacity()) return false;
    const double d1 = a.fd[i] + D(a.seq[i], b.seq[j + 1]) + (b.fd[Lb] - b.fd[j + 1]);
    const double d2 = b.fd[j] + D(b.seq[j], a.seq[i + 1]) + (a.fd[La] - a.fd[i + 1]);
    const double delta = d1 + d2 - a.dist() - b.dist();
    if (!(delta < -kEps)) return false;
    const double t1 = a.ft[i] + T(a.seq[i], b.seq[j + 1]) + (b.ft[Lb] - b.ft[j + 1]) +
                      a.svc[i] + (b.svc[Lb] - b.svc[j]);
    const double t2 = b.ft[j] + T(b.seq[j], a.seq[i + 1]) + (a.ft[La] - a.ft[i + 1]) +
                      b.svc[j] + (a.svc[La] - a.svc[i]);
    if (!fits(l1, t1, d1) || !fits(l2, t2, d2)) return false;
    const Move m{MoveType::kTwoOptStar, r1, r2, i, j, delta};
    return offer(m, false, best_ascent);
  }

  // Tail exchange between two routes; driven by the new arc
  // (a.seq[i], b.seq[j + 1]), with the depot as a possible head.
  bool scan_two_opt_star(Move& best_ascent) {
    for (std::size_t r1 = 0; r1 < routes_.size(); ++r1) {
      const RouteData& a = routes_[r1];
      for (std::size_t i = 0; i < a.last(); ++i) {
        for (int w : nbrs_[static_cast<std::size_t>(a.seq[i])]) {
          const std::size_t r2 = route_of_[static_cast<std::size_t>(w)];
          if (r2 == r1) continue;
          if (try_two_opt_star(r1, i, r2, pos_of_[static_cast<std::size_t>(w)] - 1, best_ascent)) {
            return true;
          }
        }
        for (std::size_t r2 = 0; r2 < routes_.size(); ++r2) {
          if (r2 == r1) continue;
          if (try_two_opt_star(r1, i, r2, routes_[r2].last() - 1, best_ascent)) return true;
        }
      }
    }
    return false;
  }

  // --- move application ---------------------------------------------------

  void apply(const Move& m) {
    RouteData& a = routes_[m.r1];
    RouteData& b = routes_[m.r2];
    const auto at = [](std::size_t p) { return static_cast<std::ptrdiff_t>(p); };
    switch (m.type) {
      case MoveType::kRelocate: {
        const int u = a.seq[m.i];
        if (m.r1 == m.r2) {
          a.seq.erase(a.seq.begin() + at(m.i));
          const std::size_t pos = m.j < m.i ? m.j + 1 : m.j;
          a.seq.insert(a.seq.begin() + at(pos), u);
        } else {
          a.seq.erase(a.seq.begin() + at(m.i));
          b.seq.insert(b.seq.begin() + at(m.j + 1), u);
          forbid_return(u, a.id);
        }
        break;
      }
      case MoveType::kSwap: {
        std::swap(a.seq[m.i], b.seq[m.j]);
        if (m.r1 != m.r2) {
          forbid_return(b.seq[m.j], a.id);
          forbid_return(a.seq[m.i], b.id);
        }
        break;
      }
      case MoveType::kTwoOpt:
        std::reverse(a.seq.begin() + at(m.i), a.seq.begin() + at(m.j) + 1);
        break;
      case MoveType::kTwoOptStar: {
        std::vector<int> na(a.seq.begin(), a.seq.begin() + at(m.i) + 1);
        na.insert(na.end(), b.seq.begin() + at(m.j) + 1, b.seq.end());
        std::vector<int> nb(b.seq.begin(), b.seq.begin() + at(m.j) + 1);
        nb.insert(nb.end(), a.seq.begin() + at(m.i) + 1, a.seq.end());
        for (std::size_t p = m.i + 1; p < a.last(); ++p) forbid_return(a.seq[p], a.id);
        for (std::size_t p = m.j + 1; p < b.last(); ++p) forbid_return(b.seq[p], b.id);
        a.seq = std::move(na);
        b.seq = std::move(nb);
        break;
      }
    }
    a.rebuild(inst_);
    if (m.r1 != m.r2) b.rebuild(inst_);
    std::erase_if(routes_, [](const RouteData& r) { return r.customers() == 0; });
  }

  // One tabu phase; leaves the phase's best solution in routes_.
  void tabu_phase() {
    std::vector<RouteData> phase_best = routes_;
    double phase_best_cost = cost();
    int stall = 0;
    while (stall < phase_limit_ && !out_of_time()) {
      current_cost_ = cost();
      index_positions();
      Move ascent;
      bool improved = (cfg_.relocate && scan_relocate(ascent)) ||
                      (cfg_.swap && scan_swap(ascent)) ||
                      (cfg_.two_opt && scan_two_opt(ascent)) ||
                      (cfg_.two_opt_star && scan_two_opt_star(ascent));
      if (!improved) {
        if (ascent.delta == kInf) break;  // no admissible move at all
        found_ = ascent;
      }
      apply(found_);
      ++iteration_;
      notify();
      const double c = cost();
      if (c < phase_best_cost - kEps) {
        phase_best_cost = c;
        phase_best = routes_;
        stall = 0;
        if (c < best_cost_ - kEps) {
          best_cost_ = c;
          best_routes_ = sequences();
        }
      } else {
        ++stall;
      }
    }
    routes_ = std::move(phase_best);
  }

  // Cheapest feasible insertion of u over all routes; opens a route if none.
  void insert_cheapest(int u) {
    double best = kInf;
    std::size_t best_r = 0, best_p = 0;
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const RouteData& b = routes_[r];
      if (b.total_load() + inst_.demand(u) > inst_.capacity()) continue;
      for (std::size_t p = 0; p < b.last(); ++p) {
        const int c = b.seq[p];
        const int d = b.seq[p + 1];
        const double dd = D(c, u) + D(u, d) - D(c, d);
        if (dd >= best) continue;
        const double t = b.time() + inst_.service(u) + T(c, u) + T(u, d) - T(c, d);
        if (!fits(b.total_load() + inst_.demand(u), t, b.dist() + dd)) continue;
        best = dd;
        best_r = r;
        best_p = p;
      }
    }
    if (best == kInf) {
      RouteData r;
      r.id = next_id_++;
      r.seq = {0, u, 0};
      r.rebuild(inst_);
      routes_.push_back(std::move(r));
      return;
    }
    RouteData& b = routes_[best_r];
    b.seq.insert(b.seq.begin() + static_cast<std::ptrdiff_t>(best_p + 1), u);
    b.rebuild(inst_);
  }

  // Reinsertion at a uniformly drawn feasible position.
  void insert_random(int u) {
    std::vector<std::pair<std::size_t, std::size_t>> slots;
    for (std::size_t r = 0; r < routes_.size(); ++r) {
      const RouteData& b = routes_[r];
      if (b.total_load() + inst_.demand(u) > inst_.capacity()) continue;
      for (std::size_t p = 0; p < b.last(); ++p) {
        const int c = b.seq[p];
        const int d = b.seq[p + 1];
        const double t = b.time() + inst_.service(u) + T(c, u) + T(u, d) - T(c, d);
        const double dd = b.dist() + D(c, u) + D(u, d) - D(c, d);
        if (fits(b.total_load() + inst_.demand(u), t, dd)) slots.emplace_back(r, p);
      }
    }
    if (slots.empty()) {
      insert_cheapest(u);
      return;
    }
    std::uniform_int_distribution<std::size_t> pick(0, slots.size() - 1);
    const auto [r, p] = slots[pick(rng_)];
    RouteData& b = routes_[r];
    b.seq.insert(b.seq.begin() + static_cast<std::ptrdiff_t>(p + 1), u);
    b.rebuild(inst_);
  }

  void perturb(int count) {
    std::vector<int> all;
    for (const auto& r : routes_) {
      for (std::size_t p = 1; p < r.last(); ++p) all.push_back(r.seq[p]);
    }
    std::shuffle(all.begin(), all.end(), rng_);
    const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(count), all.size());
    std::vector<int> ejected(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k));
    std::vector<char> out(static_cast<std::size_t>(inst_.nodes()), 0);
    for (int u : ejected) out[static_cast<std::size_t>(u)] = 1;
    for (auto& r : routes_) {
      std::erase_if(r.seq, [&](int v) { return v != 0 && out[static_cast<std::size_t>(v)]; });
      r.rebuild(inst_);
    }
    std::erase_if(routes_, [](const RouteData& r) { return r.customers() == 0; });
    for (int u : ejected) insert_random(u);
    notify();
  }

  std::vector<std::vector<int>> randomized_construction() {
    std::vector<int> order(static_cast<std::size_t>(inst_.customers()));
    std::iota(order.begin(), order.end(), 1);
    std::shuffle(order.begin(), order.end(), rng_);
    routes_.clear();
    for (int u : order) insert_cheapest(u);
    return sequences();
  }

  const TcvrpInstance& inst_;
  const ItsConfig& cfg_;
  Clock::time_point deadline_;
  std::mt19937_64 rng_;
  int tenure_ = 1;
  int eject_ = 1;
  int phase_limit_ = 25;
  std::vector<char> near_;
  std::vector<std::vector<int>> nbrs_;  // candidate neighbours; depot: all
  std::vector<std::size_t> route_of_, pos_of_;

  std::vector<RouteData> routes_;
  int next_id_ = 0;
  std::unordered_map<std::uint64_t, long long> tabu_;
  long long iteration_ = 0;
  double current_cost_ = 0.0;
  Move found_;

  double best_cost_ = kInf;
  std::vector<std::vector<int>> best_routes_;
};

}  // namespace

std::vector<std::vector<int>> construct(const TcvrpInstance& inst) {
  const int n = inst.customers();
  auto fits = [&](int load, double time, double dist) {
    return load <= inst.capacity() && time <= inst.max_time() + kEps &&
           (!inst.max_dist() || dist <= *inst.max_dist() + kEps);
  };
  struct Open {
    std::vector<int> seq;
    int load = 0;
    double time = 0.0;
    double dist = 0.0;
  };
  std::vector<Open> routes;
  std::vector<char> placed(static_cast<std::size_t>(n) + 1, 0);
  placed[0] = 1;

  struct Best {
    double cost = kInf;
    std::size_t route = 0;
    std::size_t pos = 0;
  };
  std::vector<Best> best(static_cast<std::size_t>(n) + 1);

  auto scan_route = [&](int u, std::size_t r, Best& b) {
    const Open& o = routes[r];
    if (o.load + inst.demand(u) > inst.capacity()) return;
    for (std::size_t p = 0; p + 1 < o.seq.size(); ++p) {
      const int c = o.seq[p];
      const int d = o.seq[p + 1];
      const double dd = inst.dist(c, u) + inst.dist(u, d) - inst.dist(c, d);
      if (dd >= b.cost) continue;
      const double t = o.time + inst.service(u) + inst.time(c, u) +
                       inst.time(u, d) - inst.time(c, d);
      if (!fits(o.load + inst.demand(u), t, o.dist + dd)) continue;
      b = {dd, r, p};
    }
  };
  auto open_route = [&](int u) {
    const double t = inst.time(0, u) + inst.service(u) + inst.time(u, 0);
    const double d = inst.dist(0, u) + inst.dist(u, 0);
    if (!fits(inst.demand(u), t, d)) {
      fail(ErrorCode::kInfeasible,
           "node " + std::to_string(u) + " cannot be placed on any route");
    }
    routes.push_back({{0, u, 0}, inst.demand(u), t, d});
    placed[static_cast<std::size_t>(u)] = 1;
  };

  for (int remaining = n; remaining > 0; --remaining) {
    int pick = -1;
    for (int u = 1; u <= n; ++u) {
      if (placed[static_cast<std::size_t>(u)]) continue;
      if (best[static_cast<std::size_t>(u)].cost < kInf &&
          (pick < 0 || best[static_cast<std::size_t>(u)].cost <
                           best[static_cast<std::size_t>(pick)].cost)) {
        pick = u;
      }
    }
    std::size_t changed;
    if (pick < 0) {
      // Seed a new route with the unplaced customer farthest from the depot.
      int far = -1;
      double far_d = -1.0;
      for (int u = 1; u <= n; ++u) {
        if (placed[static_cast<std::size_t>(u)]) continue;
        const double d = inst.dist(0, u) + inst.dist(u, 0);
        if (d > far_d) {
          far = u;
          far_d = d;
        }
      }
      open_route(far);
      changed = routes.size() - 1;
    } else {
      const Best b = best[static_cast<std::size_t>(pick)];
      Open& o = routes[b.route];
      const int c = o.seq[b.pos];
      const int d = o.seq[b.pos + 1];
      o.time += inst.service(pick) + inst.time(c, pick) + inst.time(pick, d) -
                inst.time(c, d);
      o.dist += b.cost;
      o.load += inst.demand(pick);
      o.seq.insert(o.seq.begin() + static_cast<std::ptrdiff_t>(b.pos + 1), pick);
      placed[static_cast<std::size_t>(pick)] = 1;
      changed = b.route;
    }
    for (int u = 1; u <= n; ++u) {
      if (placed[static_cast<std::size_t>(u)]) continue;
      Best& b = best[static_cast<std::size_t>(u)];
      if (b.cost < kInf && b.route == changed) {
        b = Best{};
        for (std::size_t r = 0; r < routes.size(); ++r) scan_route(u, r, b);
      } else {
        scan_route(u, changed, b);
      }
    }
  }
  std::vector<std::vector<int>> out;
  out.reserve(routes.size());
  for (auto& o : routes) out.push_back(std::move(o.seq));
  return out;
}

ItsResult solve_its(const TcvrpInstance& inst, const ItsConfig& cfg,
                    const std::optional<Solution>& initial) {
  if (!(cfg.time_budget_s > 0.0)) fail(ErrorCode::kInput, "ITS budget must be positive");
  if (cfg.tenure < 0) fail(ErrorCode::kInput, "ITS tenure must be >= 1");
  if (initial) {
    const auto rep = model::validate(inst, *initial);
    if (!rep.feasible) {
      fail(ErrorCode::kInput, "initial solution is infeasible (" +
                                  rep.violations.front().family + ")");
    }
  }
  if (inst.customers() == 0) {
    ItsResult r;
    r.solution = make_solution(inst, {});
    return r;
  }
  const auto deadline =
      Clock::now() + std::chrono::duration_cast<Clock::duration>(
                         std::chrono::duration<double>(cfg.time_budget_s));
  Search search(inst, cfg, deadline);
  return search.run(initial);
}

ItsResult best_of_runs(const TcvrpInstance& inst, const ItsConfig& cfg, int runs,
                       const std::optional<Solution>& initial) {
  if (runs < 1) fail(ErrorCode::kInput, "runs must be >= 1");
  std::optional<ItsResult> best;
  std::optional<Error> last_error;
  for (int r = 0; r < runs; ++r) {
    ItsConfig c = cfg;
    c.seed = cfg.seed + static_cast<std::uint64_t>(r);
    try {
      ItsResult res = solve_its(inst, c, initial);
      if (!best || res.best_cost < best->best_cost) best = std::move(res);
    } catch (const Error& e) {
      last_error = e;
    }
  }
  if (!best) throw *last_error;
  return std::move(*best);
}

}  // namespace tcvrp::its
