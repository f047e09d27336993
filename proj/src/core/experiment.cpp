#include "tcvrp/experiment.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <tuple>

#include "tcvrp/error.hpp"
#include "tcvrp/its.hpp"
#include "tcvrp/model.hpp"

namespace tcvrp::experiment {

const char* solver_name(Solver s) {
  switch (s) {
    case Solver::kAuto: return "auto";
    case Solver::kExact: return "exact";
    case Solver::kIts: return "its";
  }
  return "unknown";
}

SolveOutcome solve(const TcvrpInstance& inst, const SolveOptions& opt,
                   const std::optional<Solution>& warm) {
  if (!(opt.time_limit_s > 0.0)) fail(ErrorCode::kInput, "time limit must be positive");
  if (opt.runs < 1) fail(ErrorCode::kInput, "runs must be >= 1");
  SolveOutcome out;
  out.used = opt.solver;
  if (out.used == Solver::kAuto) {
    out.used = inst.customers() > kAutoExactLimit ? Solver::kIts : Solver::kExact;
  }
  if (out.used == Solver::kExact) {
    exact::ExactOptions eo;
    eo.time_limit_s = opt.time_limit_s;
    eo.seed = opt.seed;
    eo.incumbent = warm;
    out.exact = exact::solve_exact(inst, eo);
    out.solution = out.exact->solution;
  } else {
    its::ItsConfig cfg;
    cfg.seed = opt.seed;
    cfg.time_budget_s = opt.time_limit_s;
    out.solution = its::best_of_runs(inst, cfg, opt.runs, warm).solution;
  }
  if (out.solution) {
    const auto rep = model::validate(inst, *out.solution);
    if (!rep.feasible) {
      fail(ErrorCode::kInternal, "solver returned an infeasible solution (" +
                                     rep.violations.front().family + ")");
    }
  }
  return out;
}

void check(const SweepConfig& cfg) {
  if (cfg.capacity.empty() || cfg.max_time_h.empty() || cfg.dwell_min.empty() ||
      cfg.vehicles.empty()) {
    fail(ErrorCode::kInput, "sweep lists must be nonempty");
  }
  const bool bev = std::find(cfg.vehicles.begin(), cfg.vehicles.end(),
                             metrics::VehicleType::kBev) != cfg.vehicles.end();
  if (bev && cfg.bev_range_mi.empty()) fail(ErrorCode::kInput, "BEV cells need a range");
  for (int q : cfg.capacity) {
    if (q < 1) fail(ErrorCode::kInput, "Q must be >= 1");
  }
  for (double t : cfg.max_time_h) {
    if (!(t > 0.0)) fail(ErrorCode::kInput, "Tbar must be positive");
  }
  for (double p : cfg.dwell_min) {
    if (!(p >= 0.0)) fail(ErrorCode::kInput, "P must be >= 0");
  }
  for (double d : cfg.bev_range_mi) {
    if (!(d > 0.0)) fail(ErrorCode::kInput, "range must be positive");
  }
  if (!(cfg.solve.time_limit_s > 0.0) || cfg.solve.runs < 1) {
    fail(ErrorCode::kInput, "solver budget must be positive");
  }
}

namespace {

struct Cell {
  int capacity;
  double max_time_h;
  double dwell_min;
  metrics::VehicleType vehicle;
  std::optional<double> range;
};

std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::vector<CellResult> run_sweep(const city::City& city, const SweepConfig& cfg,
                                  const std::function<void(const CellResult&)>& progress) {
  check(cfg);
  // Loose limits: the structure (sites, matrices) does not depend on them.
  city::PipelineParams pp;
  pp.shared_economy = cfg.shared_economy;
  pp.seed = cfg.seed;
  pp.limits = {std::numeric_limits<int>::max(), 1e12, 0.0, std::nullopt};
  const city::PipelineResult base = city::run_pipeline(city, pp);

  // Output order: dwell, vehicle, range, then (Q, Tbar).
  std::vector<Cell> cells;
  for (double p : cfg.dwell_min) {
    for (auto v : cfg.vehicles) {
      std::vector<std::optional<double>> ranges;
      if (v == metrics::VehicleType::kBev) {
        ranges.assign(cfg.bev_range_mi.begin(), cfg.bev_range_mi.end());
      } else {
        ranges.push_back(std::nullopt);
      }
      for (const auto& r : ranges) {
        std::vector<Cell> group;
        for (int q : cfg.capacity) {
          for (double t : cfg.max_time_h) group.push_back({q, t, p, v, r});
        }
        std::stable_sort(group.begin(), group.end(), [](const Cell& a, const Cell& b) {
          return std::tie(a.capacity, a.max_time_h) < std::tie(b.capacity, b.max_time_h);
        });
        cells.insert(cells.end(), group.begin(), group.end());
      }
    }
  }
  // Solve order: dwell, (Q, Tbar), CV before BEV. A BEV cell can then reuse
  // the CV plan of the same limits when every route fits the range.
  std::vector<std::size_t> order(cells.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Cell& x = cells[a];
    const Cell& y = cells[b];
    const auto dwell_rank = [&](double p) {
      return std::find(cfg.dwell_min.begin(), cfg.dwell_min.end(), p) - cfg.dwell_min.begin();
    };
    return std::make_tuple(dwell_rank(x.dwell_min), x.capacity, x.max_time_h,
                           x.vehicle == metrics::VehicleType::kBev) <
           std::make_tuple(dwell_rank(y.dwell_min), y.capacity, y.max_time_h,
                           y.vehicle == metrics::VehicleType::kBev);
  });

  std::vector<CellResult> results(cells.size());
  // Solutions of earlier cells with the same dwell, per depot: warm-start
  // candidates for any vehicle type.
  std::map<double, std::vector<std::vector<Solution>>> history;
  std::map<std::tuple<double, int, double>, std::vector<Solution>> cv_plans;
  std::map<double, city::PipelineResult> by_dwell;
  for (std::size_t idx : order) {
    const Cell& c = cells[idx];
    CellResult cr;
    cr.report.key = {city.config.name, c.capacity, c.max_time_h, c.dwell_min, c.range,
                     c.vehicle};
    try {
      auto it = by_dwell.find(c.dwell_min);
      if (it == by_dwell.end()) {
        InstanceParams loose = pp.limits;
        loose.dwell_min = c.dwell_min;
        it = by_dwell.emplace(c.dwell_min, city::rebuild(base, city, loose)).first;
      }
      const auto& prepared = it->second.depots;
      auto& past = history[c.dwell_min];
      past.resize(prepared.size());
      const auto cv_key = std::make_tuple(c.dwell_min, c.capacity, c.max_time_h);
      const auto cv_it = cv_plans.find(cv_key);
      const double per_depot = cfg.solve.time_limit_s /
                               static_cast<double>(std::max<std::size_t>(1, prepared.size()));
      std::vector<TcvrpInstance> instances;
      for (std::size_t d = 0; d < prepared.size(); ++d) {
        instances.push_back(prepared[d].instance.with_limits(c.capacity, c.max_time_h * 60.0,
                                                             c.range));
      }
      for (std::size_t d = 0; d < prepared.size(); ++d) {
        const TcvrpInstance& inst = instances[d];
        if (c.vehicle == metrics::VehicleType::kBev && cv_it != cv_plans.end() &&
            model::validate(inst, cv_it->second[d]).feasible) {
          cr.solutions.push_back(cv_it->second[d]);
          continue;
        }
        std::optional<Solution> warm;
        for (const Solution& s : past[d]) {
          if ((!warm || s.vmt_mi < warm->vmt_mi) && model::validate(inst, s).feasible) warm = s;
        }
        SolveOptions so = cfg.solve;
        so.time_limit_s = per_depot / (so.solver == Solver::kExact ? 1 : so.runs);
        const SolveOutcome out = solve(inst, so, warm);
        if (!out.solution) {
          fail(ErrorCode::kInfeasible, "depot " + std::to_string(prepared[d].depot.id) +
                                           ": no solution");
        }
        cr.solutions.push_back(*out.solution);
      }
      std::vector<std::pair<const TcvrpInstance*, const Solution*>> pairs;
      for (std::size_t d = 0; d < prepared.size(); ++d) {
        pairs.emplace_back(&instances[d], &cr.solutions[d]);
        past[d].push_back(cr.solutions[d]);
      }
      if (c.vehicle == metrics::VehicleType::kCv) cv_plans[cv_key] = cr.solutions;
      const auto key = cr.report.key;
      cr.report = metrics::summarize(pairs, key);
    } catch (const Error& e) {
      cr.ok = false;
      cr.solutions.clear();
      cr.report.status = sanitize(e.what());
    }
    if (progress) progress(cr);
    results[idx] = std::move(cr);
  }
  return results;
}

}  // namespace tcvrp::experiment
