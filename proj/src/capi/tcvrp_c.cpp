#include "tcvrp/tcvrp.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <limits>
#include <new>
#include <optional>
#include <sstream>
#include <string>

#include "tcvrp/city.hpp"
#include "tcvrp/error.hpp"
#include "tcvrp/experiment.hpp"
#include "tcvrp/io.hpp"
#include "tcvrp/metrics.hpp"
#include "tcvrp/model.hpp"
#include "tcvrp/mps.hpp"

struct tcvrp_instance {
  tcvrp::TcvrpInstance inst;
  nlohmann::json meta;
};

struct tcvrp_solution {
  tcvrp::Solution sol;
  std::optional<tcvrp::exact::ExactResult> exact;
};

namespace {

using nlohmann::json;
using tcvrp::ErrorCode;

thread_local std::string last_error;

tcvrp_status to_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::kInput: return TCVRP_ERR_INPUT;
    case ErrorCode::kInfeasible: return TCVRP_ERR_INFEASIBLE;
    case ErrorCode::kIo: return TCVRP_ERR_IO;
    case ErrorCode::kInternal: return TCVRP_ERR_INTERNAL;
  }
  return TCVRP_ERR_INTERNAL;
}

template <typename F>
tcvrp_status guard(F&& f) {
  try {
    last_error.clear();
    return f();
  } catch (const tcvrp::Error& e) {
    last_error = e.what();
    return to_status(e.code());
  } catch (const json::exception& e) {
    last_error = e.what();
    return TCVRP_ERR_INPUT;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return TCVRP_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return TCVRP_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) tcvrp::fail(ErrorCode::kInput, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

json solution_json(const tcvrp_solution& s) {
  json j = s.exact ? tcvrp::io::to_json(*s.exact) : tcvrp::io::to_json(s.sol);
  j["solver"] = s.exact ? "exact" : "its";
  return j;
}

tcvrp::InstanceParams limits_of(const tcvrp_params& p) {
  tcvrp::InstanceParams l;
  l.capacity = p.q;
  l.max_time_min = p.tbar_h * 60.0;
  l.dwell_min = p.p_min;
  l.max_dist_mi = p.dbar_mi > 0.0 ? std::optional<double>(p.dbar_mi) : std::nullopt;
  return l;
}

}  // namespace

extern "C" {

const char* tcvrp_version(void) { return "1.0.0"; }

const char* tcvrp_last_error(void) { return last_error.c_str(); }

void tcvrp_string_free(char* s) { std::free(s); }

tcvrp_status tcvrp_instance_read(const char* path, tcvrp_instance** out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    const json j = tcvrp::io::read_json(path);
    *out = new tcvrp_instance{tcvrp::io::instance_from_json(j), j.value("meta", json::object())};
    return TCVRP_OK;
  });
}

tcvrp_status tcvrp_instance_from_json(const char* text, tcvrp_instance** out) {
  return guard([&] {
    require(text, "json");
    require(out, "out");
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      tcvrp::fail(ErrorCode::kInput, e.what());
    }
    *out = new tcvrp_instance{tcvrp::io::instance_from_json(j), j.value("meta", json::object())};
    return TCVRP_OK;
  });
}

void tcvrp_instance_free(tcvrp_instance* inst) { delete inst; }

int tcvrp_instance_customers(const tcvrp_instance* inst) {
  return inst ? inst->inst.customers() : -1;
}

tcvrp_status tcvrp_export_mps(const tcvrp_instance* inst, const char* path) {
  return guard([&] {
    require(inst, "instance");
    require(path, "path");
    tcvrp::mps::export_mps(tcvrp::model::build_mip(inst->inst), path);
    return TCVRP_OK;
  });
}

void tcvrp_solve_options_init(tcvrp_solve_options* opt) {
  if (!opt) return;
  opt->solver = TCVRP_SOLVER_AUTO;
  opt->time_limit_s = 60.0;
  opt->runs = 1;
  opt->seed = 1;
}

tcvrp_status tcvrp_solve(const tcvrp_instance* inst, const tcvrp_solve_options* opt,
                         tcvrp_solution** out) {
  return guard([&] {
    require(inst, "instance");
    require(out, "out");
    *out = nullptr;
    tcvrp_solve_options o;
    tcvrp_solve_options_init(&o);
    if (opt) o = *opt;
    tcvrp::experiment::SolveOptions so;
    switch (o.solver) {
      case TCVRP_SOLVER_AUTO: so.solver = tcvrp::experiment::Solver::kAuto; break;
      case TCVRP_SOLVER_EXACT: so.solver = tcvrp::experiment::Solver::kExact; break;
      case TCVRP_SOLVER_ITS: so.solver = tcvrp::experiment::Solver::kIts; break;
      default: tcvrp::fail(ErrorCode::kInput, "unknown solver");
    }
    so.time_limit_s = o.time_limit_s;
    so.runs = o.runs;
    so.seed = o.seed;
    auto res = tcvrp::experiment::solve(inst->inst, so);
    if (!res.solution) {
      const bool timeout = res.exact && res.exact->status == tcvrp::exact::Status::kTimeout;
      last_error = timeout ? "time limit reached without a feasible solution"
                           : "instance is infeasible";
      return timeout ? TCVRP_ERR_TIMEOUT : TCVRP_ERR_INFEASIBLE;
    }
    *out = new tcvrp_solution{*res.solution, res.exact};
    return TCVRP_OK;
  });
}

void tcvrp_solution_free(tcvrp_solution* sol) { delete sol; }

double tcvrp_solution_vmt_mi(const tcvrp_solution* sol) {
  return sol ? sol->sol.vmt_mi : std::numeric_limits<double>::quiet_NaN();
}

double tcvrp_solution_vht_min(const tcvrp_solution* sol) {
  return sol ? sol->sol.vht_min : std::numeric_limits<double>::quiet_NaN();
}

int tcvrp_solution_vehicles(const tcvrp_solution* sol) {
  return sol ? sol->sol.vehicles() : -1;
}

const char* tcvrp_solution_status(const tcvrp_solution* sol) {
  if (!sol) return "";
  return sol->exact ? tcvrp::exact::status_name(sol->exact->status) : "heuristic";
}

double tcvrp_solution_lower_bound(const tcvrp_solution* sol) {
  return sol && sol->exact ? sol->exact->lower_bound : std::numeric_limits<double>::quiet_NaN();
}

double tcvrp_solution_mip_gap(const tcvrp_solution* sol) {
  return sol && sol->exact ? sol->exact->mip_gap() : std::numeric_limits<double>::quiet_NaN();
}

tcvrp_status tcvrp_solution_to_json(const tcvrp_solution* sol, char** out) {
  return guard([&] {
    require(sol, "solution");
    require(out, "out");
    *out = dup_string(solution_json(*sol).dump());
    return TCVRP_OK;
  });
}

tcvrp_status tcvrp_solution_write(const tcvrp_solution* sol, const char* path) {
  return guard([&] {
    require(sol, "solution");
    require(path, "path");
    tcvrp::io::write_json(path, solution_json(*sol));
    return TCVRP_OK;
  });
}

tcvrp_status tcvrp_solution_read(const tcvrp_instance* inst, const char* path,
                                 tcvrp_solution** out) {
  return guard([&] {
    require(inst, "instance");
    require(path, "path");
    require(out, "out");
    const json j = tcvrp::io::read_json(path);
    auto* s = new tcvrp_solution{tcvrp::io::solution_from_json(inst->inst, j), std::nullopt};
    if (j.contains("lower_bound_mi") && j.contains("status")) {
      tcvrp::exact::ExactResult r;
      r.solution = s->sol;
      r.lower_bound = j["lower_bound_mi"].get<double>();
      r.upper_bound = s->sol.vmt_mi;
      const std::string st = j["status"].get<std::string>();
      r.status = st == "optimal" ? tcvrp::exact::Status::kOptimal : tcvrp::exact::Status::kGap;
      s->exact = r;
    }
    *out = s;
    return TCVRP_OK;
  });
}

tcvrp_status tcvrp_solution_validate(const tcvrp_instance* inst, const tcvrp_solution* sol,
                                     int* feasible, char** out_report) {
  return guard([&] {
    require(inst, "instance");
    require(sol, "solution");
    require(feasible, "feasible");
    const auto rep = tcvrp::model::validate(inst->inst, sol->sol);
    *feasible = rep.feasible ? 1 : 0;
    if (out_report) {
      json v = json::array();
      for (const auto& x : rep.violations) {
        v.push_back({{"family", x.family}, {"route", x.route}, {"margin", x.margin},
                     {"detail", x.detail}});
      }
      *out_report = dup_string(json{{"feasible", rep.feasible},
                                    {"vmt_mi", rep.vmt_mi},
                                    {"vht_min", rep.vht_min},
                                    {"violations", v}}
                                   .dump());
    }
    return TCVRP_OK;
  });
}

void tcvrp_params_init(tcvrp_params* p) {
  if (!p) return;
  p->q = 120;
  p->tbar_h = 10.0;
  p->p_min = 2.0;
  p->dbar_mi = 80.0;
  p->shared_economy = 0;
  p->seed = 1;
}

tcvrp_status tcvrp_gen_city(const char* config_json, const char* out_dir) {
  return guard([&] {
    require(out_dir, "out_dir");
    json j = json::object();
    if (config_json && *config_json) {
      try {
        j = json::parse(config_json);
      } catch (const json::parse_error& e) {
        tcvrp::fail(ErrorCode::kInput, e.what());
      }
    }
    tcvrp::city::write_city(tcvrp::city::generate(tcvrp::city::config_from_json(j)), out_dir);
    return TCVRP_OK;
  });
}

tcvrp_status tcvrp_pipeline(const char* city_dir, const tcvrp_params* p, const char* out_dir,
                            char** summary_json) {
  return guard([&] {
    require(city_dir, "city_dir");
    require(out_dir, "out_dir");
    tcvrp_params params;
    tcvrp_params_init(&params);
    if (p) params = *p;
    const auto city = tcvrp::city::read_city(city_dir);
    tcvrp::city::PipelineParams pp;
    pp.limits = limits_of(params);
    pp.shared_economy = params.shared_economy != 0;
    pp.seed = params.seed;
    const auto result = tcvrp::city::run_pipeline(city, pp);
    const auto paths = tcvrp::city::write_pipeline(result, city, pp, out_dir);
    if (summary_json) {
      json depots = json::array();
      for (const auto& [id, count] : result.customers_per_depot) {
        json d = {{"depot", id}, {"customers", count}};
        for (std::size_t k = 0; k < result.depots.size(); ++k) {
          if (result.depots[k].depot.id == id) {
            d["provider"] = result.depots[k].depot.provider;
            d["super_locations"] = result.depots[k].instance.customers();
            d["file"] = paths[k].string();
          }
        }
        depots.push_back(d);
      }
      *summary_json = dup_string(json{{"city", city.config.name},
                                      {"customers", result.customers},
                                      {"assignment_mi", result.assignment.total_distance_mi},
                                      {"depots", depots}}
                                     .dump());
    }
    return TCVRP_OK;
  });
}

tcvrp_status tcvrp_sweep(const char* city_dir, const char* sweep_json, const char* out_csv) {
  return guard([&] {
    require(city_dir, "city_dir");
    require(out_csv, "out_csv");
    json j = json::object();
    if (sweep_json && *sweep_json) {
      try {
        j = json::parse(sweep_json);
      } catch (const json::parse_error& e) {
        tcvrp::fail(ErrorCode::kInput, e.what());
      }
    }
    namespace ex = tcvrp::experiment;
    ex::SweepConfig cfg;
    cfg.capacity = j.value("Q", cfg.capacity);
    cfg.max_time_h = j.value("Tbar_h", cfg.max_time_h);
    cfg.dwell_min = j.value("P_min", cfg.dwell_min);
    cfg.bev_range_mi = j.value("Dbar_mi", cfg.bev_range_mi);
    if (j.contains("vehicles")) {
      cfg.vehicles.clear();
      for (const auto& v : j["vehicles"]) {
        const auto name = v.get<std::string>();
        if (name == "bev") {
          cfg.vehicles.push_back(tcvrp::metrics::VehicleType::kBev);
        } else if (name == "cv") {
          cfg.vehicles.push_back(tcvrp::metrics::VehicleType::kCv);
        } else {
          tcvrp::fail(ErrorCode::kInput, "unknown vehicle type " + name);
        }
      }
    }
    const std::string solver = j.value("solver", std::string("its"));
    if (solver == "its") {
      cfg.solve.solver = ex::Solver::kIts;
    } else if (solver == "exact") {
      cfg.solve.solver = ex::Solver::kExact;
    } else if (solver == "auto") {
      cfg.solve.solver = ex::Solver::kAuto;
    } else {
      tcvrp::fail(ErrorCode::kInput, "unknown solver " + solver);
    }
    cfg.solve.time_limit_s = j.value("time_limit_s", cfg.solve.time_limit_s);
    cfg.solve.runs = j.value("runs", cfg.solve.runs);
    cfg.solve.seed = j.value("seed", cfg.solve.seed);
    cfg.seed = cfg.solve.seed;
    cfg.shared_economy = j.value("shared_economy", false);

    const auto city = tcvrp::city::read_city(city_dir);
    std::ofstream out(out_csv);
    if (!out) tcvrp::fail(ErrorCode::kIo, std::string("cannot write ") + out_csv);
    out << tcvrp::metrics::csv_header() << '\n';
    out.flush();
    ex::run_sweep(city, cfg, [&](const ex::CellResult& c) {
      out << tcvrp::metrics::csv_row(c.report) << '\n';
      out.flush();
    });
    if (!out) tcvrp::fail(ErrorCode::kIo, std::string("write failed for ") + out_csv);
    return TCVRP_OK;
  });
}

tcvrp_status tcvrp_report(const char* const* instance_paths, const char* const* solution_paths,
                          size_t count, char** csv_out) {
  return guard([&] {
    require(csv_out, "csv_out");
    if (count == 0) tcvrp::fail(ErrorCode::kInput, "report needs at least one instance");
    require(instance_paths, "instance_paths");
    require(solution_paths, "solution_paths");
    std::vector<tcvrp::TcvrpInstance> insts;
    std::vector<tcvrp::Solution> sols;
    json meta;
    int exact_runs = 0, optimal = 0;
    double gap_sum = 0.0;
    for (size_t i = 0; i < count; ++i) {
      const json ij = tcvrp::io::read_json(instance_paths[i]);
      if (i == 0) meta = ij.value("meta", json::object());
      insts.push_back(tcvrp::io::instance_from_json(ij));
      const json sj = tcvrp::io::read_json(solution_paths[i]);
      sols.push_back(tcvrp::io::solution_from_json(insts.back(), sj));
      if (sj.contains("lower_bound_mi") && sj.contains("status")) {
        ++exact_runs;
        optimal += sj["status"] == "optimal";
        gap_sum += sj.value("mip_gap_pct", 0.0);
      }
    }
    const auto& first = insts.front();
    tcvrp::metrics::ScenarioKey key;
    key.city = meta.value("city", std::string());
    key.capacity = first.capacity();
    key.max_time_h = first.max_time() / 60.0;
    key.dwell_min = meta.value("P_min", std::numeric_limits<double>::quiet_NaN());
    key.max_dist_mi = first.max_dist();
    key.vehicle = first.max_dist() ? tcvrp::metrics::VehicleType::kBev
                                   : tcvrp::metrics::VehicleType::kCv;
    std::vector<std::pair<const tcvrp::TcvrpInstance*, const tcvrp::Solution*>> pairs;
    for (size_t i = 0; i < count; ++i) pairs.emplace_back(&insts[i], &sols[i]);
    auto report = tcvrp::metrics::summarize(pairs, key);
    if (exact_runs > 0) {
      tcvrp::metrics::GapStats g;
      g.instances = exact_runs;
      g.optimal = optimal;
      g.mean_mip_gap = gap_sum / exact_runs;
      report.gaps = g;
    }
    *csv_out = dup_string(tcvrp::metrics::csv_header() + "\n" +
                          tcvrp::metrics::csv_row(report) + "\n");
    return TCVRP_OK;
  });
}

}  // extern "C"
