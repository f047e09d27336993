// Command-line front end over the C API.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tcvrp/tcvrp.h"

namespace {

using nlohmann::json;

enum Exit { kOk = 0, kNoSolution = 1, kBadInput = 2 };

int exit_code(tcvrp_status s) {
  switch (s) {
    case TCVRP_OK: return kOk;
    case TCVRP_ERR_INPUT:
    case TCVRP_ERR_IO: return kBadInput;
    default: return kNoSolution;
  }
}

int report_failure(const char* what, tcvrp_status s) {
  std::cerr << "tcvrp " << what << ": " << tcvrp_last_error() << "\n";
  return exit_code(s);
}

struct OwnedString {
  char* p = nullptr;
  ~OwnedString() { tcvrp_string_free(p); }
};

struct Instance {
  tcvrp_instance* p = nullptr;
  ~Instance() { tcvrp_instance_free(p); }
};

struct Sol {
  tcvrp_solution* p = nullptr;
  ~Sol() { tcvrp_solution_free(p); }
};

bool write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
  return static_cast<bool>(out);
}

struct Common {
  int q = 120;
  double tbar_h = 10.0;
  double p_min = 2.0;
  double dbar_mi = 80.0;
  std::string vehicle = "bev";
  std::string solver = "auto";
  double time_limit_s = 60.0;
  int runs = 1;
  std::uint64_t seed = 1;
  bool shared_economy = false;
  std::string out;
};

void add_limits(CLI::App* app, Common& c) {
  app->add_option("--q", c.q, "vehicle capacity Q (packages)")->check(CLI::PositiveNumber);
  app->add_option("--tbar-h", c.tbar_h, "maximum route duration (hours)")->check(CLI::PositiveNumber);
  app->add_option("--p-min", c.p_min, "dwell time per customer (minutes)")->check(CLI::NonNegativeNumber);
  app->add_option("--dbar-mi", c.dbar_mi, "BEV range (miles)")->check(CLI::PositiveNumber);
  app->add_option("--vehicle", c.vehicle, "vehicle type")->check(CLI::IsMember({"bev", "cv"}));
}

void add_solver(CLI::App* app, Common& c) {
  app->add_option("--solver", c.solver, "exact or its (default: by instance size)")
      ->check(CLI::IsMember({"auto", "exact", "its"}));
  app->add_option("--time-limit-s", c.time_limit_s, "time limit in seconds")
      ->check(CLI::PositiveNumber);
  app->add_option("--runs", c.runs, "independent ITS runs")->check(CLI::PositiveNumber);
  app->add_option("--seed", c.seed, "root random seed");
}

tcvrp_solver solver_of(const std::string& s) {
  if (s == "exact") return TCVRP_SOLVER_EXACT;
  if (s == "its") return TCVRP_SOLVER_ITS;
  return TCVRP_SOLVER_AUTO;
}

int cmd_gen(const std::string& config_path, const json& overrides, const Common& c) {
  json cfg = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "tcvrp gen: cannot open " << config_path << "\n";
      return kBadInput;
    }
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cerr << "tcvrp gen: " << config_path << ": " << e.what() << "\n";
      return kBadInput;
    }
  }
  for (auto it = overrides.begin(); it != overrides.end(); ++it) cfg[it.key()] = it.value();
  const tcvrp_status s = tcvrp_gen_city(cfg.dump().c_str(), c.out.c_str());
  if (s != TCVRP_OK) return report_failure("gen", s);
  std::cout << "city written to " << c.out << "\n";
  return kOk;
}

int cmd_pipeline(const std::string& city, const Common& c) {
  tcvrp_params p;
  tcvrp_params_init(&p);
  p.q = c.q;
  p.tbar_h = c.tbar_h;
  p.p_min = c.p_min;
  p.dbar_mi = c.vehicle == "bev" ? c.dbar_mi : 0.0;
  p.shared_economy = c.shared_economy;
  p.seed = c.seed;
  OwnedString summary;
  const tcvrp_status s = tcvrp_pipeline(city.c_str(), &p, c.out.c_str(), &summary.p);
  if (s != TCVRP_OK) return report_failure("pipeline", s);
  const json j = json::parse(summary.p);
  int lo = -1, hi = 0, total = 0, served = 0;
  for (const auto& d : j["depots"]) {
    const int n = d["customers"].get<int>();
    std::cout << "depot " << d["depot"] << " " << d.value("provider", std::string("-"))
              << " customers=" << n << " super_locations=" << d.value("super_locations", 0)
              << "\n";
    if (n == 0) continue;
    lo = lo < 0 ? n : std::min(lo, n);
    hi = std::max(hi, n);
    total += n;
    ++served;
  }
  std::printf("customers=%d depots=%d min=%d mean=%.1f max=%d\n", j["customers"].get<int>(),
              served, lo < 0 ? 0 : lo, served ? static_cast<double>(total) / served : 0.0, hi);
  return kOk;
}

int cmd_solve(const std::string& path, const Common& c) {
  Instance inst;
  tcvrp_status s = tcvrp_instance_read(path.c_str(), &inst.p);
  if (s != TCVRP_OK) return report_failure("solve", s);
  tcvrp_solve_options o;
  tcvrp_solve_options_init(&o);
  o.solver = solver_of(c.solver);
  o.time_limit_s = c.time_limit_s;
  o.runs = c.runs;
  o.seed = c.seed;
  Sol sol;
  s = tcvrp_solve(inst.p, &o, &sol.p);
  if (s != TCVRP_OK) return report_failure("solve", s);
  if (c.out.empty()) {
    OwnedString text;
    s = tcvrp_solution_to_json(sol.p, &text.p);
    if (s != TCVRP_OK) return report_failure("solve", s);
    std::cout << text.p << "\n";
  } else {
    s = tcvrp_solution_write(sol.p, c.out.c_str());
    if (s != TCVRP_OK) return report_failure("solve", s);
  }
  std::fprintf(stderr, "status=%s vmt_mi=%.6f vht_h=%.6f vehicles=%d", tcvrp_solution_status(sol.p),
               tcvrp_solution_vmt_mi(sol.p), tcvrp_solution_vht_min(sol.p) / 60.0,
               tcvrp_solution_vehicles(sol.p));
  const double lb = tcvrp_solution_lower_bound(sol.p);
  if (!std::isnan(lb)) {
    std::fprintf(stderr, " lower_bound_mi=%.6f mip_gap_pct=%.6f", lb, tcvrp_solution_mip_gap(sol.p));
  }
  std::fprintf(stderr, "\n");
  return kOk;
}

int cmd_export(const std::string& path, const Common& c) {
  Instance inst;
  tcvrp_status s = tcvrp_instance_read(path.c_str(), &inst.p);
  if (s == TCVRP_OK) s = tcvrp_export_mps(inst.p, c.out.c_str());
  if (s != TCVRP_OK) return report_failure("export-mps", s);
  return kOk;
}

int cmd_sweep(const std::string& city, const std::string& config_path, const json& lists,
              const Common& c) {
  json cfg = json::object();
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "tcvrp sweep: cannot open " << config_path << "\n";
      return kBadInput;
    }
    try {
      cfg = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cerr << "tcvrp sweep: " << config_path << ": " << e.what() << "\n";
      return kBadInput;
    }
  }
  for (auto it = lists.begin(); it != lists.end(); ++it) cfg[it.key()] = it.value();
  if (!cfg.contains("solver")) cfg["solver"] = c.solver == "auto" ? "its" : c.solver;
  if (!cfg.contains("time_limit_s")) cfg["time_limit_s"] = c.time_limit_s;
  if (!cfg.contains("runs")) cfg["runs"] = c.runs;
  if (!cfg.contains("seed")) cfg["seed"] = c.seed;
  if (!cfg.contains("shared_economy")) cfg["shared_economy"] = c.shared_economy;
  const tcvrp_status s = tcvrp_sweep(city.c_str(), cfg.dump().c_str(), c.out.c_str());
  if (s != TCVRP_OK) return report_failure("sweep", s);
  std::cout << "sweep written to " << c.out << "\n";
  return kOk;
}

int cmd_report(const std::vector<std::string>& instances, const std::vector<std::string>& solutions,
               const Common& c) {
  if (instances.size() != solutions.size()) {
    std::cerr << "tcvrp report: need one solution per instance\n";
    return kBadInput;
  }
  std::vector<const char*> ip, sp;
  for (const auto& s : instances) ip.push_back(s.c_str());
  for (const auto& s : solutions) sp.push_back(s.c_str());
  OwnedString csv;
  const tcvrp_status s = tcvrp_report(ip.data(), sp.data(), ip.size(), &csv.p);
  if (s != TCVRP_OK) return report_failure("report", s);
  if (c.out.empty()) {
    std::cout << csv.p;
  } else if (!write_text(c.out, csv.p)) {
    std::cerr << "tcvrp report: cannot write " << c.out << "\n";
    return kBadInput;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TCVRP toolkit: city generation, instance preparation, exact and ITS solving, sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tcvrp_version()));
  Common c;

  auto* gen = app.add_subcommand("gen", "generate a synthetic city");
  std::string gen_config, name;
  int households = -1;
  double extent = -1.0, rate = -1.0;
  std::vector<std::string> depots;
  gen->add_option("--config", gen_config, "city config JSON")->check(CLI::ExistingFile);
  gen->add_option("--name", name, "city name");
  gen->add_option("--households", households, "household count")->check(CLI::NonNegativeNumber);
  gen->add_option("--extent-mi", extent, "side of the square area (miles)")->check(CLI::PositiveNumber);
  gen->add_option("--ordering-rate", rate, "share of households ordering")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--depots", depots, "provider=count, e.g. Amazon=2");
  gen->add_option("--seed", c.seed, "root random seed");
  gen->add_option("--out", c.out, "output directory")->required();

  auto* pipe = app.add_subcommand("pipeline", "build one instance per depot from city files");
  std::string city;
  pipe->add_option("--city", city, "city directory")->required()->check(CLI::ExistingDirectory);
  add_limits(pipe, c);
  pipe->add_flag("--shared-economy", c.shared_economy, "pool all depots across providers");
  pipe->add_option("--seed", c.seed, "provider split seed");
  pipe->add_option("--out", c.out, "output directory")->required();

  auto* solve = app.add_subcommand("solve", "solve an instance file");
  std::string instance;
  solve->add_option("instance", instance, "instance JSON")->required();
  add_solver(solve, c);
  solve->add_option("--out", c.out, "solution JSON path (default: stdout)");

  auto* mps = app.add_subcommand("export-mps", "write the MIP of an instance as MPS");
  mps->add_option("instance", instance, "instance JSON")->required();
  mps->add_option("--out", c.out, "MPS path")->required();

  auto* sweep = app.add_subcommand("sweep", "scenario sweep over a city");
  std::string sweep_config;
  std::vector<int> qs;
  std::vector<double> tbars, ps, dbars;
  std::vector<std::string> vehicles;
  sweep->add_option("--city", city, "city directory")->required()->check(CLI::ExistingDirectory);
  sweep->add_option("--config", sweep_config, "sweep config JSON")->check(CLI::ExistingFile);
  sweep->add_option("--q", qs, "capacities")->delimiter(',');
  sweep->add_option("--tbar-h", tbars, "route duration limits (hours)")->delimiter(',');
  sweep->add_option("--p-min", ps, "dwell times (minutes)")->delimiter(',');
  sweep->add_option("--dbar-mi", dbars, "BEV ranges (miles)")->delimiter(',');
  sweep->add_option("--vehicle", vehicles, "vehicle types")
      ->delimiter(',')
      ->check(CLI::IsMember({"bev", "cv"}));
  add_solver(sweep, c);
  sweep->add_flag("--shared-economy", c.shared_economy, "pool all depots across providers");
  sweep->add_option("--out", c.out, "CSV path")->required();

  auto* report = app.add_subcommand("report", "scenario metrics for solved instances");
  std::vector<std::string> inst_files, sol_files;
  report->add_option("--instances", inst_files, "instance JSON files")->required();
  report->add_option("--solutions", sol_files, "solution JSON files, same order")->required();
  report->add_option("--out", c.out, "CSV path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kBadInput;
  }

  if (*gen) {
    json o = json::object();
    if (!name.empty()) o["name"] = name;
    if (households >= 0) o["households"] = households;
    if (extent > 0) o["extent_mi"] = extent;
    if (rate > 0) o["ordering_rate"] = rate;
    if (gen->count("--seed") || gen_config.empty()) o["seed"] = c.seed;
    if (!depots.empty()) {
      json arr = json::array();
      for (const auto& d : depots) {
        const auto eq = d.find('=');
        if (eq == std::string::npos) {
          std::cerr << "tcvrp gen: --depots expects provider=count\n";
          return kBadInput;
        }
        try {
          arr.push_back({{"provider", d.substr(0, eq)}, {"count", std::stoi(d.substr(eq + 1))}});
        } catch (const std::exception&) {
          std::cerr << "tcvrp gen: bad depot count in " << d << "\n";
          return kBadInput;
        }
      }
      o["depots"] = arr;
    }
    return cmd_gen(gen_config, o, c);
  }
  if (*pipe) return cmd_pipeline(city, c);
  if (*solve) return cmd_solve(instance, c);
  if (*mps) return cmd_export(instance, c);
  if (*sweep) {
    json lists = json::object();
    if (!qs.empty()) lists["Q"] = qs;
    if (!tbars.empty()) lists["Tbar_h"] = tbars;
    if (!ps.empty()) lists["P_min"] = ps;
    if (!dbars.empty()) lists["Dbar_mi"] = dbars;
    if (!vehicles.empty()) lists["vehicles"] = vehicles;
    return cmd_sweep(city, sweep_config, lists, c);
  }
  if (*report) return cmd_report(inst_files, sol_files, c);
  return kBadInput;
}
