#include "tcvrp/city.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "tcvrp/error.hpp"
#include "tcvrp/io.hpp"

namespace tcvrp::city {

namespace {

using nlohmann::json;

std::mt19937_64 stream(std::uint64_t seed, std::uint64_t stage) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stage)};
  return std::mt19937_64(seq);
}

std::vector<std::pair<std::string, int>> depot_counts(const CityConfig& cfg) {
  if (!cfg.depots.empty()) return cfg.depots;
  std::vector<std::pair<std::string, int>> out;
  for (const auto& s : cfg.shares) out.emplace_back(s.provider, 1);
  return out;
}

network::RoadNetwork grid_network(const CityConfig& cfg, std::mt19937_64& rng) {
  const int m = std::max(1, static_cast<int>(std::lround(cfg.extent_mi / cfg.grid_spacing_mi)));
  const double h = cfg.extent_mi / m;
  std::vector<network::Vertex> vs;
  auto vid = [&](int r, int c) { return static_cast<network::VertexId>(r * (m + 1) + c); };
  for (int r = 0; r <= m; ++r) {
    for (int c = 0; c <= m; ++c) vs.push_back({vid(r, c), {c * h, r * h}});
  }
  std::uniform_real_distribution<double> factor(0.8, 1.2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<network::Arc> arcs;
  auto add = [&](network::VertexId a, network::VertexId b, double len, double speed) {
    arcs.push_back({static_cast<network::ArcId>(arcs.size()), a, b, len, speed * factor(rng)});
  };
  for (int r = 0; r <= m; ++r) {
    for (int c = 0; c <= m; ++c) {
      if (c < m) {
        const double speed = r % 4 == 0 ? 35.0 : 25.0;
        add(vid(r, c), vid(r, c + 1), h, speed);
        add(vid(r, c + 1), vid(r, c), h, speed);
      }
      if (r < m) {
        const double speed = c % 4 == 0 ? 35.0 : 25.0;
        add(vid(r, c), vid(r + 1, c), h, speed);
        add(vid(r + 1, c), vid(r, c), h, speed);
      }
    }
  }
  for (int r = 0; r < m; ++r) {
    for (int c = 0; c < m; ++c) {
      if (unit(rng) >= 0.1) continue;
      const bool rising = unit(rng) < 0.5;
      const bool forward = unit(rng) < 0.5;
      network::VertexId a = rising ? vid(r, c) : vid(r + 1, c);
      network::VertexId b = rising ? vid(r + 1, c + 1) : vid(r, c + 1);
      if (!forward) std::swap(a, b);
      add(a, b, h * std::sqrt(2.0), 30.0);
    }
  }
  return network::RoadNetwork(std::move(vs), std::move(arcs));
}

json meta(const CityConfig& cfg) { return {{"city", cfg.name}, {"seed", cfg.seed}}; }

}  // namespace

assign::ProviderSplit default_shares() {
  return {{"Amazon", 0.21}, {"FedEx", 0.16}, {"UPS", 0.24}, {"USPS", 0.39}};
}

void check(const CityConfig& cfg) {
  if (!(cfg.extent_mi > 0.0)) fail(ErrorCode::kInput, "extent must be positive");
  if (!(cfg.grid_spacing_mi > 0.0) || cfg.grid_spacing_mi > cfg.extent_mi) {
    fail(ErrorCode::kInput, "grid spacing must be in (0, extent]");
  }
  if (cfg.households < 0) fail(ErrorCode::kInput, "household count must be >= 0");
  if (!(cfg.ordering_rate > 0.0 && cfg.ordering_rate <= 1.0)) {
    fail(ErrorCode::kInput, "ordering rate must be in (0, 1]");
  }
  assign::check_split(cfg.shares);
  int total = 0;
  for (const auto& [provider, count] : depot_counts(cfg)) {
    if (count < 0) fail(ErrorCode::kInput, "depot count must be >= 0 for " + provider);
    const bool known = std::any_of(cfg.shares.begin(), cfg.shares.end(),
                                   [&](const auto& s) { return s.provider == provider; });
    if (!known) fail(ErrorCode::kInput, "depot provider '" + provider + "' has no share");
    total += count;
  }
  if (total < 1) fail(ErrorCode::kInput, "city needs at least one depot");
}

json to_json(const CityConfig& cfg) {
  json shares = json::array();
  for (const auto& s : cfg.shares) shares.push_back({{"provider", s.provider}, {"share", s.share}});
  json depots = json::array();
  for (const auto& [p, c] : depot_counts(cfg)) depots.push_back({{"provider", p}, {"count", c}});
  return {{"name", cfg.name},
          {"extent_mi", cfg.extent_mi},
          {"grid_spacing_mi", cfg.grid_spacing_mi},
          {"households", cfg.households},
          {"ordering_rate", cfg.ordering_rate},
          {"shares", shares},
          {"depots", depots},
          {"seed", cfg.seed}};
}

CityConfig config_from_json(const json& j) {
  try {
    CityConfig cfg;
    cfg.name = j.value("name", cfg.name);
    cfg.extent_mi = j.value("extent_mi", cfg.extent_mi);
    cfg.grid_spacing_mi = j.value("grid_spacing_mi", cfg.grid_spacing_mi);
    cfg.households = j.value("households", cfg.households);
    cfg.ordering_rate = j.value("ordering_rate", cfg.ordering_rate);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("shares")) {
      cfg.shares.clear();
      for (const auto& s : j["shares"]) {
        cfg.shares.push_back({s.at("provider").get<std::string>(), s.at("share").get<double>()});
      }
    }
    if (j.contains("depots")) {
      for (const auto& d : j["depots"]) {
        cfg.depots.emplace_back(d.at("provider").get<std::string>(), d.at("count").get<int>());
      }
    }
    check(cfg);
    return cfg;
  } catch (const json::exception& e) {
    fail(ErrorCode::kInput, std::string("city config: ") + e.what());
  }
}

City generate(const CityConfig& cfg) {
  check(cfg);
  auto net_rng = stream(cfg.seed, 1);
  auto home_rng = stream(cfg.seed, 2);
  auto depot_rng = stream(cfg.seed, 3);

  network::RoadNetwork net = grid_network(cfg, net_rng);

  std::uniform_real_distribution<double> coord(0.0, cfg.extent_mi);
  std::vector<Point> homes(static_cast<std::size_t>(cfg.households));
  for (auto& p : homes) p = {coord(home_rng), coord(home_rng)};
  const auto count = static_cast<std::size_t>(
      std::lround(static_cast<double>(cfg.households) * cfg.ordering_rate));
  std::vector<std::size_t> idx(homes.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  for (std::size_t i = 0; i < count; ++i) {  // partial Fisher-Yates
    std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(home_rng)]);
  }
  idx.resize(count);
  std::sort(idx.begin(), idx.end());
  std::vector<assign::Customer> customers;
  customers.reserve(count);
  for (std::size_t i : idx) customers.push_back({static_cast<std::int64_t>(i), homes[i], 1});

  const auto counts = depot_counts(cfg);
  int total = 0;
  for (const auto& pc : counts) total += pc.second;
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(total))));
  const int rows = (total + cols - 1) / cols;
  std::vector<int> strata(static_cast<std::size_t>(rows * cols));
  for (std::size_t i = 0; i < strata.size(); ++i) strata[i] = static_cast<int>(i);
  std::shuffle(strata.begin(), strata.end(), depot_rng);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<assign::Depot> depots;
  const double cw = cfg.extent_mi / cols, ch = cfg.extent_mi / rows;
  for (const auto& [provider, k] : counts) {
    for (int i = 0; i < k; ++i) {
      const int s = strata[depots.size()];
      const double x = (s % cols + unit(depot_rng)) * cw;
      const double y = (s / cols + unit(depot_rng)) * ch;
      depots.push_back({static_cast<std::int64_t>(depots.size() + 1), provider, {x, y}, 0});
    }
  }
  return {cfg, std::move(net), std::move(customers), std::move(depots)};
}

void write_city(const City& city, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string());
  json cfg = to_json(city.config);
  cfg["meta"] = meta(city.config);
  cfg["ordering_customers"] = city.customers.size();
  io::write_json(dir / "city.json", cfg);
  json net = io::to_json(city.network);
  net["meta"] = meta(city.config);
  io::write_json(dir / "network.json", net);
  json cus = io::customers_to_json(city.customers);
  cus["meta"] = meta(city.config);
  io::write_json(dir / "customers.json", cus);
  json dep = io::depots_to_json(city.depots);
  dep["meta"] = meta(city.config);
  io::write_json(dir / "depots.json", dep);
}

City read_city(const std::filesystem::path& dir) {
  CityConfig cfg = config_from_json(io::read_json(dir / "city.json"));
  return {cfg, io::network_from_json(io::read_json(dir / "network.json")),
          io::customers_from_json(io::read_json(dir / "customers.json")),
          io::depots_from_json(io::read_json(dir / "depots.json"))};
}

namespace {

DepotInstance depot_instance(const City& city, const assign::Depot& depot,
                             std::vector<assign::Customer> members,
                             const InstanceParams& limits) {
  const network::VertexId dv = aggregate::attach(city.network, depot.location).vertex;
  auto sites = aggregate::cluster_customers(members, city.network);
  aggregate::compute_intra_tours(sites);
  std::set<network::VertexId> vset{dv};
  for (const auto& s : sites) vset.insert(s.vertex);
  const std::vector<network::VertexId> verts(vset.begin(), vset.end());
  auto matrices = network::shortest_paths(city.network, verts, verts);
  TcvrpInstance inst = aggregate::build_instance(dv, sites, matrices, limits);
  return {depot, dv, std::move(sites), static_cast<int>(members.size()), std::move(matrices),
          std::move(inst)};
}

}  // namespace

PipelineResult run_pipeline(const City& city, const PipelineParams& params) {
  if (city.depots.empty()) fail(ErrorCode::kInput, "city has no depots");
  std::map<std::int64_t, assign::Depot> depot_by_id;
  for (const auto& d : city.depots) depot_by_id.emplace(d.id, d);
  std::map<std::int64_t, assign::Customer> customer_by_id;
  for (const auto& c : city.customers) customer_by_id.emplace(c.id, c);

  // Groups of (customers, depots) that are assigned independently.
  std::vector<std::pair<std::vector<assign::Customer>, std::vector<assign::Depot>>> groups;
  if (params.shared_economy) {
    groups.emplace_back(city.customers, city.depots);
  } else {
    assign::ProviderSplit split = city.config.shares;
    std::set<std::string> served;
    for (const auto& d : city.depots) served.insert(d.provider);
    for (const auto& s : city.config.shares) {
      if (!served.contains(s.provider)) split = assign::redistribute_missing(split, s.provider);
    }
    auto by_provider = assign::split_by_provider(city.customers, split, params.seed);
    for (const auto& s : split) {
      std::vector<assign::Depot> ds;
      for (const auto& d : city.depots) {
        if (d.provider == s.provider) ds.push_back(d);
      }
      auto it = by_provider.find(s.provider);
      groups.emplace_back(it == by_provider.end() ? std::vector<assign::Customer>{} : it->second,
                          std::move(ds));
    }
  }

  PipelineResult out;
  out.customers = static_cast<int>(city.customers.size());
  for (auto& [custs, deps] : groups) {
    if (deps.empty()) continue;
    const int cap = assign::default_depot_capacity(custs.size(), deps.size(), params.depot_slack);
    for (auto& d : deps) {
      if (d.capacity <= 0) d.capacity = cap;
    }
    const auto a = assign::assign_to_depots(custs, deps);
    out.assignment.total_distance_mi += a.total_distance_mi;
    for (const auto& [id, ids] : a.customers_by_depot) out.assignment.customers_by_depot[id] = ids;
  }
  for (const auto& d : city.depots) {
    auto it = out.assignment.customers_by_depot.find(d.id);
    if (it == out.assignment.customers_by_depot.end()) {
      out.customers_per_depot.emplace_back(d.id, 0);
      continue;
    }
    out.customers_per_depot.emplace_back(d.id, static_cast<int>(it->second.size()));
    if (it->second.empty()) continue;
    std::vector<assign::Customer> members;
    for (auto id : it->second) members.push_back(customer_by_id.at(id));
    out.depots.push_back(depot_instance(city, d, std::move(members), params.limits));
  }
  return out;
}

PipelineResult rebuild(const PipelineResult& base, const City&, const InstanceParams& limits) {
  PipelineResult out;
  out.customers_per_depot = base.customers_per_depot;
  out.assignment = base.assignment;
  out.customers = base.customers;
  for (const auto& d : base.depots) {
    out.depots.push_back({d.depot, d.vertex, d.sites, d.customers, d.matrices,
                          aggregate::build_instance(d.vertex, d.sites, d.matrices, limits)});
  }
  return out;
}

std::vector<std::filesystem::path> write_pipeline(const PipelineResult& result,
                                                  const City& city,
                                                  const PipelineParams& params,
                                                  const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(ErrorCode::kIo, "cannot create " + dir.string());
  const json m = {{"city", city.config.name},
                  {"seed", params.seed},
                  {"shared_economy", params.shared_economy},
                  {"P_min", params.limits.dwell_min}};
  std::vector<std::filesystem::path> paths;
  for (const auto& d : result.depots) {
    json j = io::to_json(d.instance);
    json sites = json::array();
    for (const auto& s : d.sites) {
      sites.push_back({{"arc", s.id},
                       {"vertex", s.vertex},
                       {"customers", s.members},
                       {"intra_min", s.intra_time_min},
                       {"intra_mi", s.intra_dist_mi},
                       {"intra_exact", s.intra_exact}});
    }
    j["meta"] = m;
    j["meta"]["depot_id"] = d.depot.id;
    j["meta"]["provider"] = d.depot.provider;
    j["meta"]["depot_vertex"] = d.vertex;
    j["meta"]["customers"] = d.customers;
    j["sites"] = sites;
    const auto path = dir / ("instance_" + std::to_string(d.depot.id) + ".json");
    io::write_json(path, j);
    paths.push_back(path);
  }
  json a = io::to_json(result.assignment);
  a["meta"] = m;
  io::write_json(dir / "assignment.json", a);
  return paths;
}

}  // namespace tcvrp::city
