#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "tcvrp/error.hpp"
#include "tcvrp/its.hpp"
#include "tcvrp/model.hpp"
#include "tcvrp/mps.hpp"

using namespace tcvrp;
using namespace tcvrp::model;

namespace {

using Routes = std::vector<std::vector<int>>;

bool mip_accepts(const TcvrpInstance& inst, const MipModel& m, const Routes& r) {
  return violated(m, induce_assignment(inst, r)).empty();
}

// Every ordered route set: each permutation cut at every subset of gaps.
std::vector<Routes> all_route_sets(int n) {
  std::vector<int> perm;
  for (int i = 1; i <= n; ++i) perm.push_back(i);
  std::vector<Routes> out;
  do {
    for (unsigned cuts = 0; cuts < (1U << (n - 1)); ++cuts) {
      Routes rs{{0}};
      for (int p = 0; p < n; ++p) {
        rs.back().push_back(perm[static_cast<std::size_t>(p)]);
        if (p + 1 < n && (cuts >> p & 1U)) {
          rs.back().push_back(0);
          rs.push_back({0});
        }
      }
      rs.back().push_back(0);
      out.push_back(std::move(rs));
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

Routes perturb(Routes rs, int n, std::mt19937_64& rng) {
  auto pick = [&](std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(0, hi - 1)(rng);
  };
  auto& r = rs[pick(rs.size())];
  const std::size_t inner = r.size() - 2;
  switch (pick(7)) {
    case 0:  // drop a customer
      if (inner > 0) r.erase(r.begin() + 1 + static_cast<std::ptrdiff_t>(pick(inner)));
      break;
    case 1:  // visit some customer twice
      r.insert(r.begin() + 1, static_cast<int>(1 + pick(static_cast<std::size_t>(n))));
      break;
    case 2:  // depot between two customers
      if (inner >= 2) r.insert(r.begin() + 2 + static_cast<std::ptrdiff_t>(pick(inner - 1)), 0);
      break;
    case 3:  // empty route
      rs.push_back({0, 0});
      break;
    case 4:  // route that does not start at the depot
      if (inner > 0) r.erase(r.begin());
      break;
    case 5:  // reverse the interior
      std::reverse(r.begin() + 1, r.end() - 1);
      break;
    default:  // move a customer to another route
      if (inner > 0 && rs.size() > 1) {
        const std::size_t at = 1 + pick(inner);
        const int v = r[at];
        r.erase(r.begin() + static_cast<std::ptrdiff_t>(at));
        auto& o = rs[pick(rs.size())];
        o.insert(o.begin() + 1, v);
      }
      break;
  }
  return rs;
}

}  // namespace

TEST_CASE("variable and constraint counts") {
  for (int n = 1; n <= 6; ++n) {
    for (bool range : {true, false}) {
      const auto inst = fixtures::random_instance(n, {n, range, 0.3});
      const MipModel m = build_mip(inst);
      const std::size_t arcs = static_cast<std::size_t>(n * (n + 1));
      const auto un = static_cast<std::size_t>(n);
      CHECK(m.variables.size() == (range ? 4 : 3) * arcs + 1);
      CHECK(m.count(Family::kRouting) == 2 * un + 2);
      CHECK(m.count(Family::kCapacity) == un * un + 2 * un);
      CHECK(m.count(Family::kTime) == 2 * un * un + 3 * un);
      CHECK(m.count(Family::kDistance) == (range ? 2 * un * un + 3 * un : 0));
      CHECK(layout(inst).size() == static_cast<int>(m.variables.size()));
    }
  }
  const auto two = fixtures::random_instance(3, {2, true, 0.3});
  const MipModel m = build_mip(two);
  CHECK(m.variables.size() == 25);
  CHECK(m.constraints.size() == 42);
}

TEST_CASE("layout indices agree with variable names") {
  const auto inst = fixtures::random_instance(4, {4, true, 0.3});
  const MipModel m = build_mip(inst);
  const VariableLayout lay = layout(inst);
  for (int i = 0; i < inst.nodes(); ++i) {
    for (int j = 0; j < inst.nodes(); ++j) {
      if (i == j) continue;
      const std::string s = "_" + std::to_string(i) + "_" + std::to_string(j);
      CHECK(m.find_variable("x" + s) == lay.x(i, j));
      CHECK(m.find_variable("y" + s) == lay.y(i, j));
      CHECK(m.find_variable("z" + s) == lay.z(i, j));
      CHECK(m.find_variable("zp" + s) == lay.zp(i, j));
      CHECK(m.variables[static_cast<std::size_t>(lay.x(i, j))].objective == inst.dist(i, j));
      CHECK(m.variables[static_cast<std::size_t>(lay.x(i, j))].type == VarType::kBinary);
    }
  }
  CHECK(m.find_variable("k") == lay.k());
  CHECK(m.find_variable("nope") == -1);
}

TEST_CASE("model and route validator agree on every route set up to n = 5") {
  int feasible = 0, infeasible = 0;
  for (int n = 1; n <= 5; ++n) {
    const auto sets = all_route_sets(n);
    for (std::uint64_t seed = 1; seed <= 4; ++seed) {
      const auto inst = fixtures::random_instance(seed * 31 + n, {n, seed % 2 == 1, 0.8});
      const MipModel m = build_mip(inst);
      for (const Routes& rs : sets) {
        const bool ok = validate(inst, rs).feasible;
        CHECK(ok == mip_accepts(inst, m, rs));
        if (ok) {
          ++feasible;
          CHECK(objective_value(m, induce_assignment(inst, rs)) ==
                doctest::Approx(validate(inst, rs).vmt_mi));
        } else {
          ++infeasible;
        }
      }
    }
  }
  CHECK(feasible > 100);
  CHECK(infeasible > 100);
}

TEST_CASE("model and validator agree on perturbed route sets") {
  std::mt19937_64 rng(99);
  int disagreements = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int n = 2 + trial % 7;
    const auto inst = fixtures::random_instance(1000 + trial, {n, trial % 3 != 0, 0.6});
    const MipModel m = build_mip(inst);
    auto sets = all_route_sets(std::min(n, 4));
    Routes rs = sets[std::uniform_int_distribution<std::size_t>(0, sets.size() - 1)(rng)];
    for (int c = 5; c <= n; ++c) rs.back().insert(rs.back().end() - 1, c);
    const int steps = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int s = 0; s < steps; ++s) rs = perturb(rs, n, rng);
    if (validate(inst, rs).feasible != mip_accepts(inst, m, rs)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

TEST_CASE("arc matrices decode into routes") {
  const auto inst = fixtures::random_instance(5, {5, false, 0.0});
  const Routes rs{{0, 3, 1, 0}, {0, 2, 5, 4, 0}};
  const Solution s = solution_from_arcs(inst, arcs_from_solution(inst, rs));
  CHECK(s.sequences() == Routes{{0, 2, 5, 4, 0}, {0, 3, 1, 0}});
  Matrix sub = arcs_from_solution(inst, {{0, 3, 1, 0}, {0, 2, 0}});
  sub(4, 5) = sub(5, 4) = 1.0;  // customer-only cycle
  CHECK_THROWS_AS(solution_from_arcs(inst, sub), Error);
  Matrix bad = arcs_from_solution(inst, rs);
  bad(0, 2) = 0.0;
  CHECK_THROWS_AS(solution_from_arcs(inst, bad), Error);
}

TEST_CASE("validator reports each violation family") {
  const auto inst = fixtures::random_instance(12, {4, true, 1.0});
  auto families = [&](const Routes& rs) {
    std::vector<std::string> f;
    for (const auto& v : validate(inst, rs).violations) f.push_back(v.family);
    return f;
  };
  auto has = [](const std::vector<std::string>& f, const char* s) {
    return std::find(f.begin(), f.end(), s) != f.end();
  };
  CHECK(has(families({{0, 1, 2, 3, 0}}), "partition"));
  CHECK(has(families({{0, 1, 0, 2, 3, 4, 0}}), "structure"));
  CHECK(has(families({{0, 1, 2, 3, 4, 0}, {0, 0}}), "structure"));
  int max_demand = 0;
  for (int i = 1; i <= 4; ++i) max_demand = std::max(max_demand, inst.demand(i));
  const TcvrpInstance tight = inst.with_limits(max_demand, 1e9, std::nullopt);
  CHECK_FALSE(validate(tight, Routes{{0, 1, 2, 3, 4, 0}}).feasible);
  CHECK(validate(tight, Routes{{0, 1, 2, 3, 4, 0}}).violations.front().family == "capacity");
  // Limits equal to the longest dedicated round trip: the one-route plan
  // breaks them under the triangle inequality.
  double max_rt = 0.0, max_rd = 0.0;
  for (int i = 1; i <= 4; ++i) {
    max_rt = std::max(max_rt, inst.time(0, i) + inst.service(i) + inst.time(i, 0));
    max_rd = std::max(max_rd, inst.dist(0, i) + inst.dist(i, 0));
  }
  const TcvrpInstance short_day = inst.with_limits(1000, max_rt, std::nullopt);
  CHECK(validate(short_day, Routes{{0, 1, 2, 3, 4, 0}}).violations.front().family == "time");
  const TcvrpInstance short_range = inst.with_limits(1000, 1e9, max_rd);
  CHECK(validate(short_range, Routes{{0, 1, 2, 3, 4, 0}}).violations.front().family ==
        "distance");
  CHECK_THROWS_AS(validate(inst, Routes{{0, 9, 0}}), Error);
}

TEST_CASE("MPS round trip reproduces the model") {
  for (int n : {1, 2, 3, 6, 12}) {
    for (bool range : {true, false}) {
      const auto inst = fixtures::random_instance(40 + n, {n, range, 0.5});
      const MipModel m = build_mip(inst);
      const std::string text = mps::to_string(m);
      std::istringstream in(text);
      const MipModel back = mps::read(in);
      CHECK(back == m);
      CHECK(mps::to_string(back) == text);
      CHECK(mps::to_string(build_mip(inst)) == text);
    }
  }
}

TEST_CASE("MPS files on disk") {
  const auto inst = fixtures::random_instance(3, {3, true, 0.5});
  const MipModel m = build_mip(inst);
  const auto path = std::filesystem::temp_directory_path() / "tcvrp_model_test.mps";
  mps::export_mps(m, path.string());
  CHECK(mps::parse_mps(path.string()) == m);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(mps::parse_mps((path.parent_path() / "missing_dir" / "x.mps").string()),
                  Error);
  CHECK_THROWS_AS(mps::export_mps(m, "/nonexistent_dir/x.mps"), Error);
  std::istringstream junk("NAME x\nROWS\n N obj\n L weird_row\nCOLUMNS\nENDATA\n");
  CHECK_THROWS_AS(mps::read(junk), Error);
}

TEST_CASE("single-customer model has one feasible plan") {
  const auto inst = fixtures::random_instance(4, {1, true, 0.5});
  const MipModel m = build_mip(inst);
  const VariableLayout l = layout(inst);
  const auto v = induce_assignment(inst, {{0, 1, 0}});
  CHECK(violated(m, v).empty());
  CHECK(v[static_cast<std::size_t>(l.x(0, 1))] == 1.0);
  CHECK(v[static_cast<std::size_t>(l.x(1, 0))] == 1.0);
  CHECK(v[static_cast<std::size_t>(l.k())] == 1.0);
  CHECK(objective_value(m, v) == doctest::Approx(inst.dist(0, 1) + inst.dist(1, 0)));
  CHECK_FALSE(violated(m, induce_assignment(inst, {})).empty());
  CHECK_FALSE(violated(m, induce_assignment(inst, {{0, 1, 0}, {0, 1, 0}})).empty());

  // Objective coefficients survive the MPS text form.
  std::istringstream in(mps::to_string(m));
  const MipModel back = mps::read(in);
  for (int i = 0; i < inst.nodes(); ++i)
    for (int j = 0; j < inst.nodes(); ++j)
      if (i != j) {
        CHECK(back.variables[static_cast<std::size_t>(l.x(i, j))].objective ==
              doctest::Approx(inst.dist(i, j)));
      }
}

TEST_CASE("route plans survive the arc encoding") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = fixtures::random_instance(seed, {6, seed % 2 == 0, 0.6});
    const Solution s = its::solve_its(inst, [&] {
      its::ItsConfig c;
      c.seed = seed;
      c.time_budget_s = 1000.0;
      c.max_stall_rounds = 5;
      return c;
    }()).solution;
    const VariableLayout l = layout(inst);
    const auto v = induce_assignment(inst, s.sequences());
    Matrix x = Matrix::square(static_cast<std::size_t>(inst.nodes()));
    for (int i = 0; i < inst.nodes(); ++i)
      for (int j = 0; j < inst.nodes(); ++j)
        if (i != j) x(i, j) = v[static_cast<std::size_t>(l.x(i, j))];
    const Solution back = solution_from_arcs(inst, x);
    CHECK(back.vmt_mi == doctest::Approx(s.vmt_mi));
    auto a = s.sequences();
    auto b = back.sequences();
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    CHECK(a == b);
  }
}
