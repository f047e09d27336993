#include <doctest.h>

#include <random>
#include <sstream>

#include "support/fixtures.hpp"
#include "tcvrp/error.hpp"
#include "tcvrp/metrics.hpp"

using namespace tcvrp;
using namespace tcvrp::metrics;

TEST_CASE("gap formulas") {
  CHECK(mip_gap(90.0, 100.0) == doctest::Approx(10.0));
  CHECK(mip_gap(100.0, 100.0) == 0.0);
  CHECK(mip_gap(0.0, 5.0) == doctest::Approx(100.0));
  CHECK_THROWS_AS(mip_gap(1.0, 0.0), Error);
  CHECK_THROWS_AS(mip_gap(2.0, 1.0), Error);
  CHECK_THROWS_AS(mip_gap(-1.0, 1.0), Error);
  CHECK(its_gap(95.0, 100.0) == doctest::Approx(5.0));
  CHECK(its_gap(110.0, 100.0) == doctest::Approx(-10.0));
  CHECK_THROWS_AS(its_gap(1.0, 0.0), Error);
}

TEST_CASE("fleet energy") {
  const Energy e = energy(100.0);
  CHECK(e.bev_kwh == doctest::Approx(114.0));
  CHECK(e.cv_kwh == doctest::Approx(501.875));
  CHECK(energy(0.0).bev_kwh == 0.0);
  CHECK_THROWS_AS(energy(-1.0), Error);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> v(0.0, 5000.0);
  for (int i = 0; i < 200; ++i) {
    const double a = v(rng), b = v(rng);
    CHECK(energy(a + b).bev_kwh == doctest::Approx(energy(a).bev_kwh + energy(b).bev_kwh));
    CHECK(energy(a + b).cv_kwh == doctest::Approx(energy(a).cv_kwh + energy(b).cv_kwh));
  }
  const EnergyParams custom{2.0, 10.0, 30.0};
  CHECK(energy(10.0, custom).cv_kwh == doctest::Approx(30.0));
}

TEST_CASE("scenario summary sums depots") {
  const auto a = fixtures::random_instance(1, {3, true, 0.0}).with_limits(1000, 1e6, 1e6);
  const auto b = fixtures::random_instance(2, {2, true, 0.0}).with_limits(1000, 1e6, 1e6);
  const Solution sa = make_solution(a, {{0, 1, 0}, {0, 2, 3, 0}});
  const Solution sb = make_solution(b, {{0, 2, 1, 0}});
  ScenarioKey key;
  key.city = "X";
  key.max_dist_mi = 80.0;
  key.vehicle = VehicleType::kBev;
  const ScenarioReport r = summarize({{&a, &sa}, {&b, &sb}}, key);
  CHECK(r.vehicles == 3);
  CHECK(r.vmt_mi == doctest::Approx(sa.vmt_mi + sb.vmt_mi));
  CHECK(r.vht_h == doctest::Approx((sa.vht_min + sb.vht_min) / 60.0));
  CHECK(r.vmt_per_vehicle == doctest::Approx(r.vmt_mi / 3));
  CHECK(r.energy.bev_kwh == doctest::Approx(r.vmt_mi * 1.14));
  const Solution bad = make_solution(b, {{0, 1, 0}});  // misses node 2
  CHECK_THROWS_AS(summarize({{&b, &bad}}, key), Error);
}

TEST_CASE("CSV rows") {
  ScenarioReport r;
  r.key = {"Town", 120, 10.0, 2.0, std::nullopt, VehicleType::kCv};
  r.vmt_mi = 100.0;
  r.vehicles = 2;
  r.vmt_per_vehicle = 50.0;
  r.energy = energy(100.0);
  CHECK(csv_row(r) ==
        "Town,120,10,2,,CV,100.000000,0.000000,2,50.000000,114.000000,501.875000,,,,,ok");
  r.key.max_dist_mi = 80.0;
  r.key.vehicle = VehicleType::kBev;
  r.gaps = GapStats{3, 2, 1.5, std::nullopt};
  CHECK(csv_row(r).find(",80,BEV,") != std::string::npos);
  CHECK(csv_row(r).ends_with(",3,2,1.500000,,ok"));
  r.gaps->mean_its_gap = -0.25;
  CHECK(csv_row(r).ends_with(",3,2,1.500000,-0.250000,ok"));
  std::ostringstream out;
  write_csv(out, {r, r});
  const std::string text = out.str();
  CHECK(text.rfind(csv_header() + "\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 3);
  auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  CHECK(commas(csv_header()) == commas(csv_row(r)));
}

TEST_CASE("metric examples") {
  CHECK(its_gap(100.0, 99.0) == doctest::Approx(-1.0101010101));
  const Energy e = energy(80.0);
  CHECK(e.bev_kwh == doctest::Approx(91.2));
  CHECK(e.cv_kwh == doctest::Approx(401.5));

  // One depot, one route of 10 mi and 120 min.
  Matrix t = Matrix::square(2, 0.0);
  Matrix d = Matrix::square(2, 0.0);
  t(0, 1) = t(1, 0) = 10.0;
  d(0, 1) = d(1, 0) = 5.0;
  const TcvrpInstance inst({0, 3}, {0.0, 100.0}, t, d, 10, 600.0, std::nullopt);
  const Solution s = make_solution(inst, {{0, 1, 0}});
  const ScenarioKey key{"One", 10, 10.0, 2.0, std::nullopt, VehicleType::kCv};
  const ScenarioReport r = summarize({{&inst, &s}}, key);
  CHECK(r.vmt_mi == doctest::Approx(10.0));
  CHECK(r.vht_h == doctest::Approx(2.0));
  CHECK(r.vehicles == 1);
  CHECK(r.vmt_per_vehicle == doctest::Approx(10.0));
}
