#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <atomic>
#include <cmath>
#include <numbers>

#include "qsurr/optim.hpp"

using namespace qsurr;

namespace {

BoundBox cube(int d, double lo, double hi) {
  BoundBox b;
  b.lower.assign(d, lo);
  b.upper.assign(d, hi);
  return b;
}

double sphere(const std::vector<double>& x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

}  // namespace

TEST_CASE("default bound boxes") {
  const auto mc = BoundBox::maxcut_default(2);
  REQUIRE(mc.dim() == 4);
  CHECK(mc.lower[0] == doctest::Approx(-std::numbers::pi / 2));
  CHECK(mc.upper[1] == doctest::Approx(std::numbers::pi / 2));
  CHECK(mc.lower[2] == doctest::Approx(-std::numbers::pi / 4));
  CHECK(mc.upper[3] == doctest::Approx(std::numbers::pi / 4));

  const auto hh = BoundBox::heavy_hex_default(3);
  REQUIRE(hh.dim() == 6);
  for (int c = 0; c < 6; ++c) {
    CHECK(hh.lower[c] == doctest::Approx(-std::numbers::pi / 2));
    CHECK(hh.upper[c] == doctest::Approx(std::numbers::pi / 2));
  }

  BoundBox bad;
  bad.lower = {0.0};
  bad.upper = {0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("DE finds the sphere minimum") {
  DeConfig cfg;
  cfg.seed = 1;
  cfg.max_gens = 2000;
  const auto report = differential_evolution(sphere, cube(6, -1.0, 1.0), cfg);
  CHECK(report.best_value <= 1e-6);
  CHECK(report.generations <= 2000);
}

TEST_CASE("DE on a constant objective stops after exactly gtol generations") {
  DeConfig cfg;
  cfg.seed = 2;
  cfg.gtol = 40;  // small window to keep the test quick
  const auto report = differential_evolution(
      [](const std::vector<double>&) { return 5.0; }, cube(3, -1.0, 1.0), cfg);
  CHECK(report.terminated_by == TerminationReason::ftol_gtol);
  CHECK(report.generations == 40);
  CHECK(report.best_value == doctest::Approx(5.0));
}

TEST_CASE("DE is deterministic given the seed") {
  DeConfig cfg;
  cfg.seed = 3;
  cfg.gtol = 60;
  const auto box = cube(4, -2.0, 2.0);
  auto rosenbrock = [](const std::vector<double>& x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
      acc += 100.0 * std::pow(x[i + 1] - x[i] * x[i], 2) + std::pow(1 - x[i], 2);
    return acc;
  };
  const auto a = differential_evolution(rosenbrock, box, cfg);
  const auto b = differential_evolution(rosenbrock, box, cfg);
  CHECK(a.best_theta == b.best_theta);
  CHECK(a.best_value == b.best_value);
  CHECK(a.generations == b.generations);
  CHECK(a.evaluations == b.evaluations);
}

TEST_CASE("DE only evaluates inside the box") {
  const auto box = cube(3, -0.5, 0.75);
  std::atomic<int> violations{0};
  DeConfig cfg;
  cfg.seed = 4;
  cfg.gtol = 30;
  differential_evolution(
      [&](const std::vector<double>& x) {
        for (std::size_t c = 0; c < x.size(); ++c)
          if (x[c] < -0.5 - 1e-15 || x[c] > 0.75 + 1e-15) ++violations;
        return sphere(x);
      },
      box, cfg);
  CHECK(violations.load() == 0);
}

TEST_CASE("DE best-so-far history is nonincreasing") {
  DeConfig cfg;
  cfg.seed = 5;
  cfg.gtol = 50;
  const auto report =
      differential_evolution(sphere, cube(5, -1.0, 1.0), cfg);
  REQUIRE(report.best_history.size() ==
          static_cast<std::size_t>(report.generations) + 1);
  for (std::size_t g = 1; g < report.best_history.size(); ++g)
    CHECK(report.best_history[g] <= report.best_history[g - 1]);
  CHECK(report.best_history.back() == report.best_value);
}

TEST_CASE("DE rejects non-finite objectives") {
  DeConfig cfg;
  cfg.seed = 6;
  CHECK_THROWS_AS(differential_evolution(
                      [](const std::vector<double>& x) {
                        return x[0] > 0 ? std::numeric_limits<double>::quiet_NaN()
                                        : 0.0;
                      },
                      cube(2, -1.0, 1.0), cfg),
                  std::runtime_error);
}

TEST_CASE("multistart finds a convex quadratic minimum") {
  auto quad = [](const std::vector<double>& x) {
    return 2.0 * std::pow(x[0] - 0.3, 2) + std::pow(x[1] + 0.4, 2) + 1.5;
  };
  const auto report = multistart_local(quad, cube(2, -1.0, 1.0), 3, 7);
  CHECK(report.best_value == doctest::Approx(1.5).epsilon(1e-6));
  CHECK(report.best_theta[0] == doctest::Approx(0.3).epsilon(1e-4));
  CHECK(report.best_theta[1] == doctest::Approx(-0.4).epsilon(1e-4));
}

TEST_CASE("Nelder-Mead stays in the starting basin") {
  // Double well with distinct minima; the basin boundary is near x = 0.
  auto well = [](const std::vector<double>& x) {
    return std::pow(x[0] * x[0] - 1.0, 2) + 0.1 * x[0];
  };
  // Independent oracle: bisection on the derivative 4x^3 - 4x + 0.1.
  auto dwell = [](double x) { return 4 * x * x * x - 4 * x + 0.1; };
  double lo = 0.5, hi = 1.5;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (dwell(lo) * dwell(mid) <= 0 ? hi : lo) = mid;
  }
  const double basin_a_min = 0.5 * (lo + hi);

  const auto report = nelder_mead(well, cube(1, -2.0, 2.0), {0.9});
  CHECK(report.best_theta[0] == doctest::Approx(basin_a_min).epsilon(1e-4));
  // the other basin is lower; locality means we must not land there
  CHECK(report.best_theta[0] > 0.0);
}

TEST_CASE("multistart is deterministic given the seed") {
  auto bumpy = [](const std::vector<double>& x) {
    return std::sin(3 * x[0]) + 0.5 * x[0] * x[0] + std::cos(2 * x[1]);
  };
  const auto box = cube(2, -2.0, 2.0);
  const auto a = multistart_local(bumpy, box, 5, 11);
  const auto b = multistart_local(bumpy, box, 5, 11);
  CHECK(a.best_theta == b.best_theta);
  CHECK(a.best_value == b.best_value);
}

TEST_CASE("rescaled objective divides values and keeps the argmin") {
  auto f = [](const std::vector<double>& x) { return -130.0 + sphere(x); };
  const auto g = rescale_objective(f, 13);
  CHECK(g({0.0, 0.0}) == doctest::Approx(-10.0));

  auto h = [](const std::vector<double>& x) {
    return std::pow(x[0] - 0.37, 2) + 4.0;
  };
  const auto hr = rescale_objective(h, 127);
  int argmin_h = 0, argmin_hr = 0;
  for (int i = 0; i < 100; ++i) {
    const std::vector<double> x{-1.0 + 0.02 * i};
    if (h(x) < h({-1.0 + 0.02 * argmin_h})) argmin_h = i;
    if (hr(x) < hr({-1.0 + 0.02 * argmin_hr})) argmin_hr = i;
  }
  CHECK(argmin_h == argmin_hr);

  // ftol bookkeeping: a raw change of 0.0635 at n = 127 is exactly ftol
  CHECK(0.0635 / 127 == doctest::Approx(5e-4).epsilon(1e-12));

  CHECK_THROWS_AS(rescale_objective(f, 0), std::invalid_argument);
}
