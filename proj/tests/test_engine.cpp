#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracle_dense.hpp"
#include "qsurr/engine.hpp"
#include "qsurr/instances.hpp"
#include "qsurr/kernels.hpp"
#include "qsurr/rng.hpp"

using namespace qsurr;

namespace {

// Single weight-1 edge on two qubits.
MaxCutInstance two_qubit_edge() {
  MaxCutInstance inst;
  inst.graph.n = 2;
  inst.graph.edges = {{0, 1}};
  inst.weights = {1.0};
  return inst;
}

// Random small instance for oracle cross-checks: Max-Cut on a random simple
// connected graph, or a +-1 Ising model on a path/cycle.
ProblemInstance random_small_instance(Rng& rng, int n) {
  if (rng.sign() > 0) {
    Graph g;
    g.n = n;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (v == u + 1 || rng.uniform() < 0.5) g.edges.push_back({u, v});
    MaxCutInstance inst;
    inst.graph = g;
    for (std::size_t e = 0; e < g.edges.size(); ++e)
      inst.weights.push_back(rng.uniform());
    return inst;
  }
  Graph g;
  g.n = n;
  for (int v = 0; v + 1 < n; ++v) g.edges.push_back({v, v + 1});
  if (n > 2 && rng.sign() > 0) g.edges.push_back({0, n - 1});  // cycle
  std::sort(g.edges.begin(), g.edges.end());
  return generate_heavy_hex_instance(g, rng.next_u64());
}

AngleVector random_angles(Rng& rng, int p) {
  AngleVector a;
  for (int l = 0; l < p; ++l) {
    a.gamma.push_back(rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2));
    a.beta.push_back(rng.uniform(-std::numbers::pi / 2, std::numbers::pi / 2));
  }
  return a;
}

}  // namespace

TEST_CASE("identity evolution keeps the uniform state") {
  const ProblemInstance inst = generate_3regular_maxcut(8, 1);
  const QaoaEvaluator eval(inst);
  const auto amps = eval.prepare_state({{0.0}, {0.0}});
  const double expected = 1.0 / std::sqrt(256.0);
  for (const auto& a : amps) {
    CHECK(a.real() == doctest::Approx(expected).epsilon(1e-14));
    CHECK(a.imag() == doctest::Approx(0.0).epsilon(1e-14));
  }
}

TEST_CASE("diagonal phases preserve uniform probabilities") {
  const ProblemInstance inst = generate_3regular_maxcut(8, 2);
  const QaoaEvaluator eval(inst);
  for (double gamma : {0.3, -1.1, 2.4}) {
    const auto amps = eval.prepare_state({{gamma}, {0.0}});
    for (const auto& a : amps)
      CHECK(std::norm(a) == doctest::Approx(1.0 / 256.0).epsilon(1e-12));
  }
}

TEST_CASE("two-qubit state matches the dense oracle") {
  const ProblemInstance inst = two_qubit_edge();
  const QaoaEvaluator eval(inst);
  const AngleVector angles{{0.3}, {0.2}};
  const auto amps = eval.prepare_state(angles);
  const auto oracle = testing::oracle_state(inst, angles);
  REQUIRE(amps.size() == oracle.size());
  for (std::size_t i = 0; i < amps.size(); ++i)
    CHECK(std::abs(amps[i] - oracle[i]) <= 1e-12);
}

TEST_CASE("oracle equivalence over random draws") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const ProblemInstance inst = random_small_instance(rng, n);
    const QaoaEvaluator eval(inst);
    const AngleVector angles = random_angles(rng, 1 + static_cast<int>(rng.below(3)));

    const auto amps = eval.prepare_state(angles);
    const auto oracle = testing::oracle_state(inst, angles);
    double max_err = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i)
      max_err = std::max(max_err, std::abs(amps[i] - oracle[i]));
    CHECK(max_err <= 1e-12);

    CHECK(std::abs(eval.exact_cost(angles) - testing::oracle_cost(inst, angles)) <=
          1e-12);
  }
}

TEST_CASE("prepared states are normalized") {
  Rng rng(5);
  const ProblemInstance inst = generate_3regular_maxcut(10, 3);
  const QaoaEvaluator eval(inst);
  for (int trial = 0; trial < 20; ++trial) {
    const auto amps = eval.prepare_state(random_angles(rng, 2));
    CHECK(std::abs(kernels::norm_sq(amps) - 1.0) <= 1e-10);
  }
}

TEST_CASE("serial and parallel state preparation agree") {
  Rng rng(6);
  // n = 16 sits above the kernels' parallel-dispatch cutoff
  const ProblemInstance inst = generate_3regular_maxcut(16, 4);
  const QaoaEvaluator eval(inst);
  for (int trial = 0; trial < 3; ++trial) {
    const auto angles = random_angles(rng, 3);
    const auto a = eval.prepare_state(angles);
    const auto b = eval.prepare_state_serial(angles);
    double max_err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      max_err = std::max(max_err, std::abs(a[i] - b[i]));
    CHECK(max_err <= 1e-14);
  }
  const auto angles = random_angles(rng, 2);
  const auto amps = eval.prepare_state(angles);
  CHECK(kernels::expectation_diag(amps, eval.cost_table()) ==
        doctest::Approx(kernels::expectation_diag_serial(amps, eval.cost_table()))
            .epsilon(1e-13));
}

TEST_CASE("Max-Cut cost vanishes at beta = 0 and at gamma = 0") {
  Rng rng(8);
  const ProblemInstance inst = generate_3regular_maxcut(10, 5);
  const QaoaEvaluator eval(inst);
  for (int trial = 0; trial < 5; ++trial) {
    const double g = rng.uniform(-1.5, 1.5), b = rng.uniform(-0.7, 0.7);
    CHECK(std::abs(eval.exact_cost({{g}, {0.0}})) <= 1e-10);
    CHECK(std::abs(eval.exact_cost({{0.0}, {b}})) <= 1e-10);
  }
}

TEST_CASE("two-qubit grid matches the dense oracle") {
  const ProblemInstance inst = two_qubit_edge();
  const QaoaEvaluator eval(inst);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      const AngleVector angles{{-1.0 + 0.5 * i}, {-0.5 + 0.25 * j}};
      CHECK(std::abs(eval.exact_cost(angles) -
                     testing::oracle_cost(inst, angles)) <= 1e-12);
    }
}

TEST_CASE("sampled cost is deterministic given the seed") {
  const ProblemInstance inst = generate_3regular_maxcut(8, 6);
  const QaoaEvaluator eval(inst);
  const AngleVector angles{{0.4, -0.2}, {0.1, 0.3}};
  const auto a = eval.sampled_cost(angles, 500, 99);
  const auto b = eval.sampled_cost(angles, 500, 99);
  CHECK(a.value == b.value);
  CHECK(a.shots == 500);
  CHECK(a.rng_seed == 99);
  const auto c = eval.sampled_cost(angles, 500, 100);
  CHECK(a.value != c.value);  // overwhelmingly likely for a fresh stream
}

TEST_CASE("sampled cost stays within the classical spectrum") {
  Rng rng(10);
  const ProblemInstance inst =
      generate_heavy_hex_instance(generate_heavy_hex(1, 1), 2);
  const QaoaEvaluator eval(inst);
  const auto ext = brute_force_extrema(inst);
  for (int trial = 0; trial < 20; ++trial) {
    const auto est =
        eval.sampled_cost(random_angles(rng, 2), 64, rng.next_u64());
    CHECK(est.value >= ext.c_min - 1e-12);
    CHECK(est.value <= ext.c_max + 1e-12);
  }
}

TEST_CASE("sampled cost is an unbiased estimate of the exact cost") {
  Rng rng(123);
  const ProblemInstance inst = generate_3regular_maxcut(8, 7);
  const QaoaEvaluator eval(inst);
  const AngleVector angles = random_angles(rng, 2);
  const double exact = eval.exact_cost(angles);

  const int reps = 200, shots = 200;
  std::vector<double> estimates;
  for (int r = 0; r < reps; ++r)
    estimates.push_back(eval.sampled_cost(angles, shots, rng.next_u64()).value);
  double mean = 0.0;
  for (double v : estimates) mean += v;
  mean /= reps;
  double var = 0.0;
  for (double v : estimates) var += (v - mean) * (v - mean);
  var /= (reps - 1);
  const double se = std::sqrt(var / reps);
  CHECK(std::abs(mean - exact) <= 4.0 * se);
}

TEST_CASE("uniform sampling at beta = 0 estimates zero Max-Cut cost") {
  const ProblemInstance inst = generate_3regular_maxcut(10, 8);
  const QaoaEvaluator eval(inst);

  // Brute-force variance of the classical cost under uniform bitstrings.
  const auto table = cost_table(inst);
  double mean = 0.0;
  for (double c : table) mean += c;
  mean /= static_cast<double>(table.size());
  double var = 0.0;
  for (double c : table) var += (c - mean) * (c - mean);
  var /= static_cast<double>(table.size());

  const int shots = 4000;
  const auto est = eval.sampled_cost({{0.7}, {0.0}}, shots, 21);
  CHECK(std::abs(est.value) <= 4.0 * std::sqrt(var / shots));
}

TEST_CASE("pi shifts leave heavy-hex costs invariant") {
  Rng rng(31);
  const AngleVector angles = random_angles(rng, 3);
  for (int cols : {1, 2}) {
    const ProblemInstance inst =
        generate_heavy_hex_instance(generate_heavy_hex(1, cols), 5);
    const QaoaEvaluator eval(inst);
    for (int c = 0; c < 6; ++c) {
      CHECK(pi_shift_difference(eval, angles, c, std::numbers::pi) <= 1e-10);
      CHECK(pi_shift_difference(eval, angles, c, -std::numbers::pi) <= 1e-10);
    }
  }
  // Half shifts move the cost, so the check itself is nontrivial. On the
  // single-cell patch every z_i appears an even number of times across the
  // terms, which turns gamma quarter-shifts into a global phase as well;
  // the two-cell patch has degree-3 corners and no such symmetry.
  const ProblemInstance two_cells =
      generate_heavy_hex_instance(generate_heavy_hex(1, 2), 1);
  const QaoaEvaluator eval2(two_cells);
  CHECK(pi_shift_difference(eval2, angles, 0, std::numbers::pi / 2) > 1e-6);
}

TEST_CASE("pi gamma shifts are not invariant for weighted Max-Cut") {
  const ProblemInstance inst = generate_3regular_maxcut(8, 9);
  const QaoaEvaluator eval(inst);
  const AngleVector angles{{0.37, -0.21}, {0.18, 0.09}};
  CHECK(pi_shift_difference(eval, angles, 0, std::numbers::pi) > 1e-6);
  // beta shifts by pi are a global phase for any instance
  CHECK(pi_shift_difference(eval, angles, 2, std::numbers::pi) <= 1e-10);
}

TEST_CASE("engine guards") {
  const ProblemInstance inst = two_qubit_edge();
  const QaoaEvaluator eval(inst);
  CHECK_THROWS_AS(eval.sampled_cost({{0.1}, {0.1}}, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(
      eval.exact_cost({{std::numeric_limits<double>::quiet_NaN()}, {0.0}}),
      std::invalid_argument);
  CHECK_THROWS_AS(AngleVector::from_flat({0.1, 0.2, 0.3}), std::invalid_argument);

  HeavyHexInstance big;
  big.graph.n = 25;
  for (int v = 0; v + 1 < 25; ++v) big.graph.edges.push_back({v, v + 1});
  big.linear.assign(25, 1);
  big.quadratic.assign(24, 1);
  CHECK_THROWS_AS(QaoaEvaluator(ProblemInstance{big}), std::invalid_argument);
}

TEST_CASE("exact mode sentinel") {
  const ProblemInstance inst = two_qubit_edge();
  const QaoaEvaluator eval(inst);
  const AngleVector angles{{0.5}, {0.25}};
  CHECK(eval.cost(angles, 0, 1) == eval.exact_cost(angles));
  CHECK(eval.cost(angles, 100, 1) == eval.sampled_cost(angles, 100, 1).value);
}
