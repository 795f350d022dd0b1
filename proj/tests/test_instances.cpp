#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <set>

#include "qsurr/instances.hpp"
#include "qsurr/rng.hpp"

using namespace qsurr;

namespace {

MaxCutInstance unit_k4() {
  MaxCutInstance inst;
  inst.graph.n = 4;
  inst.graph.edges = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  inst.weights.assign(6, 1.0);
  return inst;
}

HeavyHexInstance unit_path3() {
  HeavyHexInstance inst;
  inst.graph.n = 3;
  inst.graph.edges = {{0, 1}, {1, 2}};
  inst.linear = {1, 1, 1};
  inst.quadratic = {1, 1};
  inst.cubic = {{1, 0, 2, 1}};
  return inst;
}

}  // namespace

TEST_CASE("3-regular generation on 4 vertices is K4") {
  for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
    const auto inst = generate_3regular_maxcut(4, seed);
    CHECK(inst.graph.n == 4);
    REQUIRE(inst.graph.edges.size() == 6);
    const std::set<Edge> edges(inst.graph.edges.begin(), inst.graph.edges.end());
    const std::set<Edge> k4{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
    CHECK(edges == k4);
  }
}

TEST_CASE("3-regular generation at n=16") {
  const auto inst = generate_3regular_maxcut(16, 7);
  CHECK(inst.graph.edges.size() == 24);
  for (int d : inst.graph.degrees()) CHECK(d == 3);
  REQUIRE(inst.weights.size() == 24);
  for (double w : inst.weights) {
    CHECK(w >= 0.0);
    CHECK(w <= 1.0);
  }
  CHECK(inst.graph.connected());
}

TEST_CASE("3-regular generation rejects bad sizes") {
  CHECK_THROWS_AS(generate_3regular_maxcut(5, 0), std::invalid_argument);
  CHECK_THROWS_AS(generate_3regular_maxcut(2, 0), std::invalid_argument);
}

TEST_CASE("3-regular generation is deterministic and seed-sensitive") {
  const auto a = generate_3regular_maxcut(16, 3);
  const auto b = generate_3regular_maxcut(16, 3);
  const auto c = generate_3regular_maxcut(16, 4);
  CHECK(a.graph.edges == b.graph.edges);
  CHECK(a.weights == b.weights);
  CHECK((a.graph.edges != c.graph.edges || a.weights != c.weights));
}

TEST_CASE("degree law over 100 seeds") {
  for (int n : {8, 16})
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
      const auto inst = generate_3regular_maxcut(n, seed);
      for (int d : inst.graph.degrees()) REQUIRE(d == 3);
    }
}

TEST_CASE("single heavy-hex cell is a 12-cycle") {
  const auto g = generate_heavy_hex(1, 1);
  CHECK(g.n == 12);
  CHECK(g.edges.size() == 12);
  for (int d : g.degrees()) CHECK(d == 2);
  CHECK(g.connected());
}

TEST_CASE("two fused heavy-hex cells share one rung") {
  const auto g = generate_heavy_hex(1, 2);
  CHECK(g.n == 21);
  CHECK(g.edges.size() == 22);
  const auto deg = g.degrees();
  CHECK(std::count(deg.begin(), deg.end(), 3) == 2);
  CHECK(std::count(deg.begin(), deg.end(), 2) == 19);
}

TEST_CASE("heavy-hex patches have max degree 3 and a degree-2 vertex") {
  for (int rows = 1; rows <= 3; ++rows)
    for (int cols = 1; cols <= 3; ++cols) {
      const auto g = generate_heavy_hex(rows, cols);
      CHECK(g.max_degree() <= 3);
      const auto deg = g.degrees();
      CHECK(std::count(deg.begin(), deg.end(), 2) > 0);
      CHECK(g.connected());
    }
  CHECK_THROWS_AS(generate_heavy_hex(0, 1), std::invalid_argument);
}

TEST_CASE("cubic term on a path sits on the middle vertex") {
  Graph path;
  path.n = 3;
  path.edges = {{0, 1}, {1, 2}};
  const auto inst = generate_heavy_hex_instance(path, 5);
  REQUIRE(inst.cubic.size() == 1);
  CHECK(inst.cubic[0].i == 1);
  CHECK(inst.cubic[0].j == 0);
  CHECK(inst.cubic[0].k == 2);
}

TEST_CASE("cubic terms sit exactly on degree-2 vertices") {
  const auto g = generate_heavy_hex(1, 1);
  const auto inst = generate_heavy_hex_instance(g, 3);
  CHECK(inst.cubic.size() == 12);  // all 12 cycle vertices have degree 2

  for (int rows : {1, 2})
    for (std::uint64_t seed : {1ull, 2ull}) {
      const auto patch = generate_heavy_hex(rows, 2);
      const auto hh = generate_heavy_hex_instance(patch, seed);
      const auto deg = patch.degrees();
      std::set<int> expected;
      for (int v = 0; v < patch.n; ++v)
        if (deg[v] == 2) expected.insert(v);
      std::set<int> actual;
      for (const auto& t : hh.cubic) actual.insert(t.i);
      CHECK(actual == expected);
      for (const auto& t : hh.cubic) {
        CHECK((t.coeff == 1 || t.coeff == -1));
        CHECK(t.j < t.k);
      }
      for (int c : hh.linear) CHECK((c == 1 || c == -1));
      for (int c : hh.quadratic) CHECK((c == 1 || c == -1));
    }
}

TEST_CASE("coefficient law is a fair +-1 coin") {
  Graph path;
  path.n = 3;
  path.edges = {{0, 1}, {1, 2}};
  double mean = 0.0;
  const int trials = 10000;
  for (int t = 0; t < trials; ++t)
    mean += generate_heavy_hex_instance(path, 50000 + t).quadratic[0];
  mean /= trials;
  CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("heavy-hex instance rejects degree > 3") {
  Graph star;
  star.n = 5;
  star.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  CHECK_THROWS_AS(generate_heavy_hex_instance(star, 0), std::invalid_argument);
}

TEST_CASE("classical cost hand values") {
  const auto k4 = unit_k4();
  CHECK(classical_cost(k4, {1, 1, 1, 1}) == doctest::Approx(6.0));

  const auto path = unit_path3();
  CHECK(classical_cost(path, {1, -1, 1}) == doctest::Approx(-2.0));

  CHECK_THROWS_AS(classical_cost(k4, {1, 1, 1}), std::invalid_argument);
}

TEST_CASE("Max-Cut cost has spin-flip symmetry") {
  Rng rng(9);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = generate_3regular_maxcut(10, seed);
    for (int t = 0; t < 50; ++t) {
      Bitstring z(10), neg(10);
      for (int v = 0; v < 10; ++v) {
        z[v] = rng.sign();
        neg[v] = -z[v];
      }
      CHECK(classical_cost(inst, z) == classical_cost(inst, neg));
    }
  }
}

TEST_CASE("brute force extrema of unit K4") {
  const ProblemInstance inst = unit_k4();
  const auto ext = brute_force_extrema(inst);
  CHECK(ext.c_min == doctest::Approx(-2.0));
  CHECK(ext.c_max == doctest::Approx(6.0));
  CHECK(classical_cost(inst, ext.argmin) == doctest::Approx(ext.c_min));
  CHECK(classical_cost(inst, ext.argmax) == doctest::Approx(ext.c_max));
}

TEST_CASE("Max-Cut maximum is the all-equal assignment") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const auto mc = generate_3regular_maxcut(12, seed);
    const ProblemInstance inst = mc;
    const auto ext = brute_force_extrema(inst);
    double total = 0.0;
    for (double w : mc.weights) total += w;
    CHECK(ext.c_max == doctest::Approx(total));
    CHECK(ext.argmax == Bitstring(12, 1));  // lowest index wins the tie with -z
  }
}

TEST_CASE("extrema sandwich random assignments") {
  const auto patch = generate_heavy_hex(1, 1);
  const ProblemInstance insts[] = {generate_3regular_maxcut(10, 4),
                                   generate_heavy_hex_instance(patch, 4)};
  Rng rng(11);
  for (const auto& inst : insts) {
    const auto ext = brute_force_extrema(inst);
    const int n = instance_size(inst);
    for (int t = 0; t < 1000; ++t) {
      Bitstring z(n);
      for (int v = 0; v < n; ++v) z[v] = rng.sign();
      const double c = classical_cost(inst, z);
      CHECK(c >= ext.c_min - 1e-12);
      CHECK(c <= ext.c_max + 1e-12);
    }
  }
}

TEST_CASE("serial and parallel enumeration agree") {
  const ProblemInstance insts[] = {
      generate_3regular_maxcut(12, 8),
      generate_heavy_hex_instance(generate_heavy_hex(1, 1), 8)};
  for (const auto& inst : insts) {
    const auto table_s = cost_table_serial(inst);
    const auto table_p = cost_table(inst);
    REQUIRE(table_s.size() == table_p.size());
    for (std::size_t i = 0; i < table_s.size(); ++i)
      REQUIRE(table_s[i] == table_p[i]);

    const auto es = brute_force_extrema_serial(inst);
    const auto ep = brute_force_extrema(inst);
    CHECK(es.c_min == ep.c_min);
    CHECK(es.c_max == ep.c_max);
    CHECK(es.argmin == ep.argmin);
    CHECK(es.argmax == ep.argmax);
  }
}

TEST_CASE("enumeration size guard") {
  HeavyHexInstance big;
  big.graph.n = 25;
  for (int v = 0; v + 1 < 25; ++v) big.graph.edges.push_back({v, v + 1});
  big.linear.assign(25, 1);
  big.quadratic.assign(24, 1);
  CHECK_THROWS_AS(brute_force_extrema(ProblemInstance{big}),
                  std::invalid_argument);
}

TEST_CASE("instance JSON round trip") {
  const auto dir = std::filesystem::temp_directory_path() / "qsurr_inst_test";
  std::filesystem::create_directories(dir);

  const MaxCutInstance mc = generate_3regular_maxcut(8, 13);
  save_instance(mc, dir / "mc.json");
  const auto mc2 = std::get<MaxCutInstance>(load_instance(dir / "mc.json"));
  CHECK(mc2.graph.n == mc.graph.n);
  CHECK(mc2.graph.edges == mc.graph.edges);
  CHECK(mc2.weights == mc.weights);  // exact: shortest round-trip decimals
  CHECK(mc2.seed == mc.seed);

  const auto hh = generate_heavy_hex_instance(generate_heavy_hex(1, 2), 13);
  save_instance(hh, dir / "hh.json");
  const auto hh2 = std::get<HeavyHexInstance>(load_instance(dir / "hh.json"));
  CHECK(hh2.graph.edges == hh.graph.edges);
  CHECK(hh2.linear == hh.linear);
  CHECK(hh2.quadratic == hh.quadratic);
  REQUIRE(hh2.cubic.size() == hh.cubic.size());
  for (std::size_t i = 0; i < hh.cubic.size(); ++i) {
    CHECK(hh2.cubic[i].i == hh.cubic[i].i);
    CHECK(hh2.cubic[i].j == hh.cubic[i].j);
    CHECK(hh2.cubic[i].k == hh.cubic[i].k);
    CHECK(hh2.cubic[i].coeff == hh.cubic[i].coeff);
  }

  Manifest m;
  m.instances.push_back({"mc8", "mc.json", "maxcut", 13, 8});
  m.instances.push_back({"hh21", "hh.json", "heavy_hex", 13, 21});
  save_manifest(m, dir / "manifest.json");
  const auto m2 = load_manifest(dir / "manifest.json");
  REQUIRE(m2.instances.size() == 2);
  CHECK(m2.find("mc8").path == "mc.json");
  CHECK_THROWS_AS(m2.find("nope"), std::invalid_argument);
  const auto loaded = load_manifest_instance(dir / "manifest.json", m2, "mc8");
  CHECK(instance_kind(loaded) == "maxcut");

  std::filesystem::remove_all(dir);
}

TEST_CASE("malformed instance JSON is rejected") {
  nlohmann::json j{{"kind", "maxcut"},
                   {"n", 3},
                   {"seed", 0},
                   {"edges", {{0, 1}}},
                   {"weights", {0.5, 0.5}}};
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);
  j["weights"] = {0.5};
  j["kind"] = "mystery";
  CHECK_THROWS_AS(instance_from_json(j), std::invalid_argument);
}
