#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "matelab/levy.hpp"

using namespace matelab;

namespace {

StablePath hand_path(std::vector<double> values,
                     std::vector<std::pair<double, double>> jumps) {
  StablePath p;
  p.path.dt = 1.0;
  p.path.values = std::move(values);
  p.jumps = std::move(jumps);
  p.cutoff = 0.5;
  return p;
}

}  // namespace

TEST_CASE("levy tree construction by hand") {
  // Single jump: a single root.
  {
    StablePath p = hand_path({0.0, 1.0, 0.5, -0.2}, {{1.0, 1.0}});
    LevyTree t = build_levy_tree(p);
    REQUIRE(t.nodes.size() == 1);
    CHECK(t.nodes[0].parent == -1);
    CHECK(t.root_count() == 1);
    CHECK(t.nodes[0].interval_end == doctest::Approx(3.0));
  }
  // Second jump inside the first interval: a chain of depth 2.
  {
    StablePath p = hand_path({0.0, 1.0, 0.8, 1.8, 0.9, 0.4, -0.1},
                             {{1.0, 1.0}, {3.0, 1.0}});
    LevyTree t = build_levy_tree(p);
    REQUIRE(t.nodes.size() == 2);
    CHECK(t.nodes[0].parent == -1);
    CHECK(t.nodes[1].parent == 0);
    CHECK(t.nodes[1].interval_end == doctest::Approx(5.0));
    CHECK(t.nodes[0].interval_end == doctest::Approx(6.0));
    CHECK(t.nesting_ok());
  }
  // Sibling jumps: the second interval closes before the third jump.
  {
    StablePath p = hand_path({0.0, 1.0, 0.1, 1.1, 0.2, -0.5},
                             {{1.0, 1.0}, {3.0, 1.0}});
    LevyTree t = build_levy_tree(p);
    CHECK(t.root_count() == 2);
    CHECK(t.nesting_ok());
  }
  CHECK_THROWS_AS(
      build_levy_tree(hand_path({0, 1, 0}, {{1.0, -1.0}})),
      std::invalid_argument);
  CHECK_THROWS_AS(
      build_levy_tree(hand_path({0, 1, 2, 0}, {{2.0, 1.0}, {1.0, 1.0}})),
      std::invalid_argument);
}

TEST_CASE("forested line structure") {
  ForestedLine empty = forested_line(RngStream(51, 1), 6.0, 0.0, 1e-3);
  CHECK(empty.tree.nodes.empty());
  CHECK_THROWS_AS(forested_line(RngStream(51, 1), 8.5, 1.0, 1e-3),
                  std::invalid_argument);

  ForestedLine fl = forested_line(RngStream(51, 2), 6.0, 400.0, 1e-3);
  REQUIRE(fl.tree.nodes.size() > 5000);
  CHECK(fl.tree.nesting_ok());
  CHECK(fl.disk_areas.size() == fl.tree.nodes.size());
  // Disks are ordered by root position on the line.
  double last = -1.0;
  for (const auto& n : fl.tree.nodes) {
    CHECK(n.time > last);
    last = n.time;
    CHECK(n.boundary_length > 0.0);
  }
  std::vector<double> sizes;
  for (const auto& n : fl.tree.nodes) sizes.push_back(n.boundary_length);
  TailEstimate hill = hill_estimator(sizes, sizes.size() / 10);
  CHECK(std::fabs(hill.alpha_hat - 1.5) < 0.1);
}

TEST_CASE("inverse local time index at delta = 1") {
  TailEstimate e = inverse_local_time_index(RngStream(52, 1), 1.0, 1500.0,
                                            1e-3);
  CHECK(std::fabs(e.alpha_hat - 0.5) < 0.05);
  CHECK_THROWS_AS(inverse_local_time_index(RngStream(52, 2), 2.5, 10.0, 1e-3),
                  std::invalid_argument);
}

TEST_CASE("conditioned positive paths") {
  ConditionedPositiveReport short_h =
      conditioned_positive_check(RngStream(53, 1), 6.0, 2.0, 1e-3, 800);
  CHECK(short_h.all_nonnegative);
  CHECK(short_h.accepted > 0);
  ConditionedPositiveReport long_h =
      conditioned_positive_check(RngStream(53, 2), 6.0, 10.0, 1e-3, 400);
  CHECK(long_h.acceptance_rate < short_h.acceptance_rate);
  CHECK(short_h.jump_law_ks.pass);
}

TEST_CASE("atomic dual measure intensities") {
  std::vector<double> carrier = {0.5, 1.0, 2.0, 0.0};
  const std::size_t draws = 20'000;
  std::vector<double> counts(4, 0.0);
  RngStream base(54, 1);
  for (std::size_t d = 0; d < draws; ++d) {
    AtomicMeasure m = dual_atomic_measure(base.split(d), carrier, 0.0,
                                          std::sqrt(8.0), 1.0);
    CHECK(m.theta == doctest::Approx(0.5));
    for (const auto& [mass, cell] : m.atoms) {
      CHECK(mass >= 1.0);
      counts[cell] += 1.0;
    }
  }
  // theta = 1/2, u_min = 1: expected count per cell = 2 mu(cell).
  for (std::size_t c = 0; c < 3; ++c) {
    double mean = counts[c] / draws;
    double target = 2.0 * carrier[c];
    CHECK(std::fabs(mean - target) < 4.0 * std::sqrt(target / draws));
  }
  CHECK(counts[3] == 0.0);
  CHECK_THROWS_AS(dual_atomic_measure(RngStream(1, 1), carrier, 0.0, 1.5,
                                      1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(dual_atomic_measure(RngStream(1, 1), carrier, 1.0,
                                      std::sqrt(8.0), 1.0),
                  std::invalid_argument);
  AtomicMeasure none = dual_atomic_measure(RngStream(1, 2), {}, 0.0,
                                           std::sqrt(8.0), 1.0);
  CHECK(none.atoms.empty());
}

TEST_CASE("atom masses have the stated tail") {
  RngStream base(55, 1);
  std::vector<double> masses;
  std::vector<double> carrier = {50.0};
  AtomicMeasure m =
      dual_atomic_measure(base, carrier, 0.0, std::sqrt(6.0), 0.01);
  for (const auto& [mass, cell] : m.atoms) masses.push_back(mass);
  REQUIRE(masses.size() > 5000);
  TailEstimate hill = hill_estimator(masses, masses.size() / 10);
  CHECK(std::fabs(hill.alpha_hat - 2.0 / 3.0) < 0.05);
}

TEST_CASE("laplace duality degenerate and small cases") {
  LaplaceDualityReport rep = laplace_duality_test(
      RngStream(56, 1), 0.05, std::sqrt(6.0), 1e-3, {0.0, 1.0}, 50'000);
  CHECK(rep.points[0].mc_estimate == doctest::Approx(1.0));
  CHECK(rep.points[0].analytic == doctest::Approx(1.0));
  CHECK(rep.points[1].rel_error < 0.05);
  CHECK(rep.moment_rel_error < 0.1);
  CHECK_THROWS_AS(laplace_duality_test(RngStream(56, 2), 0.05, std::sqrt(6.0),
                                       1e-3, {-1.0}, 100),
                  std::invalid_argument);
}
