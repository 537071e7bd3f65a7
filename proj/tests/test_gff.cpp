#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "matelab/gff.hpp"
#include "matelab/parallel.hpp"
#include "matelab/stats.hpp"

using namespace matelab;

TEST_CASE("field sampling contracts") {
  CHECK_THROWS_AS(sample_gff(RngStream(1, 1), 100, GffBoundary::dirichlet),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_gff(RngStream(1, 1), 8, GffBoundary::dirichlet),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_gff(RngStream(1, 1), 2048, GffBoundary::dirichlet),
                  std::invalid_argument);

  FieldGrid a = sample_gff(RngStream(2, 5), 32, GffBoundary::dirichlet);
  FieldGrid b = sample_gff(RngStream(2, 5), 32, GffBoundary::dirichlet);
  FieldGrid c = sample_gff(RngStream(2, 6), 32, GffBoundary::dirichlet);
  CHECK(a.values == b.values);
  CHECK(a.values != c.values);

  FieldGrid f = sample_gff(RngStream(2, 7), 64, GffBoundary::free_mean_zero);
  CHECK(std::fabs(f.mean()) < 1e-12);
}

TEST_CASE("dirichlet variance matches the direct-solve Green function") {
  const std::size_t n = 64;
  const std::size_t samples = 4000;
  // Probe pairs: center and a few offsets.
  std::vector<std::pair<std::size_t, std::size_t>> probes = {
      {32, 32}, {16, 16}, {32, 16}, {8, 40}, {48, 48}};
  RngStream base(3, 1);
  std::vector<std::vector<double>> vals(probes.size());
  for (std::size_t s = 0; s < samples; ++s) {
    FieldGrid f = sample_gff(base.split(s), n, GffBoundary::dirichlet);
    for (std::size_t p = 0; p < probes.size(); ++p)
      vals[p].push_back(f.at(probes[p].first, probes[p].second));
  }
  for (std::size_t p = 0; p < probes.size(); ++p) {
    auto g = greens_column_cg(n, probes[p].first, probes[p].second);
    double target =
        2.0 * M_PI * g[probes[p].first * n + probes[p].second];
    double var = sample_variance(vals[p]);
    double se = target * std::sqrt(2.0 / static_cast<double>(samples));
    CHECK(std::fabs(var - target) < 4.0 * se);
  }
}

TEST_CASE("circle averages") {
  FieldGrid f;
  f.n = 32;
  f.boundary = GffBoundary::dirichlet;
  f.values.assign(32 * 32, 3.25);
  CHECK(circle_average(f, 16, 16, 5.0) == doctest::Approx(3.25).epsilon(1e-12));
  CHECK_THROWS_AS(circle_average(f, 16, 16, 20.0), std::domain_error);
  CHECK_NOTHROW(circle_average(f, 0.0, 16.0, 5.0, true));
}

TEST_CASE("lebesgue limit of the area measure") {
  FieldGrid f = sample_gff(RngStream(4, 1), 64, GffBoundary::dirichlet);
  LqgMeasureGrid mu = lqg_area_measure(f, 0.0, 3.0);
  // Interior cells carry exactly spacing^2; the eps margin carries zero.
  CHECK(mu.cell_mass[32 * 64 + 32] == 1.0);
  CHECK(mu.cell_mass[0] == 0.0);
  double expected = 0.0;
  for (std::size_t i = 0; i < 64; ++i)
    for (std::size_t j = 0; j < 64; ++j)
      if (i >= 3 && i + 3 <= 63 && j >= 3 && j + 3 <= 63) expected += 1.0;
  CHECK(mu.total() == doctest::Approx(expected));
}

TEST_CASE("regularization scale cancels in expectation") {
  // E[mu_eps(A)] is eps-free up to discretization: ratio within 10%.
  RngStream base(5, 1);
  const std::size_t n = 64, fields = 400;
  auto masses = map_replicas<std::pair<double, double>>(
      fields, ExecMode::openmp, [&](std::size_t s) {
        FieldGrid f = sample_gff(base.split(s), n, GffBoundary::dirichlet);
        LqgMeasureGrid m1 = lqg_area_measure(f, 1.0, 3.0);
        LqgMeasureGrid m2 = lqg_area_measure(f, 1.0, 6.0);
        return std::make_pair(m1.box_mass(16, 48, 16, 48),
                              m2.box_mass(16, 48, 16, 48));
      });
  double tot_eps = 0.0, tot_2eps = 0.0;
  for (const auto& [a, b] : masses) {
    tot_eps += a;
    tot_2eps += b;
  }
  CHECK(std::fabs(tot_2eps / tot_eps - 1.0) < 0.1);
}

TEST_CASE("coordinate change is exact for deterministic fields") {
  FieldGrid f;
  f.n = 128;
  f.boundary = GffBoundary::dirichlet;
  f.values.assign(128 * 128, 0.7);
  CoordinateChangeReport rep = coordinate_change_check(f, 1.0, 2, 3.0);
  CHECK(rep.max_rel_deviation < 1e-10);
  // gamma = 0: pure Jacobian, exact for any field.
  FieldGrid g = sample_gff(RngStream(6, 1), 128, GffBoundary::dirichlet);
  CoordinateChangeReport rep0 = coordinate_change_check(g, 0.0, 2, 3.0);
  CHECK(rep0.max_rel_deviation < 1e-10);
  CHECK_THROWS_AS(coordinate_change_check(g, 1.0, 3, 3.0),
                  std::invalid_argument);
}

TEST_CASE("single-field coordinate change stays within budget") {
  FieldGrid f = sample_gff(RngStream(7, 1), 256, GffBoundary::dirichlet);
  CoordinateChangeReport rep = coordinate_change_check(f, 1.0, 2, 3.0);
  CHECK(rep.max_rel_deviation < 0.2);
}

TEST_CASE("disk sampler covariance and boundary") {
  DiskGffSampler disk(65, 28.0);
  CHECK(disk.inside(32, 32));
  CHECK(!disk.inside(0, 0));
  const std::size_t samples = 3000;
  RngStream base(8, 1);
  std::vector<double> center_vals;
  for (std::size_t s = 0; s < samples; ++s) {
    FieldGrid f = disk.sample(base.split(s));
    center_vals.push_back(f.at(32, 32));
    if (s == 0) {
      // Dirichlet data vanish outside the disk.
      CHECK(f.at(0, 0) == 0.0);
      CHECK(f.at(64, 64) == 0.0);
    }
  }
  double target = 2.0 * M_PI * disk.greens_diag(32, 32);
  double var = sample_variance(center_vals);
  double se = target * std::sqrt(2.0 / static_cast<double>(samples));
  CHECK(std::fabs(var - target) < 4.0 * se);
}

TEST_CASE("boundary measure needs a free field") {
  FieldGrid f = sample_gff(RngStream(9, 1), 64, GffBoundary::dirichlet);
  CHECK_THROWS_AS(lqg_boundary_measure(f, 1.0, 3.0), std::invalid_argument);
  FieldGrid g = sample_gff(RngStream(9, 2), 64, GffBoundary::free_mean_zero);
  auto nu = lqg_boundary_measure(g, 1.0, 3.0);
  CHECK(nu.size() == 64);
  for (double v : nu) CHECK(v > 0.0);
}
