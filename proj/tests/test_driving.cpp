#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "matelab/driving.hpp"
#include "matelab/special.hpp"
#include "matelab/stochastic.hpp"

using namespace matelab;

namespace {

// Pooled drift of the reparameterized log gap over fixed
// quadratic-variation spans of exact gap paths started at unit distance.
double pooled_gap_dimension(double kappa, double rho, Direction dir,
                            std::size_t pairs, std::uint64_t seed,
                            double dt) {
  double delta = dir == Direction::forward
                     ? forward_gap_dimension(kappa, rho)
                     : reverse_gap_dimension(kappa, rho);
  double dy = 0.0, ds = 0.0;
  RngStream base(seed, 60);
  for (std::size_t r = 0; r < pairs; ++r) {
    TimeSeries x;
    x.dt = dt;
    double z = 1.0;
    x.values.push_back(1.0);
    double qv = 0.0, logx = 0.0;
    while (qv < 1.0) {
      z = besq_step(base, z, delta, dt);
      double v = std::sqrt(z);
      double l = std::log(v);
      qv += (l - logx) * (l - logx);
      logx = l;
      x.values.push_back(v);
    }
    auto [rep, drift] = log_qv_reparam(x);
    (void)drift;
    auto m = std::min<std::size_t>(rep.values.size() - 1,
                                   static_cast<std::size_t>(1.0 / rep.dt));
    dy += rep.values[m] - rep.values[0];
    ds += rep.dt * static_cast<double>(m);
  }
  return 2.0 * dy / ds + 2.0;
}

}  // namespace

TEST_CASE("gap dimensions match the driving formulas") {
  CHECK(forward_gap_dimension(8.0 / 3.0, 0.0) == doctest::Approx(2.5));
  CHECK(reverse_gap_dimension(8.0 / 3.0, 8.0 / 3.0) == doctest::Approx(1.5));
  // kappa = 2, rho = 0 forward: delta = 3.
  double d_fwd =
      pooled_gap_dimension(2.0, 0.0, Direction::forward, 2500, 7, 2e-4);
  CHECK(std::fabs(d_fwd - 3.0) < 0.05);
  // kappa = 2, rho~ = 2 reverse: delta = 1.  The discrete quadratic
  // variation is chunky while the gap hugs 0, so this case runs finer.
  double d_rev =
      pooled_gap_dimension(2.0, 2.0, Direction::reverse, 2000, 8, 4e-5);
  CHECK(std::fabs(d_rev - 1.0) < 0.05);
  // The per-pair estimator built from the driving pair itself is noisy but
  // unbiased enough for a sanity window.
  double one = 0.0;
  for (std::uint64_t s = 0; s < 24; ++s) {
    DrivingPair p = sample_chordal_driving(RngStream(s, 61), 2.0, 0.0,
                                           Direction::forward, 40'000, 1e-4);
    one += gap_dimension_estimate(p);
  }
  CHECK(std::fabs(one / 24.0 - 3.0) < 0.6);
}

TEST_CASE("deterministic exponential gap gives dimension 4 exactly") {
  DrivingPair p;
  p.kappa = 4.0;
  p.rho = 0.0;
  p.direction = Direction::forward;
  p.W.dt = p.V.dt = 1.0;
  for (int k = 0; k < 64; ++k) {
    p.W.values.push_back(0.0);
    p.V.values.push_back(2.0 * std::exp(static_cast<double>(k)));
  }
  CHECK(gap_dimension_estimate(p) == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("driving pair grid identities") {
  DrivingPair p = sample_chordal_driving(RngStream(9, 1), 8.0 / 3.0, 0.0,
                                         Direction::forward, 5000, 1e-4);
  double dt = p.W.dt;
  for (std::size_t i = 1; i < p.V.values.size(); ++i) {
    double inc = p.V.values[i] - p.V.values[i - 1];
    double expect = 2.0 * dt / (p.V.values[i - 1] - p.W.values[i - 1]);
    CHECK(inc == doctest::Approx(expect).epsilon(1e-12));
    CHECK(inc > 0.0);
  }
  // rho = kappa/2 - 2 sits exactly at the delta = 2 threshold: no zero hit.
  DrivingPair q = sample_chordal_driving(RngStream(9, 2), 8.0 / 3.0,
                                         8.0 / 6.0 - 2.0, Direction::forward,
                                         50'000, 1e-4);
  for (std::size_t i = 0; i < q.V.values.size(); ++i)
    CHECK(q.V.values[i] - q.W.values[i] > 0.0);

  CHECK_THROWS_AS(sample_chordal_driving(RngStream(9, 3), 8.0 / 3.0, -2.5,
                                         Direction::forward, 100, 1e-4),
                  std::invalid_argument);
}

TEST_CASE("reverse/forward gap reversal") {
  CHECK_THROWS_AS(
      reverse_forward_gap_test(RngStream(10, 1), 2.0, 3.0, 100, 1e-3),
      std::invalid_argument);  // rho~ = kappa/2 + 2 boundary
  GapReversalReport rep =
      reverse_forward_gap_test(RngStream(10, 2), 8.0 / 3.0, 8.0 / 3.0, 1200,
                               1e-3);
  CHECK(rep.per_time.size() == 5);
  CHECK(rep.pass);
  // kappa = 2, rho~ = kappa: forward counterpart is ordinary SLE_2
  // (rho = 0); the same comparison must hold there.
  GapReversalReport rep2 =
      reverse_forward_gap_test(RngStream(10, 3), 2.0, 2.0, 1200, 1e-3);
  CHECK(rep2.pass);
}

TEST_CASE("radial theta processes") {
  CHECK_THROWS_AS(sample_radial_theta(RngStream(11, 1), 0.0, 0.0,
                                      ThetaVariant::forward_radial, 100, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_radial_theta(RngStream(11, 1), 4.0, -2.5,
                                      ThetaVariant::forward_radial, 100, 1e-3),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_radial_theta(RngStream(11, 1), 4.0, 7.0,
                                      ThetaVariant::reverse_interior, 100,
                                      1e-3),
                  std::invalid_argument);

  // Values stay inside the open interval.
  ThetaProcess p = sample_radial_theta(RngStream(11, 2), 8.0 / 3.0, 0.0,
                                       ThetaVariant::forward_radial, 200'000,
                                       2e-4);
  for (double v : p.theta.values) {
    CHECK(v > 0.0);
    CHECK(v < 2.0 * M_PI);
  }

  // Density exponent of the forward variant: log-density is linear in
  // log sin(theta/2) with slope delta - 1 = 3/2.  Samples pool across
  // independent chains (end regions mix too slowly within one chain).
  std::vector<double> kept;
  RngStream base(11, 3);
  const std::size_t chains = 1600, burn = 60'000, thin = 10'000, per = 12;
  for (std::size_t c = 0; c < chains; ++c) {
    ThetaProcess lp = sample_radial_theta(base.split(c), 8.0 / 3.0, 0.0,
                                          ThetaVariant::forward_radial,
                                          burn + thin * per, 2e-4);
    for (std::size_t k = burn; k < lp.theta.values.size(); k += thin)
      kept.push_back(lp.theta.values[k]);
  }
  std::vector<double> xs, ys;
  for (double lo = 0.3; lo < 2.8; lo *= 1.35) {
    double hi = lo * 1.35;
    double count = 0.0;
    for (double v : kept)
      if (v >= lo && v < hi) count += 1.0;
    if (count < 50) continue;
    xs.push_back(std::log(std::sin(0.25 * (lo + hi))));
    ys.push_back(std::log(count / (hi - lo)));
  }
  REQUIRE(xs.size() >= 5);
  LineFit fit = least_squares(xs, ys);
  CHECK(std::fabs(fit.slope - 1.5) < 0.15);
}
