#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "matelab/rng.hpp"
#include "matelab/special.hpp"
#include "matelab/stats.hpp"
#include "matelab/stochastic.hpp"

using namespace matelab;

TEST_CASE("rng determinism and stream independence") {
  RngStream a(42, 7), b(42, 7), c(42, 8);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    auto x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
    all_equal = all_equal && x == y;
    any_diff = any_diff || x != z;
  }
  CHECK(all_equal);
  CHECK(any_diff);
  CHECK(a.split(3).stream_id() == b.split(3).stream_id());
  CHECK(a.split(3).stream_id() != a.split(4).stream_id());
}

TEST_CASE("rng moments") {
  RngStream s(1, 1);
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    double g = s.normal();
    sum += g;
    sum2 += g * g;
  }
  CHECK(std::fabs(sum / n) < 0.01);
  CHECK(std::fabs(sum2 / n - 1.0) < 0.02);

  double psum = 0.0;
  for (int i = 0; i < 50000; ++i) psum += s.poisson(50.0);
  CHECK(std::fabs(psum / 50000 - 50.0) < 0.2);

  double gsum = 0.0, gsum2 = 0.0;
  for (int i = 0; i < 50000; ++i) {
    double g = s.gamma(0.4, 2.0);
    gsum += g;
    gsum2 += g * g;
  }
  CHECK(std::fabs(gsum / 50000 - 0.8) < 0.03);          // mean a*scale
  CHECK(std::fabs(gsum2 / 50000 - (1.6 + 0.64)) < 0.2); // var + mean^2
}

TEST_CASE("incomplete gamma and chi-square quantiles") {
  CHECK(gamma_p(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(gamma_q(0.5, 2.0) ==
        doctest::Approx(std::erfc(std::sqrt(2.0))).epsilon(1e-10));
  CHECK(chi_square_upper_quantile(1, 0.01) == doctest::Approx(6.635).epsilon(1e-3));
  CHECK(chi_square_upper_quantile(10, 0.01) ==
        doctest::Approx(23.209).epsilon(1e-3));
}

TEST_CASE("adaptive quadrature") {
  double v = integrate([](double x) { return std::sin(x); }, 0.0, M_PI);
  CHECK(v == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("sample_bm degenerate and drift") {
  TimeSeries z = sample_bm(RngStream(5, 1), 3, 1.0, 0.0, 0.0);
  CHECK(z.values == std::vector<double>{0.0, 0.0, 0.0});

  const std::size_t n = 1'000'000;
  const double dt = 1e-4;
  TimeSeries s = sample_bm(RngStream(5, 2), n + 1, dt, 2.0, 1.0);
  double t_final = dt * static_cast<double>(n);
  double slope = s.values.back() / t_final;
  CHECK(std::fabs(slope - 2.0) < 3.0 / std::sqrt(t_final));

  TimeSeries s2 = sample_bm(RngStream(5, 2), n + 1, dt, 2.0, 1.0);
  CHECK(s.values == s2.values);

  CHECK_THROWS_AS(sample_bm(RngStream(5, 3), 1, 1.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_bm(RngStream(5, 3), 10, 0.0, 0.0, 1.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_bm(RngStream(5, 3), 10, 1.0, 0.0, -1.0),
                  std::invalid_argument);
}

namespace {

double covariance_rate(double kappa_prime, std::size_t n, double dt,
                       std::uint64_t seed) {
  CorrelatedPair p =
      sample_correlated_bm(RngStream(seed, 9), n + 1, dt, kappa_prime);
  double s = 0.0;
  for (std::size_t i = 1; i <= n; ++i)
    s += (p.L.values[i] - p.L.values[i - 1]) *
         (p.R.values[i] - p.R.values[i - 1]);
  return s / (static_cast<double>(n) * dt);
}

}  // namespace

TEST_CASE("correlated pair covariance") {
  const std::size_t n = 1'000'000;
  for (double kp : {16.0 / 3.0, 6.0, 8.0}) {
    double r = -std::cos(4.0 * M_PI / kp);
    double se = std::sqrt((1.0 + r * r) / static_cast<double>(n));
    CHECK(std::fabs(covariance_rate(kp, n, 1e-3, 11) - r) < 4.0 * se);
  }
  CHECK_THROWS_AS(sample_correlated_bm(RngStream(1, 1), 10, 1.0, 4.0),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_correlated_bm(RngStream(1, 1), 10, 1.0, 9.0),
                  std::invalid_argument);
  CHECK_NOTHROW(sample_correlated_bm(RngStream(1, 1), 10, 1.0, 9.0, true));
}

TEST_CASE("bessel zero behavior per dimension") {
  // delta = 2: never hits 0.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    BesselParams bp{2.0, 1.0};
    TimeSeries x =
        sample_bessel(RngStream(seed, 21), bp, 20'000, 1e-3, ZeroPolicy::absorb);
    CHECK(*std::min_element(x.values.begin(), x.values.end()) > 0.0);
  }
  // delta = 3 from 0: strictly positive for t > 0.
  {
    BesselParams bp{3.0, 0.0};
    TimeSeries x = sample_bessel(RngStream(3, 22), bp, 10'000, 1e-3,
                                 ZeroPolicy::absorb);
    CHECK(*std::min_element(x.values.begin() + 1, x.values.end()) > 0.0);
  }
  // delta = 1 with absorb: hits 0 within horizon 1e4 for every seed.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    BesselParams bp{1.0, 1.0};
    TimeSeries x = sample_bessel(RngStream(seed, 23), bp, 100'000, 0.1,
                                 ZeroPolicy::absorb);
    CHECK(x.values.back() == 0.0);
  }
  CHECK_THROWS_AS(sample_bessel(RngStream(1, 1), BesselParams{2.5, 1.0}, 10,
                                0.1, ZeroPolicy::reflect),
                  std::invalid_argument);
  CHECK_THROWS_AS(sample_bessel(RngStream(1, 1), BesselParams{-0.5, 1.0}, 10,
                                0.1, ZeroPolicy::reflect),
                  std::invalid_argument);
}

namespace {

// Endpoint drift of the reparameterized log over a fixed
// quadratic-variation span (unbiased per path, unlike horizon stopping).
std::pair<double, double> logqv_span(RngStream stream, double delta,
                                     double x0, double dt, double budget) {
  TimeSeries x;
  x.dt = dt;
  double z = x0 * x0;
  x.values.push_back(x0);
  double qv = 0.0, logx = std::log(x0);
  while (qv < budget) {
    z = besq_step(stream, z, delta, dt);
    double v = std::sqrt(z);
    double l = std::log(v);
    qv += (l - logx) * (l - logx);
    logx = l;
    x.values.push_back(v);
  }
  auto [rep, drift] = log_qv_reparam(x);
  (void)drift;
  auto m = std::min<std::size_t>(rep.values.size() - 1,
                                 static_cast<std::size_t>(budget / rep.dt));
  return {rep.values[m] - rep.values[0], rep.dt * static_cast<double>(m)};
}

}  // namespace

TEST_CASE("log qv reparameterization drift targets") {
  // BES2: drift 0.
  {
    double dy = 0.0, ds = 0.0;
    RngStream base(31, 1);
    for (std::uint64_t r = 0; r < 600; ++r) {
      auto [y, s] = logqv_span(base.split(r), 2.0, 1.0, 1e-3, 1.0);
      dy += y;
      ds += s;
    }
    // 4 standard errors of the pooled endpoint estimator.
    CHECK(std::fabs(dy / ds) < 4.0 / std::sqrt(ds));
  }
  // Exponentiated drifted motion: gamma = 1, a = 1 gives drift 1.
  {
    RngStream base(32, 1);
    double dy = 0.0, ds = 0.0;
    for (std::uint64_t r = 0; r < 100; ++r) {
      RngStream s = base.split(r);
      const std::size_t n = 20'000;
      const double du = 0.01;
      TimeSeries in;
      in.dt = du;
      in.values.resize(n);
      double b = 0.0;
      in.values[0] = 1.0;
      for (std::size_t i = 1; i < n; ++i) {
        b += std::sqrt(2.0 * du) * s.normal() + du;  // B_{2u} + u
        in.values[i] = std::exp(0.5 * b);  // rate gamma/2 with gamma = 1
      }
      auto [rep, drift] = log_qv_reparam(in);
      (void)drift;
      dy += rep.values.back() - rep.values.front();
      ds += rep.duration();
    }
    CHECK(std::fabs(dy / ds - 1.0) < 0.02);
  }
  TimeSeries bad;
  bad.dt = 1.0;
  bad.values = {1.0, -1.0, 1.0};
  CHECK_THROWS_AS(log_qv_reparam(bad), std::domain_error);
}

TEST_CASE("squared Bessel additivity in the dimension") {
  // Sum of independent BESQ^1 and BESQ^2 values at time t matches BESQ^3.
  const double t = 0.7;
  const std::size_t reps = 4000;
  std::vector<double> sum_path, direct;
  RngStream base(33, 1);
  for (std::size_t r = 0; r < reps; ++r) {
    RngStream s = base.split(r);
    double z1 = besq_step(s, 0.25, 1.0, t);
    double z2 = besq_step(s, 0.25, 2.0, t);
    double z3 = besq_step(s, 0.5, 3.0, t);
    sum_path.push_back(z1 + z2);
    direct.push_back(z3);
  }
  KsResult ks = ks_two_sample(sum_path, direct, 0.01);
  CHECK(ks.pass);
}

TEST_CASE("bessel excursion lifetimes, maxima, and the two constructions") {
  // Lifetime tail index 1 - delta/2 = 1/2 at delta = 1.
  {
    std::vector<double> lifetimes;
    RngStream base(34, 1);
    for (std::size_t r = 0; r < 30'000; ++r) {
      Excursion e = sample_bessel_excursion(base.split(r), 1.0, 1.0, 0.05);
      lifetimes.push_back(e.lifetime());
      CHECK(e.values.front() == 0.0);
      CHECK(e.values.back() == 0.0);
    }
    TailEstimate hill = hill_estimator(lifetimes, 3000);
    CHECK(std::fabs(hill.alpha_hat - 0.5) < 0.05);
    // Maxima tail index 2 - delta = 1 (the nontrivial check: maxima come
    // from the bridge construction, not the lifetime draw).
    std::vector<double> maxima;
    for (std::size_t r = 0; r < 30'000; ++r)
      maxima.push_back(
          sample_bessel_excursion(base.split(500'000 + r), 1.0, 1.0, 0.05)
              .max_value());
    TailEstimate mh = hill_estimator(maxima, 3000);
    CHECK(std::fabs(mh.alpha_hat - 1.0) < 0.1);
  }
  // The two constructions agree in law: lifetime given max in a band.
  for (std::uint64_t seed : {71ull, 72ull, 73ull}) {
    std::vector<double> bridge_lifetimes, join_lifetimes;
    RngStream base(seed, 2);
    for (std::size_t r = 0; r < 4000; ++r) {
      Excursion a = sample_bessel_excursion(base.split(2 * r), 1.0, 0.5,
                                            0.02);
      double m = a.max_value();
      if (m >= 2.0 && m <= 4.0) bridge_lifetimes.push_back(a.lifetime());
      Excursion b = sample_bessel_excursion_join(base.split(2 * r + 1), 1.0,
                                                 0.5, 0.02);
      double mb = b.max_value();
      if (mb >= 2.0 && mb <= 4.0) join_lifetimes.push_back(b.lifetime());
    }
    REQUIRE(bridge_lifetimes.size() > 100);
    REQUIRE(join_lifetimes.size() > 100);
    KsResult ks = ks_two_sample(bridge_lifetimes, join_lifetimes, 0.01);
    CHECK(ks.pass);
  }
  CHECK_THROWS_AS(sample_bessel_excursion(RngStream(1, 1), 2.0, 1.0, 0.1),
                  std::invalid_argument);
}

TEST_CASE("stable sampler") {
  {
    StableParams sp{1.5, JumpSign::positive, 1.0};
    StablePath p = sample_stable(RngStream(36, 1), sp, 2'000'000, 1e-3);
    std::vector<double> jumps;
    for (const auto& [t, s] : p.jumps) jumps.push_back(s);
    REQUIRE(jumps.size() > 50'000);
    for (double j : jumps) CHECK(j > 0.0);
    TailEstimate hill = hill_estimator(jumps, 10'000);
    CHECK(std::fabs(hill.alpha_hat - 1.5) < 0.1);
  }
  {
    StableParams sp{1.5, JumpSign::positive, 0.0};
    StablePath p = sample_stable(RngStream(36, 2), sp, 100, 1e-3);
    CHECK(p.jumps.empty());
    CHECK(*std::max_element(p.path.values.begin(), p.path.values.end()) ==
          0.0);
  }
  {
    StableParams sp{1.9, JumpSign::negative, 1.0};
    StablePath p = sample_stable(RngStream(36, 3), sp, 500'000, 1e-3);
    REQUIRE(!p.jumps.empty());
    for (const auto& [t, s] : p.jumps) CHECK(s < 0.0);
  }
  CHECK_THROWS_AS(
      sample_stable(RngStream(1, 1), StableParams{2.5, JumpSign::positive, 1.0},
                    10, 1.0),
      std::invalid_argument);
}

TEST_CASE("stable self-similarity") {
  // c^{-1/alpha} X_{ct} at a fixed time against a fresh sample.
  const double alpha = 1.5;
  const std::size_t c = 4;
  const std::size_t n = 4096;
  const double dt = 1e-3;
  std::vector<double> rescaled, fresh;
  RngStream base(37, 1);
  StableParams sp{alpha, JumpSign::positive, 1.0};
  for (std::size_t r = 0; r < 3000; ++r) {
    StablePath a = sample_stable(base.split(2 * r), sp, n + 1, dt);
    StablePath b = sample_stable(base.split(2 * r + 1), sp, n / c + 1, dt);
    rescaled.push_back(std::pow(static_cast<double>(c), -1.0 / alpha) *
                       a.path.values[n]);
    fresh.push_back(b.path.values[n / c]);
  }
  KsResult ks = ks_two_sample(rescaled, fresh, 0.01);
  CHECK(ks.pass);
}

TEST_CASE("hill estimator oracle values") {
  std::vector<double> pareto;
  const std::size_t n = 10'000;
  for (std::size_t i = 1; i <= n; ++i)
    pareto.push_back(std::pow(static_cast<double>(i) / n, -0.5));
  TailEstimate e = hill_estimator(pareto, 1000);
  CHECK(std::fabs(e.alpha_hat - 2.0) < 0.1);
  CHECK(e.stderr_ == doctest::Approx(e.alpha_hat / std::sqrt(1000.0)));

  std::vector<double> equal(100, 3.0);
  CHECK_THROWS(hill_estimator(equal, 10));
  CHECK_THROWS_AS(hill_estimator(pareto, 5), std::invalid_argument);

  StableParams sp{1.25, JumpSign::positive, 1.0};
  StablePath p = sample_stable(RngStream(38, 1), sp, 1'000'000, 1e-3);
  std::vector<double> jumps;
  for (const auto& [t, s] : p.jumps) jumps.push_back(s);
  TailEstimate h = hill_estimator(jumps, jumps.size() / 10);
  CHECK(std::fabs(h.alpha_hat - 1.25) < 0.1);
}
