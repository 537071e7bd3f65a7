#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "matelab/exponents.hpp"

using namespace matelab;

TEST_CASE("gamma context identities") {
  GammaContext c = GammaContext::from_gamma2(8.0 / 3.0);
  CHECK(c.kappa_prime == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(2.0 * M_PI * c.chi ==
        doctest::Approx(4.0 * (c.lambda - c.lambda_prime)).epsilon(1e-14));
  CHECK_THROWS_AS(GammaContext::from_gamma(2.0), std::invalid_argument);
  CHECK_THROWS_AS(GammaContext::from_gamma(0.0), std::invalid_argument);
}

TEST_CASE("wedge parameterizations and special values") {
  for (double g : {0.8, 1.0, std::sqrt(2.0), 1.6}) {
    GammaContext c = GammaContext::from_gamma(g);
    CHECK(wedge_from(WedgeField::alpha, g, c).weight ==
          doctest::Approx(2.0).epsilon(1e-13));
    CHECK(wedge_from(WedgeField::alpha, -2.0 / g + g, c).weight ==
          doctest::Approx(4.0).epsilon(1e-13));
    // Thin window: W in (0, gamma^2/2) iff delta in (1,2).
    WedgeParams thin = wedge_from(WedgeField::weight, 0.25 * g * g, c);
    CHECK(thin.thin());
    CHECK(thin.delta > 1.0);
    CHECK(thin.delta < 2.0);
    CHECK(!wedge_from(WedgeField::weight, 2.0, c).thin());
  }
  GammaContext c = GammaContext::from_gamma(1.0);
  CHECK_THROWS_AS(wedge_from(WedgeField::weight, -1.0, c),
                  std::invalid_argument);
  CHECK_THROWS_AS(wedge_from(WedgeField::weight, 0.0, c),
                  std::invalid_argument);
}

TEST_CASE("cone parameterizations") {
  for (double g : {0.8, 1.2, std::sqrt(2.0)}) {
    GammaContext c = GammaContext::from_gamma(g);
    CHECK(cone_from(WedgeField::alpha, g, c).weight ==
          doctest::Approx(4.0 - g * g).epsilon(1e-13));
    CHECK(cone_from(WedgeField::weight, 2.0 * g * c.chi, c).theta ==
          doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  }
}

TEST_CASE("zip and cut") {
  GammaContext c = GammaContext::from_gamma(1.3);
  WedgeParams w = wedge_from(WedgeField::weight, 4.0, c);
  ZipResult z = zip_wedge_to_cone(w, c);
  CHECK(z.cone.alpha == doctest::Approx(0.5 * 1.3).epsilon(1e-13));
  CHECK(z.rho_interface == doctest::Approx(2.0).epsilon(1e-13));
  WedgeParams back = cut_cone_to_wedge(z.cone, c);
  CHECK(back.alpha == doctest::Approx(w.alpha).epsilon(1e-13));
  CHECK(back.delta == doctest::Approx(w.delta).epsilon(1e-13));
}

TEST_CASE("welding") {
  GammaContext c = GammaContext::from_gamma(std::sqrt(3.0));
  WeldResult r = weld({2.0, 2.0}, c);
  CHECK(r.total_weight == doctest::Approx(4.0));
  CHECK(r.interface_rhos[0] == doctest::Approx(0.0));
  WeldResult r4 = weld({2.0 - 1.5, 2.0, 2.0 - 1.5, 2.0}, c);
  CHECK(r4.total_weight == doctest::Approx(8.0 - 3.0));
  CHECK(r4.angle_gaps.size() == 4);
  CHECK(r4.angle_gaps[1] == doctest::Approx(2.0 * c.lambda / c.chi));
  CHECK_THROWS_AS(weld({2.0, -1.0}, c), std::invalid_argument);
  CHECK_THROWS_AS(weld({}, c), std::invalid_argument);
}

TEST_CASE("kpz closed forms") {
  GammaContext c = GammaContext::from_gamma2(8.0 / 3.0);
  CHECK(kpz(0.25, c) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(kpz(1.0, c) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(kpz_inverse(2.0, c) == doctest::Approx(1.5).epsilon(1e-14));
  for (double g2 : {0.5, 1.0, 2.0, 3.0}) {
    GammaContext cg = GammaContext::from_gamma2(g2);
    CHECK(kpz(1.0, cg) == doctest::Approx(1.0).epsilon(1e-14));
    for (double d : {0.1, 0.7, 1.3})
      CHECK(kpz_inverse(kpz(d, cg), cg) == doctest::Approx(d).epsilon(1e-12));
  }
  CHECK_THROWS_AS(kpz_inverse(-0.5, c), std::invalid_argument);
}

TEST_CASE("fk dictionary values") {
  FkParams f1 = fk_dictionary(1.0);
  CHECK(f1.kappa_prime == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(f1.p == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(f1.var_ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(f1.cov_rate == doctest::Approx(0.5).epsilon(1e-12));
  FkParams f2 = fk_dictionary(2.0);
  CHECK(f2.kappa_prime == doctest::Approx(16.0 / 3.0).epsilon(1e-12));
  CHECK(f2.p == doctest::Approx(std::sqrt(2.0) - 1.0).epsilon(1e-12));
  FkParams f39 = fk_dictionary(3.999999);
  CHECK(f39.p == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(f39.var_ratio == doctest::Approx(0.0).epsilon(1e-3));
  CHECK_THROWS_AS(fk_dictionary(0.0), std::invalid_argument);
  CHECK_THROWS_AS(fk_dictionary(4.0), std::invalid_argument);
}

TEST_CASE("exponent catalog") {
  GammaContext c6 = GammaContext::from_kappa_prime(6.0);
  auto entries = exponent_catalog(c6, 3);
  bool saw_cut = false, saw_double = false, saw_brownian = false;
  for (const auto& e : entries) {
    // Every entry satisfies the invariants.
    CHECK(e.x == doctest::Approx(kpz(e.Delta, c6)).epsilon(1e-12));
    CHECK(e.x == doctest::Approx(e.Delta * e.Delta_dual).epsilon(1e-12));
    if (e.name == "cut_points") {
      saw_cut = true;
      CHECK(e.dim == doctest::Approx(0.75).epsilon(1e-12));
    }
    if (e.name == "double_points") {
      saw_double = true;
      CHECK(e.dim == doctest::Approx(0.75).epsilon(1e-12));
      CHECK(e.Delta == doctest::Approx(0.75).epsilon(1e-12));
    }
    if (e.name == "brownian_intersection" && e.n == 1) {
      saw_brownian = true;
      CHECK(e.x == doctest::Approx(0.125).epsilon(1e-12));
    }
  }
  CHECK(saw_cut);
  CHECK(saw_double);
  CHECK(saw_brownian);

  // Outside (4,8) the kappa'-only families are not emitted.
  GammaContext c16 = GammaContext::from_gamma(1.0);  // kappa' = 16
  for (const auto& e : exponent_catalog(c16, 2)) {
    CHECK(e.name != "cut_points");
    CHECK(e.name != "double_points");
    CHECK(e.name != "brownian_intersection");
  }

  // Boundary-intersection duality value at rho = kappa - 4.
  GammaContext c = GammaContext::from_gamma2(3.0);
  double rho = c.kappa - 4.0;
  double dim = (4.0 + rho) * (c.kappa - 2.0 * (2.0 + rho)) / (2.0 * c.kappa);
  CHECK(dim == doctest::Approx(2.0 - 8.0 / c.kappa_prime).epsilon(1e-12));
}
