#include "matelab/exponents.hpp"

#include <cmath>
#include <stdexcept>

namespace matelab {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_identity(double a, double b, const char* what) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  if (std::fabs(a - b) > 1e-9 * scale)
    throw std::logic_error(std::string("exponents: identity violated: ") +
                           what);
}

}  // namespace

bool WedgeParams::thin() const { return delta > 1.0 && delta < 2.0; }

WedgeParams wedge_from(WedgeField field, double value,
                       const GammaContext& ctx) {
  double g = ctx.gamma;
  double alpha = 0.0;
  switch (field) {
    case WedgeField::alpha: alpha = value; break;
    case WedgeField::weight: alpha = 0.5 * g + ctx.Q - value / g; break;
    case WedgeField::theta: alpha = 0.5 * g + ctx.Q - ctx.chi * value / M_PI; break;
    case WedgeField::delta: alpha = ctx.Q + 0.5 * g * (2.0 - value); break;
    case WedgeField::a: alpha = ctx.Q - value; break;
    case WedgeField::Delta: alpha = g * (1.0 - value); break;
  }
  WedgeParams w;
  w.alpha = alpha;
  w.weight = g * (0.5 * g + ctx.Q - alpha);
  w.theta = M_PI / ctx.chi * (0.5 * g + ctx.Q - alpha);
  w.delta = 2.0 + 2.0 / g * (ctx.Q - alpha);
  w.a = ctx.Q - alpha;
  w.Delta = 1.0 - alpha / g;
  require(w.weight > 0.0, "wedge_from: weight must be positive");
  return w;
}

ConeParams cone_from(WedgeField field, double value, const GammaContext& ctx) {
  double g = ctx.gamma;
  double alpha = 0.0;
  switch (field) {
    case WedgeField::alpha: alpha = value; break;
    case WedgeField::weight: alpha = ctx.Q - value / (2.0 * g); break;
    case WedgeField::theta: alpha = ctx.Q - ctx.chi * value / (2.0 * M_PI); break;
    case WedgeField::delta: alpha = ctx.Q - 0.25 * g * (value - 2.0); break;
    case WedgeField::a: alpha = ctx.Q - value; break;
    case WedgeField::Delta: alpha = g * (1.0 - value); break;
  }
  ConeParams c;
  c.alpha = alpha;
  c.weight = 2.0 * g * (ctx.Q - alpha);
  c.theta = 2.0 * M_PI / ctx.chi * (ctx.Q - alpha);
  c.delta = 2.0 + 4.0 / g * (ctx.Q - alpha);
  c.a = ctx.Q - alpha;
  c.Delta = 1.0 - alpha / g;
  require(c.weight > 0.0, "cone_from: weight must be positive (alpha < Q)");
  return c;
}

ZipResult zip_wedge_to_cone(const WedgeParams& wedge,
                            const GammaContext& ctx) {
  require(wedge.weight > 0.0, "zip_wedge_to_cone: weight must be positive");
  ZipResult r;
  r.cone = cone_from(WedgeField::weight, wedge.weight, ctx);
  r.rho_interface = wedge.weight - 2.0;
  double g = ctx.gamma;
  check_identity(r.cone.alpha, 0.5 * wedge.alpha + 1.0 / g, "zip alpha");
  check_identity(r.rho_interface, 2.0 + g * g - 2.0 * r.cone.alpha * g,
                 "zip rho");
  check_identity(r.cone.delta, wedge.delta + 1.0, "zip delta");
  check_identity(r.cone.a, 0.25 * g + 0.5 * wedge.a, "zip strip drift");
  check_identity(r.cone.theta, wedge.theta, "zip angle");
  return r;
}

WedgeParams cut_cone_to_wedge(const ConeParams& cone,
                              const GammaContext& ctx) {
  return wedge_from(WedgeField::weight, cone.weight, ctx);
}

WeldResult weld(const std::vector<double>& weights, const GammaContext& ctx) {
  require(!weights.empty(), "weld: need at least one weight");
  WeldResult r;
  for (double w : weights) {
    require(w > 0.0, "weld: weights must be positive");
    r.total_weight += w;
    r.angle_gaps.push_back(w * ctx.lambda / ctx.chi);
  }
  if (weights.size() == 2)
    r.interface_rhos = {weights[0] - 2.0, weights[1] - 2.0};
  return r;
}

double kpz(double Delta, const GammaContext& ctx) {
  double A = 0.25 * ctx.kappa;
  return A * Delta * Delta + (1.0 - A) * Delta;
}

double kpz_inverse(double x, const GammaContext& ctx) {
  require(x >= 0.0, "kpz_inverse: x must be nonnegative");
  double A = 0.25 * ctx.kappa;
  double disc = (1.0 - A) * (1.0 - A) + 4.0 * A * x;
  if (disc < 0.0) throw std::logic_error("kpz_inverse: negative discriminant");
  return (-(1.0 - A) + std::sqrt(disc)) / (2.0 * A);
}

double dual_exponent(double Delta, const GammaContext& ctx) {
  double A = 0.25 * ctx.kappa;
  return 1.0 - A + A * Delta;
}

FkParams fk_dictionary(double q) {
  require(q > 0.0 && q < 4.0, "fk_dictionary: q must be in (0,4)");
  FkParams f;
  f.q = q;
  f.kappa_prime = 8.0 * M_PI / (2.0 * M_PI - std::acos(0.5 * (q - 2.0)));
  f.theta_kappa = 4.0 * M_PI / f.kappa_prime;  // pi * kappa / 4
  double c = std::cos(f.theta_kappa);
  f.p = -c / (1.0 - c);
  double p_from_q = std::sqrt(q) / (2.0 + std::sqrt(q));
  check_identity(f.p, p_from_q, "fk p");
  f.var_ratio = 1.0 - 2.0 * f.p;
  f.cov_rate = -c;
  return f;
}

namespace {

ExponentEntry make_entry(const std::string& name, Locus locus, int n,
                         double rho, double Delta, double x,
                         const GammaContext& ctx) {
  ExponentEntry e;
  e.name = name;
  e.locus = locus;
  e.n = n;
  e.rho = rho;
  e.Delta = Delta;
  e.Delta_dual = dual_exponent(Delta, ctx);
  e.x = x;
  check_identity(x, kpz(Delta, ctx), "catalog x = KPZ(Delta)");
  check_identity(x, Delta * e.Delta_dual, "catalog x = Delta*Delta_dual");
  e.dim = locus == Locus::bulk ? 2.0 - 2.0 * x : 1.0 - x;
  return e;
}

}  // namespace

std::vector<ExponentEntry> exponent_catalog(const GammaContext& ctx,
                                            int n_max) {
  require(n_max >= 1, "exponent_catalog: n_max >= 1");
  std::vector<ExponentEntry> out;
  double k = ctx.kappa;
  double kp = ctx.kappa_prime;

  for (int n = 1; n <= n_max; ++n) {
    // n mutually avoiding simple paths at the boundary; the interface count
    // of the same star is n - 1, stored as its own row to keep the two
    // conventions separate.
    out.push_back(make_entry("boundary_star_paths", Locus::boundary, n, 0.0,
                             2.0 * n / k,
                             n * (2.0 * n + 4.0 - k) / (2.0 * k), ctx));
    double di = 2.0 * (n - 1) / k;
    out.push_back(make_entry("boundary_star_interfaces", Locus::boundary, n,
                             0.0, di, kpz(di, ctx), ctx));
    double db = (2.0 * n + k - 4.0) / (2.0 * k);
    out.push_back(make_entry("bulk_star", Locus::bulk, n, 0.0, db,
                             (4.0 * n * n - (4.0 - k) * (4.0 - k)) /
                                 (16.0 * k),
                             ctx));
  }

  if (kp > 4.0 && kp < 8.0) {
    {
      ExponentEntry e = make_entry("cut_points", Locus::bulk, 2, 0.0,
                                   kp / 8.0, 3.0 * kp / 16.0 - 0.5, ctx);
      check_identity(e.dim, 3.0 - 3.0 * kp / 8.0, "cut point dimension");
      out.push_back(e);
    }
    {
      ExponentEntry e =
          make_entry("double_points", Locus::bulk, 2, 0.0, 1.5 - kp / 8.0,
                     0.5 + 3.0 / kp - kp / 16.0, ctx);
      check_identity(e.dim,
                     2.0 - (12.0 - kp) * (4.0 + kp) / (8.0 * kp),
                     "double point dimension");
      out.push_back(e);
    }
    for (int n = 1; n <= n_max; ++n) {
      double dn = 0.5 + 0.25 * n - kp / 8.0;
      out.push_back(make_entry("multiple_points_bulk", Locus::bulk, n, 0.0,
                               dn, kpz(dn, ctx), ctx));
      double dbn = 1.0 + 0.5 * n - kp / 4.0;
      ExponentEntry e = make_entry("multiple_points_boundary",
                                   Locus::boundary, n, 0.0, dbn,
                                   kpz(dbn, ctx), ctx);
      check_identity(e.Delta_dual, 2.0 * n / kp,
                     "boundary multiple-point dual exponent");
      out.push_back(e);
    }
  }

  // rho-indexed families, on a half-integer grid inside each window.
  for (double rho = -1.5; rho < 0.5 * k - 2.0 - 1e-12; rho += 0.5) {
    out.push_back(make_entry(
        "slekr_boundary_intersection", Locus::boundary, 1, rho,
        2.0 * (2.0 + rho) / k,
        (2.0 + rho) * (2.0 * (4.0 + rho) - k) / (2.0 * k), ctx));
    out.push_back(make_entry(
        "gff_flow_line_intersection", Locus::bulk, 2, rho,
        (4.0 + k + 2.0 * rho) / (2.0 * k),
        (rho + 0.5 * k + 2.0) * (rho - 0.5 * k + 6.0) / (4.0 * k), ctx));
  }

  if (std::fabs(k - 8.0 / 3.0) < 1e-9) {
    for (int n = 1; n <= n_max; ++n)
      out.push_back(make_entry("brownian_intersection", Locus::bulk, n, 0.0,
                               0.5 * (n - 0.5),
                               (4.0 * n * n - 1.0) / 24.0, ctx));
  }
  return out;
}

}  // namespace matelab
