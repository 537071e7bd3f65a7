#include "matelab/surface.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matelab/stats.hpp"
#include "matelab/stochastic.hpp"

namespace matelab {

double SurfaceProfile::at_offset(double u) const {
  double idx = static_cast<double>(origin) + u / h1.dt;
  if (idx < 0.0 || idx > static_cast<double>(h1.values.size() - 1))
    throw std::domain_error("SurfaceProfile: offset outside the horizon");
  auto k = static_cast<std::size_t>(idx);
  if (k + 1 >= h1.values.size()) return h1.values.back();
  double f = idx - static_cast<double>(k);
  return (1.0 - f) * h1.values[k] + f * h1.values[k + 1];
}

double SurfaceProfile::max_offset() const {
  return h1.dt * static_cast<double>(h1.values.size() - 1 - origin);
}

double SurfaceProfile::min_offset() const {
  return -h1.dt * static_cast<double>(origin);
}

namespace {

// B_{vt} + a t conditioned positive for all t > 0, via the last zero of an
// unconditioned drifted motion (a > 0), returned on the du grid.
std::vector<double> conditioned_positive(RngStream stream, double a,
                                         double var_rate, double du,
                                         std::size_t want) {
  std::vector<double> path;
  path.push_back(0.0);
  double v = 0.0;
  double sd = std::sqrt(var_rate * du);
  double escape = 30.0 * std::sqrt(var_rate) / a;
  std::size_t last_zero = 0;
  // Run until the path clears the escape level and we hold `want` samples
  // past the last zero crossing.
  for (std::size_t guard = 0; guard < 100'000'000; ++guard) {
    v += a * du + sd * stream.normal();
    path.push_back(v);
    if (v <= 0.0) last_zero = path.size() - 1;
    if (v > escape && path.size() - last_zero > want) break;
  }
  std::vector<double> out(want);
  for (std::size_t k = 0; k < want; ++k) {
    double val = path[last_zero + 1 + k];
    out[k] = val > 0.0 ? val : 0.0;
  }
  return out;
}

// Zero-drift case: Brownian motion conditioned positive is a dimension-3
// Bessel process, sampled exactly on the rescaled clock.
std::vector<double> conditioned_positive_critical(RngStream stream,
                                                  double var_rate, double du,
                                                  std::size_t want) {
  std::vector<double> out(want);
  double z = 0.0;
  for (std::size_t k = 0; k < want; ++k) {
    z = besq_step(stream, z, 3.0, var_rate * du);
    out[k] = std::sqrt(z);
  }
  return out;
}

}  // namespace

SurfaceProfile sample_surface_profile(RngStream stream, SurfaceKind kind,
                                      double alpha, const GammaContext& ctx,
                                      double horizon, double du) {
  if (kind != SurfaceKind::wedge && kind != SurfaceKind::cone)
    throw std::invalid_argument("sample_surface_profile: wedge or cone");
  if (kind == SurfaceKind::wedge && alpha > ctx.Q)
    throw std::invalid_argument("sample_surface_profile: wedge needs alpha <= Q");
  if (kind == SurfaceKind::cone && !(alpha < ctx.Q))
    throw std::invalid_argument("sample_surface_profile: cone needs alpha < Q");
  if (horizon <= 0.0 || du <= 0.0)
    throw std::invalid_argument("sample_surface_profile: bad grid");

  double var_rate = kind == SurfaceKind::wedge ? 2.0 : 1.0;
  double drift = alpha - ctx.Q;
  auto steps = static_cast<std::size_t>(horizon / du);
  if (steps < 2) throw std::invalid_argument("sample_surface_profile: horizon");

  std::vector<double> neg =
      drift == 0.0
          ? conditioned_positive_critical(stream.split(1), var_rate, du, steps)
          : conditioned_positive(stream.split(1), -drift, var_rate, du, steps);

  SurfaceProfile p;
  p.kind = kind;
  p.param = kind == SurfaceKind::wedge ? Parameterization::strip
                                       : Parameterization::cylinder;
  p.alpha = alpha;
  p.weight = kind == SurfaceKind::wedge
                 ? ctx.gamma * (0.5 * ctx.gamma + ctx.Q - alpha)
                 : 2.0 * ctx.gamma * (ctx.Q - alpha);
  p.h1.dt = du;
  p.origin = steps;
  p.h1.values.resize(2 * steps + 1);
  // Negative side: the conditioned motion read outward from the origin.
  for (std::size_t k = 0; k < steps; ++k)
    p.h1.values[steps - 1 - k] = neg[k];
  p.h1.values[steps] = 0.0;
  RngStream pos_stream = stream.split(2);
  double sd = std::sqrt(var_rate * du);
  double v = 0.0;
  for (std::size_t k = 1; k <= steps; ++k) {
    v += drift * du + sd * pos_stream.normal();
    p.h1.values[steps + k] = v;
  }
  return p;
}

namespace {

// Resamples scale * log(interior of excursion) to quadratic variation
// qv_per_step per step.
TimeSeries bead_profile(const Excursion& e, double scale, double qv_per_step) {
  TimeSeries logs;
  logs.dt = e.dt;
  for (std::size_t i = 1; i + 1 < e.values.size(); ++i)
    logs.values.push_back(e.values[i]);
  if (logs.values.size() < 3)
    throw std::domain_error("bead_profile: excursion too short");
  auto [reparam, drift] = log_qv_reparam(logs);
  (void)drift;
  // log_qv_reparam emits qv 2*e.dt per step of log e; rescale amplitudes by
  // `scale` (qv scales by scale^2) and regrid to qv_per_step.
  double step_qv = 2.0 * e.dt * scale * scale;
  TimeSeries out;
  out.dt = 1.0;
  double total = step_qv * static_cast<double>(reparam.values.size() - 1);
  auto m = static_cast<std::size_t>(total / qv_per_step);
  if (m < 2) throw std::domain_error("bead_profile: bead too small");
  out.values.resize(m + 1);
  for (std::size_t k = 0; k <= m; ++k) {
    double idx = qv_per_step * static_cast<double>(k) / step_qv;
    auto i = static_cast<std::size_t>(idx);
    if (i + 1 >= reparam.values.size()) {
      out.values[k] = scale * reparam.values.back();
      continue;
    }
    double f = idx - static_cast<double>(i);
    out.values[k] =
        scale * ((1.0 - f) * reparam.values[i] + f * reparam.values[i + 1]);
  }
  return out;
}

}  // namespace

std::vector<SurfaceProfile> sample_thin_wedge(RngStream stream, double weight,
                                              const GammaContext& ctx,
                                              std::size_t bead_budget,
                                              double min_lifetime, double du) {
  double g = ctx.gamma;
  if (!(weight > 0.0 && weight < 0.5 * g * g))
    throw std::invalid_argument(
        "sample_thin_wedge: weight must lie in (0, gamma^2/2)");
  double delta = 1.0 + 2.0 * weight / (g * g);
  double alpha = 0.5 * g + ctx.Q - weight / g;
  std::vector<SurfaceProfile> beads;
  for (std::size_t b = 0; b < bead_budget; ++b) {
    Excursion e = sample_bessel_excursion(stream.split(b), delta, min_lifetime,
                                          min_lifetime / 64.0);
    SurfaceProfile p;
    p.kind = SurfaceKind::thin_wedge_bead;
    p.param = Parameterization::strip;
    p.alpha = alpha;
    p.weight = weight;
    p.h1 = bead_profile(e, 2.0 / g, 2.0 * du);
    p.h1.dt = du;
    p.origin = 0;
    beads.push_back(std::move(p));
  }
  return beads;
}

double disk_bessel_dimension(const GammaContext& ctx) {
  return 3.0 - 4.0 / ctx.kappa;
}

double sphere_bessel_dimension(const GammaContext& ctx) {
  return 4.0 - 8.0 / ctx.kappa;
}

double area_proxy(const SurfaceProfile& p, const GammaContext& ctx) {
  double s = 0.0;
  for (double v : p.h1.values) s += std::exp(ctx.gamma * v);
  return s * p.h1.dt;
}

double boundary_proxy(const SurfaceProfile& p, const GammaContext& ctx) {
  double s = 0.0;
  for (double v : p.h1.values) s += std::exp(0.5 * ctx.gamma * v);
  return 2.0 * s * p.h1.dt;
}

DiskSphereSample sample_disk_or_sphere(RngStream stream,
                                       const DiskSphereSpec& spec,
                                       const GammaContext& ctx, double du) {
  if (spec.kind != SurfaceKind::disk && spec.kind != SurfaceKind::sphere)
    throw std::invalid_argument("sample_disk_or_sphere: disk or sphere");
  double delta = spec.kind == SurfaceKind::disk ? disk_bessel_dimension(ctx)
                                                : sphere_bessel_dimension(ctx);
  double b = spec.b != 0.0 ? spec.b : 2.0 / ctx.gamma;
  double qv = spec.kind == SurfaceKind::sphere ? du : 2.0 * du;

  DiskSphereSample out;
  out.bessel_dimension = delta;
  for (std::size_t attempt = 1; attempt <= spec.budget; ++attempt) {
    Excursion e =
        sample_bessel_excursion(stream.split(attempt), delta,
                                spec.min_lifetime, spec.min_lifetime / 64.0);
    SurfaceProfile p;
    p.kind = spec.kind;
    p.param = spec.kind == SurfaceKind::sphere ? Parameterization::cylinder
                                               : Parameterization::strip;
    p.alpha = 0.0;
    p.weight = 0.0;
    try {
      p.h1 = bead_profile(e, b, qv);
    } catch (const std::domain_error&) {
      continue;
    }
    p.h1.dt = du;
    p.origin = 0;
    double area = area_proxy(p, ctx);
    double boundary = boundary_proxy(p, ctx);
    bool ok = true;
    if (spec.conditioning == Conditioning::unit_area)
      ok = std::fabs(area - 1.0) <= spec.window;
    else if (spec.conditioning == Conditioning::unit_boundary)
      ok = std::fabs(boundary - 1.0) <= spec.window;
    if (ok) {
      out.profile = std::move(p);
      out.area_proxy = area;
      out.boundary_proxy = boundary;
      out.attempts = attempt;
      return out;
    }
  }
  throw std::runtime_error(
      "sample_disk_or_sphere: rejection budget exhausted (window too "
      "narrow for the requested conditioning)");
}

SurfaceProfile rescale_and_canonicalize(const SurfaceProfile& p, double C,
                                        const GammaContext& ctx) {
  SurfaceProfile out = p;
  double shift = C / ctx.gamma;
  for (double& v : out.h1.values) v += shift;
  // New origin: first index at which the profile is <= 0.
  std::size_t k0 = out.h1.values.size();
  for (std::size_t k = 0; k < out.h1.values.size(); ++k)
    if (out.h1.values[k] <= 0.0 && k >= (C >= 0.0 ? out.origin : 0)) {
      k0 = k;
      break;
    }
  if (k0 == out.h1.values.size())
    throw std::domain_error(
        "rescale_and_canonicalize: profile never returns to 0 within the "
        "horizon");
  out.origin = k0;
  return out;
}

ScaleInvarianceReport scale_invariance_test(RngStream stream, SurfaceKind kind,
                                            double alpha,
                                            const GammaContext& ctx, double C,
                                            std::size_t trials,
                                            double alpha_level) {
  double drift = alpha - ctx.Q;
  if (!(drift < 0.0))
    throw std::invalid_argument(
        "scale_invariance_test: needs alpha < Q so the shifted profile "
        "returns to 0");
  // Horizon long enough for the shifted profile to cross 0 again.
  double horizon = 8.0 + 3.0 * C / (ctx.gamma * -drift);
  double du = 0.01;
  ScaleInvarianceReport rep;
  rep.offsets = {0.5, 1.0, 2.0};
  std::vector<std::vector<double>> fresh(rep.offsets.size()),
      shifted(rep.offsets.size());
  for (std::size_t t = 0; t < trials; ++t) {
    SurfaceProfile a = sample_surface_profile(stream.split(2 * t), kind, alpha,
                                              ctx, horizon, du);
    SurfaceProfile b = sample_surface_profile(stream.split(2 * t + 1), kind,
                                              alpha, ctx, horizon, du);
    SurfaceProfile bc = rescale_and_canonicalize(b, C, ctx);
    for (std::size_t k = 0; k < rep.offsets.size(); ++k) {
      fresh[k].push_back(a.at_offset(rep.offsets[k]));
      shifted[k].push_back(bc.at_offset(rep.offsets[k]));
    }
  }
  rep.pass = true;
  for (std::size_t k = 0; k < rep.offsets.size(); ++k) {
    KsResult ks = ks_two_sample(fresh[k], shifted[k], alpha_level);
    rep.ks_statistics.push_back(ks.statistic);
    rep.ks_criticals.push_back(ks.critical_value);
    rep.pass = rep.pass && ks.pass;
  }
  return rep;
}

}  // namespace matelab
