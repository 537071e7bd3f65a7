#include "matelab/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matelab/special.hpp"
#include "matelab/stats.hpp"

namespace matelab {

TimeSeries sample_bm(RngStream stream, std::size_t n, double dt, double drift,
                     double var_rate) {
  if (n < 2) throw std::invalid_argument("sample_bm: n must be >= 2");
  if (dt <= 0.0) throw std::invalid_argument("sample_bm: dt must be positive");
  if (var_rate < 0.0)
    throw std::invalid_argument("sample_bm: var_rate must be nonnegative");
  TimeSeries s;
  s.dt = dt;
  s.meta = "bm";
  s.values.resize(n);
  s.values[0] = 0.0;
  double sd = std::sqrt(var_rate * dt);
  double mu = drift * dt;
  for (std::size_t i = 1; i < n; ++i) {
    double inc = mu;
    if (sd > 0.0) inc += sd * stream.normal();
    s.values[i] = s.values[i - 1] + inc;
  }
  return s;
}

CorrelatedPair sample_correlated_bm(RngStream stream, std::size_t n, double dt,
                                    double kappa_prime, bool extrapolate) {
  if (n < 2) throw std::invalid_argument("sample_correlated_bm: n >= 2");
  if (dt <= 0.0) throw std::invalid_argument("sample_correlated_bm: dt > 0");
  if (kappa_prime <= 4.0)
    throw std::invalid_argument(
        "sample_correlated_bm: kappa_prime must exceed 4");
  if (kappa_prime > 8.0 && !extrapolate)
    throw std::invalid_argument(
        "sample_correlated_bm: kappa_prime > 8 needs the extrapolate flag");
  double r = -std::cos(4.0 * M_PI / kappa_prime);
  double c = std::sqrt(std::max(0.0, 1.0 - r * r));
  RngStream s1 = stream.split(1);
  RngStream s2 = stream.split(2);
  CorrelatedPair p;
  p.kappa_prime = kappa_prime;
  p.L.dt = p.R.dt = dt;
  p.L.meta = "L";
  p.R.meta = "R";
  p.L.values.resize(n);
  p.R.values.resize(n);
  p.L.values[0] = p.R.values[0] = 0.0;
  double sq = std::sqrt(dt);
  for (std::size_t i = 1; i < n; ++i) {
    double g1 = s1.normal();
    double g2 = s2.normal();
    p.L.values[i] = p.L.values[i - 1] + sq * g1;
    p.R.values[i] = p.R.values[i - 1] + sq * (r * g1 + c * g2);
  }
  return p;
}

double besq_step(RngStream& stream, double z, double delta, double dt) {
  // Far from 0 the transition is Gaussian to double precision; this also
  // keeps the Poisson mean inside the integer range.
  if (z > 1e12 * dt) {
    double mean = z + delta * dt;
    double sd = std::sqrt(4.0 * z * dt + 2.0 * delta * dt * dt);
    return std::max(0.0, mean + sd * stream.normal());
  }
  std::uint64_t j = stream.poisson(z / (2.0 * dt));
  double dof = delta + 2.0 * static_cast<double>(j);
  if (dof <= 0.0) return 0.0;
  return stream.gamma(0.5 * dof, 2.0 * dt);
}

TimeSeries sample_bessel(RngStream stream, const BesselParams& params,
                         std::size_t n, double dt, ZeroPolicy policy) {
  if (n < 2) throw std::invalid_argument("sample_bessel: n >= 2");
  if (dt <= 0.0) throw std::invalid_argument("sample_bessel: dt > 0");
  if (params.x0 < 0.0) throw std::invalid_argument("sample_bessel: x0 >= 0");
  if (!std::isfinite(params.delta))
    throw std::invalid_argument("sample_bessel: delta must be finite");
  double delta = params.delta;
  if (policy == ZeroPolicy::reflect && (delta <= 0.0 || delta >= 2.0))
    throw std::invalid_argument(
        "sample_bessel: reflect only admissible for delta in (0,2)");

  TimeSeries s;
  s.dt = dt;
  s.meta = "bessel";
  s.values.resize(n);
  s.values[0] = params.x0;
  double z = params.x0 * params.x0;
  bool absorbed = false;
  for (std::size_t i = 1; i < n; ++i) {
    if (absorbed) {
      s.values[i] = 0.0;
      continue;
    }
    if (delta <= 0.0) {
      // Euler step on Z; 0 is absorbing in this regime.
      double zn = z + 2.0 * std::sqrt(std::max(z, 0.0)) * std::sqrt(dt) *
                          stream.normal() +
                  delta * dt;
      if (zn <= 0.0) {
        absorbed = true;
        s.values[i] = 0.0;
        continue;
      }
      z = zn;
    } else {
      // Hitting 0 within the step is negligible beyond ~40 diffusion scales.
      if (policy == ZeroPolicy::absorb && delta < 2.0 && z > 0.0 &&
          z < 80.0 * dt) {
        double p_hit = gamma_q(1.0 - 0.5 * delta, z / (2.0 * dt));
        if (stream.uniform() < p_hit) {
          absorbed = true;
          s.values[i] = 0.0;
          continue;
        }
      }
      z = besq_step(stream, z, delta, dt);
      if (policy == ZeroPolicy::absorb && z == 0.0) absorbed = true;
    }
    s.values[i] = std::sqrt(z);
  }
  return s;
}

std::pair<TimeSeries, double> log_qv_reparam(const TimeSeries& series) {
  if (series.values.size() < 3)
    throw std::domain_error("log_qv_reparam: series too short");
  for (double v : series.values)
    if (v <= 0.0)
      throw std::domain_error("log_qv_reparam: nonpositive value");
  std::size_t n = series.values.size();
  std::vector<double> y(n), qv(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = std::log(series.values[i]);
  qv[0] = 0.0;
  for (std::size_t i = 1; i < n; ++i) {
    double d = y[i] - y[i - 1];
    qv[i] = qv[i - 1] + d * d;
  }
  double ds = 2.0 * series.dt;
  auto m = static_cast<std::size_t>(qv[n - 1] / ds);
  if (m < 3) throw std::domain_error("log_qv_reparam: too little variation");

  TimeSeries out;
  out.dt = ds;
  out.meta = "log_qv";
  out.values.resize(m + 1);
  std::size_t k = 0;
  for (std::size_t i = 0; i <= m; ++i) {
    double target = ds * static_cast<double>(i);
    while (k + 1 < n && qv[k + 1] < target) ++k;
    if (k + 1 >= n) {
      out.values[i] = y[n - 1];
      continue;
    }
    double span = qv[k + 1] - qv[k];
    double w = span > 0.0 ? (target - qv[k]) / span : 0.0;
    out.values[i] = y[k] + w * (y[k + 1] - y[k]);
  }

  std::vector<double> sgrid(out.values.size());
  for (std::size_t i = 0; i < sgrid.size(); ++i)
    sgrid[i] = ds * static_cast<double>(i);
  double drift = least_squares(sgrid, out.values).slope;
  return {std::move(out), drift};
}

Excursion sample_bessel_excursion(RngStream stream, double delta,
                                  double min_lifetime, double dt) {
  if (delta >= 2.0)
    throw std::invalid_argument("sample_bessel_excursion: delta < 2 required");
  if (min_lifetime <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("sample_bessel_excursion: bad parameters");
  // Lifetime from the truncated power law t^(delta/2 - 2) on [m, inf).
  double tail_index = 1.0 - 0.5 * delta;
  double lifetime = min_lifetime *
                    std::pow(stream.uniform(), -1.0 / tail_index);
  // Transitions are exact at any step size, so long excursions coarsen
  // instead of blowing up the grid.
  auto steps = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::llround(lifetime / dt)), 4, 4096);
  double h = lifetime / static_cast<double>(steps);
  double dprime = 4.0 - delta;

  // Bridge from 0 to 0 over [0, T] via time inversion of an unconditioned
  // squared-Bessel process W started from 0:
  //   Z_t = ((T-t)^2 / T) * W_{t/(T-t)}.
  Excursion e;
  e.dt = h;
  e.delta = delta;
  e.values.resize(steps + 1);
  e.values[0] = 0.0;
  e.values[steps] = 0.0;
  double w = 0.0;
  double u_prev = 0.0;
  for (std::size_t k = 1; k < steps; ++k) {
    double t = h * static_cast<double>(k);
    double u = t / (lifetime - t);
    w = besq_step(stream, w, dprime, u - u_prev);
    u_prev = u;
    double z = (lifetime - t) * (lifetime - t) / lifetime * w;
    e.values[k] = std::sqrt(z);
  }
  return e;
}

Excursion sample_bessel_excursion_join(RngStream stream, double delta,
                                       double min_max, double dt) {
  if (delta >= 2.0)
    throw std::invalid_argument("sample_bessel_excursion_join: delta < 2");
  if (min_max <= 0.0 || dt <= 0.0)
    throw std::invalid_argument("sample_bessel_excursion_join: bad parameters");
  // Maximum from the truncated power law m^(delta-3) on [min_max, inf).
  double m = min_max * std::pow(stream.uniform(), -1.0 / (2.0 - delta));
  double dprime = 4.0 - delta;
  // Keep the expected passage grid bounded for the heavy-tailed maxima.
  double h = std::max(dt, m * m / 8192.0);

  auto first_passage = [&](RngStream s) {
    std::vector<double> path;
    path.push_back(0.0);
    double z = 0.0;
    while (true) {
      z = besq_step(s, z, dprime, h);
      double x = std::sqrt(z);
      if (x >= m) {
        path.push_back(m);
        break;
      }
      path.push_back(x);
      if (path.size() > 50'000'000)
        throw std::runtime_error("sample_bessel_excursion_join: runaway path");
    }
    return path;
  };

  std::vector<double> up = first_passage(stream.split(1));
  std::vector<double> down = first_passage(stream.split(2));

  Excursion e;
  e.dt = h;
  e.delta = delta;
  e.values = std::move(up);
  for (auto it = down.rbegin() + 1; it != down.rend(); ++it)
    e.values.push_back(*it);
  return e;
}

StablePath sample_stable(RngStream stream, const StableParams& params,
                         std::size_t n, double dt) {
  if (n < 2) throw std::invalid_argument("sample_stable: n >= 2");
  if (dt <= 0.0) throw std::invalid_argument("sample_stable: dt > 0");
  if (!(params.alpha > 1.0 && params.alpha < 2.0))
    throw std::invalid_argument("sample_stable: alpha must be in (1,2)");
  if (params.scale < 0.0)
    throw std::invalid_argument("sample_stable: scale >= 0");

  double alpha = params.alpha;
  double flip = params.jump_sign == JumpSign::negative ? -1.0 : 1.0;

  StablePath out;
  out.path.dt = dt;
  out.path.meta = "stable";
  out.path.values.resize(n);
  out.path.values[0] = 0.0;
  double step_scale = params.scale * std::pow(dt, 1.0 / alpha);
  out.cutoff = 6.0 * step_scale;

  if (params.scale == 0.0) return out;

  // Chambers-Mallows-Stuck for the standard totally asymmetric (beta = 1)
  // variate in the S1 parameterization.
  double tan_half = std::tan(0.5 * M_PI * alpha);
  double b = std::atan(tan_half) / alpha;
  double s_fac = std::pow(1.0 + tan_half * tan_half, 0.5 / alpha);
  for (std::size_t i = 1; i < n; ++i) {
    double v = M_PI * (stream.uniform() - 0.5);
    double w = stream.exponential();
    double x = s_fac * std::sin(alpha * (v + b)) /
               std::pow(std::cos(v), 1.0 / alpha) *
               std::pow(std::cos(v - alpha * (v + b)) / w,
                        (1.0 - alpha) / alpha);
    double inc = flip * step_scale * x;
    out.path.values[i] = out.path.values[i - 1] + inc;
    // The Levy measure is one-sided; a large increment on the other side is
    // diffusive bulk, not a jump.
    if (std::fabs(inc) >= out.cutoff && inc * flip > 0.0)
      out.jumps.emplace_back(dt * static_cast<double>(i), inc);
  }
  return out;
}

}  // namespace matelab
