#include "matelab/driving.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "matelab/stochastic.hpp"

namespace matelab {

double forward_gap_dimension(double kappa, double rho) {
  return 1.0 + 2.0 * (rho + 2.0) / kappa;
}

double reverse_gap_dimension(double kappa, double rho) {
  return 1.0 + 2.0 * (rho - 2.0) / kappa;
}

DrivingPair sample_chordal_driving(RngStream stream, double kappa, double rho,
                                   Direction direction, std::size_t n,
                                   double dt) {
  if (!(kappa > 0.0 && kappa < 4.0))
    throw std::invalid_argument("sample_chordal_driving: kappa in (0,4)");
  if (n < 2 || dt <= 0.0)
    throw std::invalid_argument("sample_chordal_driving: bad grid");
  if (direction == Direction::forward && rho <= -2.0)
    throw std::invalid_argument(
        "sample_chordal_driving: forward rho <= -2 hits the continuation "
        "threshold");
  double delta = direction == Direction::forward
                     ? forward_gap_dimension(kappa, rho)
                     : reverse_gap_dimension(kappa, rho);
  // The forward force point sits at 0+, offset by one diffusion scale; a
  // reverse force point at 0+ would be absorbed immediately, so it starts
  // at unit distance (the paper's reverse flow carries an x > 0 seed).
  double eps0 = direction == Direction::forward ? std::sqrt(dt) : 1.0;
  double sqk = std::sqrt(kappa);
  BesselParams bp{delta, eps0 / sqk};
  // The gap never reaches 0 for delta >= 2, so absorb is a no-op there.
  TimeSeries gap = sample_bessel(stream, bp, n, dt, ZeroPolicy::absorb);
  DrivingPair p;
  p.kappa = kappa;
  p.rho = rho;
  p.direction = direction;
  p.W.dt = p.V.dt = dt;
  p.W.meta = "W";
  p.V.meta = "V";
  double sign = direction == Direction::forward ? 1.0 : -1.0;
  double v = eps0;
  std::size_t len = gap.values.size();
  p.W.values.reserve(len);
  p.V.values.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    double g = sqk * gap.values[i];
    if (i > 0) {
      double prev_gap = p.V.values[i - 1] - p.W.values[i - 1];
      if (prev_gap <= 0.0) break;  // reverse flow absorbed at 0
      v += sign * 2.0 * dt / prev_gap;
    }
    p.V.values.push_back(v);
    p.W.values.push_back(v - g);
    if (direction == Direction::reverse && g == 0.0) break;
  }
  return p;
}

namespace {

TimeSeries sample_gap_bessel(RngStream stream, double delta, double x0,
                             std::size_t n, double dt) {
  BesselParams bp{delta, x0};
  return sample_bessel(stream, bp, n, dt, ZeroPolicy::absorb);
}

}  // namespace

double gap_dimension_estimate(const DrivingPair& pair) {
  double sqk = std::sqrt(pair.kappa);
  TimeSeries gap;
  gap.dt = pair.W.dt;
  gap.values.reserve(pair.W.values.size());
  for (std::size_t i = 0; i < pair.W.values.size(); ++i) {
    double g = (pair.V.values[i] - pair.W.values[i]) / sqk;
    if (g <= 0.0) break;
    gap.values.push_back(g);
  }
  if (gap.values.size() < 3)
    throw std::domain_error("gap_dimension_estimate: no positive sub-horizon");
  auto [reparam, drift] = log_qv_reparam(gap);
  (void)reparam;
  return 2.0 * drift + 2.0;
}

GapReversalReport reverse_forward_gap_test(RngStream stream, double kappa,
                                           double rho_tilde,
                                           std::size_t trials, double dt,
                                           double alpha) {
  if (!(rho_tilde < 0.5 * kappa + 2.0))
    throw std::invalid_argument(
        "reverse_forward_gap_test: rho_tilde must be below kappa/2 + 2 for "
        "the force point to reach 0");
  double delta_rev = reverse_gap_dimension(kappa, rho_tilde);
  double rho_fwd = kappa - rho_tilde;
  double delta_fwd = forward_gap_dimension(kappa, rho_fwd);

  const double x0 = 1.0;  // reverse gap starts at x0 in Bessel units
  const double horizon_time = 8.0;
  const auto horizon =
      static_cast<std::size_t>(std::llround(horizon_time / dt));

  // Reverse ensemble: gap paths run to absorption within the horizon, then
  // time-reversed.  The hitting time is heavy tailed, so the horizon
  // censors; the forward ensemble below is conditioned on the exact same
  // event {t < sigma <= H}, sigma the last visit to x0.
  std::vector<std::vector<double>> reversed;
  std::vector<double> durations;
  for (std::size_t r = 0; r < trials; ++r) {
    TimeSeries g = sample_gap_bessel(stream.split(2 * r), delta_rev, x0,
                                     horizon, dt);
    std::size_t hit = g.values.size();
    for (std::size_t i = 0; i < g.values.size(); ++i)
      if (g.values[i] == 0.0) {
        hit = i;
        break;
      }
    if (hit >= g.values.size()) continue;  // censored by the horizon
    std::vector<double> rev(hit + 1);
    for (std::size_t i = 0; i <= hit; ++i) rev[i] = g.values[hit - i];
    reversed.push_back(std::move(rev));
    durations.push_back(dt * static_cast<double>(hit));
  }
  if (reversed.size() < 100)
    throw std::runtime_error("reverse_forward_gap_test: too few absorptions");

  std::vector<double> sorted = durations;
  std::sort(sorted.begin(), sorted.end());
  const double fracs[5] = {0.05, 0.10, 0.15, 0.20, 0.25};
  std::vector<std::size_t> probe_idx;
  for (double f : fracs) {
    double t = sorted[static_cast<std::size_t>(f * (sorted.size() - 1))];
    probe_idx.push_back(
        std::max<std::size_t>(2, static_cast<std::size_t>(t / dt)));
  }

  // Forward ensemble: paths of the dual dimension started from 0, run to
  // the horizon.  At probe time t a path enters the comparison iff it
  // visits x0 in (t, H], with weight equal to the probability that it never
  // returns to x0 after H (so that sigma <= H), i.e. 1 - min(1,
  // (g_H/x0)^(2-delta)).
  std::vector<std::vector<double>> fwd_vals(probe_idx.size());
  std::vector<std::vector<double>> fwd_wts(probe_idx.size());
  for (std::size_t r = 0; r < trials; ++r) {
    TimeSeries g =
        sample_gap_bessel(stream.split(2 * r + 1), delta_fwd, 0.0, horizon,
                          dt);
    double g_end = g.values.back();
    double never_return =
        g_end <= x0 ? 0.0 : 1.0 - std::pow(g_end / x0, 2.0 - delta_fwd);
    if (never_return <= 0.0) continue;
    // Last index at which the path is at or below x0.
    std::size_t last_below = 0;
    bool any_below = false;
    for (std::size_t i = 0; i < g.values.size(); ++i)
      if (g.values[i] <= x0) {
        last_below = i;
        any_below = true;
      }
    if (!any_below) continue;
    for (std::size_t pi = 0; pi < probe_idx.size(); ++pi) {
      std::size_t idx = probe_idx[pi];
      if (idx >= g.values.size() || last_below <= idx) continue;
      fwd_vals[pi].push_back(g.values[idx]);
      fwd_wts[pi].push_back(never_return);
    }
  }

  GapReversalReport report;
  report.pass = true;
  for (std::size_t pi = 0; pi < probe_idx.size(); ++pi) {
    std::size_t idx = probe_idx[pi];
    std::vector<double> rev_vals;
    for (const auto& rev : reversed)
      if (rev.size() > idx) rev_vals.push_back(rev[idx]);
    MatchedTimeKs mk;
    mk.time = dt * static_cast<double>(idx);
    mk.ks = ks_two_sample_weighted(rev_vals, fwd_vals[pi], fwd_wts[pi], alpha);
    report.pass = report.pass && mk.ks.pass;
    report.per_time.push_back(mk);
  }
  return report;
}

double theta_domain_max(ThetaVariant variant) {
  return variant == ThetaVariant::forward_radial ? 2.0 * M_PI : M_PI;
}

double theta_stationary_density(double theta, double kappa, double rho,
                                ThetaVariant variant) {
  if (variant == ThetaVariant::forward_radial) {
    double delta = forward_gap_dimension(kappa, rho);
    return std::pow(std::sin(0.5 * theta), delta - 1.0);
  }
  double a = (8.0 - 2.0 * rho) / kappa;
  return std::pow(std::sin(theta), a);
}

ThetaProcess sample_radial_theta(RngStream stream, double kappa, double rho,
                                 ThetaVariant variant, std::size_t n,
                                 double dt, double theta0) {
  if (!(kappa > 0.0))
    throw std::invalid_argument("sample_radial_theta: kappa must be positive");
  if (variant == ThetaVariant::forward_radial && rho <= -2.0)
    throw std::invalid_argument("sample_radial_theta: forward needs rho > -2");
  if (variant == ThetaVariant::reverse_interior &&
      !(rho < 0.5 * kappa + 4.0))
    throw std::invalid_argument(
        "sample_radial_theta: reverse-interior needs rho < kappa/2 + 4");
  if (n < 2 || dt <= 0.0)
    throw std::invalid_argument("sample_radial_theta: bad grid");

  double top = theta_domain_max(variant);
  double th = theta0 > 0.0 && theta0 < top ? theta0 : 0.5 * top;
  double sqk = std::sqrt(kappa);

  ThetaProcess p;
  p.kappa = kappa;
  p.rho = rho;
  p.variant = variant;
  p.theta.dt = dt;
  p.theta.values.resize(n);
  p.theta.values[0] = th;
  double drift_cap = 0.25 * top;
  for (std::size_t i = 1; i < n; ++i) {
    double b, sigma, milstein;
    if (variant == ThetaVariant::forward_radial) {
      b = 0.5 * (rho + 2.0) / std::tan(0.5 * th);
      sigma = sqk;
      milstein = 0.0;
    } else {
      b = (2.0 + 0.5 * kappa - 0.5 * rho) * std::sin(2.0 * th);
      sigma = sqk * std::sin(th);
      // 0.5 * sigma * dsigma/dtheta * (dB^2 - dt)
      milstein = 0.5 * kappa * std::sin(th) * std::cos(th);
    }
    double xi = stream.normal();
    double inc = std::clamp(b * dt, -drift_cap, drift_cap) +
                 sigma * std::sqrt(dt) * xi +
                 milstein * dt * (xi * xi - 1.0);
    th += inc;
    // Fold back into the open interval.
    for (int guard = 0; guard < 64 && (th <= 0.0 || th >= top); ++guard) {
      if (th <= 0.0) th = -th;
      if (th >= top) th = 2.0 * top - th;
    }
    if (th <= 0.0 || th >= top) th = 0.5 * top;
    p.theta.values[i] = th;
  }
  return p;
}

}  // namespace matelab
