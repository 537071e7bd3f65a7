#pragma once

#include <utility>
#include <vector>

#include "matelab/rng.hpp"
#include "matelab/series.hpp"

namespace matelab {

// Brownian path with the given drift and variance rates; values[0] = 0.
TimeSeries sample_bm(RngStream stream, std::size_t n, double dt, double drift,
                     double var_rate);

// (L, R) with unit variance rate per coordinate and covariance rate
// -cos(4*pi/kappa_prime), built as a Cholesky mix of two independent
// streams.  kappa_prime must lie in (4, 8] unless `extrapolate` is set.
CorrelatedPair sample_correlated_bm(RngStream stream, std::size_t n, double dt,
                                    double kappa_prime,
                                    bool extrapolate = false);

struct BesselParams {
  double delta = 0.0;
  double x0 = 0.0;
};

enum class ZeroPolicy { absorb, reflect };

// One exact squared-Bessel transition over a step of length dt (delta > 0).
double besq_step(RngStream& stream, double z, double delta, double dt);

// Bessel path X = sqrt(Z) with Z advanced through the exact transition law
// for delta > 0 (Euler fallback for delta <= 0, absorbing).  With absorb,
// the first-passage of 0 within a step is drawn from its exact per-step
// probability and the path is 0 afterwards.
TimeSeries sample_bessel(RngStream stream, const BesselParams& params,
                         std::size_t n, double dt, ZeroPolicy policy);

// log of a strictly positive series resampled to constant discrete
// quadratic variation 2*dt per output step, plus the least-squares drift per
// unit of quadratic-variation time.  A Bessel input of dimension delta has
// drift (delta - 2)/2.
std::pair<TimeSeries, double> log_qv_reparam(const TimeSeries& series);

// Excursion of the dimension-delta excursion law (delta < 2), lifetime drawn
// from the truncated density t^(delta/2-2) on [min_lifetime, inf) and body a
// dimension 4-delta bridge via the time-inversion representation.
Excursion sample_bessel_excursion(RngStream stream, double delta,
                                  double min_lifetime, double dt);

// Alternate construction: maximum drawn from the truncated density
// m^(delta-3) on [min_max, inf), body two independent dimension 4-delta
// first-passage paths to the maximum joined back to back.
Excursion sample_bessel_excursion_join(RngStream stream, double delta,
                                       double min_max, double dt);

enum class JumpSign { positive, negative };

struct StableParams {
  double alpha = 1.5;  // stability index in (1, 2)
  JumpSign jump_sign = JumpSign::positive;
  double scale = 1.0;
};

struct StablePath {
  TimeSeries path;
  std::vector<std::pair<double, double>> jumps;  // (time, signed size)
  double cutoff = 0.0;  // magnitude threshold for the jump log
};

// Totally asymmetric stable path via Chambers-Mallows-Stuck increments;
// increments above the recorded cutoff are logged as jumps.
StablePath sample_stable(RngStream stream, const StableParams& params,
                         std::size_t n, double dt);

}  // namespace matelab
