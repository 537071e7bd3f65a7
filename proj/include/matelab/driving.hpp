#pragma once

#include <vector>

#include "matelab/rng.hpp"
#include "matelab/series.hpp"
#include "matelab/stats.hpp"

namespace matelab {

enum class Direction { forward, reverse };

// Driving pair (W, V) of a chordal process with a single force point at 0+.
// The gap (V - W)/sqrt(kappa) is a Bessel process of dimension
// 1 + 2(rho+2)/kappa (forward) or 1 + 2(rho-2)/kappa (reverse).
struct DrivingPair {
  TimeSeries W;
  TimeSeries V;
  double kappa = 0.0;
  double rho = 0.0;
  Direction direction = Direction::forward;
};

// The gap is simulated exactly as a Bessel path and W is reconstructed from
// the gap and the accumulated 2/(V-W) Loewner drift.  The force point
// starts at sqrt(dt).  A forward run stops early (series truncated) only if
// the reverse gap is absorbed at 0.
DrivingPair sample_chordal_driving(RngStream stream, double kappa, double rho,
                                   Direction direction, std::size_t n,
                                   double dt);

double forward_gap_dimension(double kappa, double rho);
double reverse_gap_dimension(double kappa, double rho);

// Bessel dimension of the gap estimated from the drift of the
// quadratic-variation-reparameterized log gap: delta = 2*drift + 2.
double gap_dimension_estimate(const DrivingPair& pair);

struct MatchedTimeKs {
  double time = 0.0;
  KsResult ks;
};

struct GapReversalReport {
  std::vector<MatchedTimeKs> per_time;
  bool pass = false;
};

// Simulates reverse gaps to their hitting time of 0, time-reverses them and
// KS-compares marginals at matched times against forward gaps with
// rho = kappa - rho_tilde.  The forward side is reweighted by the exact
// probability that its last visit to the reverse start level happens after
// the probe time, which is the conditioning the time reversal induces.
GapReversalReport reverse_forward_gap_test(RngStream stream, double kappa,
                                           double rho_tilde,
                                           std::size_t trials, double dt,
                                           double alpha = 0.01);

enum class ThetaVariant { forward_radial, reverse_interior };

// Angle process of the radial evolution: values in (0, 2*pi) for the
// forward variant (stationary density sin^(delta-1)(theta/2)) and in
// (0, pi) for the reverse-interior variant (stationary density sin^a with
// a = (8 - 2*rho)/kappa).
struct ThetaProcess {
  TimeSeries theta;
  double kappa = 0.0;
  double rho = 0.0;
  ThetaVariant variant = ThetaVariant::forward_radial;
};

ThetaProcess sample_radial_theta(RngStream stream, double kappa, double rho,
                                 ThetaVariant variant, std::size_t n,
                                 double dt, double theta0 = 0.0);

// Unnormalized stationary density of the theta process.
double theta_stationary_density(double theta, double kappa, double rho,
                                ThetaVariant variant);
double theta_domain_max(ThetaVariant variant);

}  // namespace matelab
