#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "matelab/rng.hpp"
#include "matelab/series.hpp"
#include "matelab/stats.hpp"
#include "matelab/stochastic.hpp"

namespace matelab {

// Genealogy of the jumps of a positive-jump path: a jump is the parent of
// every later jump that falls strictly inside its excursion interval (from
// the jump to the first return of the running level to the pre-jump value).
struct LevyTree {
  struct Node {
    double time = 0.0;
    double boundary_length = 0.0;  // jump magnitude
    long parent = -1;
    double interval_end = 0.0;     // first return time; horizon if censored
  };
  std::vector<Node> nodes;

  std::size_t root_count() const;
  bool nesting_ok() const;
};

LevyTree build_levy_tree(const StablePath& path);

struct ForestedLine {
  double line_length = 0.0;  // local-time axis length
  LevyTree tree;
  std::vector<double> disk_areas;  // surrogate law, length^2 * lognormal
};

ForestedLine forested_line(RngStream stream, double kappa_prime,
                           double horizon, double dt);

// Hill index of the zero-set gaps of a reflected Bessel path; the
// subordinator index is 1 - delta/2.
TailEstimate inverse_local_time_index(RngStream stream, double delta,
                                      double horizon, double dt);

struct ConditionedPositiveReport {
  double acceptance_rate = 0.0;
  bool all_nonnegative = false;
  KsResult jump_law_ks;
  std::size_t accepted = 0;
};

// Negative-jump stable paths started from 1, accepted when they stay
// nonnegative over the horizon; the early small-jump law is KS-compared
// against the unconditioned one.
ConditionedPositiveReport conditioned_positive_check(RngStream stream,
                                                     double kappa_prime,
                                                     double horizon, double dt,
                                                     std::size_t trials,
                                                     double alpha = 0.01);

struct AtomicMeasure {
  std::vector<std::pair<double, std::size_t>> atoms;  // (mass, cell)
  double theta = 0.0;
  double u_min = 0.0;
};

// Poisson atoms per carrier cell with intensity mu(cell) * u^(-1-theta) du
// truncated at u_min; theta = 4 / gamma_prime^2.
AtomicMeasure dual_atomic_measure(RngStream stream,
                                  const std::vector<double>& carrier_mass,
                                  double carrier_gamma, double gamma_prime,
                                  double u_min);

struct LaplaceDualityPoint {
  double phi = 0.0;
  double mc_estimate = 0.0;     // truncation-corrected Monte Carlo
  double analytic = 0.0;        // exp(Gamma(-theta) phi^theta mu(U))
  double rel_error = 0.0;
};

struct LaplaceDualityReport {
  std::vector<LaplaceDualityPoint> points;
  double moment_p = 0.0;
  double moment_mc = 0.0;
  double moment_analytic = 0.0;
  double moment_rel_error = 0.0;
};

LaplaceDualityReport laplace_duality_test(RngStream stream, double mu_U,
                                          double gamma_prime, double u_min,
                                          const std::vector<double>& phis,
                                          std::size_t trials);

}  // namespace matelab
