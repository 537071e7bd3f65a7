#pragma once

#include <cstddef>
#include <vector>

namespace matelab {

// Hill tail-index estimate on the k largest magnitudes.
struct TailEstimate {
  double alpha_hat = 0.0;
  std::size_t k_used = 0;
  double stderr_ = 0.0;
};

TailEstimate hill_estimator(const std::vector<double>& jumps, std::size_t k);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::size_t n = 0;
};

MeanEstimate sample_mean(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);
double sample_covariance(const std::vector<double>& x,
                         const std::vector<double>& y);
double sample_correlation(const std::vector<double>& x,
                          const std::vector<double>& y);

// Kolmogorov-Smirnov machinery.  Critical values use the asymptotic
// c(alpha) = sqrt(-ln(alpha/2)/2) form.
double ks_critical(double alpha, double n_effective);
double ks_critical_two_sample(double alpha, double n1_eff, double n2_eff);

struct KsResult {
  double statistic = 0.0;
  double critical_value = 0.0;
  bool pass = false;
};

// Two-sample KS; optional weights on the second sample (weighted ECDF,
// effective sample size (sum w)^2 / sum w^2).
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b,
                       double alpha);
KsResult ks_two_sample_weighted(std::vector<double> a, std::vector<double> b,
                                std::vector<double> w_b, double alpha);

// One-sample KS against a cdf given as a callable.
template <class Cdf>
KsResult ks_one_sample(std::vector<double> a, Cdf cdf, double alpha);

// Chi-square goodness of fit of observed counts against expected counts
// (bins with expected count below min_expected are merged into neighbors).
struct Chi2Result {
  double statistic = 0.0;
  double critical_value = 0.0;
  std::size_t dof = 0;
  bool pass = false;
};

Chi2Result chi2_gof(const std::vector<double>& observed,
                    const std::vector<double>& expected, double alpha,
                    double min_expected = 10.0);

// Histogram of x into nbins equal bins over [lo, hi); out-of-range values
// are dropped.
std::vector<double> histogram(const std::vector<double>& x, double lo,
                              double hi, std::size_t nbins);

}  // namespace matelab

#include "matelab/stats_impl.hpp"
