#include "matelab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "matelab/special.hpp"

namespace matelab {

TailEstimate hill_estimator(const std::vector<double>& jumps, std::size_t k) {
  if (k < 10) throw std::invalid_argument("hill_estimator: k must be >= 10");
  if (jumps.size() < k + 1)
    throw std::invalid_argument("hill_estimator: need at least k+1 jumps");
  std::vector<double> mags(jumps.size());
  for (std::size_t i = 0; i < jumps.size(); ++i) mags[i] = std::fabs(jumps[i]);
  std::sort(mags.begin(), mags.end(), std::greater<double>());
  double x_k = mags[k];
  if (x_k <= 0.0)
    throw std::invalid_argument("hill_estimator: nonpositive magnitudes in tail");
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(mags[i] / x_k);
  if (s <= 0.0)
    throw std::invalid_argument("hill_estimator: zero log spacings (all equal)");
  TailEstimate e;
  e.alpha_hat = static_cast<double>(k) / s;
  e.k_used = k;
  e.stderr_ = e.alpha_hat / std::sqrt(static_cast<double>(k));
  return e;
}

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("least_squares: need matched series, n >= 2");
  double n = static_cast<double>(x.size());
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("least_squares: degenerate x");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - f.intercept - f.slope * x[i];
    rss += r * r;
  }
  if (x.size() > 2) f.slope_stderr = std::sqrt(rss / (n - 2.0) / sxx);
  return f;
}

MeanEstimate sample_mean(const std::vector<double>& x) {
  MeanEstimate m;
  m.n = x.size();
  if (x.empty()) return m;
  m.mean = std::accumulate(x.begin(), x.end(), 0.0) / m.n;
  if (x.size() > 1) {
    double v = 0.0;
    for (double xi : x) v += (xi - m.mean) * (xi - m.mean);
    v /= (m.n - 1);
    m.stderr_ = std::sqrt(v / m.n);
  }
  return m;
}

double sample_variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  double m = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double v = 0.0;
  for (double xi : x) v += (xi - m) * (xi - m);
  return v / (x.size() - 1);
}

double sample_covariance(const std::vector<double>& x,
                         const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("sample_covariance: matched series, n >= 2");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
  double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
  double c = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    c += (x[i] - mx) * (y[i] - my);
  return c / (x.size() - 1);
}

double sample_correlation(const std::vector<double>& x,
                          const std::vector<double>& y) {
  double c = sample_covariance(x, y);
  double vx = sample_variance(x);
  double vy = sample_variance(y);
  if (vx == 0.0 || vy == 0.0) return 0.0;
  return c / std::sqrt(vx * vy);
}

double ks_critical(double alpha, double n_effective) {
  double c = std::sqrt(-std::log(0.5 * alpha) / 2.0);
  return c / std::sqrt(n_effective);
}

double ks_critical_two_sample(double alpha, double n1_eff, double n2_eff) {
  double c = std::sqrt(-std::log(0.5 * alpha) / 2.0);
  return c * std::sqrt((n1_eff + n2_eff) / (n1_eff * n2_eff));
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b,
                       double alpha) {
  std::vector<double> w(b.size(), 1.0);
  return ks_two_sample_weighted(std::move(a), std::move(b), std::move(w),
                                alpha);
}

KsResult ks_two_sample_weighted(std::vector<double> a, std::vector<double> b,
                                std::vector<double> w_b, double alpha) {
  if (a.empty() || b.empty() || b.size() != w_b.size())
    throw std::invalid_argument("ks_two_sample: bad inputs");
  std::sort(a.begin(), a.end());
  std::vector<std::size_t> idx(b.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](std::size_t i, std::size_t j) { return b[i] < b[j]; });
  double wsum = 0.0, w2sum = 0.0;
  for (double w : w_b) {
    wsum += w;
    w2sum += w * w;
  }
  if (wsum <= 0.0) throw std::invalid_argument("ks_two_sample: zero weights");

  double na = static_cast<double>(a.size());
  double d = 0.0;
  std::size_t ia = 0;
  double wacc = 0.0;
  // Sweep the merged order of sample values; compare ECDFs at each b-point
  // and each a-point.
  std::size_t ib = 0;
  while (ia < a.size() || ib < b.size()) {
    bool take_a =
        ib >= b.size() || (ia < a.size() && a[ia] <= b[idx[ib]]);
    if (take_a) {
      ++ia;
    } else {
      wacc += w_b[idx[ib]];
      ++ib;
    }
    double fa = static_cast<double>(ia) / na;
    double fb = wacc / wsum;
    d = std::max(d, std::fabs(fa - fb));
  }
  KsResult r;
  r.statistic = d;
  double nb_eff = wsum * wsum / w2sum;
  r.critical_value = ks_critical_two_sample(alpha, na, nb_eff);
  r.pass = d <= r.critical_value;
  return r;
}

Chi2Result chi2_gof(const std::vector<double>& observed,
                    const std::vector<double>& expected, double alpha,
                    double min_expected) {
  if (observed.size() != expected.size() || observed.empty())
    throw std::invalid_argument("chi2_gof: size mismatch");
  // Merge low-expectation bins left to right.
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 && !exp.empty()) {
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  if (exp.size() < 2) throw std::invalid_argument("chi2_gof: too few bins");
  Chi2Result r;
  for (std::size_t i = 0; i < exp.size(); ++i) {
    double diff = obs[i] - exp[i];
    r.statistic += diff * diff / exp[i];
  }
  r.dof = exp.size() - 1;
  r.critical_value = chi_square_upper_quantile(static_cast<double>(r.dof),
                                               alpha);
  r.pass = r.statistic <= r.critical_value;
  return r;
}

std::vector<double> histogram(const std::vector<double>& x, double lo,
                              double hi, std::size_t nbins) {
  std::vector<double> h(nbins, 0.0);
  double w = (hi - lo) / static_cast<double>(nbins);
  for (double xi : x) {
    if (xi < lo || xi >= hi) continue;
    auto b = static_cast<std::size_t>((xi - lo) / w);
    if (b >= nbins) b = nbins - 1;
    h[b] += 1.0;
  }
  return h;
}

}  // namespace matelab
