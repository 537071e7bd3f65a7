#pragma once

#include <algorithm>
#include <cmath>

namespace matelab {

template <class Cdf>
KsResult ks_one_sample(std::vector<double> a, Cdf cdf, double alpha) {
  std::sort(a.begin(), a.end());
  double n = static_cast<double>(a.size());
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double f = cdf(a[i]);
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
  }
  KsResult r;
  r.statistic = d;
  r.critical_value = ks_critical(alpha, n);
  r.pass = d <= r.critical_value;
  return r;
}

}  // namespace matelab
