#pragma once

#include <cmath>
#include <cstdint>

namespace matelab {

// Counter-based splittable generator.  A draw is a hash of
// (seed, stream_id, counter); identical (seed, stream_id) replays the
// identical sequence bit for bit, and distinct stream ids give
// statistically independent streams.  Streams may therefore be handed to
// concurrent replicas without locking.
class RngStream {
 public:
  RngStream() = default;
  RngStream(std::uint64_t seed, std::uint64_t stream_id)
      : seed_(seed), stream_id_(stream_id) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }

  // Derived stream; children of distinct (stream, k) never collide.
  RngStream split(std::uint64_t k) const {
    return RngStream(seed_, mix64(mix64(stream_id_ + 0x9e3779b97f4a7c15ull) ^
                                  mix64(k + 0xbf58476d1ce4e5b9ull)));
  }

  std::uint64_t next_u64() {
    std::uint64_t base = mix64(seed_ + 0x2545f4914f6cdd1dull) ^
                         mix64(stream_id_ + 0x9e3779b97f4a7c15ull);
    return mix64(base + counter_++ * 0x9e3779b97f4a7c15ull);
  }

  // Uniform on (0,1), never returns an endpoint.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  double exponential() { return -std::log(uniform()); }

  // Box-Muller; consumes exactly two uniforms per call.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  }

  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
  double gamma(double shape, double scale) {
    if (shape < 1.0) {
      double u = uniform();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    double d = shape - 1.0 / 3.0;
    double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      double v = t * t * t;
      double u = uniform();
      double x2 = x * x;
      if (u < 1.0 - 0.0331 * x2 * x2) return d * v * scale;
      if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v)))
        return d * v * scale;
    }
  }

  double chi_square(double dof) { return gamma(0.5 * dof, 2.0); }

  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) return poisson_inversion(mean);
    return poisson_ptrs(mean);
  }

  // Noncentral chi-square with fractional dof, sampled exactly by
  // Poisson mixing of central chi-squares.
  double noncentral_chi_square(double dof, double noncentrality) {
    std::uint64_t j = poisson(0.5 * noncentrality);
    double d = dof + 2.0 * static_cast<double>(j);
    if (d <= 0.0) return 0.0;
    return chi_square(d);
  }

 private:
  static std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ull;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebull;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t poisson_inversion(double mean) {
    double l = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > l);
    return k - 1;
  }

  // Hoermann's transformed rejection (PTRS).
  std::uint64_t poisson_ptrs(double mean) {
    double b = 0.931 + 2.53 * std::sqrt(mean);
    double a = -0.059 + 0.02483 * b;
    double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    double vr = 0.9277 - 3.6224 / (b - 2.0);
    double log_mean = std::log(mean);
    for (;;) {
      double u = uniform() - 0.5;
      double v = uniform();
      double us = 0.5 - std::fabs(u);
      double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
      if (kf < 0.0 || (us < 0.013 && v > us)) continue;
      double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
      double rhs = kf * log_mean - mean - std::lgamma(kf + 1.0);
      if (lhs <= rhs) return static_cast<std::uint64_t>(kf);
    }
  }

  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t counter_ = 0;
};

}  // namespace matelab
