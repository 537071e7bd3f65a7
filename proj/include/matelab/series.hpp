#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace matelab {

// A sampled path on a uniform time grid.
struct TimeSeries {
  double dt = 1.0;
  std::vector<double> values;
  std::string meta;

  std::size_t size() const { return values.size(); }
  double duration() const { return dt * (values.empty() ? 0 : values.size() - 1); }
};

// The (L, R) boundary-length pair; coordinates share the grid and have unit
// variance rate, with covariance rate -cos(4*pi/kappa_prime).
struct CorrelatedPair {
  TimeSeries L;
  TimeSeries R;
  double kappa_prime = 0.0;
};

// A positive excursion: first and last entries are exactly zero, the
// interior is strictly positive.
struct Excursion {
  double dt = 1.0;
  std::vector<double> values;
  double delta = 0.0;  // dimension of the excursion law

  double lifetime() const {
    return dt * (values.empty() ? 0 : values.size() - 1);
  }
  double max_value() const;
};

// Writes `t,value` rows with 17 significant digits and LF line endings.
void write_csv(const TimeSeries& s, const std::string& path);
void write_jump_csv(const std::vector<std::pair<double, double>>& jumps,
                    const std::string& path);

// Per-step increments of a series.
std::vector<double> increments(const TimeSeries& s);

}  // namespace matelab
