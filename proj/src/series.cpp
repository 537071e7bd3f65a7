#include "matelab/series.hpp"

#include <algorithm>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace matelab {

double Excursion::max_value() const {
  if (values.empty()) return 0.0;
  return *std::max_element(values.begin(), values.end());
}

namespace {

struct FileCloser {
  void operator()(std::FILE* f) const {
    if (f) std::fclose(f);
  }
};

}  // namespace

void write_csv(const TimeSeries& s, const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("write_csv: cannot open " + path);
  std::fputs("t,value\n", f.get());
  for (std::size_t i = 0; i < s.values.size(); ++i)
    std::fprintf(f.get(), "%.17g,%.17g\n", s.dt * static_cast<double>(i),
                 s.values[i]);
}

void write_jump_csv(const std::vector<std::pair<double, double>>& jumps,
                    const std::string& path) {
  std::unique_ptr<std::FILE, FileCloser> f(std::fopen(path.c_str(), "wb"));
  if (!f) throw std::runtime_error("write_jump_csv: cannot open " + path);
  std::fputs("t,size\n", f.get());
  for (const auto& [t, size] : jumps)
    std::fprintf(f.get(), "%.17g,%.17g\n", t, size);
}

std::vector<double> increments(const TimeSeries& s) {
  if (s.values.size() < 2) return {};
  std::vector<double> d(s.values.size() - 1);
  for (std::size_t i = 0; i + 1 < s.values.size(); ++i)
    d[i] = s.values[i + 1] - s.values[i];
  return d;
}

}  // namespace matelab
