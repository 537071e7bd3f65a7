#pragma once

#include <cstddef>
#include <vector>

namespace matelab {

// Replica execution mode.  Every Monte Carlo driver in this project maps a
// pure function over replica indices, each replica owning its own derived
// stream, so the serial pass is the reference semantics and the OpenMP pass
// must reproduce it bit for bit.  Results are collected per replica and
// reduced serially to keep the combination order fixed.
enum class ExecMode { serial, openmp };

template <class T, class F>
std::vector<T> map_replicas(std::size_t n, ExecMode mode, F&& f) {
  std::vector<T> out(n);
  if (mode == ExecMode::serial) {
    for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
  } else {
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
      out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  }
  return out;
}

}  // namespace matelab
