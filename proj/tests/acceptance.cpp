// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion.  Exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "matelab/verify.hpp"

using namespace matelab;

int main() {
  auto seeds = default_seed_set(3);
  ExecMode mode = ExecMode::openmp;

  struct Criterion {
    std::string name;
    std::function<std::vector<CheckResult>()> run;
  };
  std::vector<Criterion> criteria = {
      {"C1 exact algebra", [&] { return criterion_exact_algebra(); }},
      {"C2 KPZ spot values", [&] { return criterion_kpz_spot_values(); }},
      {"C3 FK dictionary", [&] { return criterion_fk_dictionary(); }},
      {"C4 correlated Brownian covariance",
       [&] { return criterion_brownian_covariance(seeds[0], mode); }},
      {"C5 Bessel drift and reversal",
       [&] { return criterion_bessel_drift_reversal(seeds, mode); }},
      {"C6 driving symmetries",
       [&] { return criterion_driving_symmetries(seeds, mode); }},
      {"C7 mating", [&] { return criterion_mating(seeds[0], mode); }},
      {"C8 cone-time geometry",
       [&] { return criterion_cone_time_geometry(seeds[0], mode); }},
      {"C9 GFF/LQG measure",
       [&] { return criterion_gff_measure(seeds[0], mode); }},
      {"C10 stable boundary lengths",
       [&] { return criterion_stable_boundary(seeds[0], mode); }},
      {"C11 Laplace duality", [&] { return criterion_duality(seeds[0]); }},
  };

  bool all_pass = true;
  for (const auto& crit : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<CheckResult> checks;
    bool pass = true;
    std::string error;
    try {
      checks = crit.run();
      for (const auto& c : checks) pass = pass && c.pass;
    } catch (const std::exception& e) {
      pass = false;
      error = e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    std::printf("[%s] %s (%.1fs)\n", pass ? "PASS" : "FAIL",
                crit.name.c_str(), secs);
    if (!error.empty()) std::printf("       error: %s\n", error.c_str());
    for (const auto& c : checks)
      if (!c.pass)
        std::printf("       failed: %s statistic=%.6g target=%.6g "
                    "tolerance=%.6g\n",
                    c.name.c_str(), c.statistic, c.target, c.tolerance);
    std::fflush(stdout);
    all_pass = all_pass && pass;
  }
  std::printf("%s\n", all_pass ? "acceptance: all criteria pass"
                               : "acceptance: FAILURES present");
  return all_pass ? 0 : 1;
}
