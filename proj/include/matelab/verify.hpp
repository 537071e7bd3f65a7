#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "matelab/parallel.hpp"

namespace matelab {

struct CheckResult {
  std::string name;
  double statistic = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<CheckResult> checks;
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Acceptance criteria, numbered; each returns the per-assertion results.
std::vector<CheckResult> criterion_exact_algebra();                       // 1
std::vector<CheckResult> criterion_kpz_spot_values();                     // 2
std::vector<CheckResult> criterion_fk_dictionary();                       // 3
std::vector<CheckResult> criterion_brownian_covariance(std::uint64_t seed,
                                                       ExecMode mode);    // 4
std::vector<CheckResult> criterion_bessel_drift_reversal(
    const std::vector<std::uint64_t>& seeds, ExecMode mode);              // 5
std::vector<CheckResult> criterion_driving_symmetries(
    const std::vector<std::uint64_t>& seeds, ExecMode mode);              // 6
std::vector<CheckResult> criterion_mating(std::uint64_t seed,
                                          ExecMode mode);                 // 7
std::vector<CheckResult> criterion_cone_time_geometry(std::uint64_t seed,
                                                      ExecMode mode);     // 8
std::vector<CheckResult> criterion_gff_measure(std::uint64_t seed,
                                               ExecMode mode);            // 9
std::vector<CheckResult> criterion_stable_boundary(std::uint64_t seed,
                                                   ExecMode mode);        // 10
std::vector<CheckResult> criterion_duality(std::uint64_t seed);           // 11

// Named verification suites exposed by the command-line tool.
std::vector<std::string> suite_names();
SuiteReport run_suite(const std::string& name,
                      const std::vector<std::uint64_t>& seeds, ExecMode mode);

std::vector<std::uint64_t> default_seed_set(std::size_t count = 3);

}  // namespace matelab
