#pragma once

#include <cstddef>
#include <vector>

#include "matelab/gamma_context.hpp"
#include "matelab/rng.hpp"
#include "matelab/series.hpp"

namespace matelab {

enum class SurfaceKind { wedge, cone, thin_wedge_bead, disk, sphere };
enum class Parameterization { strip, cylinder };

// Radial part of a surface field: the value per vertical line of the strip
// (or circle of the cylinder).  values[k] sits at u = (k - origin) * du.
struct SurfaceProfile {
  SurfaceKind kind = SurfaceKind::wedge;
  Parameterization param = Parameterization::strip;
  TimeSeries h1;
  std::size_t origin = 0;
  double alpha = 0.0;
  double weight = 0.0;

  double at_offset(double u) const;  // linear interpolation
  double max_offset() const;
  double min_offset() const;
};

// Wedge (strip, variance rate 2) or cone (cylinder, variance rate 1)
// profile: drift alpha - Q on the positive side, and on the negative side
// the drifted motion conditioned positive, realized by the last-hitting-time
// construction (Bessel time reversal when alpha = Q).
SurfaceProfile sample_surface_profile(RngStream stream, SurfaceKind kind,
                                      double alpha, const GammaContext& ctx,
                                      double horizon, double du);

// Beads of a thin wedge of weight W in (0, gamma^2/2): per bead the
// excursion log, scaled by 2/gamma and reparameterized to quadratic
// variation 2 du.
std::vector<SurfaceProfile> sample_thin_wedge(RngStream stream, double weight,
                                              const GammaContext& ctx,
                                              std::size_t bead_budget,
                                              double min_lifetime, double du);

enum class Conditioning { none, unit_area, unit_boundary };

struct DiskSphereSpec {
  SurfaceKind kind = SurfaceKind::disk;  // disk or sphere
  Conditioning conditioning = Conditioning::none;
  double b = 0.0;            // log multiplier; 0 selects 2/gamma
  double min_lifetime = 0.05;
  double window = 0.02;      // relative mass window for conditioning
  std::size_t budget = 20000;
};

struct DiskSphereSample {
  SurfaceProfile profile;
  double bessel_dimension = 0.0;
  double area_proxy = 0.0;      // integral of exp(gamma h1) du
  double boundary_proxy = 0.0;  // 2 * integral of exp(gamma h1 / 2) du
  std::size_t attempts = 0;
};

DiskSphereSample sample_disk_or_sphere(RngStream stream,
                                       const DiskSphereSpec& spec,
                                       const GammaContext& ctx, double du);

double disk_bessel_dimension(const GammaContext& ctx);    // 3 - 4/gamma^2
double sphere_bessel_dimension(const GammaContext& ctx);  // 4 - 8/gamma^2

double area_proxy(const SurfaceProfile& p, const GammaContext& ctx);
double boundary_proxy(const SurfaceProfile& p, const GammaContext& ctx);

// Adds C/gamma to the profile and re-canonicalizes by shifting the
// horizontal origin to the first hit of 0.
SurfaceProfile rescale_and_canonicalize(const SurfaceProfile& p, double C,
                                        const GammaContext& ctx);

struct ScaleInvarianceReport {
  std::vector<double> offsets;
  std::vector<double> ks_statistics;
  std::vector<double> ks_criticals;
  bool pass = false;
};

// KS comparison of the re-canonicalized profiles against fresh samples at a
// few positive offsets.
ScaleInvarianceReport scale_invariance_test(RngStream stream, SurfaceKind kind,
                                            double alpha,
                                            const GammaContext& ctx, double C,
                                            std::size_t trials, double alpha_level);

}  // namespace matelab
