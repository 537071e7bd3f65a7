#pragma once

#include <string>
#include <vector>

#include "matelab/gamma_context.hpp"

namespace matelab {

// The six equivalent parameterizations of a quantum wedge, carried jointly.
struct WedgeParams {
  double alpha = 0.0;
  double weight = 0.0;
  double theta = 0.0;   // imaginary-geometry angle gap
  double delta = 0.0;   // Bessel dimension
  double a = 0.0;       // strip drift
  double Delta = 0.0;   // boundary quantum exponent

  bool thin() const;
};

// Same for quantum cones.
struct ConeParams {
  double alpha = 0.0;
  double weight = 0.0;
  double theta = 0.0;
  double delta = 0.0;
  double a = 0.0;
  double Delta = 0.0;
};

enum class WedgeField { alpha, weight, theta, delta, a, Delta };

WedgeParams wedge_from(WedgeField field, double value,
                       const GammaContext& ctx);
ConeParams cone_from(WedgeField field, double value, const GammaContext& ctx);

struct ZipResult {
  ConeParams cone;
  double rho_interface = 0.0;
};

// Welding the two sides of a wedge yields a cone of the same weight
// decorated by an interface process with rho = W - 2.
ZipResult zip_wedge_to_cone(const WedgeParams& wedge, const GammaContext& ctx);
WedgeParams cut_cone_to_wedge(const ConeParams& cone, const GammaContext& ctx);

struct WeldResult {
  double total_weight = 0.0;
  std::vector<double> interface_rhos;  // two-wedge case: (W1-2, W2-2)
  std::vector<double> angle_gaps;      // per-piece gap W_i * lambda / chi
};

WeldResult weld(const std::vector<double>& weights, const GammaContext& ctx);

double kpz(double Delta, const GammaContext& ctx);
double kpz_inverse(double x, const GammaContext& ctx);  // positive root
double dual_exponent(double Delta, const GammaContext& ctx);

struct FkParams {
  double q = 0.0;
  double kappa_prime = 0.0;
  double p = 0.0;
  double theta_kappa = 0.0;
  double cov_rate = 0.0;
  double var_ratio = 0.0;  // var(L1 - R1) when var(L1 + R1) = 1
};

FkParams fk_dictionary(double q);

enum class Locus { bulk, boundary };

struct ExponentEntry {
  std::string name;
  Locus locus = Locus::bulk;
  int n = 0;
  double rho = 0.0;   // only meaningful for the rho-indexed families
  double Delta = 0.0;
  double Delta_dual = 0.0;
  double x = 0.0;
  double dim = 0.0;   // 2 - 2x bulk, 1 - x boundary
};

// The closed-form exponent families evaluated for n = 1..n_max and a rho
// grid, restricted to each formula's validity window.
std::vector<ExponentEntry> exponent_catalog(const GammaContext& ctx,
                                            int n_max);

}  // namespace matelab
