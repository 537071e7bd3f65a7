#pragma once

#include <cmath>
#include <stdexcept>

namespace matelab {

// All gamma-derived constants shared across modules.
struct GammaContext {
  double gamma = 0.0;
  double kappa = 0.0;        // gamma^2
  double kappa_prime = 0.0;  // 16 / gamma^2
  double Q = 0.0;            // 2/gamma + gamma/2
  double chi = 0.0;          // 2/gamma - gamma/2
  double lambda = 0.0;       // pi / sqrt(kappa)
  double lambda_prime = 0.0; // pi * sqrt(kappa) / 4

  static GammaContext from_gamma(double g) {
    if (!(g > 0.0 && g < 2.0))
      throw std::invalid_argument("GammaContext: gamma must be in (0,2)");
    GammaContext c;
    c.gamma = g;
    c.kappa = g * g;
    c.kappa_prime = 16.0 / c.kappa;
    c.Q = 2.0 / g + 0.5 * g;
    c.chi = 2.0 / g - 0.5 * g;
    c.lambda = M_PI / g;
    c.lambda_prime = 0.25 * M_PI * g;
    return c;
  }

  static GammaContext from_gamma2(double g2) {
    if (!(g2 > 0.0 && g2 < 4.0))
      throw std::invalid_argument("GammaContext: gamma^2 must be in (0,4)");
    return from_gamma(std::sqrt(g2));
  }

  static GammaContext from_kappa_prime(double kp) {
    if (!(kp > 4.0))
      throw std::invalid_argument("GammaContext: kappa' must exceed 4");
    return from_gamma(std::sqrt(16.0 / kp));
  }
};

}  // namespace matelab
