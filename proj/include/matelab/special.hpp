#pragma once

#include <functional>

namespace matelab {

// Regularized lower incomplete gamma P(a, x); Q(a, x) = 1 - P(a, x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Upper quantile of the chi-square distribution with dof degrees of
// freedom: returns x with Q(dof/2, x/2) = alpha.
double chi_square_upper_quantile(double dof, double alpha);

// Adaptive Simpson quadrature on [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-10);

}  // namespace matelab
