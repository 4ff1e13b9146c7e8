#pragma once

#include <functional>

namespace gnv {

using Integrand = std::function<double(double)>;

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;  ///< estimated absolute error
};

/// Globally adaptive Gauss-Kronrod (31 points) on [a, b]: the piece with the largest error
/// estimate is bisected until the summed estimate drops below rel_tol * int |f|, or to the
/// round-off floor. Throws IntegrationError, carrying the achieved relative error, when 4000
/// pieces are not enough.
QuadratureResult integrate_adaptive(const Integrand& f, double a, double b, double rel_tol = 1e-10);

/// int_a^b f(u) (u - a)^alpha du for alpha in (-1, 0], with f smooth. The endpoint singularity
/// is removed by u = a + v^(1/(1+alpha)), which turns the integrand into a bounded one.
double integrate_left_singular(const Integrand& f, double alpha, double a, double b,
                               double rel_tol = 1e-10);

}  // namespace gnv
