#pragma once

#include <functional>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "gnv/grid.hpp"

namespace gnv {

using CovarianceFn = std::function<double(double, double)>;

/// Covariance family of a centred Gaussian noise G with R(0, t) = 0 whose mixed derivative
/// splits into a stationary singular part and a bounded perturbation:
///
///     d2R/dtds (t, s) = c_beta |t - s|^(2 beta - 2) + psi(t, s),   |psi| <= c_beta_prime (ts)^(beta - 1)
///
/// `psi` may be empty, meaning psi == 0 (fractional Brownian motion).
struct Kernel {
    std::string name;
    double beta = 0.0;
    double c_beta = 0.0;
    double c_beta_prime = 0.0;
    CovarianceFn covariance;
    CovarianceFn psi;

    double R(double t, double s) const { return covariance(t, s); }

    /// c_beta * lag^(2 beta - 2); infinite at lag 0.
    double singular_part(double lag) const;

    double perturbation(double t, double s) const { return psi ? psi(t, s) : 0.0; }
    bool has_perturbation() const noexcept { return static_cast<bool>(psi); }

    /// Mixed derivative of R. Undefined on the diagonal t == s.
    double phi(double t, double s) const;
};

Kernel make_fbm_kernel(double hurst);
Kernel make_subfbm_kernel(double hurst);

/// Looks a kernel up by name ("fbm" or "subfbm").
Kernel make_kernel(std::string_view name, double hurst);

/// Covariance of the grid increments G(t_{i+1}) - G(t_i), built from R by inclusion-exclusion.
Eigen::MatrixXd increment_covariance_matrix(const Kernel& kernel, const Grid& grid);

/// Constant C with E(G_t - G_s)^2 <= C |t - s|^(2 beta), obtained by integrating the two bounds
/// on the mixed derivative over [s, t]^2:  c_beta / (beta (2 beta - 1)) + c_beta_prime / beta^2.
double increment_bound_constant(const Kernel& kernel);

struct AssumptionReport {
    double max_ratio = 0.0;  ///< max |phi - c_beta |t-s|^(2b-2)| / (ts)^(b-1) over grid pairs
    double worst_t = 0.0;
    double worst_s = 0.0;
    double bound = 0.0;  ///< c_beta_prime
    bool passes = false;
    /// Largest relative gap between phi and a central finite difference of R; a kernel whose
    /// phi does not belong to its R shows up here.
    double max_phi_fd_rel_error = 0.0;
};

/// Grid audit of the perturbation bound over all pairs of positive grid times t != s.
AssumptionReport check_assumption(const Kernel& kernel, const Grid& grid);

}  // namespace gnv
