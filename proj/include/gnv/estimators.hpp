#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "gnv/kernels.hpp"
#include "gnv/vasicek.hpp"

namespace gnv {

/// How the stochastic integral int X dX in the least-squares formulas is read.
///
/// pathwise        -- the observable Young integral; k_ls built on it drifts to 0.
/// skorohod_oracle -- pathwise minus the trace correction C(T) evaluated at the true k.
/// skorohod_plugin -- pathwise minus C(T) evaluated at the moment estimate k_hat.
enum class IntegralMode { pathwise, skorohod_oracle, skorohod_plugin };

std::string_view to_string(IntegralMode mode);
IntegralMode parse_integral_mode(std::string_view name);

struct EstimateDiagnostics {
    double mean_X = 0.0;   ///< (1/T) int X dt
    double mean_X2 = 0.0;  ///< (1/T) int X^2 dt
    double xdx = 0.0;      ///< pathwise int X dX used before correction
    double correction = 0.0;  ///< C(T) subtracted (0 in pathwise mode)
};

struct EstimateSet {
    double mu_hat = 0.0;
    double k_hat = 0.0;
    double mu_ls = 0.0;
    double k_ls = 0.0;
    IntegralMode mode = IntegralMode::pathwise;
    EstimateDiagnostics diagnostics;
};

/// Trapezoid rule on a uniform grid; exact for affine sequences.
double integral_trapezoid(std::span<const double> values, double dt);

/// Continuous-time sample mean (1/T) int_0^T X dt.
double mu_hat(std::span<const double> x, double dt);
inline double mu_hat(const VasicekPath& x) { return mu_hat(x.values, x.grid.dt()); }

/// Inverts the ergodic variance a = c_beta Gamma(2 beta - 1) k^(-2 beta) (times sigma^2).
/// Throws NonPositiveVariance when variance <= 0.
double k_from_variance(double variance, const Kernel& kernel, double sigma = 1.0);

/// Moment estimator of k from v = mean(X^2) - mean(X)^2.
double k_hat(std::span<const double> x, double dt, const Kernel& kernel, double sigma = 1.0);
inline double k_hat(const VasicekPath& x, const Kernel& kernel) {
    return k_hat(x.values, x.grid.dt(), kernel, x.params.sigma);
}

/// Forward (Ito-type) Riemann sum sum_i X_i (X_{i+1} - X_i) = X_T^2/2 - X_0^2/2 - sum (dX)^2 / 2.
double xdx_forward(std::span<const double> x);

/// Symmetric Riemann sum sum_i (X_i + X_{i+1})/2 (X_{i+1} - X_i) = (X_T^2 - X_0^2) / 2.
/// This is the discretisation of the pathwise integral used by the least-squares estimators:
/// the forward sum differs from it by sum (dX)^2 / 2, which for beta > 1/2 vanishes only as
/// dt^(2 beta - 1) and so grows linearly in T at a fixed step.
double xdx_pathwise(std::span<const double> x);

/// C(T) = int_0^T int_0^t e^{-k(t-s)} phi(s, t) ds dt, the gap between the pathwise and the
/// Skorohod reading of int X dX (for sigma = 1).
///
/// Kernels without perturbation reduce by Fubini to
///     c_beta int_0^T (T - u) e^{-ku} u^(2 beta - 2) du,
/// integrated after the substitution u = v^(1/(2 beta - 1)). Other kernels use nested adaptive
/// quadrature with the diagonal and the s = 0 edge desingularised separately.
double skorohod_correction(const Kernel& kernel, double k, double T);

struct LsEstimate {
    double k_ls = 0.0;
    double mu_ls = 0.0;
    double xdx = 0.0;         ///< pathwise value
    double correction = 0.0;  ///< subtracted C(T), scaled by sigma^2
};

/// Least-squares estimates
///     k_ls  = (X_T I1 - T J) / (T I2 - I1^2)
///     mu_ls = (X_T I2 - J I1) / (X_T I1 - T J)
/// with I1 = int X dt, I2 = int X^2 dt and J = int X dX read according to `mode`.
/// skorohod_oracle requires `k_for_correction`; skorohod_plugin ignores it and uses k_hat.
LsEstimate ls_estimates(std::span<const double> x, double dt, IntegralMode mode,
                        const Kernel& kernel, std::optional<double> k_for_correction,
                        double sigma = 1.0);
inline LsEstimate ls_estimates(const VasicekPath& x, IntegralMode mode, const Kernel& kernel,
                               std::optional<double> k_for_correction) {
    return ls_estimates(x.values, x.grid.dt(), mode, kernel, k_for_correction, x.params.sigma);
}

/// Least squares with an already evaluated correction: J = pathwise int X dX - correction.
LsEstimate ls_estimates_with_correction(std::span<const double> x, double dt, double correction);

/// All four estimators for one mode.
EstimateSet estimate_all(std::span<const double> x, double dt, const Kernel& kernel,
                         IntegralMode mode, std::optional<double> true_k, double sigma = 1.0);

/// Limit-law constants. The three candidate variances for sqrt(T)(k_hat - k) are kept side by
/// side: they do not agree with each other and the Monte Carlo suite decides between them.
struct AsymptoticConstants {
    double a = 0.0;              ///< c_beta Gamma(2 beta - 1) k^(-2 beta)
    double sigma_beta_sq = 0.0;  ///< (4b-1)[1 + G(3-4b)G(4b-1) / (G(2b)G(2-2b))]
    double var_mu = 0.0;         ///< 1 / k^2
    double var_k_moment_a = 0.0;   ///< sigma_beta^2 k / (4 beta^2)
    double var_k_moment_b = 0.0;  ///< a^2 sigma_beta^2 / (4 beta^2)
    double var_k_moment_c = 0.0; ///< a^2 sigma_beta^2 / k
    double var_k_ls = 0.0;           ///< 4 k a^2 sigma_beta^2
};

double stationary_variance(const Kernel& kernel, double k);

/// Throws DomainError for beta outside (1/2, 3/4).
double sigma_beta_sq(double beta);

AsymptoticConstants asymptotic_constants(const Kernel& kernel, double k);

struct ScaledErrors {
    double e_mu = 0.0;     ///< T^(1-beta) (mu_hat - mu)
    double e_mu_ls = 0.0;  ///< T^(1-beta) (mu_ls - mu)
    double e_k = 0.0;      ///< sqrt(T) (k_hat - k)
    double e_k_ls = 0.0;   ///< sqrt(T) (k_ls - k)
};

ScaledErrors scaled_errors(const EstimateSet& est, const VasicekParams& truth, double T,
                           double beta);

}  // namespace gnv
