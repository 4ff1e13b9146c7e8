#include "gnv/estimators.hpp"

#include <cmath>
#include <string>

#include "gnv/errors.hpp"
#include "gnv/format.hpp"
#include "gnv/quadrature.hpp"

namespace gnv {
namespace {

constexpr double kCorrectionTol = 1e-10;

void require_path(std::span<const double> x, double dt) {
    if (x.size() < 2) {
        throw ShapeError("path needs at least two grid points");
    }
    if (!(dt > 0.0)) {
        throw DomainError("grid step must be positive");
    }
}

double horizon(std::span<const double> x, double dt) {
    return static_cast<double>(x.size() - 1) * dt;
}

double integral_of_squares(std::span<const double> x, double dt) {
    double acc = 0.5 * (x.front() * x.front() + x.back() * x.back());
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        acc += x[i] * x[i];
    }
    return acc * dt;
}

// c_beta int_0^T (T - u) e^{-ku} u^(2b-2) du
double stationary_part(const Kernel& kernel, double k, double T) {
    const double alpha = 2.0 * kernel.beta - 2.0;
    const auto f = [k, T](double u) { return (T - u) * std::exp(-k * u); };
    return kernel.c_beta * integrate_left_singular(f, alpha, 0.0, T, kCorrectionTol);
}

// int_0^T int_0^t e^{-k(t-s)} psi(s, t) ds dt. With |psi| <= C (st)^(b-1) the inner integrand
// is desingularised at s = 0, and the inner value, of order t^(2b-1), at t = 0.
double perturbation_part(const Kernel& kernel, double k, double T) {
    const double alpha = kernel.beta - 1.0;
    const double outer_alpha = 2.0 * kernel.beta - 2.0;
    const auto inner = [&](double t) {
        if (t <= 0.0) {
            return 0.0;
        }
        const auto f = [&](double s) {
            return s > 0.0 ? std::exp(-k * (t - s)) * kernel.perturbation(s, t) * std::pow(s, -alpha)
                           : 0.0;
        };
        return integrate_left_singular(f, alpha, 0.0, t, kCorrectionTol) * std::pow(t, -outer_alpha);
    };
    return integrate_left_singular(inner, outer_alpha, 0.0, T, 1e-9);
}

}  // namespace

std::string_view to_string(IntegralMode mode) {
    switch (mode) {
        case IntegralMode::pathwise:
            return "pathwise";
        case IntegralMode::skorohod_oracle:
            return "skorohod_oracle";
        case IntegralMode::skorohod_plugin:
            return "skorohod_plugin";
    }
    return "pathwise";
}

IntegralMode parse_integral_mode(std::string_view name) {
    if (name == "pathwise") {
        return IntegralMode::pathwise;
    }
    if (name == "skorohod_oracle") {
        return IntegralMode::skorohod_oracle;
    }
    if (name == "skorohod_plugin") {
        return IntegralMode::skorohod_plugin;
    }
    throw ConfigError("unknown mode '" + std::string(name) +
                      "' (expected pathwise, skorohod_oracle or skorohod_plugin)");
}

double integral_trapezoid(std::span<const double> values, double dt) {
    require_path(values, dt);
    double acc = 0.5 * (values.front() + values.back());
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        acc += values[i];
    }
    return acc * dt;
}

double mu_hat(std::span<const double> x, double dt) {
    return integral_trapezoid(x, dt) / horizon(x, dt);
}

double k_from_variance(double variance, const Kernel& kernel, double sigma) {
    if (!(variance > 0.0)) {
        throw NonPositiveVariance("empirical variance " + format_double(variance) +
                                  " is not positive; path too short or degenerate");
    }
    const double scale = sigma * sigma * kernel.c_beta * std::tgamma(2.0 * kernel.beta - 1.0);
    return std::pow(variance / scale, -1.0 / (2.0 * kernel.beta));
}

double k_hat(std::span<const double> x, double dt, const Kernel& kernel, double sigma) {
    require_path(x, dt);
    const double T = horizon(x, dt);
    const double m1 = integral_trapezoid(x, dt) / T;
    const double m2 = integral_of_squares(x, dt) / T;
    return k_from_variance(m2 - m1 * m1, kernel, sigma);
}

double xdx_forward(std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        acc += x[i] * (x[i + 1] - x[i]);
    }
    return acc;
}

double xdx_pathwise(std::span<const double> x) {
    if (x.empty()) {
        return 0.0;
    }
    return 0.5 * (x.back() * x.back() - x.front() * x.front());
}

double skorohod_correction(const Kernel& kernel, double k, double T) {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("Skorohod correction needs k > 0, got " + format_double(k));
    }
    if (!(T >= 0.0) || !std::isfinite(T)) {
        throw DomainError("Skorohod correction needs T >= 0");
    }
    if (T == 0.0) {
        return 0.0;
    }
    double value = stationary_part(kernel, k, T);
    if (kernel.has_perturbation()) {
        value += perturbation_part(kernel, k, T);
    }
    return value;
}

LsEstimate ls_estimates_with_correction(std::span<const double> x, double dt, double correction) {
    require_path(x, dt);
    const double T = horizon(x, dt);
    const double i1 = integral_trapezoid(x, dt);
    const double i2 = integral_of_squares(x, dt);
    const double x_T = x.back();

    LsEstimate out;
    out.xdx = xdx_pathwise(x);
    out.correction = correction;
    const double j = out.xdx - correction;

    const double k_den = T * i2 - i1 * i1;
    if (!(k_den > 0.0)) {
        throw DegenerateDesign("T int X^2 - (int X)^2 = " + format_double(k_den) + " is not positive");
    }
    const double k_num = x_T * i1 - T * j;
    if (k_num == 0.0) {
        throw DegenerateDesign("X_T int X - T int X dX vanishes; mu_ls undefined");
    }
    out.k_ls = k_num / k_den;
    out.mu_ls = (x_T * i2 - j * i1) / k_num;
    return out;
}

LsEstimate ls_estimates(std::span<const double> x, double dt, IntegralMode mode,
                        const Kernel& kernel, std::optional<double> k_for_correction, double sigma) {
    require_path(x, dt);
    const double T = horizon(x, dt);
    double correction = 0.0;
    switch (mode) {
        case IntegralMode::pathwise:
            break;
        case IntegralMode::skorohod_oracle:
            if (!k_for_correction) {
                throw DomainError("skorohod_oracle mode needs the true k for the correction");
            }
            correction = sigma * sigma * skorohod_correction(kernel, *k_for_correction, T);
            break;
        case IntegralMode::skorohod_plugin:
            correction = sigma * sigma * skorohod_correction(kernel, k_hat(x, dt, kernel, sigma), T);
            break;
    }
    return ls_estimates_with_correction(x, dt, correction);
}

EstimateSet estimate_all(std::span<const double> x, double dt, const Kernel& kernel,
                         IntegralMode mode, std::optional<double> true_k, double sigma) {
    require_path(x, dt);
    EstimateSet est;
    est.mode = mode;
    const double T = horizon(x, dt);
    est.diagnostics.mean_X = integral_trapezoid(x, dt) / T;
    est.diagnostics.mean_X2 = integral_of_squares(x, dt) / T;
    est.mu_hat = est.diagnostics.mean_X;
    est.k_hat = k_hat(x, dt, kernel, sigma);
    const LsEstimate ls = ls_estimates(x, dt, mode, kernel, true_k, sigma);
    est.k_ls = ls.k_ls;
    est.mu_ls = ls.mu_ls;
    est.diagnostics.xdx = ls.xdx;
    est.diagnostics.correction = ls.correction;
    return est;
}

double stationary_variance(const Kernel& kernel, double k) {
    if (!(k > 0.0)) {
        throw DomainError("stationary variance needs k > 0");
    }
    return kernel.c_beta * std::tgamma(2.0 * kernel.beta - 1.0) * std::pow(k, -2.0 * kernel.beta);
}

double sigma_beta_sq(double beta) {
    if (!(beta > 0.5 && beta < 0.75)) {
        throw DomainError("sigma_beta^2 is defined for beta in (1/2, 3/4), got " + format_double(beta));
    }
    const double ratio = std::tgamma(3.0 - 4.0 * beta) * std::tgamma(4.0 * beta - 1.0) /
                         (std::tgamma(2.0 * beta) * std::tgamma(2.0 - 2.0 * beta));
    return (4.0 * beta - 1.0) * (1.0 + ratio);
}

AsymptoticConstants asymptotic_constants(const Kernel& kernel, double k) {
    AsymptoticConstants c;
    const double b = kernel.beta;
    c.sigma_beta_sq = sigma_beta_sq(b);
    c.a = stationary_variance(kernel, k);
    c.var_mu = 1.0 / (k * k);
    c.var_k_moment_a = c.sigma_beta_sq * k / (4.0 * b * b);
    c.var_k_moment_b = c.a * c.a * c.sigma_beta_sq / (4.0 * b * b);
    c.var_k_moment_c = c.a * c.a * c.sigma_beta_sq / k;
    c.var_k_ls = 4.0 * k * c.a * c.a * c.sigma_beta_sq;
    return c;
}

ScaledErrors scaled_errors(const EstimateSet& est, const VasicekParams& truth, double T,
                           double beta) {
    const double mu_rate = std::pow(T, 1.0 - beta);
    const double k_rate = std::sqrt(T);
    return {mu_rate * (est.mu_hat - truth.mu), mu_rate * (est.mu_ls - truth.mu),
            k_rate * (est.k_hat - truth.k), k_rate * (est.k_ls - truth.k)};
}

}  // namespace gnv
