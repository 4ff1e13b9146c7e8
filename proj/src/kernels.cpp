#include "gnv/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "gnv/errors.hpp"
#include "gnv/format.hpp"

namespace gnv {
namespace {

void require_hurst(double hurst) {
    if (!(hurst > 0.5 && hurst < 1.0)) {
        throw DomainError("Hurst index must lie in (1/2, 1), got " + format_double(hurst));
    }
}

constexpr double kAssumptionTol = 1e-9;

}  // namespace

double Kernel::singular_part(double lag) const {
    return c_beta * std::pow(std::abs(lag), 2.0 * beta - 2.0);
}

double Kernel::phi(double t, double s) const {
    return singular_part(t - s) + perturbation(t, s);
}

Kernel make_fbm_kernel(double hurst) {
    require_hurst(hurst);
    const double h2 = 2.0 * hurst;
    Kernel k;
    k.name = "fbm";
    k.beta = hurst;
    k.c_beta = hurst * (h2 - 1.0);
    k.c_beta_prime = 0.0;
    k.covariance = [h2](double t, double s) {
        return 0.5 * (std::pow(t, h2) + std::pow(s, h2) - std::pow(std::abs(t - s), h2));
    };
    return k;
}

Kernel make_subfbm_kernel(double hurst) {
    require_hurst(hurst);
    const double h2 = 2.0 * hurst;
    const double c = hurst * (h2 - 1.0);
    Kernel k;
    k.name = "subfbm";
    k.beta = hurst;
    k.c_beta = c;
    // (t + s)^(2H-2) <= (2 sqrt(ts))^(2H-2) since 2H - 2 < 0
    k.c_beta_prime = c * std::pow(2.0, h2 - 2.0);
    k.covariance = [h2](double t, double s) {
        return std::pow(t, h2) + std::pow(s, h2) -
               0.5 * (std::pow(t + s, h2) + std::pow(std::abs(t - s), h2));
    };
    k.psi = [c, h2](double t, double s) { return -c * std::pow(t + s, h2 - 2.0); };
    return k;
}

Kernel make_kernel(std::string_view name, double hurst) {
    if (name == "fbm") {
        return make_fbm_kernel(hurst);
    }
    if (name == "subfbm") {
        return make_subfbm_kernel(hurst);
    }
    throw DomainError("unknown kernel '" + std::string(name) + "' (expected fbm or subfbm)");
}

Eigen::MatrixXd increment_covariance_matrix(const Kernel& kernel, const Grid& grid) {
    const auto n = static_cast<Eigen::Index>(grid.n());
    Eigen::MatrixXd cov(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double a = grid.t(static_cast<std::size_t>(i));
        const double b = grid.t(static_cast<std::size_t>(i + 1));
        for (Eigen::Index j = 0; j <= i; ++j) {
            const double c = grid.t(static_cast<std::size_t>(j));
            const double d = grid.t(static_cast<std::size_t>(j + 1));
            const double v = kernel.R(b, d) - kernel.R(b, c) - kernel.R(a, d) + kernel.R(a, c);
            if (!std::isfinite(v)) {
                std::ostringstream msg;
                msg << "kernel '" << kernel.name << "' is not finite near (t, s) = (" << b << ", "
                    << d << ")";
                throw NumericError(msg.str());
            }
            cov(i, j) = v;
            cov(j, i) = v;
        }
    }
    return cov;
}

double increment_bound_constant(const Kernel& kernel) {
    const double b = kernel.beta;
    return kernel.c_beta / (b * (2.0 * b - 1.0)) + kernel.c_beta_prime / (b * b);
}

AssumptionReport check_assumption(const Kernel& kernel, const Grid& grid) {
    AssumptionReport report;
    report.bound = kernel.c_beta_prime;
    const double b = kernel.beta;
    // positive grid times only: (ts)^(b-1) blows up at 0
    for (std::size_t i = 1; i <= grid.n(); ++i) {
        const double t = grid.t(i);
        for (std::size_t j = 1; j < i; ++j) {
            const double s = grid.t(j);
            const double dev = std::abs(kernel.phi(t, s) - kernel.singular_part(t - s));
            const double ratio = dev / std::pow(t * s, b - 1.0);
            if (ratio > report.max_ratio) {
                report.max_ratio = ratio;
                report.worst_t = t;
                report.worst_s = s;
            }

            const double h = 1e-3 * std::min(s, t - s);
            const double fd = (kernel.R(t + h, s + h) - kernel.R(t + h, s - h) -
                               kernel.R(t - h, s + h) + kernel.R(t - h, s - h)) /
                              (4.0 * h * h);
            const double phi = kernel.phi(t, s);
            const double rel = std::abs(fd - phi) / std::max(std::abs(phi), 1e-300);
            report.max_phi_fd_rel_error = std::max(report.max_phi_fd_rel_error, rel);
        }
    }
    report.passes = report.max_ratio <= kernel.c_beta_prime * (1.0 + kAssumptionTol);
    return report;
}

}  // namespace gnv
