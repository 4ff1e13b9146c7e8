#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "gnv/grid.hpp"
#include "gnv/sampler.hpp"

namespace gnv {

/// dX = k (mu - X) dt + sigma dG, X_0 = x0 (0 unless overridden).
struct VasicekParams {
    double k = 1.0;
    double mu = 0.0;
    double sigma = 1.0;

    /// Throws DomainError unless k > 0 and sigma > 0 (all finite).
    void validate() const;
};

enum class Scheme { exact_recursion, euler };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

struct VasicekPath {
    Grid grid;
    std::vector<double> values;
    VasicekParams params;
    Scheme scheme = Scheme::exact_recursion;
};

/// Drives the Vasicek dynamics with the noise values `g` (g[0] == 0) on `grid`.
///
/// exact_recursion:  X_{i+1} = e^{-k dt} X_i + mu (1 - e^{-k dt}) + sigma e^{-k dt / 2} dG_i
/// euler:            X_{i+1} = X_i + k (mu - X_i) dt + sigma dG_i
///
/// The exact recursion carries the drift exactly and weights each noise increment at the
/// midpoint of its step. Throws StiffnessError when k dt >= 10.
VasicekPath simulate_vasicek(const VasicekParams& params, const Grid& grid,
                             std::span<const double> g, Scheme scheme, double x0 = 0.0);

inline VasicekPath simulate_vasicek(const VasicekParams& params, const GaussianPath& g,
                                    Scheme scheme, double x0 = 0.0) {
    return simulate_vasicek(params, g.grid, g.values, scheme, x0);
}

/// F_T = int_0^T e^{-kt} int_0^t e^{ks} dG_s dt computed two ways on the grid: as a double
/// Riemann sum, and through the Fubini identity F_T = (G_T - Z_T) / k with
/// Z_T = int_0^T e^{-k(T-s)} dG_s.
struct FDecomposition {
    double F_T = 0.0;  ///< double Riemann sum
    double Z_T = 0.0;  ///< left-point sum
    double residual = 0.0;  ///< |F_T - (G_T - Z_T) / k|
};

FDecomposition decompose_F(const GaussianPath& g, double k);

}  // namespace gnv
