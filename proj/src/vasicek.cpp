#include "gnv/vasicek.hpp"

#include <cmath>
#include <string>

#include "gnv/errors.hpp"
#include "gnv/format.hpp"

namespace gnv {

void VasicekParams::validate() const {
    if (!(k > 0.0) || !std::isfinite(k)) {
        throw DomainError("mean-reversion speed k must be positive, got " + format_double(k));
    }
    if (!std::isfinite(mu)) {
        throw DomainError("long-run mean mu must be finite");
    }
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw DomainError("noise scale sigma must be positive, got " + format_double(sigma));
    }
}

std::string_view to_string(Scheme scheme) {
    return scheme == Scheme::exact_recursion ? "exact_recursion" : "euler";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "exact_recursion" || name == "exact") {
        return Scheme::exact_recursion;
    }
    if (name == "euler") {
        return Scheme::euler;
    }
    throw ConfigError("unknown scheme '" + std::string(name) + "' (expected exact_recursion or euler)");
}

VasicekPath simulate_vasicek(const VasicekParams& params, const Grid& grid,
                             std::span<const double> g, Scheme scheme, double x0) {
    params.validate();
    if (g.size() != grid.size()) {
        throw ShapeError("noise has " + std::to_string(g.size()) + " values, grid has " +
                         std::to_string(grid.size()));
    }
    const double dt = grid.dt();
    const double kdt = params.k * dt;
    if (kdt >= 10.0) {
        throw StiffnessError("k * dt = " + format_double(kdt) + " >= 10; refine the grid");
    }

    VasicekPath path{grid, std::vector<double>(grid.size()), params, scheme};
    auto& x = path.values;
    x[0] = x0;
    const std::size_t n = grid.n();
    if (scheme == Scheme::exact_recursion) {
        const double decay = std::exp(-kdt);
        const double level = params.mu * -std::expm1(-kdt);
        const double weight = params.sigma * std::exp(-0.5 * kdt);
        for (std::size_t i = 0; i < n; ++i) {
            x[i + 1] = decay * x[i] + level + weight * (g[i + 1] - g[i]);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            x[i + 1] = x[i] + kdt * (params.mu - x[i]) + params.sigma * (g[i + 1] - g[i]);
        }
    }
    return path;
}

FDecomposition decompose_F(const GaussianPath& g, double k) {
    if (!(k > 0.0)) {
        throw DomainError("decompose_F needs k > 0");
    }
    const Grid& grid = g.grid;
    const std::size_t n = grid.n();
    const double dt = grid.dt();
    const double decay = std::exp(-k * dt);
    const double T = grid.T();

    // inner_j = sum_{i<j} e^{-k(t_j - t_i)} dG_i, advanced by one-step decay
    FDecomposition out;
    double inner = 0.0;
    double outer = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        outer += inner;
        inner = decay * (inner + (g.values[j + 1] - g.values[j]));
    }
    out.F_T = dt * outer;

    for (std::size_t i = 0; i < n; ++i) {
        out.Z_T += std::exp(-k * (T - grid.t(i))) * (g.values[i + 1] - g.values[i]);
    }
    const double G_T = g.values[n];
    out.residual = std::abs(out.F_T - (G_T - out.Z_T) / k);
    return out;
}

}  // namespace gnv
