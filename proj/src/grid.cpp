#include "gnv/grid.hpp"

#include <cmath>
#include <string>

#include "gnv/errors.hpp"
#include "gnv/format.hpp"

namespace gnv {

Grid::Grid(std::size_t n, double dt) : n_(n), dt_(dt) {
    if (n == 0) {
        throw DomainError("grid needs at least one step");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw DomainError("grid step must be positive and finite, got " + format_double(dt));
    }
}

Grid Grid::from_horizon(double T, double dt) {
    if (!(T > 0.0) || !(dt > 0.0) || !std::isfinite(T) || !std::isfinite(dt)) {
        throw DomainError("horizon and step must be positive and finite");
    }
    const double steps = T / dt;
    const double rounded = std::round(steps);
    if (rounded < 1.0 || std::abs(steps - rounded) > 1e-9 * std::max(1.0, steps)) {
        throw DomainError("horizon " + format_double(T) + " is not a multiple of step " +
                          format_double(dt));
    }
    return Grid(static_cast<std::size_t>(rounded), dt);
}

std::vector<double> Grid::times() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = t(i);
    }
    return out;
}

}  // namespace gnv
