#pragma once

#include <cstddef>
#include <vector>

namespace gnv {

/// Uniform time grid {i * dt : i = 0..n} on [0, T], T = n * dt.
class Grid {
public:
    Grid(std::size_t n, double dt);

    /// Grid with step dt covering [0, T]; T must be a multiple of dt to within 1e-9 (relative).
    static Grid from_horizon(double T, double dt);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return n_ + 1; }
    double dt() const noexcept { return dt_; }
    double T() const noexcept { return static_cast<double>(n_) * dt_; }
    double t(std::size_t i) const noexcept { return static_cast<double>(i) * dt_; }

    std::vector<double> times() const;

    bool operator==(const Grid& other) const noexcept = default;

private:
    std::size_t n_;
    double dt_;
};

}  // namespace gnv
