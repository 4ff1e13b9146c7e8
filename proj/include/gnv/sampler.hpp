#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "gnv/grid.hpp"
#include "gnv/kernels.hpp"

namespace gnv {

enum class SamplerMethod { cholesky, circulant };

std::string_view to_string(SamplerMethod method);
SamplerMethod parse_sampler_method(std::string_view name);

/// Sample of G on a grid. values[0] == 0 because R(0, 0) = 0.
struct GaussianPath {
    Grid grid;
    std::vector<double> values;
    std::uint64_t seed = 0;
    SamplerMethod method = SamplerMethod::cholesky;
};

/// Exact sampler for an arbitrary kernel: factors the increment covariance once and draws
/// correlated increments, which are then cumulatively summed.
///
/// Factorisation retries with diagonal jitter eps * trace / n for eps in {1e-12, 1e-10, 1e-8}
/// before giving up with DecompositionError.
class CholeskySampler {
public:
    CholeskySampler(const Kernel& kernel, const Grid& grid);

    GaussianPath sample(std::uint64_t seed) const;

    const Grid& grid() const noexcept { return grid_; }
    /// Jitter that was added to the diagonal (0 if none was needed).
    double jitter() const noexcept { return jitter_; }

private:
    Grid grid_;
    Eigen::MatrixXd lower_;
    double jitter_ = 0.0;
};

GaussianPath sample_path_cholesky(const Kernel& kernel, const Grid& grid, std::uint64_t seed);

/// Autocovariance of fractional Gaussian noise with step dt at lags 0..count-1:
/// gamma(j) = dt^(2H) / 2 (|j+1|^(2H) - 2|j|^(2H) + |j-1|^(2H)).
std::vector<double> fgn_autocovariance(double hurst, std::size_t count, double dt);

/// Circulant-embedding (Davies-Harte / Wood-Chan) sampler for fBm. One FFT of length 2m,
/// m = next power of two >= n, yields two independent exact paths.
class CirculantFgnSampler {
public:
    CirculantFgnSampler(double hurst, std::size_t n, double dt);

    /// Two independent paths; both carry `seed`.
    std::pair<GaussianPath, GaussianPath> sample_pair(std::uint64_t seed) const;
    GaussianPath sample(std::uint64_t seed) const { return sample_pair(seed).first; }

    const Grid& grid() const noexcept { return grid_; }
    std::size_t embedding_size() const noexcept { return eigenvalues_.size(); }
    /// Circulant eigenvalues after clamping round-off negatives to zero.
    const std::vector<double>& eigenvalues() const noexcept { return eigenvalues_; }

private:
    double hurst_;
    Grid grid_;
    std::vector<double> eigenvalues_;
};

GaussianPath sample_fgn_circulant(double hurst, std::size_t n, double dt, std::uint64_t seed);

/// Unbiased sample covariance of (values[i], values[j]) across paths, one entry per pair.
std::vector<double> empirical_covariance(std::span<const GaussianPath> paths,
                                         std::span<const std::pair<std::size_t, std::size_t>> idx_pairs);

}  // namespace gnv
