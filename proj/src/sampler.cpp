#include "gnv/sampler.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <string>

#include "fft.hpp"
#include "gnv/errors.hpp"
#include "gnv/format.hpp"
#include "gnv/rng.hpp"

namespace gnv {

std::string_view to_string(SamplerMethod method) {
    return method == SamplerMethod::cholesky ? "cholesky" : "circulant";
}

SamplerMethod parse_sampler_method(std::string_view name) {
    if (name == "cholesky") {
        return SamplerMethod::cholesky;
    }
    if (name == "circulant") {
        return SamplerMethod::circulant;
    }
    throw ConfigError("unknown sampler '" + std::string(name) + "' (expected cholesky or circulant)");
}

// ---------------------------------------------------------------------------------------------
// Cholesky

CholeskySampler::CholeskySampler(const Kernel& kernel, const Grid& grid) : grid_(grid) {
    const Eigen::MatrixXd cov = increment_covariance_matrix(kernel, grid);
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) {
        const double scale = cov.trace() / static_cast<double>(cov.rows());
        bool ok = false;
        for (double eps : std::array{1e-12, 1e-10, 1e-8}) {
            jitter_ = eps * scale;
            Eigen::MatrixXd jittered = cov;
            jittered.diagonal().array() += jitter_;
            llt.compute(jittered);
            if (llt.info() == Eigen::Success) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            throw DecompositionError("increment covariance of kernel '" + kernel.name +
                                     "' is not positive definite after jitter 1e-8 * trace/n");
        }
    }
    lower_ = llt.matrixL();
}

GaussianPath CholeskySampler::sample(std::uint64_t seed) const {
    const std::size_t n = grid_.n();
    Engine engine = make_engine(seed);
    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    fill_standard_normal(engine, std::span<double>(z.data(), n));
    const Eigen::VectorXd increments = lower_.triangularView<Eigen::Lower>() * z;

    GaussianPath path{grid_, std::vector<double>(n + 1, 0.0), seed, SamplerMethod::cholesky};
    for (std::size_t i = 0; i < n; ++i) {
        path.values[i + 1] = path.values[i] + increments(static_cast<Eigen::Index>(i));
    }
    return path;
}

GaussianPath sample_path_cholesky(const Kernel& kernel, const Grid& grid, std::uint64_t seed) {
    return CholeskySampler(kernel, grid).sample(seed);
}

// ---------------------------------------------------------------------------------------------
// Circulant embedding

std::vector<double> fgn_autocovariance(double hurst, std::size_t count, double dt) {
    const double h2 = 2.0 * hurst;
    const double scale = 0.5 * std::pow(dt, h2);
    std::vector<double> gamma(count);
    for (std::size_t j = 0; j < count; ++j) {
        const double x = static_cast<double>(j);
        gamma[j] = scale * (std::pow(x + 1.0, h2) - 2.0 * std::pow(x, h2) +
                            std::pow(std::abs(x - 1.0), h2));
    }
    return gamma;
}

CirculantFgnSampler::CirculantFgnSampler(double hurst, std::size_t n, double dt)
    : hurst_(hurst), grid_(n, dt) {
    if (!(hurst > 0.5 && hurst < 1.0)) {
        throw DomainError("circulant fGn sampler needs H in (1/2, 1), got " + format_double(hurst));
    }
    const std::size_t m = std::bit_ceil(n);
    const std::size_t size = 2 * m;
    // first row of the circulant: gamma(0..m), then gamma(m-1..1)
    const std::vector<double> gamma = fgn_autocovariance(hurst, m + 1, 1.0);
    std::vector<std::complex<double>> row(size);
    for (std::size_t j = 0; j <= m; ++j) {
        row[j] = gamma[j];
    }
    for (std::size_t j = m + 1; j < size; ++j) {
        row[j] = gamma[size - j];
    }
    const auto spectrum = detail::forward_dft(row);

    eigenvalues_.resize(size);
    double max_eig = 0.0;
    double min_eig = 0.0;
    for (std::size_t j = 0; j < size; ++j) {
        eigenvalues_[j] = spectrum[j].real();
        max_eig = std::max(max_eig, eigenvalues_[j]);
        min_eig = std::min(min_eig, eigenvalues_[j]);
    }
    if (min_eig < -1e-10 * max_eig) {
        throw EmbeddingError("circulant embedding has negative eigenvalue " + format_double(min_eig));
    }
    for (double& e : eigenvalues_) {
        e = std::max(e, 0.0);
    }
}

std::pair<GaussianPath, GaussianPath> CirculantFgnSampler::sample_pair(std::uint64_t seed) const {
    const std::size_t size = eigenvalues_.size();
    const std::size_t n = grid_.n();
    Engine engine = make_engine(seed);
    std::vector<double> z(2 * size);
    fill_standard_normal(engine, z);

    std::vector<std::complex<double>> weighted(size);
    const double norm = 1.0 / static_cast<double>(size);
    for (std::size_t j = 0; j < size; ++j) {
        const double w = std::sqrt(eigenvalues_[j] * norm);
        weighted[j] = {w * z[2 * j], w * z[2 * j + 1]};
    }
    const auto noise = detail::forward_dft(weighted);

    const double scale = std::pow(grid_.dt(), hurst_);
    std::pair<GaussianPath, GaussianPath> out{
        GaussianPath{grid_, std::vector<double>(n + 1, 0.0), seed, SamplerMethod::circulant},
        GaussianPath{grid_, std::vector<double>(n + 1, 0.0), seed, SamplerMethod::circulant}};
    for (std::size_t i = 0; i < n; ++i) {
        out.first.values[i + 1] = out.first.values[i] + scale * noise[i].real();
        out.second.values[i + 1] = out.second.values[i] + scale * noise[i].imag();
    }
    return out;
}

GaussianPath sample_fgn_circulant(double hurst, std::size_t n, double dt, std::uint64_t seed) {
    return CirculantFgnSampler(hurst, n, dt).sample(seed);
}

// ---------------------------------------------------------------------------------------------

std::vector<double> empirical_covariance(std::span<const GaussianPath> paths,
                                         std::span<const std::pair<std::size_t, std::size_t>> idx_pairs) {
    if (paths.size() < 2) {
        throw ShapeError("empirical covariance needs at least two paths");
    }
    const Grid& grid = paths.front().grid;
    for (const auto& p : paths) {
        if (!(p.grid == grid) || p.values.size() != grid.size()) {
            throw ShapeError("paths do not share a common grid");
        }
    }
    const double m = static_cast<double>(paths.size());
    std::vector<double> out;
    out.reserve(idx_pairs.size());
    for (const auto& [i, j] : idx_pairs) {
        if (i >= grid.size() || j >= grid.size()) {
            throw ShapeError("index pair (" + std::to_string(i) + ", " + std::to_string(j) +
                             ") outside grid of size " + std::to_string(grid.size()));
        }
        double mean_i = 0.0;
        double mean_j = 0.0;
        for (const auto& p : paths) {
            mean_i += p.values[i];
            mean_j += p.values[j];
        }
        mean_i /= m;
        mean_j /= m;
        double acc = 0.0;
        for (const auto& p : paths) {
            acc += (p.values[i] - mean_i) * (p.values[j] - mean_j);
        }
        out.push_back(acc / (m - 1.0));
    }
    return out;
}

}  // namespace gnv
