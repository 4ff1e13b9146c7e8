#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gnv/estimators.hpp"
#include "gnv/kernels.hpp"
#include "gnv/sampler.hpp"
#include "gnv/stats.hpp"
#include "gnv/vasicek.hpp"

namespace gnv {

struct KernelSpec {
    std::string name = "fbm";
    double hurst = 0.7;

    Kernel make() const { return make_kernel(name, hurst); }
};

struct ExperimentConfig {
    KernelSpec kernel;
    VasicekParams params{1.0, 0.0, 1.0};
    double x0 = 0.0;
    std::vector<double> T_list{100.0};
    double dt = 0.05;
    std::size_t replications = 100;
    std::uint64_t master_seed = 0;
    std::vector<IntegralMode> modes{IntegralMode::pathwise, IntegralMode::skorohod_oracle,
                                    IntegralMode::skorohod_plugin};
    SamplerMethod sampler = SamplerMethod::circulant;
    Scheme scheme = Scheme::exact_recursion;

    /// Throws DomainError / ConfigError on an unusable configuration.
    void validate() const;
};

/// One estimator mode of one replication. Estimates that could not be computed are NaN and
/// the first error message is kept.
struct ModeResult {
    IntegralMode mode = IntegralMode::pathwise;
    EstimateSet estimates;
    ScaledErrors errors;
    std::string error;

    bool ok() const;
};

struct ReplicationRecord {
    std::size_t index = 0;
    std::size_t T_index = 0;
    double T = 0.0;
    std::uint64_t seed = 0;
    std::vector<ModeResult> results;

    bool failed() const;
};

/// Runs every (T, replication) pair. Replication i of horizon j draws its noise from
/// replication_seed(master_seed, j, i); with the circulant sampler the pair (2m, 2m + 1) shares
/// one FFT seeded with index 2m. Output order and content do not depend on `threads`
/// (0 = hardware concurrency). Throws ExperimentError if more than 20% of the rows failed.
std::vector<ReplicationRecord> run_experiment(const ExperimentConfig& config, unsigned threads = 0);

struct CandidateLaw {
    std::string name;
    double variance = 0.0;
};

/// Candidate limit variances keyed by estimator family ("mu_hat", "mu_ls", "k_hat", "k_ls").
/// The k families are empty when beta >= 3/4.
std::map<std::string, std::vector<CandidateLaw>> candidate_laws(const Kernel& kernel, double k);

struct CandidateCheck {
    std::string name;
    double variance = 0.0;
    double variance_ratio = 0.0;  ///< empirical / candidate
    bool within_factor = false;   ///< ratio in [1/1.5, 1.5]
    KsResult ks;
    bool ks_pass = false;         ///< p > 0.01
};

struct CellSummary {
    std::string estimator;  ///< "mu_hat", "k_hat", "mu_ls_<mode>", "k_ls_<mode>"
    std::string family;     ///< "mu_hat", "k_hat", "mu_ls", "k_ls"
    double T = 0.0;
    std::size_t n_valid = 0;
    std::size_t n_failed = 0;
    double mean = 0.0;      ///< of scaled errors
    double median = 0.0;
    double variance = 0.0;
    double median_abs_error = 0.0;  ///< median |estimate - truth|, unscaled
    bool ks_evaluated = false;      ///< false when fewer than 20 valid rows
    KsResult studentized;
    bool studentized_pass = false;
    JarqueBera jarque_bera;
    std::vector<CandidateCheck> candidates;
    std::vector<std::string> matching_candidates;  ///< names with within_factor
    std::vector<double> sorted_errors;
};

struct ConsistencyCheck {
    std::string estimator;
    std::vector<double> T;
    std::vector<double> median_abs_error;
    bool strictly_decreasing = false;  ///< error falls strictly with every increase of T (or stays at 0)
};

struct SummaryStats {
    std::vector<CellSummary> cells;
    std::vector<ConsistencyCheck> consistency;

    const CellSummary& cell(const std::string& estimator, double T) const;
};

inline constexpr double kKsLevel = 0.01;
inline constexpr double kVarianceFactor = 1.5;

SummaryStats summarize(const std::vector<ReplicationRecord>& records, const ExperimentConfig& config,
                       const std::map<std::string, std::vector<CandidateLaw>>& candidates);

SummaryStats summarize(const std::vector<ReplicationRecord>& records, const ExperimentConfig& config);

}  // namespace gnv
