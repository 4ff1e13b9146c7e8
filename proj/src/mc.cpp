#include "gnv/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "gnv/errors.hpp"
#include "gnv/format.hpp"
#include "gnv/rng.hpp"

namespace gnv {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMaxFailedFraction = 0.2;
constexpr std::size_t kMinCellRows = 20;

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

// Everything that is fixed for one horizon: grid, sampler, oracle correction.
struct HorizonContext {
    double T = 0.0;
    Grid grid;
    std::optional<CirculantFgnSampler> circulant;
    std::optional<CholeskySampler> cholesky;
    double oracle_correction = 0.0;
};

void fill_record(ReplicationRecord& rec, const GaussianPath& noise, const HorizonContext& ctx,
                 const ExperimentConfig& config, const Kernel& kernel) {
    const VasicekPath path = simulate_vasicek(config.params, noise, config.scheme, config.x0);
    const double dt = ctx.grid.dt();
    const double sigma = config.params.sigma;

    const double mu = mu_hat(path.values, dt);
    double k_moment = kNaN;
    std::string k_error;
    try {
        k_moment = k_hat(path.values, dt, kernel, sigma);
    } catch (const Error& e) {
        k_error = e.what();
    }

    rec.results.clear();
    for (IntegralMode mode : config.modes) {
        ModeResult r;
        r.mode = mode;
        r.estimates.mode = mode;
        r.estimates.mu_hat = mu;
        r.estimates.k_hat = k_moment;
        r.estimates.mu_ls = kNaN;
        r.estimates.k_ls = kNaN;
        r.error = k_error;
        try {
            std::optional<double> correction;
            switch (mode) {
                case IntegralMode::pathwise:
                    correction = 0.0;
                    break;
                case IntegralMode::skorohod_oracle:
                    correction = ctx.oracle_correction;
                    break;
                case IntegralMode::skorohod_plugin:
                    if (std::isfinite(k_moment)) {
                        correction = sigma * sigma * skorohod_correction(kernel, k_moment, ctx.T);
                    }
                    break;
            }
            if (correction) {
                const LsEstimate ls = ls_estimates_with_correction(path.values, dt, *correction);
                r.estimates.mu_ls = ls.mu_ls;
                r.estimates.k_ls = ls.k_ls;
                r.estimates.diagnostics.xdx = ls.xdx;
                r.estimates.diagnostics.correction = ls.correction;
            }
        } catch (const Error& e) {
            if (r.error.empty()) {
                r.error = e.what();
            }
        }
        r.errors = scaled_errors(r.estimates, config.params, ctx.T, kernel.beta);
        rec.results.push_back(std::move(r));
    }
}

bool all_finite(const EstimateSet& e) {
    return std::isfinite(e.mu_hat) && std::isfinite(e.k_hat) && std::isfinite(e.mu_ls) &&
           std::isfinite(e.k_ls);
}

double family_estimate(const EstimateSet& e, const std::string& family) {
    if (family == "mu_hat") return e.mu_hat;
    if (family == "k_hat") return e.k_hat;
    if (family == "mu_ls") return e.mu_ls;
    return e.k_ls;
}

double family_error(const ScaledErrors& e, const std::string& family) {
    if (family == "mu_hat") return e.e_mu;
    if (family == "k_hat") return e.e_k;
    if (family == "mu_ls") return e.e_mu_ls;
    return e.e_k_ls;
}

double family_truth(const VasicekParams& p, const std::string& family) {
    return family.rfind("mu", 0) == 0 ? p.mu : p.k;
}

}  // namespace

void ExperimentConfig::validate() const {
    const Kernel k = kernel.make();
    params.validate();
    if (replications < 2) {
        throw ConfigError("need at least 2 replications");
    }
    if (T_list.empty()) {
        throw ConfigError("T_list is empty");
    }
    for (double T : T_list) {
        (void)Grid::from_horizon(T, dt);
    }
    if (modes.empty()) {
        throw ConfigError("no estimator modes selected");
    }
    if (sampler == SamplerMethod::circulant && k.name != "fbm") {
        throw ConfigError("the circulant sampler is exact only for the fbm kernel");
    }
    if (!std::isfinite(x0)) {
        throw DomainError("x0 must be finite");
    }
}

bool ModeResult::ok() const {
    return error.empty() && all_finite(estimates);
}

bool ReplicationRecord::failed() const {
    return std::any_of(results.begin(), results.end(), [](const ModeResult& r) { return !r.ok(); });
}

std::vector<ReplicationRecord> run_experiment(const ExperimentConfig& config, unsigned threads) {
    config.validate();
    const Kernel kernel = config.kernel.make();
    const std::size_t M = config.replications;
    const bool paired = config.sampler == SamplerMethod::circulant;
    const std::size_t tasks_per_T = paired ? (M + 1) / 2 : M;

    std::vector<HorizonContext> contexts;
    contexts.reserve(config.T_list.size());
    for (double T : config.T_list) {
        HorizonContext ctx{T, Grid::from_horizon(T, config.dt), {}, {}, 0.0};
        if (paired) {
            ctx.circulant.emplace(config.kernel.hurst, ctx.grid.n(), ctx.grid.dt());
        } else {
            ctx.cholesky.emplace(kernel, ctx.grid);
        }
        const bool needs_oracle = std::find(config.modes.begin(), config.modes.end(),
                                            IntegralMode::skorohod_oracle) != config.modes.end();
        if (needs_oracle) {
            ctx.oracle_correction = config.params.sigma * config.params.sigma *
                                    skorohod_correction(kernel, config.params.k, T);
        }
        contexts.push_back(std::move(ctx));
    }

    std::vector<ReplicationRecord> records(config.T_list.size() * M);
    for (std::size_t j = 0; j < config.T_list.size(); ++j) {
        for (std::size_t i = 0; i < M; ++i) {
            auto& rec = records[j * M + i];
            rec.index = i;
            rec.T_index = j;
            rec.T = config.T_list[j];
        }
    }

    parallel_for(config.T_list.size() * tasks_per_T, threads, [&](std::size_t task) {
        const std::size_t j = task / tasks_per_T;
        const std::size_t slot = task % tasks_per_T;
        const HorizonContext& ctx = contexts[j];
        if (paired) {
            const std::size_t first = 2 * slot;
            const std::uint64_t seed = replication_seed(config.master_seed, j, first);
            auto [a, b] = ctx.circulant->sample_pair(seed);
            auto& rec_a = records[j * M + first];
            rec_a.seed = seed;
            fill_record(rec_a, a, ctx, config, kernel);
            if (first + 1 < M) {
                auto& rec_b = records[j * M + first + 1];
                rec_b.seed = seed;
                fill_record(rec_b, b, ctx, config, kernel);
            }
        } else {
            const std::uint64_t seed = replication_seed(config.master_seed, j, slot);
            auto& rec = records[j * M + slot];
            rec.seed = seed;
            fill_record(rec, ctx.cholesky->sample(seed), ctx, config, kernel);
        }
    });

    const auto failed = static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(), [](const auto& r) { return r.failed(); }));
    if (static_cast<double>(failed) > kMaxFailedFraction * static_cast<double>(records.size())) {
        std::ostringstream msg;
        msg << failed << " of " << records.size()
            << " replications failed (more than 20%); the horizon is probably too short";
        throw ExperimentError(msg.str());
    }
    return records;
}

std::map<std::string, std::vector<CandidateLaw>> candidate_laws(const Kernel& kernel, double k) {
    std::map<std::string, std::vector<CandidateLaw>> laws;
    laws["mu_hat"] = {{"1/k^2", 1.0 / (k * k)}};
    laws["mu_ls"] = {{"1/k^2", 1.0 / (k * k)}};
    laws["k_hat"] = {};
    laws["k_ls"] = {};
    if (kernel.beta < 0.75) {
        const AsymptoticConstants c = asymptotic_constants(kernel, k);
        laws["k_hat"] = {{"sigma_beta^2*k/(4beta^2)", c.var_k_moment_a},
                         {"a^2*sigma_beta^2/(4beta^2)", c.var_k_moment_b},
                         {"a^2*sigma_beta^2/k", c.var_k_moment_c}};
        laws["k_ls"] = {{"4k*a^2*sigma_beta^2", c.var_k_ls}};
    }
    return laws;
}

const CellSummary& SummaryStats::cell(const std::string& estimator, double T) const {
    for (const auto& c : cells) {
        if (c.estimator == estimator && c.T == T) {
            return c;
        }
    }
    throw ExperimentError("no summary cell for " + estimator + " at T=" + format_double(T));
}

SummaryStats summarize(const std::vector<ReplicationRecord>& records, const ExperimentConfig& config,
                       const std::map<std::string, std::vector<CandidateLaw>>& candidates) {
    if (records.empty()) {
        throw ExperimentError("nothing to summarize: no replication records");
    }
    struct Column {
        std::string estimator;
        std::string family;
        std::size_t mode_slot;
    };
    std::vector<Column> columns{{"mu_hat", "mu_hat", 0}, {"k_hat", "k_hat", 0}};
    for (std::size_t m = 0; m < config.modes.size(); ++m) {
        const std::string suffix(to_string(config.modes[m]));
        columns.push_back({"mu_ls_" + suffix, "mu_ls", m});
        columns.push_back({"k_ls_" + suffix, "k_ls", m});
    }

    SummaryStats summary;
    for (const auto& col : columns) {
        ConsistencyCheck trend;
        trend.estimator = col.estimator;
        for (std::size_t j = 0; j < config.T_list.size(); ++j) {
            const double T = config.T_list[j];
            CellSummary cell;
            cell.estimator = col.estimator;
            cell.family = col.family;
            cell.T = T;
            std::vector<double> scaled;
            std::vector<double> abs_err;
            for (const auto& rec : records) {
                if (rec.T_index != j || col.mode_slot >= rec.results.size()) {
                    continue;
                }
                const ModeResult& r = rec.results[col.mode_slot];
                const double est = family_estimate(r.estimates, col.family);
                const double err = family_error(r.errors, col.family);
                if (std::isfinite(est) && std::isfinite(err)) {
                    scaled.push_back(err);
                    abs_err.push_back(std::abs(est - family_truth(config.params, col.family)));
                } else {
                    ++cell.n_failed;
                }
            }
            cell.n_valid = scaled.size();
            if (scaled.empty()) {
                throw ExperimentError("every replication failed for " + col.estimator +
                                      " at T=" + format_double(T));
            }
            cell.mean = mean(scaled);
            cell.median = median(scaled);
            cell.variance = sample_variance(scaled);
            cell.median_abs_error = median(abs_err);
            cell.ks_evaluated = scaled.size() >= kMinCellRows && cell.variance > 0.0;
            if (cell.ks_evaluated) {
                cell.studentized = ks_normality_studentized(scaled);
                cell.studentized_pass = cell.studentized.p > kKsLevel;
                cell.jarque_bera = jarque_bera(scaled);
            }
            const auto laws = candidates.find(col.family);
            if (laws != candidates.end()) {
                for (const auto& law : laws->second) {
                    CandidateCheck check;
                    check.name = law.name;
                    check.variance = law.variance;
                    check.variance_ratio = cell.variance / law.variance;
                    check.within_factor = check.variance_ratio >= 1.0 / kVarianceFactor &&
                                          check.variance_ratio <= kVarianceFactor;
                    if (cell.ks_evaluated) {
                        check.ks = ks_normality(scaled, std::sqrt(law.variance));
                        check.ks_pass = check.ks.p > kKsLevel;
                    }
                    if (check.within_factor) {
                        cell.matching_candidates.push_back(law.name);
                    }
                    cell.candidates.push_back(std::move(check));
                }
            }
            std::sort(scaled.begin(), scaled.end());
            cell.sorted_errors = std::move(scaled);

            trend.T.push_back(T);
            trend.median_abs_error.push_back(cell.median_abs_error);
            summary.cells.push_back(std::move(cell));
        }
        // order by horizon, then require a strict decrease
        std::vector<std::size_t> order(trend.T.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return trend.T[a] < trend.T[b]; });
        trend.strictly_decreasing = true;
        for (std::size_t i = 1; i < order.size(); ++i) {
            const double now = trend.median_abs_error[order[i]];
            const double before = trend.median_abs_error[order[i - 1]];
            if (!(now < before) && !(now == 0.0 && before == 0.0)) {
                trend.strictly_decreasing = false;
            }
        }
        summary.consistency.push_back(std::move(trend));
    }
    return summary;
}

SummaryStats summarize(const std::vector<ReplicationRecord>& records, const ExperimentConfig& config) {
    const Kernel kernel = config.kernel.make();
    return summarize(records, config, candidate_laws(kernel, config.params.k));
}

}  // namespace gnv
