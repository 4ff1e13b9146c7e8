#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "gnv/errors.hpp"
#include "gnv/mc.hpp"
#include "gnv/report.hpp"
#include "gnv/rng.hpp"
#include "gnv/vasicek.hpp"

using namespace gnv;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.params = {1.0, 2.0, 1.0};
    c.T_list = {20.0, 40.0};
    c.dt = 0.05;
    c.replications = 24;
    c.master_seed = 77;
    return c;
}

std::string as_csv(const std::vector<ReplicationRecord>& records) {
    std::ostringstream s;
    write_replications_csv(s, records);
    return s.str();
}

// Records whose scaled errors are drawn from N(0, v) for each family.
std::vector<ReplicationRecord> synthetic_records(const ExperimentConfig& cfg, double v_mu, double v_k,
                                                 double v_k_ls, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    const double beta = cfg.kernel.hurst;
    std::vector<ReplicationRecord> out;
    for (std::size_t j = 0; j < cfg.T_list.size(); ++j) {
        const double T = cfg.T_list[j];
        for (std::size_t i = 0; i < cfg.replications; ++i) {
            ReplicationRecord rec;
            rec.index = i;
            rec.T_index = j;
            rec.T = T;
            rec.seed = i;
            const double e_mu = std::sqrt(v_mu) * nd(rng);
            const double e_k = std::sqrt(v_k) * nd(rng);
            for (auto mode : cfg.modes) {
                ModeResult r;
                r.mode = mode;
                r.errors.e_mu = e_mu;
                r.errors.e_k = e_k;
                r.errors.e_mu_ls = std::sqrt(v_mu) * nd(rng);
                r.errors.e_k_ls = std::sqrt(v_k_ls) * nd(rng);
                r.estimates.mode = mode;
                r.estimates.mu_hat = cfg.params.mu + r.errors.e_mu / std::pow(T, 1 - beta);
                r.estimates.mu_ls = cfg.params.mu + r.errors.e_mu_ls / std::pow(T, 1 - beta);
                r.estimates.k_hat = cfg.params.k + r.errors.e_k / std::sqrt(T);
                r.estimates.k_ls = cfg.params.k + r.errors.e_k_ls / std::sqrt(T);
                rec.results.push_back(r);
            }
            out.push_back(std::move(rec));
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("mc") {

TEST_CASE("configuration validation") {
    ExperimentConfig c = small_config();
    CHECK_NOTHROW(c.validate());
    c.replications = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.T_list = {20.01};
    CHECK_THROWS_AS(c.validate(), DomainError);
    c = small_config();
    c.params.sigma = 0.0;
    CHECK_THROWS_AS(c.validate(), DomainError);
    CHECK_THROWS_AS(run_experiment(c), DomainError);
    c = small_config();
    c.modes.clear();
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = small_config();
    c.kernel.name = "subfbm";
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c.sampler = SamplerMethod::cholesky;
    CHECK_NOTHROW(c.validate());
    c.kernel.hurst = 1.1;
    CHECK_THROWS_AS(c.validate(), DomainError);
}

TEST_CASE("runs are deterministic and independent of the thread count") {
    ExperimentConfig c = small_config();
    c.replications = 2;
    CHECK(as_csv(run_experiment(c, 1)) == as_csv(run_experiment(c, 1)));

    c = small_config();
    c.replications = 25;
    const auto one = run_experiment(c, 1);
    const auto four = run_experiment(c, 4);
    CHECK(as_csv(one) == as_csv(four));
    CHECK(summary_to_json(summarize(one, c), c).dump() == summary_to_json(summarize(four, c), c).dump());
    CHECK(one.size() == c.T_list.size() * c.replications);
}

TEST_CASE("a record is reproducible from the configuration and its index") {
    for (auto method : {SamplerMethod::circulant, SamplerMethod::cholesky}) {
        ExperimentConfig c = small_config();
        c.sampler = method;
        c.replications = 7;
        const auto records = run_experiment(c, 2);
        const Kernel kernel = c.kernel.make();
        for (const auto& rec : records) {
            const Grid grid = Grid::from_horizon(rec.T, c.dt);
            const GaussianPath g = [&] {
                if (method == SamplerMethod::circulant) {
                    const std::uint64_t seed = replication_seed(c.master_seed, rec.T_index, 2 * (rec.index / 2));
                    CHECK(rec.seed == seed);
                    const auto pair = CirculantFgnSampler(c.kernel.hurst, grid.n(), grid.dt()).sample_pair(seed);
                    return rec.index % 2 == 0 ? pair.first : pair.second;
                }
                const std::uint64_t seed = replication_seed(c.master_seed, rec.T_index, rec.index);
                CHECK(rec.seed == seed);
                return sample_path_cholesky(kernel, grid, seed);
            }();
            const auto x = simulate_vasicek(c.params, g, c.scheme, c.x0);
            for (const auto& r : rec.results) {
                const auto e = estimate_all(x.values, grid.dt(), kernel, r.mode, c.params.k, c.params.sigma);
                CHECK(r.ok());
                CHECK(r.estimates.mu_hat == e.mu_hat);
                CHECK(r.estimates.k_hat == e.k_hat);
                CHECK(r.estimates.mu_ls == doctest::Approx(e.mu_ls).epsilon(1e-12));
                CHECK(r.estimates.k_ls == doctest::Approx(e.k_ls).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("distinct replications use distinct noise") {
    ExperimentConfig c = small_config();
    c.replications = 6;
    c.T_list = {20.0};
    const auto r = run_experiment(c, 1);
    for (std::size_t i = 1; i < r.size(); ++i) {
        CHECK(r[i].results[0].estimates.mu_hat != r[i - 1].results[0].estimates.mu_hat);
    }
}

TEST_CASE("summary of exact estimators") {
    ExperimentConfig c = small_config();
    auto records = synthetic_records(c, 0.0, 0.0, 0.0, 1);
    const auto s = summarize(records, c);
    const auto& mu = s.cell("mu_hat", 20.0);
    CHECK(mu.mean == 0.0);
    CHECK(mu.variance == 0.0);
    CHECK(mu.median_abs_error == 0.0);
    CHECK_FALSE(mu.ks_evaluated);
    for (const auto& t : s.consistency) CHECK(t.strictly_decreasing);
}

TEST_CASE("synthetic errors from the claimed laws pass every KS check") {
    ExperimentConfig c = small_config();
    c.params.k = 2.0;
    c.T_list = {100.0};
    c.replications = 1000;
    const auto laws = candidate_laws(c.kernel.make(), c.params.k);
    const double v_mu = laws.at("mu_hat").front().variance;
    CHECK(v_mu == 0.25);
    const double v_k = laws.at("k_hat").front().variance;
    const double v_k_ls = laws.at("k_ls").front().variance;
    const auto s = summarize(synthetic_records(c, v_mu, v_k, v_k_ls, 2), c, laws);
    for (const auto& cell : s.cells) {
        INFO(cell.estimator);
        CHECK(cell.ks_evaluated);
        CHECK(cell.studentized.p > 0.05);
        CHECK(cell.studentized.p <= 1.0);
        CHECK(cell.variance >= 0.0);
        // the law the errors were drawn from fits
        REQUIRE(!cell.candidates.empty());
        CHECK(cell.candidates.front().ks.p > 0.05);
        CHECK(cell.candidates.front().within_factor);
    }
    // the three k_hat candidates are far enough apart to be told apart
    const auto& kh = s.cell("k_hat", 100.0);
    REQUIRE(kh.candidates.size() == 3);
    CHECK(kh.matching_candidates == std::vector<std::string>{kh.candidates[0].name});
    CHECK_FALSE(kh.candidates[1].ks_pass);
}

TEST_CASE("failed rows are counted, an all-failed cell is an error") {
    ExperimentConfig c = small_config();
    c.T_list = {20.0};
    c.replications = 30;
    auto records = synthetic_records(c, 1.0, 1.0, 1.0, 3);
    for (std::size_t i = 0; i < 5; ++i) {
        records[i].results[0].estimates.k_hat = std::nan("");
        records[i].results[0].errors.e_k = std::nan("");
        records[i].results[0].error = "empirical variance not positive";
        CHECK(records[i].failed());
    }
    const auto s = summarize(records, c);
    CHECK(s.cell("k_hat", 20.0).n_failed == 5);
    CHECK(s.cell("k_hat", 20.0).n_valid == 25);
    CHECK(s.cell("mu_hat", 20.0).n_failed == 0);

    for (auto& r : records) {
        r.results[0].estimates.k_hat = std::nan("");
        r.results[0].errors.e_k = std::nan("");
    }
    CHECK_THROWS_AS(summarize(records, c), ExperimentError);
    CHECK_THROWS_AS(summarize({}, c), ExperimentError);
    CHECK_THROWS_AS(s.cell("k_hat", 99.0), ExperimentError);
}

TEST_CASE("small cells skip the KS tests") {
    ExperimentConfig c = small_config();
    c.T_list = {20.0};
    c.replications = 10;
    const auto s = summarize(synthetic_records(c, 1.0, 1.0, 1.0, 4), c);
    for (const auto& cell : s.cells) {
        CHECK_FALSE(cell.ks_evaluated);
        CHECK(cell.n_valid == 10);
    }
}

TEST_CASE("candidate laws") {
    const auto laws = candidate_laws(make_fbm_kernel(0.7), 1.0);
    CHECK(laws.at("k_hat").size() == 3);
    CHECK(laws.at("k_ls").size() == 1);
    const auto rough = candidate_laws(make_fbm_kernel(0.8), 1.0);
    CHECK(rough.at("k_hat").empty());
    CHECK(rough.at("mu_hat").size() == 1);
}

TEST_CASE("smoke configuration finishes quickly") {
    ExperimentConfig c;
    c.params = {1.0, 2.0, 1.0};
    c.T_list = {50.0};
    c.dt = 0.05;
    c.replications = 50;
    const auto start = std::chrono::steady_clock::now();
    const auto records = run_experiment(c);
    const auto s = summarize(records, c);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    CHECK(seconds < 60.0);
    CHECK(s.cell("mu_hat", 50.0).n_valid == 50);
}

}  // TEST_SUITE
