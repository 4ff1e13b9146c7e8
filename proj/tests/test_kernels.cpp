#include <doctest.h>

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "gnv/errors.hpp"
#include "gnv/grid.hpp"
#include "gnv/kernels.hpp"
#include "oracles.hpp"

using namespace gnv;

TEST_SUITE("kernels") {

TEST_CASE("grid construction") {
    const Grid g = Grid::from_horizon(1.0, 0.1);
    CHECK(g.n() == 10);
    CHECK(g.size() == 11);
    CHECK(g.t(0) == 0.0);
    CHECK(g.T() == doctest::Approx(1.0).epsilon(1e-15));
    const auto ts = g.times();
    for (std::size_t i = 1; i < ts.size(); ++i) CHECK(ts[i] > ts[i - 1]);

    CHECK(Grid::from_horizon(400.0, 0.05).n() == 8000);
    CHECK_THROWS_AS(Grid::from_horizon(1.0, 0.3), DomainError);
    CHECK_THROWS_AS(Grid(0, 0.1), DomainError);
    CHECK_THROWS_AS(Grid(5, 0.0), DomainError);
    CHECK_THROWS_AS(Grid(5, -1.0), DomainError);
}

TEST_CASE("fbm closed form") {
    const Kernel k = make_fbm_kernel(0.7);
    CHECK(k.beta == 0.7);
    CHECK(k.c_beta == doctest::Approx(0.28).epsilon(1e-15));
    CHECK(k.c_beta_prime == 0.0);
    CHECK_FALSE(k.has_perturbation());
    CHECK(k.R(1, 1) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(k.R(1, 2) == doctest::Approx(oracle::fbm07_R_1_2).epsilon(1e-14));
    CHECK(k.R(2, 1) == k.R(1, 2));
    CHECK(k.phi(1, 3) == doctest::Approx(0.28 * std::pow(2.0, -0.6)).epsilon(1e-14));
    for (double t : {0.0, 0.3, 1.0, 7.5}) {
        CHECK(k.R(0, t) == 0.0);
        CHECK(k.R(t, 0) == 0.0);
        CHECK(k.R(t, t) >= 0.0);
    }
}

TEST_CASE("sub-fbm closed form") {
    const Kernel k = make_subfbm_kernel(0.7);
    CHECK(k.has_perturbation());
    CHECK(k.R(1, 1) == doctest::Approx(oracle::subfbm07_R_1_1).epsilon(1e-14));
    CHECK(k.R(1, 1) == doctest::Approx(2 - std::pow(2.0, 0.4)).epsilon(1e-14));
    CHECK(k.c_beta_prime == doctest::Approx(0.28 * std::pow(2.0, -0.6)).epsilon(1e-14));
    for (double t : {0.0, 0.3, 1.0, 7.5}) {
        CHECK(k.R(0, t) == 0.0);
        CHECK(k.R(t, 0) == 0.0);
    }
    for (double t : {0.2, 1.0, 3.0}) {
        for (double s : {0.1, 2.0, 5.0}) {
            CHECK(k.R(t, s) == doctest::Approx(k.R(s, t)).epsilon(1e-15));
            CHECK(k.R(t, s) == doctest::Approx(oracle::subfbm_R(0.7, t, s)).epsilon(1e-13));
        }
    }
    // |psi(1, 2)| / (1 * 2)^(H - 1) <= c_beta_prime
    const double ratio = std::abs(k.perturbation(1, 2)) / std::pow(2.0, -0.3);
    CHECK(ratio <= k.c_beta_prime);
    CHECK(ratio > 0.0);
}

TEST_CASE("hurst index outside (1/2, 1) is rejected") {
    for (double H : {0.5, 1.0, 0.3, 1.2, std::nan("")}) {
        CHECK_THROWS_AS(make_fbm_kernel(H), DomainError);
        CHECK_THROWS_AS(make_subfbm_kernel(H), DomainError);
    }
    CHECK_THROWS_AS(make_kernel("bfbm", 0.7), DomainError);
    CHECK(make_kernel("subfbm", 0.6).name == "subfbm");
}

TEST_CASE("increment covariance matrix entries") {
    const Kernel k = make_fbm_kernel(0.7);
    const auto m = increment_covariance_matrix(k, Grid(8, 1.0));
    CHECK(m(0, 1) == doctest::Approx(oracle::fbm07_increment_cov_0_1).epsilon(1e-13));
    CHECK(m(0, 1) == doctest::Approx(0.5 * (std::pow(2.0, 1.4) - 2)).epsilon(1e-13));
    // stationary increments: the closed form depends on the lag only
    for (int i = 0; i < 8; ++i) {
        for (int j = 0; j < 8; ++j) {
            const double lag = std::abs(i - j);
            const double expected =
                0.5 * (std::pow(lag + 1, 1.4) - 2 * std::pow(lag, 1.4) + std::pow(std::abs(lag - 1), 1.4));
            CHECK(m(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }
    }
    const auto small = increment_covariance_matrix(k, Grid(5, 0.01));
    for (int i = 0; i < 5; ++i) CHECK(small(i, i) == doctest::Approx(std::pow(0.01, 1.4)).epsilon(1e-12));

    // near H = 1/2 the increments decorrelate
    const auto bm = increment_covariance_matrix(make_fbm_kernel(0.5 + 1e-7), Grid(6, 1.0));
    for (int i = 0; i < 6; ++i) {
        for (int j = 0; j < 6; ++j) {
            if (i != j) CHECK(std::abs(bm(i, j)) < 1e-6);
        }
    }
}

TEST_CASE("increment covariance matrix is positive semidefinite up to n = 512") {
    for (const char* name : {"fbm", "subfbm"}) {
        for (double H : {0.55, 0.7, 0.95}) {
            for (std::size_t n : {16u, 128u, 512u}) {
                const auto m = increment_covariance_matrix(make_kernel(name, H), Grid(n, 1.0 / n));
                CHECK(m.isApprox(m.transpose(), 0.0));
                Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
                const auto ev = es.eigenvalues();
                INFO(name << " H=" << H << " n=" << n);
                CHECK(ev.minCoeff() >= -1e-8 * ev.maxCoeff());
            }
        }
    }
}

TEST_CASE("non-finite kernel values raise a numeric error") {
    Kernel bad = make_fbm_kernel(0.7);
    bad.covariance = [](double t, double s) {
        return (t > 0.25 && s > 0.25) ? std::numeric_limits<double>::quiet_NaN() : 0.0;
    };
    CHECK_THROWS_AS(increment_covariance_matrix(bad, Grid(4, 0.1)), NumericError);
}

TEST_CASE("check_assumption") {
    SUBCASE("fbm has max ratio exactly zero") {
        const auto r = check_assumption(make_fbm_kernel(0.7), Grid(50, 0.1));
        CHECK(r.max_ratio == 0.0);
        CHECK(r.passes);
        CHECK(r.max_phi_fd_rel_error < 1e-4);
    }
    SUBCASE("sub-fbm matches an exhaustive scan of the grid and respects the bound") {
        const double H = 0.7;
        const Kernel k = make_subfbm_kernel(H);
        const auto r = check_assumption(k, Grid(50, 0.1));
        double brute = 0.0;
        for (int i = 1; i <= 50; ++i) {
            for (int j = 1; j <= 50; ++j) {
                if (i == j) continue;
                const double t = 0.1 * i, s = 0.1 * j;
                const double ratio = H * (2 * H - 1) * std::pow(t + s, 2 * H - 2) / std::pow(t * s, H - 1);
                brute = std::max(brute, ratio);
            }
        }
        CHECK(r.max_ratio == doctest::Approx(brute).epsilon(1e-12));
        CHECK(r.max_ratio <= H * (2 * H - 1) * std::pow(2.0, 2 * H - 2));
        CHECK(r.passes);
        CHECK(r.max_phi_fd_rel_error < 1e-4);
    }
    SUBCASE("a kernel whose phi is inflated twofold fails") {
        Kernel inflated = make_subfbm_kernel(0.7);
        const double c = inflated.c_beta;
        inflated.psi = [c](double t, double s) { return c * std::pow(std::abs(t - s), -0.6); };
        const auto r = check_assumption(inflated, Grid(50, 0.1));
        CHECK_FALSE(r.passes);
        CHECK(r.max_ratio > inflated.c_beta_prime);
        // phi no longer belongs to R either
        CHECK(r.max_phi_fd_rel_error > 0.5);
    }
}

TEST_CASE("increment variance bound from the covariance") {
    for (const char* name : {"fbm", "subfbm"}) {
        for (double H : {0.55, 0.7, 0.9}) {
            const Kernel k = make_kernel(name, H);
            const double C = increment_bound_constant(k);
            const Grid g(60, 0.25);
            double worst = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                for (std::size_t j = i + 1; j < g.size(); ++j) {
                    const double a = g.t(i), b = g.t(j);
                    const double var = k.R(b, b) - 2 * k.R(a, b) + k.R(a, a);
                    worst = std::max(worst, var / (C * std::pow(b - a, 2 * H)));
                }
            }
            INFO(name << " H=" << H);
            CHECK(worst <= 1 + 1e-9);
        }
    }
    CHECK(increment_bound_constant(make_fbm_kernel(0.7)) == doctest::Approx(1.0).epsilon(1e-14));
}

}  // TEST_SUITE
