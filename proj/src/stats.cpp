#include "gnv/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <boost/math/distributions/normal.hpp>

#include "gnv/errors.hpp"
#include "gnv/format.hpp"

namespace gnv {
namespace {

constexpr std::size_t kMinKsSamples = 20;

double ks_statistic_vs_normal(std::vector<double> z) {
    std::sort(z.begin(), z.end());
    const double m = static_cast<double>(z.size());
    double d = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double f = normal_cdf(z[i]);
        const double lo = static_cast<double>(i) / m;
        const double hi = static_cast<double>(i + 1) / m;
        d = std::max({d, hi - f, f - lo});
    }
    return d;
}

double ks_pvalue(double d, double effective_n) {
    const double root = std::sqrt(effective_n);
    return kolmogorov_survival((root + 0.12 + 0.11 / root) * d);
}

}  // namespace

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw DomainError("normal quantile needs p in (0, 1)");
    }
    return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double kolmogorov_survival(double x) {
    if (x <= 0.0) {
        return 1.0;
    }
    if (x < 1.18) {
        // small-x form of the same distribution: P(K <= x) = sqrt(2 pi)/x sum exp(-(2j-1)^2 pi^2 / 8x^2)
        const double c = -std::numbers::pi * std::numbers::pi / (8.0 * x * x);
        double cdf = 0.0;
        for (int j = 1; j <= 8; ++j) {
            const double odd = 2.0 * j - 1.0;
            cdf += std::exp(odd * odd * c);
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
        return std::clamp(1.0 - cdf, 0.0, 1.0);
    }
    double sum = 0.0;
    double sign = 1.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = std::exp(-2.0 * j * j * x * x);
        sum += sign * term;
        if (term < 1e-17) {
            break;
        }
        sign = -sign;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_normality(std::span<const double> samples, double sd) {
    if (!(sd > 0.0)) {
        throw DomainError("KS normality needs sd > 0, got " + format_double(sd));
    }
    if (samples.size() < kMinKsSamples) {
        throw DomainError("KS normality needs at least 20 samples");
    }
    std::vector<double> z(samples.begin(), samples.end());
    for (double& v : z) {
        v /= sd;
    }
    KsResult r;
    r.D = ks_statistic_vs_normal(std::move(z));
    r.p = ks_pvalue(r.D, static_cast<double>(samples.size()));
    return r;
}

KsResult ks_normality_studentized(std::span<const double> samples) {
    if (samples.size() < kMinKsSamples) {
        throw DomainError("KS normality needs at least 20 samples");
    }
    const double m = mean(samples);
    const double sd = std::sqrt(sample_variance(samples));
    if (!(sd > 0.0)) {
        throw DomainError("studentized KS needs a non-degenerate sample");
    }
    std::vector<double> z(samples.begin(), samples.end());
    for (double& v : z) {
        v = (v - m) / sd;
    }
    KsResult r;
    r.D = ks_statistic_vs_normal(std::move(z));
    r.p = ks_pvalue(r.D, static_cast<double>(samples.size()));
    return r;
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) {
        throw DomainError("two-sample KS needs non-empty samples");
    }
    std::vector<double> x(a.begin(), a.end());
    std::vector<double> y(b.begin(), b.end());
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < x.size() && j < y.size()) {
        const double v = std::min(x[i], y[j]);
        while (i < x.size() && x[i] == v) {
            ++i;
        }
        while (j < y.size() && y[j] == v) {
            ++j;
        }
        d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
    }
    KsResult r;
    r.D = d;
    r.p = ks_pvalue(d, nx * ny / (nx + ny));
    return r;
}

JarqueBera jarque_bera(std::span<const double> samples) {
    const double n = static_cast<double>(samples.size());
    if (samples.size() < 3) {
        throw DomainError("Jarque-Bera needs at least three samples");
    }
    const double m = mean(samples);
    double m2 = 0.0;
    double m3 = 0.0;
    double m4 = 0.0;
    for (double v : samples) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    JarqueBera jb;
    if (!(m2 > 0.0)) {
        jb.statistic = 0.0;
        jb.p = 1.0;
        return jb;
    }
    const double skew = m3 / std::pow(m2, 1.5);
    const double kurt = m4 / (m2 * m2);
    jb.statistic = n / 6.0 * (skew * skew + 0.25 * (kurt - 3.0) * (kurt - 3.0));
    jb.p = std::exp(-0.5 * jb.statistic);
    return jb;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) {
        return 0.0;
    }
    double acc = 0.0;
    for (double v : xs) {
        acc += v;
    }
    return acc / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) {
        return 0.0;
    }
    const double m = mean(xs);
    double acc = 0.0;
    for (double v : xs) {
        acc += (v - m) * (v - m);
    }
    return acc / static_cast<double>(xs.size() - 1);
}

double median(std::span<const double> xs) {
    if (xs.empty()) {
        throw DomainError("median of an empty sample");
    }
    std::vector<double> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    const std::size_t mid = v.size() / 2;
    return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace gnv
