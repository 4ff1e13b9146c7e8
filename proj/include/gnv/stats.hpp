#pragma once

#include <span>
#include <vector>

namespace gnv {

double normal_cdf(double x);
double normal_quantile(double p);

/// Survival function of the Kolmogorov distribution, 2 sum_{j>=1} (-1)^(j-1) exp(-2 j^2 x^2).
double kolmogorov_survival(double x);

struct KsResult {
    double D = 0.0;
    double p = 1.0;
};

/// One-sample KS of samples / sd against N(0, 1). The p-value uses the asymptotic Kolmogorov
/// law at x = (sqrt(M) + 0.12 + 0.11 / sqrt(M)) D. Needs >= 20 samples and sd > 0.
KsResult ks_normality(std::span<const double> samples, double sd);

/// KS of (samples - mean) / sd, both estimated from the sample. The p-value is the same
/// asymptotic formula and is therefore conservative.
KsResult ks_normality_studentized(std::span<const double> samples);

/// Two-sample KS with the effective size n1 n2 / (n1 + n2) in the asymptotic p-value.
KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

struct JarqueBera {
    double statistic = 0.0;
    double p = 1.0;  ///< chi-square(2) tail
};

JarqueBera jarque_bera(std::span<const double> samples);

double mean(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two samples.
double sample_variance(std::span<const double> xs);
double median(std::span<const double> xs);

}  // namespace gnv
