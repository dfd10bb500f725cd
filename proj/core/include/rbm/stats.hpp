#pragma once

#include <span>
#include <vector>

namespace rbm {

struct SampleSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0;        // unbiased
    double se_mean = 0.0;
    double se_variance = 0.0;     // from the fourth central moment
    double fourth_central = 0.0;
};

SampleSummary summarize(std::span<const double> sample);

// Numerically stable total via pairwise (cascade) summation.
double pairwise_sum(std::span<const double> values);

// Standard normal CDF.
double normal_cdf(double x);

struct KsResult {
    double statistic = 0.0;
    double p_value = 0.0;
};

// One-sample Kolmogorov-Smirnov test of `sample` against N(mean, sd^2);
// asymptotic p-value with the Stephens small-sample correction.
KsResult ks_test_normal(std::span<const double> sample, double mean, double sd);

// Regularized lower incomplete gamma P(a, x); drives the chi-square CDF.
double gamma_p(double a, double x);
double chi_square_cdf(double x, double dof);

// Block-mean dispersion test: splits the sample into `blocks` equal blocks
// and compares the block-to-block variance of block means against the
// overall variance.  Returns the two-sided chi-square p-value.
double block_variance_pvalue(std::span<const double> sample, int blocks);

} // namespace rbm
