#include <doctest.h>

#include <cmath>
#include <vector>

#include "rbm/rng.hpp"
#include "rbm/stats.hpp"

using namespace rbm;

TEST_CASE("summary moments on a known sample") {
    const std::vector<double> xs = {1.0, 2.0, 3.0, 4.0};
    const SampleSummary s = summarize(xs);
    CHECK(s.mean == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(s.variance == doctest::Approx(5.0 / 3.0).epsilon(1e-15));
    CHECK(s.se_mean == doctest::Approx(std::sqrt(5.0 / 12.0)).epsilon(1e-12));
}

TEST_CASE("pairwise summation is exact on integers") {
    std::vector<double> xs(10001, 1.0);
    xs.back() = 41.0;
    CHECK(pairwise_sum(xs) == 10041.0);
}

TEST_CASE("normal cdf reference points") {
    CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-9));
    CHECK(normal_cdf(-1.0) == doctest::Approx(0.158655254).epsilon(1e-8));
}

TEST_CASE("incomplete gamma against the error function") {
    // P(1/2, x) = erf(sqrt(x))
    for (double x : {0.1, 0.5, 1.0, 3.0, 10.0}) {
        CHECK(gamma_p(0.5, x) == doctest::Approx(std::erf(std::sqrt(x))).epsilon(1e-12));
    }
    // P(1, x) = 1 - e^-x
    for (double x : {0.2, 2.0, 8.0}) {
        CHECK(gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    }
    CHECK(chi_square_cdf(0.0, 3.0) == 0.0);
    // median of chi^2_2 is 2 ln 2
    CHECK(chi_square_cdf(2.0 * std::log(2.0), 2.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("kolmogorov-smirnov accepts its own null") {
    RngStream stream(2024, 0);
    std::vector<double> z(20000);
    for (auto& v : z) v = 0.3 + 1.7 * stream.normal();
    CHECK(ks_test_normal(z, 0.3, 1.7).p_value > 0.01);
    // a 10% scale mismatch is detected at this sample size
    CHECK(ks_test_normal(z, 0.3, 1.87).p_value < 0.01);
}

TEST_CASE("block variance test accepts iid data") {
    RngStream stream(2025, 1);
    std::vector<double> z(50000);
    for (auto& v : z) v = stream.normal();
    CHECK(block_variance_pvalue(z, 50) > 0.01);
}
