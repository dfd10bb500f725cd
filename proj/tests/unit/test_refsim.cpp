#include <doctest.h>

#include <cmath>
#include <vector>

#include "rbm/errors.hpp"
#include "rbm/functionals.hpp"
#include "rbm/moments.hpp"
#include "rbm/refsim.hpp"
#include "rbm/stats.hpp"

using namespace rbm;

namespace {

GaussianModelSpec limit_spec(double hurst, GaussianVariant variant, int K, double rho,
                             double sigma_v) {
    GaussianModelSpec spec;
    spec.hurst = hurst;
    spec.sigma_p = 1.0;
    spec.sigma_v = sigma_v;
    spec.rho = rho;
    spec.variant = variant;
    spec.kernel = KernelSpec::limit(hurst);
    spec.grid_size = K;
    spec.horizon = 1.0;
    return spec;
}

} // namespace

TEST_CASE("joint covariance closed forms") {
    const double H = 0.15;
    const int K = 8;
    const auto times = limit_spec(H, GaussianVariant::TwoSided, K, 0.0, 0.7).grid_times();

    SUBCASE("two-sided variances follow the fractional scaling") {
        const Eigen::MatrixXd cov =
            build_joint_covariance(limit_spec(H, GaussianVariant::TwoSided, K, 0.0, 0.7));
        const double c2 = std::pow(mandelbrot_van_ness_constant(H), 2.0);
        for (int i = 0; i < K; ++i) {
            CHECK(cov(i, i) ==
                  doctest::Approx(0.49 * c2 * std::pow(times[i], 2.0 * H)).epsilon(1e-10));
        }
        // zero correlation kills the whole cross block
        for (int i = 0; i < K; ++i) {
            for (int j = 0; j < K; ++j) {
                CHECK(cov(i, K + j) == 0.0);
            }
        }
        for (int j = 0; j < K; ++j) {
            CHECK(cov(K + j, K + j) == doctest::Approx(1.0 / K).epsilon(1e-14));
        }
    }

    SUBCASE("one-sided variances and the closed-form cross covariance") {
        const double rho = -0.7;
        const Eigen::MatrixXd cov =
            build_joint_covariance(limit_spec(H, GaussianVariant::RiemannLiouville, K, rho, 1.0));
        for (int i = 0; i < K; ++i) {
            CHECK(cov(i, i) ==
                  doctest::Approx(std::pow(times[i], 2.0 * H) / (2.0 * H)).epsilon(1e-10));
        }
        // Cov(V_{t_i}, W_{t_j}) accumulated over increments
        for (int i = 2; i < K; i += 3) {
            for (int j = 0; j < K; ++j) {
                double acc = 0.0;
                for (int l = 0; l <= j; ++l) acc += cov(i, K + l);
                const double ti = times[i];
                const double mn = std::min(ti, times[j]);
                const double expected =
                    rho * (std::pow(ti, H + 0.5) - std::pow(ti - mn, H + 0.5)) / (H + 0.5);
                CHECK(acc == doctest::Approx(expected).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("sampling reproduces the covariance and stays deterministic") {
    const GaussianModelSpec spec = limit_spec(0.2, GaussianVariant::TwoSided, 16, -0.5, 0.8);
    const JointPathSampler sampler(spec);
    const int K = spec.grid_size;

    RngStream s1(77, 5), s2(77, 5);
    std::vector<double> v1(K), w1(K), v2(K), w2(K);
    sampler.sample(s1, v1, w1);
    sampler.sample(s2, v2, w2);
    CHECK(v1 == v2);
    CHECK(w1 == w2);

    const int reps = 20000;
    std::vector<double> vT(reps), wsum(reps), cross(reps);
    for (int r = 0; r < reps; ++r) {
        RngStream stream(78, static_cast<std::uint64_t>(r));
        sampler.sample(stream, v1, w1);
        vT[r] = v1[K - 1];
        double w = 0.0;
        for (double dw : w1) w += dw;
        wsum[r] = w;
        cross[r] = v1[K - 1] * w;
    }
    const Eigen::MatrixXd cov = build_joint_covariance(spec);
    const SampleSummary sv = summarize(vT);
    CHECK(std::abs(sv.variance - cov(K - 1, K - 1)) <= 4.0 * sv.se_variance);
    const SampleSummary sw = summarize(wsum);
    CHECK(std::abs(sw.variance - 1.0) <= 4.0 * sw.se_variance);
    double expected_cross = 0.0;
    for (int l = 0; l < K; ++l) expected_cross += cov(K - 1, K + l);
    const SampleSummary sc = summarize(cross);
    CHECK(std::abs(sc.mean - expected_cross) <= 4.0 * sc.se_mean);
}

TEST_CASE("degenerate and antithetic draws") {
    GaussianModelSpec spec = limit_spec(0.2, GaussianVariant::RiemannLiouville, 8, 0.3, 0.0);
    const JointPathSampler sampler(spec);
    const int K = spec.grid_size;
    std::vector<double> v(K), w(K), vm(K), wm(K);
    RngStream stream(79, 0);
    sampler.sample(stream, v, w);
    for (double x : v) CHECK(x == doctest::Approx(0.0).epsilon(1e-9));

    RngStream stream2(79, 1);
    sampler.sample_antithetic_pair(stream2, v, w, vm, wm);
    for (int i = 0; i < K; ++i) {
        CHECK(v[i] == -vm[i]);
        CHECK(w[i] == -wm[i]);
    }
}

TEST_CASE("euler price rules") {
    // constant volatility path: P = sigma_p e^c W_T
    const std::vector<double> v = {0.4, 0.4, 0.4, 0.4};
    const std::vector<double> dw = {0.1, -0.2, 0.05, 0.3};
    const double P = euler_price(v, dw, 2.0);
    const double expected = 2.0 * (dw[0] + std::exp(0.4) * (dw[1] + dw[2] + dw[3]));
    CHECK(P == doctest::Approx(expected).epsilon(1e-14));

    const std::vector<double> short_dw = {0.1};
    CHECK_THROWS_AS(euler_price(v, short_dw, 1.0), ConfigError);
}

TEST_CASE("zero vol-of-vol reduces the price to Brownian motion") {
    const GaussianModelSpec spec = limit_spec(0.15, GaussianVariant::RiemannLiouville, 64, 0.0, 0.0);
    const JointPathSampler sampler(spec);
    const int K = spec.grid_size;
    const int reps = 20000;
    std::vector<double> h4(reps);
    std::vector<double> v(K), w(K);
    for (int r = 0; r < reps; ++r) {
        RngStream stream(80, static_cast<std::uint64_t>(r));
        sampler.sample(stream, v, w);
        const double p = euler_price(v, w, 1.0);
        double wT = 0.0;
        for (double dw : w) wT += dw;
        CHECK(p == doctest::Approx(wT).epsilon(1e-12));
        h4[r] = hermite4(p);
    }
    const SampleSummary s = summarize(h4);
    CHECK(std::abs(s.mean) <= 4.0 * s.se_mean);
}

TEST_CASE("approximate-kernel covariance approaches the limit") {
    const double H = 0.2;
    double prev = std::numeric_limits<double>::infinity();
    for (std::uint64_t n : {8, 64, 512}) {
        GaussianModelSpec spec = limit_spec(H, GaussianVariant::TwoSided, 4, 0.0, 1.0);
        spec.kernel = KernelSpec::benchmark(H, n);
        const Eigen::MatrixXd cov = build_joint_covariance(spec);
        const double target = limit_covariance_two_sided(H, 1.0, 1.0);
        const double gap = std::abs(cov(3, 3) - target);
        CHECK(gap < prev);
        prev = gap;
    }
}

TEST_CASE("spec validation") {
    GaussianModelSpec spec = limit_spec(0.2, GaussianVariant::TwoSided, 5000, 0.0, 1.0);
    CHECK_THROWS_AS(build_joint_covariance(spec), ConfigError);
    spec.grid_size = 8;
    spec.kernel = KernelSpec::limit(0.3);  // Hurst mismatch
    CHECK_THROWS_AS(build_joint_covariance(spec), ConfigError);
}
