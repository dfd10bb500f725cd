#include <doctest.h>

#include <cmath>

#include "rbm/errors.hpp"
#include "rbm/mark_law.hpp"
#include "rbm/stats.hpp"

using namespace rbm;

TEST_CASE("sampling is deterministic per stream") {
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.5, -0.7);
    RngStream a(11, 2), b(11, 2);
    const auto xs = sample_marks(law, a, 512);
    const auto ys = sample_marks(law, b, 512);
    REQUIRE(xs.size() == ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        CHECK(xs[i].first == ys[i].first);
        CHECK(xs[i].second == ys[i].second);
    }
}

TEST_CASE("gaussian marks meet every declared moment") {
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.5, -0.7);
    RngStream stream(3, 0);
    const MomentCheckReport report = verify_mark_moments(law, stream, 1000000, 4.0);
    for (const auto& check : report.checks) {
        INFO(check.name << " empirical " << check.empirical << " expected " << check.expected);
        CHECK(check.pass);
    }
    CHECK(report.all_pass());
}

TEST_CASE("degenerate correlation ties the marks linearly") {
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.05, -1.0);
    RngStream stream(17, 4);
    for (int i = 0; i < 1000; ++i) {
        const auto [u, v] = law.sample(stream);
        CHECK(v == doctest::Approx(-0.05 * u).epsilon(1e-12));
    }
}

TEST_CASE("scaled-sign marks have constant magnitude and arcsine correlation") {
    const MarkLaw law = MarkLaw::scaled_sign(0.5, 0.5, 0.6);
    CHECK(law.rho() == doctest::Approx(2.0 / M_PI * std::asin(0.6)).epsilon(1e-14));
    RngStream stream(23, 1);
    double uv = 0.0;
    const int m = 400000;
    for (int i = 0; i < m; ++i) {
        const auto [u, v] = law.sample(stream);
        CHECK(std::abs(u) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(std::abs(v) == doctest::Approx(0.5).epsilon(1e-15));
        uv += u * v;
    }
    uv /= m;
    const double expected = law.rho() * 0.25;
    // Var(uv) = sigma^4 (1 - rho^2) for sign products
    const double se = 0.25 * std::sqrt((1.0 - law.rho() * law.rho()) / m);
    CHECK(std::abs(uv - expected) <= 4.0 * se);
}

TEST_CASE("comonotone signs at full latent correlation") {
    const MarkLaw law = MarkLaw::scaled_sign(2.0, 0.3, 1.0);
    CHECK(law.rho() == doctest::Approx(1.0).epsilon(1e-14));
    RngStream stream(29, 6);
    for (int i = 0; i < 1000; ++i) {
        const auto [u, v] = law.sample(stream);
        CHECK(u / 2.0 == doctest::Approx(v / 0.3).epsilon(1e-14));
    }
}

TEST_CASE("scaled-sign skew statistics stay near zero") {
    const MarkLaw law = MarkLaw::scaled_sign(1.0, 0.5, -0.4);
    RngStream stream(31, 0);
    const MomentCheckReport report = verify_mark_moments(law, stream, 1000000, 4.0);
    CHECK(report.all_pass());
}

TEST_CASE("zero tolerance fails some check") {
    const MarkLaw law = MarkLaw::gaussian(1.0, 1.0, 0.2);
    RngStream stream(37, 9);
    const MomentCheckReport report = verify_mark_moments(law, stream, 10000, 0.0);
    CHECK_FALSE(report.all_pass());
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(MarkLaw::gaussian(1.0, 1.0, 1.5), std::domain_error);
    CHECK_THROWS_AS(MarkLaw::scaled_sign(1.0, 1.0, -1.0001), std::domain_error);
    CHECK_THROWS_AS(MarkLaw::gaussian(0.0, 1.0, 0.0), ConfigError);
    const MarkLaw law = MarkLaw::gaussian(1.0, 1.0, 0.0);
    RngStream stream(1, 1);
    CHECK_THROWS_AS(verify_mark_moments(law, stream, 100, 4.0), ConfigError);
}
