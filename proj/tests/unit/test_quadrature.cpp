#include <doctest.h>

#include <cmath>

#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"

using namespace rbm;

TEST_CASE("adaptive rule reproduces smooth integrals") {
    const double v = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(v == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
}

TEST_CASE("adaptive rule resolves an algebraic endpoint singularity") {
    const double v = integrate([](double x) { return std::pow(x, -0.35); }, 0.0, 1.0,
                               {1e-9, 1e-9, 4000});
    CHECK(v == doctest::Approx(1.0 / 0.65).epsilon(1e-8));
}

TEST_CASE("tail integration with the rational map") {
    const double v = integrate_tail([](double x) { return 1.0 / (x * x); }, 1.0);
    CHECK(v == doctest::Approx(1.0).epsilon(1e-9));
    const double w = integrate_tail([](double x) { return std::pow(x, -2.3); }, 2.0);
    CHECK(w == doctest::Approx(std::pow(2.0, -1.3) / 1.3).epsilon(1e-8));
}

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    const QuadRule rule = gauss_legendre(8);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i] * std::pow(rule.nodes[i], 7.0);
    }
    CHECK(sum == doctest::Approx(1.0 / 8.0).epsilon(1e-13));
}

TEST_CASE("gauss-jacobi handles the factored endpoint weight") {
    const double a = -0.35;  // (1-t)^a weight
    const QuadRule rule = gauss_jacobi_upper(16, a);
    double mass = 0.0, second = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        mass += rule.weights[i];
        second += rule.weights[i] * rule.nodes[i] * rule.nodes[i];
    }
    CHECK(mass == doctest::Approx(1.0 / 0.65).epsilon(1e-12));
    // int_0^1 (1-t)^a t^2 dt = B(3, a+1)
    const double beta3 = std::exp(std::lgamma(3.0) + std::lgamma(a + 1.0) - std::lgamma(a + 4.0));
    CHECK(second == doctest::Approx(beta3).epsilon(1e-12));
}

TEST_CASE("apply_rule maps intervals with the weight's homogeneity") {
    const double a = -0.25;
    const QuadRule rule = gauss_jacobi_upper(12, a);
    // int_1^3 (3-t)^a exp(t) dt against an adaptive reference
    const double mapped = apply_rule(rule, 1.0, 3.0, a,
                                     [](double t) { return std::exp(t); });
    const double reference = integrate(
        [&](double t) { return std::pow(3.0 - t, a) * std::exp(t); }, 1.0, 3.0,
        {1e-10, 1e-10, 4000});
    CHECK(mapped == doctest::Approx(reference).epsilon(1e-9));
}

TEST_CASE("segmented integration respects interior breakpoints") {
    const Integrand f = [](double x) { return std::abs(x - 0.3); };
    const double breaks[] = {0.3};
    const double v = integrate_segmented(f, 0.0, 1.0, breaks);
    CHECK(v == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-12));
}

TEST_CASE("an unreachable tolerance raises an accuracy error") {
    QuadOptions strangled;
    strangled.abs_tol = 1e-15;
    strangled.rel_tol = 1e-15;
    strangled.max_segments = 4;
    CHECK_THROWS_AS(integrate([](double x) { return std::pow(std::abs(x - 0.37), -0.5); },
                              0.0, 1.0, strangled),
                    AccuracyError);
}
