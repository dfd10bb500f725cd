#include <doctest.h>

#include <chrono>
#include <cmath>
#include <vector>

#include "rbm/errors.hpp"
#include "rbm/functionals.hpp"
#include "rbm/microsim.hpp"
#include "rbm/quadrature.hpp"
#include "rbm/stats.hpp"

using namespace rbm;

namespace {

EventStream make_stream(std::vector<double> arrivals, std::vector<std::pair<double, double>> marks,
                        double rate, double T) {
    EventStream ev;
    ev.arrivals = std::move(arrivals);
    ev.marks = std::move(marks);
    ev.rate = rate;
    ev.horizon = T;
    return ev;
}

} // namespace

TEST_CASE("event simulation determinism and counts") {
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.5, -0.7);
    {
        RngStream a(7, 0), b(7, 0);
        const EventStream x = simulate_events(10, 1.0, 2.0, law, a);
        const EventStream y = simulate_events(10, 1.0, 2.0, law, b);
        REQUIRE(x.arrivals == y.arrivals);
        REQUIRE(x.pre_arrivals == y.pre_arrivals);
        REQUIRE(x.marks == y.marks);
        REQUIRE(x.pre_marks == y.pre_marks);
    }
    {
        RngStream stream(7, 1);
        const EventStream empty = simulate_events(10, 0.0, 0.0, law, stream);
        CHECK(empty.arrivals.empty());
        CHECK(empty.pre_arrivals.empty());
    }
    {
        // mean arrival count within 4 SE of n T
        const int reps = 100000;
        double total = 0.0;
        for (int r = 0; r < reps; ++r) {
            RngStream stream(11, static_cast<std::uint64_t>(r));
            total += static_cast<double>(simulate_events(10, 1.0, 0.0, law, stream).size());
        }
        const double mean = total / reps;
        const double se = std::sqrt(10.0 / reps);
        CHECK(std::abs(mean - 10.0) <= 4.0 * se);
    }
    {
        // arrivals sorted, in range, pre-arrivals descending in [-S, 0)
        RngStream stream(13, 2);
        const EventStream ev = simulate_events(50, 2.0, 1.5, law, stream);
        for (std::size_t i = 0; i + 1 < ev.arrivals.size(); ++i) {
            CHECK(ev.arrivals[i] < ev.arrivals[i + 1]);
        }
        if (!ev.arrivals.empty()) {
            CHECK(ev.arrivals.front() > 0.0);
            CHECK(ev.arrivals.back() <= 2.0);
        }
        for (std::size_t i = 0; i + 1 < ev.pre_arrivals.size(); ++i) {
            CHECK(ev.pre_arrivals[i] > ev.pre_arrivals[i + 1]);
        }
        if (!ev.pre_arrivals.empty()) {
            CHECK(ev.pre_arrivals.front() < 0.0);
            CHECK(ev.pre_arrivals.back() >= -1.5);
        }
    }
}

TEST_CASE("log-volatility single-event value and conventions") {
    const KernelSpec kernel = KernelSpec::benchmark(0.15, 10);
    const EventStream ev = make_stream({0.5}, {{0.0, 1.0}}, 10.0, 1.0);
    const double times[] = {0.25, 0.5, 1.0};
    const auto values = eval_logvol(ev, kernel, times);
    CHECK(values[0] == 0.0);  // before the event
    // right limit at the arrival includes the jump
    CHECK(values[1] == doctest::Approx(std::pow(0.1, -0.35) / std::sqrt(10.0)).epsilon(1e-12));
    CHECK(values[2] == doctest::Approx(0.378135).epsilon(1e-5));

    const EventStream none = make_stream({}, {}, 10.0, 1.0);
    const auto zero = eval_logvol(none, kernel, times);
    for (double v : zero) CHECK(v == 0.0);

    const KernelSpec wrong_rate = KernelSpec::benchmark(0.15, 5);
    CHECK_THROWS_AS(eval_logvol(ev, wrong_rate, times), ConfigError);
    CHECK_THROWS_AS(eval_logvol(ev, KernelSpec::limit(0.15), times), ConfigError);
}

TEST_CASE("price path left limits exclude the own jump") {
    const KernelSpec kernel = KernelSpec::benchmark(0.2, 4);
    const double inv_sqrt_n = 0.5;
    const EventStream ev =
        make_stream({0.25, 0.5, 0.75}, {{1.0, 2.0}, {-1.0, 1.0}, {0.5, -1.0}}, 4.0, 1.0);
    const double grid[] = {0.1, 0.25, 0.4, 0.6, 1.0};
    const PathGrid path = simulate_price_path(ev, kernel, grid);

    REQUIRE(path.left_limits_at_jumps.size() == 3);
    CHECK(path.left_limits_at_jumps[0] == 0.0);
    CHECK(path.left_limits_at_jumps[1] ==
          doctest::Approx(eval_kernel(kernel, 0.25) * 2.0 * inv_sqrt_n).epsilon(1e-13));
    CHECK(path.left_limits_at_jumps[2] ==
          doctest::Approx((eval_kernel(kernel, 0.5) * 2.0 + eval_kernel(kernel, 0.25) * 1.0) *
                          inv_sqrt_n)
              .epsilon(1e-13));

    // piecewise-constant price, jump included at the arrival itself
    CHECK(path.log_price[0] == 0.0);
    const double p1 = std::exp(path.left_limits_at_jumps[0]) * 1.0 * inv_sqrt_n;
    CHECK(path.log_price[1] == doctest::Approx(p1).epsilon(1e-13));
    CHECK(path.log_price[2] == doctest::Approx(p1).epsilon(1e-13));
    const double p2 = p1 + std::exp(path.left_limits_at_jumps[1]) * -1.0 * inv_sqrt_n;
    CHECK(path.log_price[3] == doctest::Approx(p2).epsilon(1e-13));
    const double p3 = p2 + std::exp(path.left_limits_at_jumps[2]) * 0.5 * inv_sqrt_n;
    CHECK(path.log_price[4] == doctest::Approx(p3).epsilon(1e-13));
    CHECK(price_at_horizon(ev, kernel) == doctest::Approx(p3).epsilon(1e-13));

    // inserting a later event leaves all earlier left limits untouched
    EventStream extended = ev;
    extended.arrivals.insert(extended.arrivals.begin() + 2, 0.6);
    extended.marks.insert(extended.marks.begin() + 2, {3.0, -2.0});
    const PathGrid path2 = simulate_price_path(extended, kernel, grid);
    CHECK(path2.left_limits_at_jumps[0] == path.left_limits_at_jumps[0]);
    CHECK(path2.left_limits_at_jumps[1] == path.left_limits_at_jumps[1]);
    CHECK(path2.log_price[1] == path.log_price[1]);
    CHECK(path2.log_price[3] == path.log_price[3]);
}

TEST_CASE("zero price marks give a flat price") {
    const KernelSpec kernel = KernelSpec::benchmark(0.2, 4);
    const EventStream ev = make_stream({0.2, 0.4}, {{0.0, 1.0}, {0.0, -1.0}}, 4.0, 1.0);
    const double grid[] = {0.5, 1.0};
    const PathGrid path = simulate_price_path(ev, kernel, grid);
    CHECK(path.log_price[0] == 0.0);
    CHECK(path.log_price[1] == 0.0);
}

TEST_CASE("poisson isometries against quadrature") {
    const std::uint64_t n = 20;
    const double T = 1.0;
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.5, -0.7);
    const KernelSpec kernel = KernelSpec::benchmark(0.15, n);
    const int reps = 20000;
    std::vector<double> w(reps), v0(reps), vS(reps), price(reps);
    for (int r = 0; r < reps; ++r) {
        RngStream stream(101, static_cast<std::uint64_t>(r));
        const EventStream ev = simulate_events(n, T, 2.0, law, stream);
        double wsum = 0.0;
        for (const auto& uv : ev.marks) wsum += uv.first;
        w[r] = wsum / std::sqrt(static_cast<double>(n));
        const double times[] = {1.0};
        EventStream no_pre = ev;
        no_pre.pre_arrivals.clear();
        no_pre.pre_marks.clear();
        no_pre.pre_horizon = 0.0;
        v0[r] = eval_logvol(no_pre, kernel, times)[0];
        vS[r] = eval_logvol(ev, kernel, times)[0];
        price[r] = price_at_horizon(no_pre, kernel);
    }
    const SampleSummary sw = summarize(w);
    CHECK(std::abs(sw.variance - 1.0) <= 4.0 * sw.se_variance);  // sigma_p^2 T

    const SampleSummary s0 = summarize(v0);
    const double var0 = 0.25 * covariance_Cn(kernel, 1.0, 1.0, false);
    CHECK(std::abs(s0.variance - var0) <= 4.0 * s0.se_variance);

    const SampleSummary sS = summarize(vS);
    const double varS = 0.25 * covariance_Cn_truncated(kernel, 1.0, 1.0, 2.0);
    CHECK(std::abs(sS.variance - varS) <= 4.0 * sS.se_variance);

    // centered marks make the price a martingale
    const SampleSummary sp = summarize(price);
    CHECK(std::abs(sp.mean) <= 4.0 * sp.se_mean);
}

TEST_CASE("a ten-thousand-event path evaluates in under a second") {
    const std::uint64_t n = 10000;
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.05, -1.0);
    const KernelSpec kernel = KernelSpec::optimized(0.15, KernelSpec::optimal_beta(0.15), n);
    RngStream stream(55, 0);
    const EventStream ev = simulate_events(n, 1.0, 0.0, law, stream);
    REQUIRE(ev.size() > 9000);
    const auto t0 = std::chrono::steady_clock::now();
    const double p = price_at_horizon(ev, kernel);
    const auto t1 = std::chrono::steady_clock::now();
    CHECK(std::isfinite(p));
    CHECK(std::chrono::duration<double>(t1 - t0).count() < 1.0);
}

TEST_CASE("exponential functional degenerate cases") {
    const KernelSpec kernel = KernelSpec::benchmark(0.15, 10);
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.5, 0.0);
    const double times[] = {0.8, 0.3};
    const double zeros[] = {0.0, 0.0};
    CHECK(prelimit_exp_functional(kernel, zeros, times, law, 0.0) == 1.0);

    const MarkLaw rigid = MarkLaw::gaussian(1.0, 0.0, 0.0);
    const double coeffs[] = {1.5, -2.0};
    CHECK(prelimit_exp_functional(kernel, coeffs, times, rigid, 0.0) == 1.0);

    const MarkLaw sign_law = MarkLaw::scaled_sign(1.0, 0.5, 0.0);
    CHECK_THROWS_AS(prelimit_exp_functional(kernel, coeffs, times, sign_law, 0.0), ConfigError);
    const double unsorted[] = {0.3, 0.8};
    CHECK_THROWS_AS(prelimit_exp_functional(kernel, coeffs, unsorted, law, 0.0),
                    std::invalid_argument);
}

TEST_CASE("exponential functional matches Monte Carlo") {
    const std::uint64_t n = 10;
    const KernelSpec kernel = KernelSpec::benchmark(0.15, n);
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.5, 0.0);
    const double times[] = {0.7, 0.4};
    const double coeffs[] = {1.3, -0.6};
    const double exact = prelimit_exp_functional(kernel, coeffs, times, law, 1.0);

    const int reps = 60000;
    std::vector<double> samples(reps);
    for (int r = 0; r < reps; ++r) {
        RngStream stream(202, static_cast<std::uint64_t>(r));
        const EventStream ev = simulate_events(n, 0.7, 1.0, law, stream);
        const auto v = eval_logvol(ev, kernel, times);
        samples[r] = std::exp(coeffs[0] * v[0] + coeffs[1] * v[1]);
    }
    const SampleSummary s = summarize(samples);
    CHECK(std::abs(s.mean - exact) <= 4.0 * s.se_mean);
}

TEST_CASE("exponential functional approaches the gaussian limit at the star rate") {
    const double H = 0.15;
    const double t = 0.8;
    const MarkLaw law = MarkLaw::gaussian(1.0, 0.5, 0.0);
    const double sv2 = 0.25;
    double prev_gap = std::numeric_limits<double>::infinity();
    for (std::uint64_t n : {8, 32, 128}) {
        const KernelSpec kernel = KernelSpec::benchmark(H, n);
        const double coeffs[] = {2.0};
        const double times[] = {t};
        const double log_en =
            std::log(prelimit_exp_functional(kernel, coeffs, times, law, 0.0));
        const double gap = std::abs(log_en - 2.0 * sv2 * covariance_Cn(kernel, t, t, false));
        CHECK(gap < prev_gap);
        // leading correction is 2 sigma_v^4 (1/n) int phi^4; allow 2x slack
        const double star = error_functionals(kernel, t, false).star;
        CHECK(gap <= 4.0 * sv2 * sv2 * star);
        prev_gap = gap;
    }
}
