#include "rbm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "rbm/errors.hpp"
#include "rbm/quadrature.hpp"

namespace rbm {

namespace {

void check_hurst(double hurst) {
    if (!(hurst > 0.0) || hurst > 0.5) {
        throw ConfigError("hurst must lie in (0, 1/2], got " + std::to_string(hurst));
    }
}

} // namespace

KernelSpec KernelSpec::benchmark(double hurst, std::uint64_t n) {
    check_hurst(hurst);
    if (n < 1) throw ConfigError("kernel scale index n must be >= 1");
    KernelSpec spec;
    spec.hurst = hurst;
    spec.variant = KernelVariant::Benchmark;
    spec.n = n;
    return spec;
}

KernelSpec KernelSpec::optimized(double hurst, double beta, std::uint64_t n) {
    check_hurst(hurst);
    if (hurst >= 0.5) throw ConfigError("the optimized kernel requires H < 1/2");
    if (!(beta > 0.0)) throw ConfigError("optimized kernel needs beta > 0");
    if (n < 1) throw ConfigError("kernel scale index n must be >= 1");
    c1_constant(hurst);  // validates the correction weight exists
    KernelSpec spec;
    spec.hurst = hurst;
    spec.variant = KernelVariant::Optimized;
    spec.beta = beta;
    spec.n = n;
    return spec;
}

KernelSpec KernelSpec::general_shift(double hurst, double alpha, std::uint64_t n) {
    check_hurst(hurst);
    if (!(alpha > 0.0)) throw ConfigError("general-shift kernel needs alpha > 0");
    if (n < 1) throw ConfigError("kernel scale index n must be >= 1");
    KernelSpec spec;
    spec.hurst = hurst;
    spec.variant = KernelVariant::GeneralShift;
    spec.alpha = alpha;
    spec.n = n;
    return spec;
}

KernelSpec KernelSpec::limit(double hurst) {
    check_hurst(hurst);
    KernelSpec spec;
    spec.hurst = hurst;
    spec.variant = KernelVariant::Limit;
    return spec;
}

double KernelSpec::optimal_beta(double hurst) {
    return 2.0 / (3.0 - 6.0 * hurst);
}

double KernelSpec::shift() const {
    const double nn = static_cast<double>(n);
    switch (variant) {
        case KernelVariant::Benchmark: return 1.0 / nn;
        case KernelVariant::Optimized: return std::pow(nn, -beta);
        case KernelVariant::GeneralShift: return std::pow(nn, -alpha);
        case KernelVariant::Limit: return 0.0;
    }
    return 0.0;
}

std::string KernelSpec::variant_name() const {
    switch (variant) {
        case KernelVariant::Benchmark: return "benchmark";
        case KernelVariant::Optimized: return "optimized";
        case KernelVariant::GeneralShift: return "shift";
        case KernelVariant::Limit: return "limit";
    }
    return "?";
}

double c1_constant(double hurst) {
    if (!(hurst > 0.0) || hurst > 1.0 || !std::isfinite(hurst)) {
        throw std::domain_error("c1_constant requires H in (0, 1/2)");
    }
    const double p = std::pow(2.0, 2.0 * hurst);
    const double denom = p - 1.0 - p * hurst;
    if (!(denom > 0.0)) {
        // denominator vanishes at H = 1/2 and is negative beyond
        throw std::domain_error("c1_constant pole: H must be strictly below 1/2");
    }
    return 1.0 / denom;
}

double eval_kernel(const KernelSpec& spec, double t) {
    if (!std::isfinite(t)) throw std::domain_error("kernel argument must be finite");
    if (t < 0.0) return 0.0;
    const double e = spec.hurst - 0.5;
    switch (spec.variant) {
        case KernelVariant::Limit:
            if (t == 0.0) throw std::domain_error("limit kernel has a pole at t = 0");
            return std::pow(t, e);
        case KernelVariant::Benchmark:
        case KernelVariant::GeneralShift:
            return std::pow(spec.shift() + t, e);
        case KernelVariant::Optimized: {
            const double s = spec.shift();
            if (t >= s) return std::pow(t + s, e);
            const double c1 = c1_constant(spec.hurst);
            const double q = 2.0 * spec.hurst - 1.0;
            const double radicand =
                (1.0 + c1) * std::pow(t + s, q) - c1 * std::pow(2.0 * s, q);
            return std::sqrt(radicand);
        }
    }
    return 0.0;
}

KernelSlope eval_kernel_derivative(const KernelSpec& spec, double t) {
    if (!std::isfinite(t) || t <= 0.0) {
        throw std::domain_error("kernel derivative requires t > 0");
    }
    const double e = spec.hurst - 0.5;
    KernelSlope slope;
    switch (spec.variant) {
        case KernelVariant::Limit:
            slope.value = e * std::pow(t, e - 1.0);
            return slope;
        case KernelVariant::Benchmark:
        case KernelVariant::GeneralShift:
            slope.value = e * std::pow(spec.shift() + t, e - 1.0);
            return slope;
        case KernelVariant::Optimized: {
            const double s = spec.shift();
            if (t >= s) {
                slope.value = e * std::pow(t + s, e - 1.0);
                slope.one_sided = (t == s);
                return slope;
            }
            const double c1 = c1_constant(spec.hurst);
            const double q = 2.0 * spec.hurst - 1.0;
            slope.value = q * (1.0 + c1) * std::pow(t + s, q - 1.0) /
                          (2.0 * eval_kernel(spec, t));
            return slope;
        }
    }
    return slope;
}

double kernel_l2_integral(const KernelSpec& spec, double t) {
    if (!(t >= 0.0)) throw std::domain_error("kernel_l2_integral requires t >= 0");
    const double twoH = 2.0 * spec.hurst;
    const double s = spec.shift();
    switch (spec.variant) {
        case KernelVariant::Limit:
            return std::pow(t, twoH) / twoH;
        case KernelVariant::Benchmark:
        case KernelVariant::GeneralShift:
            return (std::pow(t + s, twoH) - std::pow(s, twoH)) / twoH;
        case KernelVariant::Optimized: {
            const double c1 = c1_constant(spec.hurst);
            const double below = std::min(t, s);
            double value = (1.0 + c1) *
                               (std::pow(below + s, twoH) - std::pow(s, twoH)) / twoH -
                           c1 * std::pow(2.0 * s, twoH - 1.0) * below;
            if (t > s) {
                value += (std::pow(t + s, twoH) - std::pow(2.0 * s, twoH)) / twoH;
            }
            return value;
        }
    }
    return 0.0;
}

double kernel_integral(const KernelSpec& spec, double a, double b) {
    if (!(0.0 <= a && a <= b)) throw std::domain_error("kernel_integral requires 0 <= a <= b");
    if (a == b) return 0.0;
    const double p = spec.hurst + 0.5;
    const double s = spec.shift();
    switch (spec.variant) {
        case KernelVariant::Limit:
            return (std::pow(b, p) - std::pow(a, p)) / p;
        case KernelVariant::Benchmark:
        case KernelVariant::GeneralShift:
            return (std::pow(b + s, p) - std::pow(a + s, p)) / p;
        case KernelVariant::Optimized: {
            double value = 0.0;
            const double lo = std::min(a, s);
            const double hi = std::min(b, s);
            if (hi > lo) {
                // square-root corrected piece has no elementary antiderivative
                value += integrate([&](double u) { return eval_kernel(spec, u); }, lo, hi,
                                   {1e-13, 1e-12, 2000});
            }
            if (b > s) {
                const double a2 = std::max(a, s);
                value += (std::pow(b + s, p) - std::pow(a2 + s, p)) / p;
            }
            return value;
        }
    }
    return 0.0;
}

double mandelbrot_van_ness_constant(double hurst) {
    check_hurst(hurst);
    return std::tgamma(hurst + 0.5) /
           std::sqrt(std::tgamma(2.0 * hurst + 1.0) * std::sin(M_PI * hurst));
}

AuditReport audit_kernel_assumptions(const KernelSpec& spec, double T, double theta,
                                     int grid_size) {
    if (spec.variant == KernelVariant::Limit) {
        throw ConfigError("the limit kernel is the audit's reference, not its subject");
    }
    if (!(T > 0.0)) throw ConfigError("audit horizon must be positive");
    if (!(theta > 2.0)) throw ConfigError("audit requires theta > 2");
    if (grid_size < 64) throw ConfigError("audit grid must have at least 64 points");

    const double H = spec.hurst;
    const double nn = static_cast<double>(spec.n);
    const KernelSpec limit = KernelSpec::limit(H);

    AuditReport report;

    // Evaluation grid: geometric points resolving the origin plus a uniform
    // sweep of [0, T].
    std::vector<double> grid;
    grid.reserve(2 * grid_size + 2);
    grid.push_back(0.0);
    const int geo = grid_size;
    for (int i = 0; i < geo; ++i) {
        grid.push_back(T * std::pow(1e-12, 1.0 - static_cast<double>(i) / geo));
    }
    for (int i = 1; i <= grid_size; ++i) {
        grid.push_back(T * static_cast<double>(i) / grid_size);
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    report.positivity_ok = true;
    report.monotonicity_ok = true;
    double prev_value = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        const double phi = eval_kernel(spec, t);
        if (!(phi >= 0.0) || !std::isfinite(phi)) report.positivity_ok = false;
        if (phi > prev_value * (1.0 + 1e-12)) report.monotonicity_ok = false;
        prev_value = phi;
        const double majorant = std::pow(1.0 / nn + t, H - 0.5);
        report.majorant_constant = std::max(report.majorant_constant, phi / majorant);
        if (t > 0.0) {
            const double dphi = eval_kernel_derivative(spec, t).value;
            if (dphi > 1e-12) report.monotonicity_ok = false;
            const double dmajorant = std::pow(1.0 / nn + t, H - 1.5);
            report.derivative_constant =
                std::max(report.derivative_constant, -dphi / dmajorant);
        }
    }

    // item (iii): integral modulus of continuity of the derivative at the
    // finest admissible offset h = n^-theta
    const double h = std::pow(nn, -theta);
    const double kink = spec.shift();
    std::vector<double> breaks;
    for (int i = 0; i < 48; ++i) {
        breaks.push_back(T * std::pow(1e-13, 1.0 - static_cast<double>(i) / 48.0));
    }
    breaks.push_back(kink);
    breaks.push_back(kink - h);
    // Gauss-Kronrod nodes are interior, so the s = 0 endpoint is never hit.
    const Integrand diff3 = [&](double sv) {
        const double right = eval_kernel_derivative(spec, sv + h).value;
        const double left = eval_kernel_derivative(spec, sv).value;
        return std::abs(right - left);
    };
    report.continuity_integral =
        integrate_segmented(diff3, 0.0, T, breaks, {1e-11, 1e-8, 4000});
    report.continuity_bound =
        2.0 * h * std::max(report.derivative_constant, 1.0) * std::pow(nn, 1.5 - H);
    report.continuity_ok = report.continuity_integral <= report.continuity_bound * (1.0 + 1e-6);

    // item (iv): squared L2 distance to the limit kernel over [0, T]
    const Integrand diff4 = [&](double u) {
        const double d = eval_kernel(spec, u) - eval_kernel(limit, u);
        return d * d;
    };
    report.l2_distance = integrate_segmented(diff4, T * 1e-14, T, breaks, {1e-11, 1e-8, 4000});

    return report;
}

} // namespace rbm
