#pragma once

#include <cstdint>
#include <string>

namespace rbm {

enum class KernelVariant { Benchmark, Optimized, GeneralShift, Limit };

// One member of the kernel families phi_n: power-law impact of an order on
// future log-volatility.  All variants share the Hurst exponent H-1/2; they
// differ in how the singularity at the origin is mollified:
//   Benchmark     (1/n + t)^(H-1/2)
//   GeneralShift  (n^-alpha + t)^(H-1/2)
//   Optimized     sqrt-corrected shift by n^-beta, tuned so that the squared
//                 kernel integrates to (t + n^-beta)^(2H) / (2H) beyond the
//                 shift scale
//   Limit         t^(H-1/2), the Volterra kernel of the limit model
struct KernelSpec {
    double hurst = 0.15;
    KernelVariant variant = KernelVariant::Benchmark;
    double beta = 0.0;    // Optimized only
    double alpha = 0.0;   // GeneralShift only
    std::uint64_t n = 1;  // scale index; ignored for Limit

    static KernelSpec benchmark(double hurst, std::uint64_t n);
    static KernelSpec optimized(double hurst, double beta, std::uint64_t n);
    static KernelSpec general_shift(double hurst, double alpha, std::uint64_t n);
    static KernelSpec limit(double hurst);

    // The beta maximizing the weak-error decay rate, 2 / (3 - 6H).
    static double optimal_beta(double hurst);

    // The mollification scale: 1/n, n^-alpha, n^-beta, or 0 for Limit.
    double shift() const;

    std::string variant_name() const;
};

// (2^(2H) - 1 - 2^(2H) H)^(-1); the correction weight that makes the
// Optimized kernel's squared integral exact.  Finite and positive only for
// H in (0, 1/2); the pole at H = 1/2 is reported as a domain error.
double c1_constant(double hurst);

// Kernel evaluation.  t < 0 returns 0 by convention so callers can build
// convolutions without branching.  The Limit variant has a pole at t = 0.
double eval_kernel(const KernelSpec& spec, double t);

struct KernelSlope {
    double value = 0.0;
    // True when t sat exactly on the Optimized kink and the right-hand
    // limit was returned.
    bool one_sided = false;
};

// dphi/dt for t > 0; always <= 0.
KernelSlope eval_kernel_derivative(const KernelSpec& spec, double t);

// Antiderivative helpers used by the reference simulator and by tests.
// kernel_l2_integral(spec, t) = \int_0^t phi(u)^2 du, in closed form.
double kernel_l2_integral(const KernelSpec& spec, double t);
// kernel_integral(spec, a, b) = \int_a^b phi(u) du; closed form except for
// the Optimized variant below its shift scale, where it falls back to
// quadrature.
double kernel_integral(const KernelSpec& spec, double a, double b);

// Normalization constant of the Mandelbrot-van Ness representation,
// (Gamma(2H+1) sin(pi H))^(-1/2) Gamma(H + 1/2).
double mandelbrot_van_ness_constant(double hurst);

// Numeric audit of the four admissibility conditions on a kernel family
// member: majorant, derivative bound, L1 continuity of the derivative and
// L2 distance to the limit kernel.  The constants are grid suprema; the
// integrals are evaluated by adaptive quadrature on a geometric grid
// refined near the origin.
struct AuditReport {
    double majorant_constant = 0.0;      // smallest admissible C in item (i)
    double derivative_constant = 0.0;    // smallest admissible C in item (ii)
    double continuity_integral = 0.0;    // item (iii) at h = n^-theta
    double continuity_bound = 0.0;       // 2 h C2 n^(3/2-H)
    double l2_distance = 0.0;            // item (iv)
    bool positivity_ok = false;
    bool monotonicity_ok = false;
    bool continuity_ok = false;
    bool all_ok() const { return positivity_ok && monotonicity_ok && continuity_ok; }
};

AuditReport audit_kernel_assumptions(const KernelSpec& spec, double T, double theta,
                                     int grid_size);

} // namespace rbm
