#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "rbm/kernels.hpp"

namespace rbm {

// Covariance function of the rescaled log-volatility driven by kernel phi:
//   C(t,s) = int_0^{s^t} phi(t-r) phi(s-r) dr
//          + [pre_zero] int_{-inf}^0 (phi(t-r)-phi(-r)) (phi(s-r)-phi(-r)) dr
// by adaptive quadrature (tolerance 1e-9); the infinite tail is mapped
// rationally and cut off where the integrand drops below 1e-14.
double covariance_Cn(const KernelSpec& kernel, double t, double s, bool pre_zero);

// Same, but with the pre-zero window truncated at -S; the oracle matching a
// simulation with finite pre-horizon.
double covariance_Cn_truncated(const KernelSpec& kernel, double t, double s,
                               double pre_horizon);

// Closed form of the two-sided limit covariance,
//   c_H^2/2 (t^{2H} + s^{2H} - |t-s|^{2H}).
double limit_covariance_two_sided(double hurst, double t, double s);

struct ErrorFunctionals {
    double star = 0.0;      // (1/n) integrated 4th powers, post and pre zero
    double diamond = 0.0;   // sup_t int phi_inf |C_n - C_inf|
    double square = 0.0;    // sup_t int phi_n |C_n(s,s) - C_inf(s,s)|
    double triangle = 0.0;  // L1 distance of phi_n and phi_inf on [0,T]
    std::uint64_t n = 0;
    double horizon = 0.0;
    KernelSpec kernel;

    double sum() const { return star + diamond + square + triangle; }
};

// The four kernel error functionals bounding the weak error.  The suprema
// over t are taken on a 64-point grid with golden-section refinement around
// the grid argmax.
ErrorFunctionals error_functionals(const KernelSpec& kernel, double T, bool pre_zero);

using KernelFamily = std::function<KernelSpec(std::uint64_t)>;

// error_functionals across an n-grid, evaluated on a worker pool.
std::vector<ErrorFunctionals> error_functionals_sweep(const KernelFamily& family,
                                                      std::span<const std::uint64_t> n_grid,
                                                      double T, bool pre_zero,
                                                      int threads = 1);

struct RateFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // RMS residual of the log-log fit
};

// Least-squares fit of log(value) against log(n).
RateFit fit_rate(std::span<const double> ns, std::span<const double> values);

// For each n: n^gamma * lambda({ t <= n^-gamma : phi_n(t) >= phi_inf(t)/2 }),
// the normalized measure entering the optimality lower bound.  The set
// boundary is located by bisection at relative resolution 1e-12.
std::vector<double> lower_bound_scan(const KernelFamily& family, double gamma,
                                     std::span<const std::uint64_t> n_grid);

} // namespace rbm
