#pragma once

#include <functional>
#include <span>
#include <vector>

namespace rbm {

struct QuadResult {
    double value = 0.0;
    double error = 0.0;     // error estimate
    bool converged = false;
    int evaluations = 0;
};

struct QuadOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-9;
    int max_segments = 4000;  // each segment costs one 15-point evaluation
};

using Integrand = std::function<double(double)>;

// Globally adaptive Gauss-Kronrod 15 on [a,b].  Does not throw; inspect
// `converged` or use `integrate` below.
QuadResult integrate_result(const Integrand& f, double a, double b, const QuadOptions& opt = {});

// Same, but throws AccuracyError when the tolerance is not met.
double integrate(const Integrand& f, double a, double b, const QuadOptions& opt = {});

// Adaptive integration with interior breakpoints (kernel kinks, evaluation
// times).  Breakpoints outside (a,b) are ignored.
double integrate_segmented(const Integrand& f, double a, double b,
                           std::span<const double> breakpoints, const QuadOptions& opt = {});

// \int_a^\infty f, mapped through x = a + u/(1-u).  The integrand must decay
// fast enough to be integrable; evaluation stops where it falls below
// `cutoff` in magnitude.
double integrate_tail(const Integrand& f, double a, const QuadOptions& opt = {},
                      double cutoff = 1e-14);

// Fixed-order rules.  Nodes/weights are produced by Golub-Welsch on the
// Jacobi recurrence; weights already include the weight function.
struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// \int_{-1}^1 (1-x)^a (1+x)^b f(x) dx
QuadRule jacobi_rule(int n, double a, double b);

// \int_0^1 f(t) dt
QuadRule gauss_legendre(int n);

// \int_0^1 (1-t)^a f(t) dt  (weight singular/vanishing at the upper end)
QuadRule gauss_jacobi_upper(int n, double a);

// Applies a [0,1] rule to the interval [lo,hi]; `weight_exponent` is the
// homogeneity degree of the factored weight, i.e. for gauss_jacobi_upper(n,a)
// pass a so that \int_lo^hi (hi-t)^a f(t) dt is reproduced.
double apply_rule(const QuadRule& rule, double lo, double hi, double weight_exponent,
                  const Integrand& f);

} // namespace rbm
