#pragma once

#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "rbm/kernels.hpp"
#include "rbm/mark_law.hpp"
#include "rbm/words.hpp"

namespace rbm {

// E[exp(a . X)] for centered Gaussian X with the given covariance.
double gaussian_exp_moment(const Eigen::MatrixXd& cov, std::span<const int> exponents);

// Degree-four Hermite polynomial x^4 - 6x^2 + 3.
double hermite4(double x);

// The three models whose integer price moments the engine evaluates.
struct LimitMomentModel {
    double hurst = 0.15;
    double sigma_p = 1.0;
    double sigma_v = 1.0;
    double rho = 0.0;
    double horizon = 1.0;
    bool pre_zero = false;  // TwoSided when true, Riemann-Liouville otherwise
};

struct ApproxMomentModel {
    KernelSpec kernel;
    double sigma_p = 1.0;
    double sigma_v = 1.0;
    double rho = 0.0;
    double horizon = 1.0;
    bool pre_zero = false;
};

struct PrelimitMomentModel {
    KernelSpec kernel;
    MarkLaw law = MarkLaw::gaussian(1.0, 1.0, 0.0);
    double horizon = 1.0;
    double pre_horizon = 0.0;
};

using MomentModel = std::variant<LimitMomentModel, ApproxMomentModel, PrelimitMomentModel>;

struct SimplexQuad {
    int nodes = 32;        // nodes per simplex level
    int check_nodes = 48;  // Richardson re-evaluation
};

struct MomentResult {
    double value = 0.0;
    double quadrature_error = 0.0;  // Richardson gap between the two rules
    int term_count = 0;
};

// E[(P_T)^N] via the word representation: sum over non-vanishing words of
// length N, expansion into exponential-functional terms, and nested simplex
// quadrature with Gauss-Jacobi rules absorbing the kernel endpoint
// singularities of the limit model.
MomentResult moment_value(int N, const MomentModel& model, const SimplexQuad& quad = {});

// E[H4(P_T)] = E[P^4] - 6 E[P^2] + 3, with the two quadrature errors
// combined; the weak-error benchmark of the experiment harness.
MomentResult hermite4_expectation(const MomentModel& model, const SimplexQuad& quad = {});

} // namespace rbm
