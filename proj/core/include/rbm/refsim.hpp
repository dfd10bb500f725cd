#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rbm/kernels.hpp"
#include "rbm/rng.hpp"

namespace rbm {

enum class GaussianVariant {
    TwoSided,          // Mandelbrot-van Ness: pre-zero impact included
    RiemannLiouville,  // no pre-zero impact
};

// Gaussian reference model on an equidistant grid: the log-volatility V at
// the grid times and the Brownian increments dW of the price driver are
// drawn jointly from their exact covariance, so the only discretization
// error left is the Euler rule in the price integral.
struct GaussianModelSpec {
    double hurst = 0.15;
    double sigma_p = 1.0;
    double sigma_v = 1.0;
    double rho = 0.0;
    GaussianVariant variant = GaussianVariant::RiemannLiouville;
    KernelSpec kernel;      // Limit for the true model, finite-n for the approximate one
    int grid_size = 1000;   // K
    double horizon = 1.0;   // T

    std::vector<double> grid_times() const;  // t_i = i T / K, i = 1..K
};

// Covariance of (V_{t_1..t_K}, dW_1..dW_K), size 2K x 2K.
Eigen::MatrixXd build_joint_covariance(const GaussianModelSpec& spec);

class JointPathSampler {
public:
    explicit JointPathSampler(GaussianModelSpec spec);

    int dim() const { return static_cast<int>(factor_.rows()); }
    const GaussianModelSpec& spec() const { return spec_; }

    // One exact draw of (V, dW).
    void sample(RngStream& stream, std::span<double> v, std::span<double> dw) const;

    // The antithetic mate is the negated Gaussian vector; both halves of the
    // pair come from the same draw.
    void sample_antithetic_pair(RngStream& stream, std::span<double> v_plus,
                                std::span<double> dw_plus, std::span<double> v_minus,
                                std::span<double> dw_minus) const;

    // Batched draws for replications [rep_begin, rep_begin + count); column r
    // is generated from RngStream(seed, stream_base + rep_begin + r), so the
    // result is independent of the batching.
    Eigen::MatrixXd sample_block(std::uint64_t seed, std::uint64_t stream_base,
                                 std::uint64_t rep_begin, int count) const;

private:
    GaussianModelSpec spec_;
    Eigen::MatrixXd factor_;  // lower Cholesky factor after PSD repair
};

// Left-point Euler approximation of the terminal log-price
//   P_T = sigma_p sum_k exp(V_{t_{k-1}}) dW_k,  V_{t_0} = 0.
double euler_price(std::span<const double> v, std::span<const double> dw, double sigma_p);

} // namespace rbm
