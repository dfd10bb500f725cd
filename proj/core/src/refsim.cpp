#include "rbm/refsim.hpp"

#include <cmath>
#include <string>

#include "rbm/errors.hpp"
#include "rbm/functionals.hpp"

namespace rbm {

std::vector<double> GaussianModelSpec::grid_times() const {
    std::vector<double> times(grid_size);
    for (int i = 0; i < grid_size; ++i) {
        times[i] = horizon * static_cast<double>(i + 1) / grid_size;
    }
    return times;
}

Eigen::MatrixXd build_joint_covariance(const GaussianModelSpec& spec) {
    const int K = spec.grid_size;
    if (K < 1 || K > 4096) throw ConfigError("grid size must lie in [1, 4096]");
    if (!(spec.horizon > 0.0)) throw ConfigError("horizon must be positive");
    if (std::abs(spec.rho) > 1.0) throw ConfigError("rho must lie in [-1, 1]");
    if (spec.kernel.hurst != spec.hurst) {
        throw ConfigError("kernel and model disagree on the Hurst parameter");
    }
    const bool pre_zero = spec.variant == GaussianVariant::TwoSided;
    const std::vector<double> times = spec.grid_times();
    const double dt = spec.horizon / K;
    const double sv2 = spec.sigma_v * spec.sigma_v;
    const bool is_limit = spec.kernel.variant == KernelVariant::Limit;

    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(2 * K, 2 * K);

    // V block
    for (int i = 0; i < K; ++i) {
        for (int j = 0; j <= i; ++j) {
            double c;
            if (is_limit && pre_zero) {
                c = limit_covariance_two_sided(spec.hurst, times[i], times[j]);
            } else if (is_limit && i == j) {
                c = kernel_l2_integral(spec.kernel, times[i]);
            } else {
                c = covariance_Cn(spec.kernel, times[i], times[j], pre_zero);
            }
            cov(i, j) = sv2 * c;
            cov(j, i) = cov(i, j);
        }
    }

    // cross block: Cov(V_{t_i}, dW_j) = rho sigma_v int_{t_{j-1}}^{t_j ^ t_i} phi(t_i - r) dr
    if (spec.rho != 0.0) {
        for (int i = 0; i < K; ++i) {
            for (int j = 0; j < K; ++j) {
                const double lo = times[j] - dt;  // t_{j-1}
                if (lo >= times[i]) continue;
                const double hi = std::min(times[j], times[i]);
                const double a = times[i] - hi;
                const double b = times[i] - lo;
                const double val = spec.rho * spec.sigma_v * kernel_integral(spec.kernel, a, b);
                cov(i, K + j) = val;
                cov(K + j, i) = val;
            }
        }
    }

    // dW block
    for (int j = 0; j < K; ++j) cov(K + j, K + j) = dt;

    return cov;
}

JointPathSampler::JointPathSampler(GaussianModelSpec spec) : spec_(std::move(spec)) {
    Eigen::MatrixXd cov = build_joint_covariance(spec_);
    const int dim = static_cast<int>(cov.rows());
    const double jitter_unit = 1e-12 * cov.trace() / dim;
    Eigen::LLT<Eigen::MatrixXd> llt;
    for (int attempt = 0; attempt <= 3; ++attempt) {
        llt.compute(cov);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
            return;
        }
        cov.diagonal().array() += jitter_unit;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov,
                                                            Eigen::EigenvaluesOnly);
    throw AccuracyError("joint covariance is not positive definite after jitter; "
                        "smallest eigenvalue " +
                            std::to_string(es.eigenvalues().minCoeff()),
                        es.eigenvalues().minCoeff(), 0.0);
}

void JointPathSampler::sample(RngStream& stream, std::span<double> v,
                              std::span<double> dw) const {
    const int K = spec_.grid_size;
    if (static_cast<int>(v.size()) != K || static_cast<int>(dw.size()) != K) {
        throw ConfigError("output spans must have the grid size");
    }
    Eigen::VectorXd z(2 * K);
    for (int i = 0; i < 2 * K; ++i) z(i) = stream.normal();
    const Eigen::VectorXd x = factor_.triangularView<Eigen::Lower>() * z;
    for (int i = 0; i < K; ++i) v[i] = x(i);
    for (int i = 0; i < K; ++i) dw[i] = x(K + i);
}

void JointPathSampler::sample_antithetic_pair(RngStream& stream, std::span<double> v_plus,
                                              std::span<double> dw_plus,
                                              std::span<double> v_minus,
                                              std::span<double> dw_minus) const {
    sample(stream, v_plus, dw_plus);
    for (std::size_t i = 0; i < v_plus.size(); ++i) v_minus[i] = -v_plus[i];
    for (std::size_t i = 0; i < dw_plus.size(); ++i) dw_minus[i] = -dw_plus[i];
}

Eigen::MatrixXd JointPathSampler::sample_block(std::uint64_t seed, std::uint64_t stream_base,
                                               std::uint64_t rep_begin, int count) const {
    const int d = dim();
    Eigen::MatrixXd z(d, count);
    for (int c = 0; c < count; ++c) {
        RngStream stream(seed, stream_base + rep_begin + static_cast<std::uint64_t>(c));
        for (int i = 0; i < d; ++i) z(i, c) = stream.normal();
    }
    return factor_.triangularView<Eigen::Lower>() * z;
}

double euler_price(std::span<const double> v, std::span<const double> dw, double sigma_p) {
    if (v.size() != dw.size()) throw ConfigError("V path and dW length mismatch");
    if (v.empty()) return 0.0;
    double acc = dw[0];  // exp(V_0) = 1
    for (std::size_t k = 1; k < dw.size(); ++k) {
        acc += std::exp(v[k - 1]) * dw[k];
    }
    return sigma_p * acc;
}

} // namespace rbm
